#pragma once

// Hand-rolled random generators for property-style tests.

#include <random>
#include <string>
#include <vector>

#include "amiedot/model.hpp"
#include "amiedot/workload.hpp"

namespace amiedot::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  template <class E>
  E any_enum() {
    return static_cast<E>(range(0, static_cast<std::int64_t>(enum_count<E>()) - 1));
  }

  template <class Kind>
  OpenEnum<Kind> any_open_enum() {
    const auto kind = any_enum<Kind>();
    return kind == Kind::other ? OpenEnum<Kind>::other(word()) : OpenEnum<Kind>(kind);
  }

  std::string word() {
    static const char* const kWords[] = {"alpha", "Beta", "gamma", "delta", "épsilon", "zeta \"q\"",
                                         "eta\ttab", "theta", "iota", "kappa"};
    return kWords[range(0, 9)];
  }

  std::optional<std::string> maybe_word() {
    if (coin()) return word();
    return std::nullopt;
  }

  UserRecord user(std::size_t i) {
    UserRecord u;
    u.annotator_ref = "u" + std::to_string(i);
    u.first_name = word();
    u.last_name = word();
    u.email = "x" + std::to_string(i) + "@h.org";
    u.postal_address = maybe_word();
    u.region = maybe_word();
    u.age_group = any_enum<AgeGroup>();
    u.country = maybe_word();
    u.social_class = maybe_word();
    u.area_of_activity = any_open_enum<ActivityKind>();
    return u;
  }

  DocumentRecord document(std::size_t i) {
    DocumentRecord d;
    d.doc_ref = "d" + std::to_string(i);
    d.title = word() + " " + word();
    for (int k = 0, n = static_cast<int>(range(0, 4)); k < n; ++k) d.keywords.insert(normalize_keyword(word()));
    for (int k = 0, n = static_cast<int>(range(0, 3)); k < n; ++k) d.authors.push_back({word(), word()});
    if (coin()) {
      d.publication_date = Date{static_cast<int>(range(1900, 2030)), static_cast<unsigned>(range(1, 12)),
                                static_cast<unsigned>(range(1, 28))};
    }
    d.format = any_open_enum<FormatKind>();
    d.abstract = maybe_word();
    return d;
  }

  ConsultationEvent event(std::size_t i, const std::string& user, const std::string& doc) {
    ConsultationEvent e;
    e.event_ref = "e" + std::to_string(i);
    e.context_ref = maybe_word();
    e.annotator_ref = user;
    e.doc_ref = doc;
    e.session_start = Timestamp{range(-2'000'000'000, 4'000'000'000)};
    if (coin()) e.duration_seconds = range(0, 100000);
    e.approach = any_enum<Approach>();
    e.reason = any_open_enum<ReasonKind>();
    for (int k = 0, n = static_cast<int>(range(0, 3)); k < n; ++k) {
      AnnotationRecord a;
      a.annotation_ref = "a" + std::to_string(k);
      a.a_type = any_enum<AnnotationType>();
      a.location = any_enum<AnnotationLocation>();
      a.objective = any_enum<AnnotationObjective>();
      a.body = coin(0.2) ? "" : word() + " " + word();
      e.annotations.push_back(std::move(a));
    }
    return e;
  }

  /// Random selector over the given refs; fixed refs are drawn from the lists.
  QuerySelector selector(const std::vector<std::string>& users, const std::vector<std::string>& docs,
                         const std::vector<ConsultationEvent>& log, std::int64_t t0, std::int64_t t1) {
    QuerySelector s;
    if (coin()) s.user = users[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(users.size()) - 1))];
    if (coin()) s.doc = docs[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(docs.size()) - 1))];
    switch (range(0, 2)) {
      case 0: break;
      case 1: {
        // Mostly pick an existing start so point lookups hit something.
        const auto t = !log.empty() && coin(0.8)
                           ? log[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(log.size()) - 1))]
                                 .session_start.seconds
                           : range(t0, t1);
        s.time = TimeConstraint::at(Timestamp{t});
        break;
      }
      default: {
        const auto a = range(t0, t1);
        const auto b = range(t0, t1);
        s.time = TimeConstraint::range(Timestamp{std::min(a, b)}, Timestamp{std::max(a, b) + 1});
      }
    }
    return s;
  }

  /// Random but modest workload spec.
  WorkloadSpec workload_spec(std::size_t max_events, std::size_t max_users, std::size_t max_docs) {
    WorkloadSpec spec;
    spec.seed = static_cast<std::uint64_t>(range(0, 1'000'000'000));
    spec.n_users = static_cast<std::size_t>(range(2, static_cast<std::int64_t>(max_users)));
    spec.n_docs = static_cast<std::size_t>(range(1, static_cast<std::int64_t>(max_docs)));
    spec.n_events = static_cast<std::size_t>(range(1, static_cast<std::int64_t>(max_events)));
    spec.n_communities = static_cast<std::size_t>(range(1, std::min<std::int64_t>(4, spec.n_users)));
    spec.annotation_rate = static_cast<double>(range(0, 10)) / 10.0;
    // Narrow spans force repeated timestamps, which exercises point queries and ties.
    const auto width = coin() ? range(60, 3600) : range(86400, 86400 * 365);
    spec.span_start = Timestamp{1'700'000'000};
    spec.span_end = Timestamp{1'700'000'000 + width};
    return spec;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace amiedot::testing
