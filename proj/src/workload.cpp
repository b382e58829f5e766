#include "amiedot/workload.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_map>

#include "amiedot/codec.hpp"

namespace amiedot {
namespace {

const std::vector<std::string> kFirstNames = {"Ada", "Bola", "Chen", "Dana", "Emeka", "Fatou",
                                              "Greta", "Hugo", "Ines", "Jonas", "Kemi", "Lena"};
const std::vector<std::string> kLastNames = {"Adeyemi", "Bernard", "Costa", "Dubois", "Eze",
                                             "Fischer", "Garcia", "Haddad", "Ito", "Jensen"};
const std::vector<std::string> kSocialClasses = {"staff", "student", "faculty", "public"};
const std::vector<std::string> kRegions = {"north", "south", "east", "west"};
const std::vector<std::string> kCountries = {"FR", "NG", "DE", "CA"};
const std::vector<AreaOfActivity> kActivities = {
    AreaOfActivity{ActivityKind::teaching}, AreaOfActivity{ActivityKind::research},
    AreaOfActivity{ActivityKind::student}, AreaOfActivity{ActivityKind::general_public},
    AreaOfActivity::other("librarian")};

const std::vector<std::vector<std::string>> kTopics = {
    {"annotation", "hypertext", "markup", "metadata", "tagging"},
    {"retrieval", "indexing", "ranking", "queries", "relevance"},
    {"economics", "intelligence", "strategy", "markets", "decision"},
    {"medicine", "patients", "records", "clinical", "diagnosis"},
    {"history", "archives", "heritage", "manuscripts", "museums"},
    {"networks", "protocols", "routing", "wireless", "latency"},
};
const std::vector<std::string> kGeneralKeywords = {"survey", "introduction", "case-study", "tutorial"};
const std::vector<FormatKind> kFormats = {FormatKind::pdf, FormatKind::word, FormatKind::html,
                                          FormatKind::text};

const std::vector<std::string> kPhrases = {
    "great survey of the field",
    "survey of methods worth revisiting",
    "unclear definition in this section",
    "compare with the earlier chapter",
    "key result for my thesis",
    "example contradicts the claim above",
    "useful references for the review",
    "summary of the main argument",
    "",
};

std::string padded(char prefix, std::size_t index, int width) {
  auto digits = std::to_string(index);
  if (digits.size() < static_cast<std::size_t>(width)) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

int width_for(std::size_t n) {
  int w = 1;
  for (std::size_t x = n; x >= 10; x /= 10) ++w;
  return std::max(w, 3);
}

bool by_start_then_ref(const ConsultationEvent& a, const ConsultationEvent& b) {
  if (a.session_start != b.session_start) return a.session_start < b.session_start;
  return a.event_ref < b.event_ref;
}

std::vector<std::string> topic_words(std::size_t community) {
  auto words = kTopics[community % kTopics.size()];
  if (community >= kTopics.size()) {
    const auto suffix = "-" + std::to_string(community / kTopics.size());
    for (auto& w : words) w += suffix;
  }
  return words;
}

}  // namespace

std::uint64_t FixtureRng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "below(0)");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % n;
  }
}

std::int64_t FixtureRng::between(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double FixtureRng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

void validate_workload_spec(const WorkloadSpec& spec) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::invalid_argument, what); };
  if (spec.n_users == 0) bad("n_users must be positive");
  if (spec.n_docs == 0) bad("n_docs must be positive");
  if (spec.n_events == 0) bad("n_events must be positive");
  if (spec.n_communities == 0 || spec.n_communities > spec.n_users) {
    bad("n_communities must be in [1, n_users]");
  }
  if (!(spec.span_start < spec.span_end)) bad("time span requires start < end");
  if (!(spec.annotation_rate >= 0.0 && spec.annotation_rate <= 1.0)) {
    bad("annotation_rate must be in [0, 1]");
  }
}

Workload generate(const WorkloadSpec& spec) {
  validate_workload_spec(spec);
  FixtureRng rng(spec.seed);
  Workload w;

  const int user_width = width_for(spec.n_users);
  for (std::size_t i = 0; i < spec.n_users; ++i) {
    UserRecord u;
    u.annotator_ref = padded('u', i + 1, user_width);
    u.first_name = rng.pick(kFirstNames);
    u.last_name = rng.pick(kLastNames);
    u.email = u.annotator_ref + "@example.org";
    u.age_group = enum_at<AgeGroup>(rng.below(enum_count<AgeGroup>()));
    if (rng.chance(0.8)) u.region = rng.pick(kRegions);
    u.country = rng.pick(kCountries);
    u.social_class = rng.pick(kSocialClasses);
    u.area_of_activity = rng.pick(kActivities);
    w.users.push_back(std::move(u));
    w.user_community.push_back(i % spec.n_communities);
  }

  const std::size_t block = (spec.n_docs + spec.n_communities - 1) / spec.n_communities;
  const int doc_width = width_for(spec.n_docs);
  std::vector<std::vector<std::size_t>> community_docs(spec.n_communities);
  for (std::size_t j = 0; j < spec.n_docs; ++j) {
    const std::size_t community = j / block;
    DocumentRecord d;
    d.doc_ref = padded('d', j + 1, doc_width);
    const auto words = topic_words(community);
    d.title = "Notes on " + words[j % words.size()] + " " + std::to_string(j + 1);
    d.keywords.insert(words[rng.below(words.size())]);
    d.keywords.insert(words[rng.below(words.size())]);
    if (rng.chance(0.3)) d.keywords.insert(rng.pick(kGeneralKeywords));
    d.authors.push_back({rng.pick(kFirstNames), rng.pick(kLastNames)});
    d.publication_date = Date{static_cast<int>(1990 + rng.below(34)),
                              static_cast<unsigned>(1 + rng.below(12)),
                              static_cast<unsigned>(1 + rng.below(28))};
    d.format = DocumentFormat{rng.pick(kFormats)};
    w.documents.push_back(std::move(d));
    w.doc_community.push_back(community);
    community_docs[community].push_back(j);
  }

  const auto span = static_cast<std::uint64_t>(spec.span_end.seconds - spec.span_start.seconds);
  const int event_width = width_for(spec.n_events);
  std::vector<std::int64_t> drawn_duration;
  for (std::size_t k = 0; k < spec.n_events; ++k) {
    const std::size_t ui = rng.below(spec.n_users);
    const auto& own = community_docs[w.user_community[ui]];
    std::size_t dj = 0;
    if (!own.empty() && rng.chance(kInCommunityProbability)) {
      dj = own[rng.below(own.size())];
    } else {
      dj = rng.below(spec.n_docs);
    }

    ConsultationEvent e;
    e.event_ref = padded('e', k + 1, event_width);
    e.annotator_ref = w.users[ui].annotator_ref;
    e.doc_ref = w.documents[dj].doc_ref;
    e.session_start = Timestamp{spec.span_start.seconds + static_cast<std::int64_t>(rng.below(span))};
    e.context_ref = "c-" + e.annotator_ref + "-" +
                    std::to_string(floor_to_multiple(e.session_start.seconds, 86400) / 86400);
    const auto reason = enum_at<ReasonKind>(rng.below(enum_count<ReasonKind>()));
    e.reason = reason == ReasonKind::other ? ConsultationReason::other("coursework")
                                           : ConsultationReason{reason};
    drawn_duration.push_back(rng.between(300, 7200));
    if (rng.chance(spec.annotation_rate)) {
      AnnotationRecord a;
      a.annotation_ref = "a1";
      a.a_type = enum_at<AnnotationType>(rng.below(enum_count<AnnotationType>()));
      a.location = enum_at<AnnotationLocation>(rng.below(enum_count<AnnotationLocation>()));
      a.objective = enum_at<AnnotationObjective>(rng.below(enum_count<AnnotationObjective>()));
      a.body = rng.pick(kPhrases);
      e.annotations.push_back(std::move(a));
    }
    w.events.push_back(std::move(e));
  }

  // Durations: drawn value, clamped to the gap before the next use of the same document.
  std::vector<std::size_t> order(w.events.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return by_start_then_ref(w.events[a], w.events[b]);
  });
  std::unordered_map<std::string, std::size_t> next_on_doc;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto& e = w.events[*it];
    std::int64_t duration = drawn_duration[*it];
    if (const auto n = next_on_doc.find(e.doc_ref); n != next_on_doc.end()) {
      duration = std::min(duration, w.events[n->second].session_start.seconds - e.session_start.seconds);
    }
    e.duration_seconds = duration;
    next_on_doc[e.doc_ref] = *it;
  }

  std::unordered_map<std::string, std::int64_t> first_use;
  for (const auto k : order) {
    auto& e = w.events[k];
    const auto key = e.annotator_ref + '\x1f' + e.doc_ref;
    const auto [it, inserted] = first_use.try_emplace(key, e.session_start.seconds);
    e.approach = !inserted && it->second < e.session_start.seconds ? Approach::follow_up
                                                                   : Approach::new_annotation;
  }
  return w;
}

PlantedBatch plant_overlaps(const Workload& workload, std::size_t count, std::uint64_t seed) {
  if (workload.users.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "planting overlaps needs at least two users");
  }
  std::vector<std::size_t> hosts;
  for (std::size_t k = 0; k < workload.events.size(); ++k) {
    if (workload.events[k].duration_seconds.value_or(0) >= 2) hosts.push_back(k);
  }
  if (count > 0 && hosts.empty()) {
    throw Error(ErrorCode::invalid_argument, "no event long enough to host an overlap");
  }

  FixtureRng rng(seed);
  PlantedBatch batch;
  batch.events = workload.events;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& host = workload.events[rng.pick(hosts)];
    std::string intruder;
    do {
      intruder = rng.pick(workload.users).annotator_ref;
    } while (intruder == host.annotator_ref);

    ConsultationEvent e;
    e.event_ref = padded('p', i + 1, width_for(count));
    e.annotator_ref = intruder;
    e.doc_ref = host.doc_ref;
    e.session_start = Timestamp{host.session_start.seconds + rng.between(1, *host.duration_seconds - 1)};
    e.duration_seconds = rng.between(60, 600);
    e.approach = Approach::new_annotation;
    e.reason = ConsultationReason{ReasonKind::accidental};
    batch.planted_refs.push_back(e.event_ref);
    batch.events.push_back(std::move(e));
  }
  return batch;
}

ReplayReport replay(std::vector<ConsultationEvent> events, Store& store, bool strict_lending) {
  std::sort(events.begin(), events.end(), by_start_then_ref);
  std::vector<LogRecord> records;
  records.reserve(events.size());
  for (auto& e : events) records.emplace_back(std::move(e));
  const auto outcomes = store.apply_batch(records, strict_lending);

  ReplayReport report;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].accepted()) {
      ++report.accepted;
      continue;
    }
    ++report.rejected;
    const auto& err = *outcomes[i].error;
    report.rejections.push_back(
        {std::get<ConsultationEvent>(records[i]).event_ref, err.code(), err.detail()});
  }
  return report;
}

ReplayReport load_workload(const Workload& workload, Store& store, bool strict_lending) {
  std::vector<LogRecord> registry;
  for (const auto& u : workload.users) registry.emplace_back(u);
  for (const auto& d : workload.documents) registry.emplace_back(d);
  for (const auto& outcome : store.apply_batch(registry, false)) {
    if (!outcome.accepted()) throw *outcome.error;
  }
  return replay(workload.events, store, strict_lending);
}

void write_jsonl(std::ostream& out, const Workload& workload) {
  for (const auto& u : workload.users) out << to_log_line(u) << '\n';
  for (const auto& d : workload.documents) out << to_log_line(d) << '\n';
  std::vector<const ConsultationEvent*> sorted;
  sorted.reserve(workload.events.size());
  for (const auto& e : workload.events) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return by_start_then_ref(*a, *b); });
  for (const auto* e : sorted) out << to_log_line(*e) << '\n';
}

}  // namespace amiedot
