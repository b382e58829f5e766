#include "amiedot/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace amiedot {
namespace {

constexpr std::string_view kBuiltinStopwords[] = {
    "the",   "and",   "for",  "are",  "but",   "not",   "you",  "all",  "any",   "can",
    "had",   "her",   "was",  "one",  "our",   "out",   "has",  "have", "this",  "that",
    "with",  "from",  "they", "will", "would", "there", "their", "what", "about", "which",
    "when",  "make",  "like", "into", "than",  "them",  "then", "these", "some", "could",
    "other", "also",  "its",  "been", "were",  "more",  "very", "only", "each",  "such",
};

constexpr std::int64_t kMaxTrendBuckets = 1'000'000;

std::string group_key(const UserRecord& u, GroupBy g) {
  switch (g) {
    case GroupBy::social_class: return u.social_class.value_or("unknown");
    case GroupBy::region: return u.region.value_or("unknown");
    case GroupBy::age_group: return std::string(to_string(u.age_group));
    case GroupBy::area_of_activity: return to_string(u.area_of_activity);
  }
  return "unknown";
}

QuerySelector time_only(const TimeConstraint& time) {
  QuerySelector s;
  s.time = time;
  return s;
}

}  // namespace

std::optional<GroupBy> parse_group_by(std::string_view text) {
  if (text == "social_class" || text == "social-class") return GroupBy::social_class;
  if (text == "area_of_activity" || text == "area-of-activity") return GroupBy::area_of_activity;
  if (text == "age_group" || text == "age-group") return GroupBy::age_group;
  if (text == "region") return GroupBy::region;
  return std::nullopt;
}

std::string_view to_string(GroupBy g) {
  switch (g) {
    case GroupBy::social_class: return "social_class";
    case GroupBy::area_of_activity: return "area_of_activity";
    case GroupBy::age_group: return "age_group";
    case GroupBy::region: return "region";
  }
  return "region";
}

const Stopwords& Stopwords::builtin() {
  static const Stopwords list = [] {
    Stopwords s;
    for (auto w : kBuiltinStopwords) s.words_.emplace(w);
    return s;
  }();
  return list;
}

Stopwords Stopwords::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read stopword file '" + path.string() + "'");
  Stopwords s;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = normalize_keyword(line);
    if (word.empty() || word.front() == '#') continue;
    s.words_.insert(word);
  }
  return s;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

RankedList rank_counts(const std::map<std::string, double>& tallies, std::size_t top_k, bool counts) {
  detail::require_top_k(top_k);
  RankedList list;
  list.counts = counts;
  for (const auto& [key, score] : tallies) {
    if (counts) list.basis += score;
    if (score > 0) list.entries.push_back({key, score});
  }
  if (!counts) list.basis = static_cast<double>(tallies.size());
  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const RankedEntry& a, const RankedEntry& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.key < b.key;
                   });
  if (list.entries.size() > top_k) list.entries.resize(top_k);
  return list;
}

namespace detail {

std::map<std::string, std::set<std::string>> consulted_sets(const StoreView& view,
                                                            const TimeConstraint& time) {
  std::map<std::string, std::set<std::string>> sets;
  for (const auto& e : view.log()) {
    if (time.matches(e.session_start)) sets[e.annotator_ref].insert(e.doc_ref);
  }
  return sets;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& x : a) shared += b.count(x);
  const std::size_t united = a.size() + b.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(united);
}

void require_user(const StoreView& view, const std::string& user) {
  if (!view.find_user(user)) {
    throw Error(ErrorCode::unknown_user, "user '" + user + "' is not registered");
  }
}

void require_document(const StoreView& view, const std::string& doc) {
  if (!view.find_document(doc)) {
    throw Error(ErrorCode::unknown_document, "document '" + doc + "' is not registered");
  }
}

void require_top_k(std::size_t top_k) {
  if (top_k == 0) throw Error(ErrorCode::invalid_argument, "top_k must be >= 1");
}

}  // namespace detail

RankedList most_consulted_documents(const Store& store, const TimeConstraint& time, std::size_t top_k) {
  detail::require_top_k(top_k);
  return store.read([&](const StoreView& view) {
    std::map<std::string, double> tallies;
    for (const auto* e : view.query(time_only(time))) tallies[e->doc_ref] += 1;
    return rank_counts(tallies, top_k, true);
  });
}

RankedList reason_frequencies(const Store& store, const QuerySelector& selector) {
  return store.read([&](const StoreView& view) {
    std::map<std::string, double> tallies;
    for (const auto* e : view.query(selector)) tallies[to_string(e->reason)] += 1;
    return rank_counts(tallies, std::max<std::size_t>(tallies.size(), 1), true);
  });
}

RankedList annotation_objective_frequencies(const Store& store, const QuerySelector& selector) {
  return store.read([&](const StoreView& view) {
    std::map<std::string, double> tallies;
    for (const auto* e : view.query(selector)) {
      for (const auto& a : e->annotations) tallies[std::string(to_string(a.objective))] += 1;
    }
    return rank_counts(tallies, std::max<std::size_t>(tallies.size(), 1), true);
  });
}

RankedList user_activity(const Store& store, const TimeConstraint& time) {
  return store.read([&](const StoreView& view) {
    std::map<std::string, double> tallies;
    for (const auto* e : view.query(time_only(time))) tallies[e->annotator_ref] += 1;
    return rank_counts(tallies, std::max<std::size_t>(tallies.size(), 1), true);
  });
}

RankedList group_frequency(const Store& store, GroupBy group_by, const TimeConstraint& time) {
  return store.read([&](const StoreView& view) {
    std::map<std::string, double> tallies;
    for (const auto* e : view.query(time_only(time))) {
      tallies[group_key(*view.find_user(e->annotator_ref), group_by)] += 1;
    }
    return rank_counts(tallies, std::max<std::size_t>(tallies.size(), 1), true);
  });
}

double user_similarity(const Store& store, const std::string& a, const std::string& b) {
  return store.read([&](const StoreView& view) {
    detail::require_user(view, a);
    detail::require_user(view, b);
    auto docs_of = [&](const std::string& u) {
      std::set<std::string> docs;
      QuerySelector s;
      s.user = u;
      for (const auto* e : view.query(s)) docs.insert(e->doc_ref);
      return docs;
    };
    return detail::jaccard(docs_of(a), docs_of(b));
  });
}

RankedList related_users(const Store& store, const std::string& user, std::size_t top_k) {
  detail::require_top_k(top_k);
  return store.read([&](const StoreView& view) {
    detail::require_user(view, user);
    const auto sets = detail::consulted_sets(view, TimeConstraint::any());
    static const std::set<std::string> kEmpty;
    const auto own = sets.find(user);
    const auto& mine = own == sets.end() ? kEmpty : own->second;
    std::map<std::string, double> scores;
    for (const auto& [ref, record] : view.users()) {
      if (ref == user) continue;
      const auto it = sets.find(ref);
      scores[ref] = it == sets.end() ? 0.0 : detail::jaccard(mine, it->second);
    }
    return rank_counts(scores, top_k, false);
  });
}

std::vector<DisciplineEntry> discipline_view(const Store& store, std::string_view keyword,
                                             const QuerySelector& selector) {
  const auto needle = normalize_keyword(keyword);
  return store.read([&](const StoreView& view) {
    std::vector<DisciplineEntry> out;
    for (const auto* e : view.query(selector)) {
      if (e->annotations.empty()) continue;
      if (view.find_document(e->doc_ref)->keywords.count(needle) == 0) continue;
      DisciplineEntry entry{e->event_ref, {}};
      for (const auto& a : e->annotations) entry.bodies.push_back(a.body);
      out.push_back(std::move(entry));
    }
    return out;
  });
}

TrendSeries document_trend(const Store& store, const std::string& doc, std::int64_t bucket_width_seconds,
                           const TimeConstraint& time, const std::optional<std::string>& user) {
  if (bucket_width_seconds <= 0) {
    throw Error(ErrorCode::invalid_argument, "bucket width must be positive");
  }
  return store.read([&](const StoreView& view) {
    QuerySelector s;
    s.doc = doc;
    s.user = user;
    s.time = time;
    const auto events = view.query(s);  // validates refs, sorted by time
    TrendSeries series;
    series.bucket_width_seconds = bucket_width_seconds;
    if (!events.empty()) {
      const auto first = floor_to_multiple(events.front()->session_start.seconds, bucket_width_seconds);
      const auto last = floor_to_multiple(events.back()->session_start.seconds, bucket_width_seconds);
      if ((last - first) / bucket_width_seconds >= kMaxTrendBuckets) {
        throw Error(ErrorCode::invalid_argument, "bucket width too small for the matched time span");
      }
    }
    for (const auto* e : events) {
      const Timestamp start{floor_to_multiple(e->session_start.seconds, bucket_width_seconds)};
      if (!series.buckets.empty()) {
        for (auto next = series.buckets.back().bucket_start.seconds + bucket_width_seconds;
             next < start.seconds; next += bucket_width_seconds) {
          series.buckets.push_back({Timestamp{next}, 0});
        }
      }
      if (series.buckets.empty() || series.buckets.back().bucket_start != start) {
        series.buckets.push_back({start, 0});
      }
      ++series.buckets.back().count;
    }
    return series;
  });
}

RankedList suggest_keywords(const Store& store, const std::string& doc, std::size_t top_k,
                            const Stopwords& stopwords) {
  detail::require_top_k(top_k);
  return store.read([&](const StoreView& view) {
    QuerySelector s;
    s.doc = doc;
    std::map<std::string, double> tallies;
    for (const auto* e : view.query(s)) {
      for (const auto& a : e->annotations) {
        for (auto& token : tokenize(a.body)) {
          if (token.size() < 3 || stopwords.contains(token)) continue;
          tallies[token] += 1;
        }
      }
    }
    return rank_counts(tallies, top_k, true);
  });
}

}  // namespace amiedot
