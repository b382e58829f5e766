#include "amiedot/recommend.hpp"

#include <algorithm>

#include "amiedot/analytics.hpp"

namespace amiedot {
namespace {

void order_and_truncate(std::vector<Recommendation>& recs, std::size_t top_k) {
  std::sort(recs.begin(), recs.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_ref < b.doc_ref;
  });
  if (recs.size() > top_k) recs.resize(top_k);
}

InterestProfile profile_of(const StoreView& view, const std::string& user, const TimeConstraint& time) {
  InterestProfile profile;
  profile.annotator_ref = user;
  QuerySelector s;
  s.user = user;
  s.time = time;
  for (const auto* e : view.query(s)) {
    const auto* doc = view.find_document(e->doc_ref);
    for (const auto& kw : doc->keywords) ++profile.keyword_weights[kw];
    ++profile.format_weights[to_string(doc->format)];
  }
  return profile;
}

}  // namespace

std::optional<RecommendMode> parse_recommend_mode(std::string_view text) {
  if (text == "collaborative") return RecommendMode::collaborative;
  if (text == "interest") return RecommendMode::interest;
  if (text == "auto") return RecommendMode::automatic;
  return std::nullopt;
}

InterestProfile interest_profile(const Store& store, const std::string& user, const TimeConstraint& time) {
  return store.read([&](const StoreView& view) {
    detail::require_user(view, user);
    return profile_of(view, user, time);
  });
}

namespace {

std::vector<Recommendation> collaborative(const StoreView& view, const std::string& user,
                                          std::size_t top_k, const TimeConstraint& time) {
  detail::require_user(view, user);
  const auto sets = detail::consulted_sets(view, time);
  const auto own = sets.find(user);
  if (own == sets.end()) return std::vector<Recommendation>{};
  const auto& mine = own->second;

  std::map<std::string, Recommendation> candidates;
  for (const auto& [other, docs] : sets) {
    if (other == user) continue;
    const double sim = detail::jaccard(mine, docs);
    if (sim <= 0.0) continue;
    for (const auto& d : docs) {
      if (mine.count(d)) continue;
      auto& rec = candidates[d];
      rec.doc_ref = d;
      rec.score += sim;
      rec.contributing_neighbors.push_back({other, sim});
    }
  }

  std::vector<Recommendation> recs;
  recs.reserve(candidates.size());
  for (auto& [d, rec] : candidates) {
    std::sort(rec.contributing_neighbors.begin(), rec.contributing_neighbors.end(),
              [](const Neighbor& a, const Neighbor& b) {
                if (a.similarity != b.similarity) return a.similarity > b.similarity;
                return a.annotator_ref < b.annotator_ref;
              });
    recs.push_back(std::move(rec));
  }
  order_and_truncate(recs, top_k);
  return recs;
}

std::vector<Recommendation> by_interest(const StoreView& view, const std::string& user,
                                        std::size_t top_k, const TimeConstraint& time) {
  detail::require_user(view, user);
  const auto profile = profile_of(view, user, time);
  std::vector<Recommendation> recs;
  if (profile.keyword_weights.empty()) return recs;

  std::set<std::string> consulted;
  QuerySelector s;
  s.user = user;
  s.time = time;
  for (const auto* e : view.query(s)) consulted.insert(e->doc_ref);

  for (const auto& [ref, doc] : view.documents()) {
    if (consulted.count(ref)) continue;
    Recommendation rec;
    rec.doc_ref = ref;
    for (const auto& kw : doc.keywords) {
      const auto it = profile.keyword_weights.find(kw);
      if (it == profile.keyword_weights.end()) continue;
      rec.score += static_cast<double>(it->second);
      rec.matched_keywords.push_back(kw);
    }
    if (rec.score > 0) recs.push_back(std::move(rec));
  }
  order_and_truncate(recs, top_k);
  return recs;
}

}  // namespace

std::vector<Recommendation> recommend(const Store& store, const std::string& user, std::size_t top_k,
                                      const TimeConstraint& time) {
  detail::require_top_k(top_k);
  return store.read([&](const StoreView& view) { return collaborative(view, user, top_k, time); });
}

std::vector<Recommendation> recommend_by_interest(const Store& store, const std::string& user,
                                                  std::size_t top_k, const TimeConstraint& time) {
  detail::require_top_k(top_k);
  return store.read([&](const StoreView& view) { return by_interest(view, user, top_k, time); });
}

std::vector<Recommendation> recommend_auto(const Store& store, const std::string& user, std::size_t top_k,
                                           const TimeConstraint& time) {
  detail::require_top_k(top_k);
  return store.read([&](const StoreView& view) {
    auto recs = collaborative(view, user, top_k, time);
    if (!recs.empty()) return recs;
    return by_interest(view, user, top_k, time);
  });
}

std::vector<Recommendation> recommend_with_mode(const Store& store, RecommendMode mode,
                                                const std::string& user, std::size_t top_k,
                                                const TimeConstraint& time) {
  switch (mode) {
    case RecommendMode::collaborative: return recommend(store, user, top_k, time);
    case RecommendMode::interest: return recommend_by_interest(store, user, top_k, time);
    case RecommendMode::automatic: return recommend_auto(store, user, top_k, time);
  }
  return {};
}

}  // namespace amiedot
