#pragma once

#include <map>
#include <string>
#include <vector>

#include "amiedot/model.hpp"
#include "amiedot/store.hpp"

namespace amiedot {

struct Neighbor {
  std::string annotator_ref;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

/// A document the user has not consulted yet. Collaborative results list the
/// neighbors whose similarity summed into the score; interest results list the
/// profile keywords that matched instead.
struct Recommendation {
  std::string doc_ref;
  double score = 0.0;
  std::vector<Neighbor> contributing_neighbors;
  std::vector<std::string> matched_keywords;

  bool operator==(const Recommendation&) const = default;
};

struct InterestProfile {
  std::string annotator_ref;
  std::map<std::string, std::uint64_t> keyword_weights;
  std::map<std::string, std::uint64_t> format_weights;

  bool operator==(const InterestProfile&) const = default;
};

enum class RecommendMode { collaborative, interest, automatic };
std::optional<RecommendMode> parse_recommend_mode(std::string_view text);

/// Each of the user's events adds 1 per keyword, and 1 to the document's format.
InterestProfile interest_profile(const Store& store, const std::string& user,
                                 const TimeConstraint& time = TimeConstraint::any());

/// Neighbor scoring: score(d) = sum of jaccard(u, v) over neighbors v that
/// consulted d, for documents u has not consulted. Ordered by score
/// descending, doc_ref ascending.
std::vector<Recommendation> recommend(const Store& store, const std::string& user, std::size_t top_k,
                                      const TimeConstraint& time = TimeConstraint::any());

/// Content fallback: score(d) = sum of profile weights of d's keywords.
std::vector<Recommendation> recommend_by_interest(const Store& store, const std::string& user,
                                                  std::size_t top_k,
                                                  const TimeConstraint& time = TimeConstraint::any());

/// Collaborative first; falls through to the interest ranking when that is
/// empty and the user has at least one event.
std::vector<Recommendation> recommend_auto(const Store& store, const std::string& user, std::size_t top_k,
                                           const TimeConstraint& time = TimeConstraint::any());

std::vector<Recommendation> recommend_with_mode(const Store& store, RecommendMode mode,
                                                const std::string& user, std::size_t top_k,
                                                const TimeConstraint& time = TimeConstraint::any());

}  // namespace amiedot
