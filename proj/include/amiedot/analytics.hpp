#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "amiedot/model.hpp"
#include "amiedot/store.hpp"

namespace amiedot {

struct RankedEntry {
  std::string key;
  double score = 0.0;

  bool operator==(const RankedEntry&) const = default;
};

/// Entries ordered by score descending, key ascending on ties. `basis` is the
/// population the ranking was drawn from, before top_k truncation: the total
/// tally for count rankings, the number of candidates for score rankings.
struct RankedList {
  std::vector<RankedEntry> entries;
  double basis = 0.0;
  bool counts = true;  // scores are integral tallies

  bool operator==(const RankedList&) const = default;
};

struct TrendBucket {
  Timestamp bucket_start;
  std::uint64_t count = 0;

  bool operator==(const TrendBucket&) const = default;
};

/// Contiguous buckets from the first to the last nonempty one, each starting
/// at an epoch multiple of the width.
struct TrendSeries {
  std::int64_t bucket_width_seconds = 0;
  std::vector<TrendBucket> buckets;

  bool operator==(const TrendSeries&) const = default;
};

enum class GroupBy { social_class, area_of_activity, age_group, region };
std::optional<GroupBy> parse_group_by(std::string_view text);
std::string_view to_string(GroupBy g);

struct DisciplineEntry {
  std::string event_ref;
  std::vector<std::string> bodies;

  bool operator==(const DisciplineEntry&) const = default;
};

class Stopwords {
 public:
  /// The shipped 50-word English list (identical to data/stopwords.txt).
  static const Stopwords& builtin();
  /// One word per line; blank lines and lines starting with '#' are ignored.
  static Stopwords load(const std::filesystem::path& path);

  bool contains(std::string_view word) const { return words_.count(std::string(word)) != 0; }
  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

/// Lowercased tokens split on non-alphanumerics; bytes >= 0x80 stay inside
/// tokens so UTF-8 words are not broken apart.
std::vector<std::string> tokenize(std::string_view text);

/// Builds a ranking from raw tallies. Throws invalid-argument if top_k == 0.
RankedList rank_counts(const std::map<std::string, double>& tallies, std::size_t top_k, bool counts);

// Every ranking operation throws invalid-argument when top_k == 0.

RankedList most_consulted_documents(const Store& store, const TimeConstraint& time, std::size_t top_k);
RankedList reason_frequencies(const Store& store, const QuerySelector& selector);
RankedList annotation_objective_frequencies(const Store& store, const QuerySelector& selector);
RankedList user_activity(const Store& store, const TimeConstraint& time);
RankedList group_frequency(const Store& store, GroupBy group_by, const TimeConstraint& time);

/// Jaccard coefficient of the two users' consulted-document sets; 0 when
/// either set is empty.
double user_similarity(const Store& store, const std::string& a, const std::string& b);
RankedList related_users(const Store& store, const std::string& user, std::size_t top_k);

std::vector<DisciplineEntry> discipline_view(const Store& store, std::string_view keyword,
                                             const QuerySelector& selector);

TrendSeries document_trend(const Store& store, const std::string& doc, std::int64_t bucket_width_seconds,
                           const TimeConstraint& time, const std::optional<std::string>& user = std::nullopt);

RankedList suggest_keywords(const Store& store, const std::string& doc, std::size_t top_k,
                            const Stopwords& stopwords = Stopwords::builtin());

// View-level helpers shared with the recommender.
namespace detail {

std::map<std::string, std::set<std::string>> consulted_sets(const StoreView& view,
                                                            const TimeConstraint& time);
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);
void require_user(const StoreView& view, const std::string& user);
void require_document(const StoreView& view, const std::string& doc);
void require_top_k(std::size_t top_k);

}  // namespace detail
}  // namespace amiedot
