#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "amiedot/model.hpp"
#include "amiedot/store.hpp"

namespace amiedot {

/// Deterministic random source for fixtures.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The library distributions are not (they differ between standard
/// library implementations), so draws are reduced here explicitly:
///   below(n): rejection sampling. Let t = (2^64 - n) mod n; draw x until
///             x >= t, return x mod n.
///   unit():   (x >> 11) * 2^-53, uniform on [0, 1).
///   chance(p): unit() < p.
class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n);
  std::int64_t between(std::int64_t lo, std::int64_t hi);  // inclusive
  double unit();
  bool chance(double p) { return unit() < p; }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct WorkloadSpec {
  std::uint64_t seed = 42;
  std::size_t n_users = 40;
  std::size_t n_docs = 60;
  std::size_t n_events = 2000;
  std::size_t n_communities = 2;
  Timestamp span_start{1704067200};  // 2024-01-01T00:00:00Z
  Timestamp span_end{1719792000};    // 2024-07-01T00:00:00Z
  double annotation_rate = 0.5;
};

/// Probability that a member draws from its community's document subset.
inline constexpr double kInCommunityProbability = 0.8;

/// Throws invalid-argument when a bound is violated.
void validate_workload_spec(const WorkloadSpec& spec);

struct Workload {
  std::vector<UserRecord> users;
  std::vector<DocumentRecord> documents;
  std::vector<ConsultationEvent> events;  // generation order
  std::vector<std::size_t> user_community;  // parallel to users
  std::vector<std::size_t> doc_community;   // parallel to documents
};

/// Users are assigned round-robin to communities. Community c owns the
/// contiguous block of ceil(n_docs / n_communities) documents starting at
/// c * block. Each event picks a user uniformly, then a document from the
/// user's block with probability 0.8 (uniform over all documents otherwise),
/// and a start time uniform in [span_start, span_end). Durations are clamped
/// so that no two events on the same document overlap, which keeps generated
/// logs valid under strict lending. approach is follow-up exactly when the
/// same user consulted the same document strictly earlier.
Workload generate(const WorkloadSpec& spec);

/// Adds `count` events that each start strictly inside an existing event's
/// interval on the same document but belong to a different user. Under
/// strict lending every one of them is rejected and nothing else is.
struct PlantedBatch {
  std::vector<ConsultationEvent> events;
  std::vector<std::string> planted_refs;
};
PlantedBatch plant_overlaps(const Workload& workload, std::size_t count, std::uint64_t seed);

struct Rejection {
  std::string event_ref;
  ErrorCode code = ErrorCode::validation;
  std::string detail;
};

struct ReplayReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<Rejection> rejections;
};

/// Ingests in (session_start, event_ref) order. Failures are tallied, never
/// abort the batch.
ReplayReport replay(std::vector<ConsultationEvent> events, Store& store, bool strict_lending);

/// Registers users and documents, then replays the events.
ReplayReport load_workload(const Workload& workload, Store& store, bool strict_lending);

/// JSON-Lines in the log/import format: users, documents, then events in
/// (session_start, event_ref) order so the file imports cleanly as is.
void write_jsonl(std::ostream& out, const Workload& workload);

}  // namespace amiedot
