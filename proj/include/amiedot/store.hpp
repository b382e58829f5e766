#pragma once

#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amiedot/codec.hpp"
#include "amiedot/model.hpp"

namespace amiedot {

/// One of the eight fixed/free combinations of the user, document and time axes.
struct ShapeCode {
  std::string_view code;
  bool user_fixed = false;
  bool doc_fixed = false;
  bool time_fixed = false;

  bool operator==(const ShapeCode&) const = default;
};

/// Time counts as fixed for both point and range constraints.
ShapeCode classify_selector(const QuerySelector& selector);

/// All eight shapes, ordered as the tracking table lists them (all free first,
/// everything fixed last).
std::span<const ShapeCode> all_shapes();

struct TimeSpan {
  Timestamp first;
  Timestamp last;

  bool operator==(const TimeSpan&) const = default;
};

struct StoreStats {
  std::size_t n_users = 0;
  std::size_t n_docs = 0;
  std::size_t n_events = 0;
  std::size_t n_annotations = 0;
  std::optional<TimeSpan> time_span;  // absent iff n_events == 0

  bool operator==(const StoreStats&) const = default;
};

enum class WriteOutcome { created, unchanged };

struct BatchOutcome {
  std::optional<WriteOutcome> outcome;  // set when accepted
  std::optional<Error> error;           // set when rejected

  bool accepted() const { return outcome.has_value(); }
};

struct StoreOptions {
  bool sync_writes = true;
  std::function<void(std::string_view)> on_warning;
};

class Store;

/// Read access to the store contents. Only valid inside Store::read, which
/// holds the reader lock for the duration of the callback.
class StoreView {
 public:
  const UserRecord* find_user(const std::string& ref) const;
  const DocumentRecord* find_document(const std::string& ref) const;

  /// Events matching every constraint, ordered by (session_start, event_ref).
  /// Throws unknown-user / unknown-document for unregistered fixed refs.
  std::vector<const ConsultationEvent*> query(const QuerySelector& selector) const;

  /// Events in append order.
  std::span<const ConsultationEvent> log() const { return events_; }

  /// Keyed by ref, so iteration order is deterministic.
  const std::map<std::string, UserRecord>& users() const { return users_; }
  const std::map<std::string, DocumentRecord>& documents() const { return documents_; }

  StoreStats stats() const;

 private:
  friend class Store;

  std::map<std::string, UserRecord> users_;
  std::map<std::string, DocumentRecord> documents_;
  std::vector<ConsultationEvent> events_;
  std::size_t n_annotations_ = 0;

  std::unordered_map<std::string, std::size_t> by_ref_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_user_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_doc_;
  std::map<std::int64_t, std::vector<std::size_t>> by_time_;
  // Earliest session_start per "user\x1f doc" pair, for the follow-up rule.
  std::unordered_map<std::string, std::int64_t> first_use_;
};

/// Append-only consultation log. Single writer, many readers: mutations are
/// serialized and readers never see a half-applied ingest. A store built with
/// a path persists every accepted record as one JSON line before it becomes
/// visible; opening an existing path replays the log to rebuild the indexes.
class Store {
 public:
  /// In-memory store with no backing file.
  Store();
  /// Opens or creates the log at `path`. Throws corrupt-log or io-error.
  explicit Store(std::filesystem::path path, StoreOptions options = {});
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  WriteOutcome register_user(const UserRecord& record);
  WriteOutcome register_document(const DocumentRecord& record);

  /// Validates, checks the follow-up rule against history, and in strict mode
  /// rejects intervals that intersect another user's interval on the same
  /// document. An identical re-ingest of a known event_ref is a no-op.
  WriteOutcome ingest_event(const ConsultationEvent& event, bool strict_lending);

  /// Applies records in order; each record succeeds or fails independently.
  /// Writes are synced once at the end of the batch.
  std::vector<BatchOutcome> apply_batch(std::span<const LogRecord> records, bool strict_lending);

  std::vector<ConsultationEvent> query(const QuerySelector& selector) const;
  StoreStats stats() const;

  template <class F>
  decltype(auto) read(F&& fn) const {
    std::shared_lock lock(mutex_);
    return std::forward<F>(fn)(static_cast<const StoreView&>(view_));
  }

  const std::optional<std::filesystem::path>& path() const { return path_; }
  /// Warnings raised while opening (e.g. a truncated trailing line).
  const std::vector<std::string>& open_warnings() const { return warnings_; }

 private:
  WriteOutcome apply(const LogRecord& record, bool strict_lending, bool persist);
  WriteOutcome apply_user(const UserRecord& record, bool persist);
  WriteOutcome apply_document(const DocumentRecord& record, bool persist);
  WriteOutcome apply_event(const ConsultationEvent& event, bool strict_lending, bool persist);
  void check_event(const ConsultationEvent& event, bool strict_lending) const;
  void index_event(ConsultationEvent event);
  void load();
  void append_line(const std::string& line);
  void sync();
  void warn(std::string message);

  mutable std::shared_mutex mutex_;
  StoreView view_;
  std::optional<std::filesystem::path> path_;
  StoreOptions options_;
  std::FILE* file_ = nullptr;
  std::vector<std::string> warnings_;
};

}  // namespace amiedot
