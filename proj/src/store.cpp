#include "amiedot/store.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <mutex>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

namespace amiedot {
namespace {

constexpr std::array<ShapeCode, 8> kShapes = {{
    {"{dUdDdT}", false, false, false},
    {"T{dUdD}", false, false, true},
    {"D{dUdT}", false, true, false},
    {"DT{dU}", false, true, true},
    {"U{dDdT}", true, false, false},
    {"UT{dD}", true, false, true},
    {"UD{dT}", true, true, false},
    {"UDT", true, true, true},
}};

std::string pair_key(const std::string& user, const std::string& doc) {
  std::string key;
  key.reserve(user.size() + doc.size() + 1);
  key += user;
  key += '\x1f';
  key += doc;
  return key;
}

bool event_order(const ConsultationEvent* a, const ConsultationEvent* b) {
  if (a->session_start != b->session_start) return a->session_start < b->session_start;
  return a->event_ref < b->event_ref;
}

bool intervals_intersect(const ConsultationEvent& a, const ConsultationEvent& b) {
  return a.session_start < interval_end(b) && b.session_start < interval_end(a);
}

}  // namespace

ShapeCode classify_selector(const QuerySelector& selector) {
  const std::size_t index = (selector.user ? 4u : 0u) | (selector.doc ? 2u : 0u) |
                            (selector.time.is_fixed() ? 1u : 0u);
  return kShapes[index];
}

std::span<const ShapeCode> all_shapes() { return kShapes; }

// ---- StoreView -------------------------------------------------------------

const UserRecord* StoreView::find_user(const std::string& ref) const {
  const auto it = users_.find(ref);
  return it == users_.end() ? nullptr : &it->second;
}

const DocumentRecord* StoreView::find_document(const std::string& ref) const {
  const auto it = documents_.find(ref);
  return it == documents_.end() ? nullptr : &it->second;
}

std::vector<const ConsultationEvent*> StoreView::query(const QuerySelector& selector) const {
  if (selector.user && !find_user(*selector.user)) {
    throw Error(ErrorCode::unknown_user, "user '" + *selector.user + "' is not registered");
  }
  if (selector.doc && !find_document(*selector.doc)) {
    throw Error(ErrorCode::unknown_document, "document '" + *selector.doc + "' is not registered");
  }

  std::vector<const ConsultationEvent*> out;
  auto take_indices = [&](const std::vector<std::size_t>& indices) {
    for (const auto i : indices) {
      if (selector.matches(events_[i])) out.push_back(&events_[i]);
    }
  };

  static const std::vector<std::size_t> kNone;
  auto lookup = [](const auto& index, const std::string& key) -> const std::vector<std::size_t>& {
    const auto it = index.find(key);
    return it == index.end() ? kNone : it->second;
  };

  if (selector.user || selector.doc) {
    const std::vector<std::size_t>* best = nullptr;
    if (selector.user) best = &lookup(by_user_, *selector.user);
    if (selector.doc) {
      const auto& by_doc = lookup(by_doc_, *selector.doc);
      if (!best || by_doc.size() < best->size()) best = &by_doc;
    }
    take_indices(*best);
  } else if (selector.time.kind() == TimeConstraint::Kind::at) {
    if (const auto it = by_time_.find(selector.time.start().seconds); it != by_time_.end()) {
      take_indices(it->second);
    }
  } else if (selector.time.kind() == TimeConstraint::Kind::range) {
    const auto lo = by_time_.lower_bound(selector.time.start().seconds);
    const auto hi = by_time_.lower_bound(selector.time.end().seconds);
    for (auto it = lo; it != hi; ++it) take_indices(it->second);
  } else {
    out.reserve(events_.size());
    for (const auto& e : events_) out.push_back(&e);
  }

  std::sort(out.begin(), out.end(), event_order);
  return out;
}

StoreStats StoreView::stats() const {
  StoreStats s;
  s.n_users = users_.size();
  s.n_docs = documents_.size();
  s.n_events = events_.size();
  s.n_annotations = n_annotations_;
  if (!by_time_.empty()) {
    s.time_span = TimeSpan{Timestamp{by_time_.begin()->first}, Timestamp{by_time_.rbegin()->first}};
  }
  return s;
}

// ---- Store -----------------------------------------------------------------

Store::Store() = default;

Store::Store(std::filesystem::path path, StoreOptions options)
    : path_(std::move(path)), options_(std::move(options)) {
  load();
  file_ = std::fopen(path_->c_str(), "ab");
  if (!file_) {
    throw Error(ErrorCode::io, "cannot open log '" + path_->string() + "' for appending");
  }
}

Store::~Store() {
  if (file_) std::fclose(file_);
}

void Store::warn(std::string message) {
  if (options_.on_warning) options_.on_warning(message);
  warnings_.push_back(std::move(message));
}

void Store::load() {
  std::error_code ec;
  if (!std::filesystem::exists(*path_, ec)) return;

  std::ifstream in(*path_, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read log '" + path_->string() + "'");
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    ++line_no;
    const std::size_t nl = content.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string_view line(content.data() + pos, (terminated ? nl : content.size()) - pos);
    const std::size_t line_start = pos;
    pos = terminated ? nl + 1 : content.size();

    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    try {
      apply(parse_log_line(line), /*strict_lending=*/false, /*persist=*/false);
    } catch (const Error& err) {
      if (terminated) {
        throw Error(ErrorCode::corrupt_log,
                    "line " + std::to_string(line_no) + ": " + std::string(err.what()))
            .at_line(line_no);
      }
      warn("log '" + path_->string() + "': dropped partial trailing record at line " +
           std::to_string(line_no));
      std::filesystem::resize_file(*path_, line_start, ec);
      if (ec) throw Error(ErrorCode::io, "cannot truncate log: " + ec.message());
      return;
    }
    if (!terminated) {
      // Complete record missing only its newline: keep it and repair the file.
      std::FILE* f = std::fopen(path_->c_str(), "ab");
      if (!f || std::fputc('\n', f) == EOF) {
        if (f) std::fclose(f);
        throw Error(ErrorCode::io, "cannot repair log '" + path_->string() + "'");
      }
      std::fclose(f);
    }
  }
}

void Store::append_line(const std::string& line) {
  if (!file_) return;
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fputc('\n', file_) == EOF ||
      std::fflush(file_) != 0) {
    throw Error(ErrorCode::io, "write to log failed");
  }
}

void Store::sync() {
  if (!file_ || !options_.sync_writes) return;
  if (::fsync(::fileno(file_)) != 0) throw Error(ErrorCode::io, "fsync of log failed");
}

WriteOutcome Store::apply(const LogRecord& record, bool strict_lending, bool persist) {
  return std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, UserRecord>) {
          return apply_user(r, persist);
        } else if constexpr (std::is_same_v<T, DocumentRecord>) {
          return apply_document(r, persist);
        } else {
          return apply_event(r, strict_lending, persist);
        }
      },
      record);
}

WriteOutcome Store::apply_user(const UserRecord& record, bool persist) {
  throw_if_any(validate_user(record), "invalid user");
  if (const auto* existing = view_.find_user(record.annotator_ref)) {
    if (*existing == record) return WriteOutcome::unchanged;
    throw Error(ErrorCode::duplicate,
                "user '" + record.annotator_ref + "' already registered with different fields");
  }
  if (persist) append_line(to_log_line(record));
  view_.users_.emplace(record.annotator_ref, record);
  return WriteOutcome::created;
}

WriteOutcome Store::apply_document(const DocumentRecord& record, bool persist) {
  throw_if_any(validate_document(record), "invalid document");
  if (const auto* existing = view_.find_document(record.doc_ref)) {
    if (*existing == record) return WriteOutcome::unchanged;
    throw Error(ErrorCode::duplicate,
                "document '" + record.doc_ref + "' already registered with different fields");
  }
  if (persist) append_line(to_log_line(record));
  view_.documents_.emplace(record.doc_ref, record);
  return WriteOutcome::created;
}

void Store::check_event(const ConsultationEvent& event, bool strict_lending) const {
  throw_if_any(validate_event(
                   event, [&](const std::string& r) { return view_.find_user(r) != nullptr; },
                   [&](const std::string& r) { return view_.find_document(r) != nullptr; }),
               "invalid event");

  if (event.approach == Approach::follow_up) {
    const auto it = view_.first_use_.find(pair_key(event.annotator_ref, event.doc_ref));
    if (it == view_.first_use_.end() || it->second >= event.session_start.seconds) {
      throw Error(ErrorCode::validation,
                  "approach: follow-up requires an earlier event for the same user and document",
                  Issues{{ErrorCode::validation, "approach", "no earlier event for this pair"}});
    }
  }

  if (strict_lending && event.duration_seconds) {
    const auto it = view_.by_doc_.find(event.doc_ref);
    if (it == view_.by_doc_.end()) return;
    const ConsultationEvent* conflict = nullptr;
    for (const auto i : it->second) {
      const auto& other = view_.events_[i];
      if (!other.duration_seconds || other.annotator_ref == event.annotator_ref) continue;
      if (!intervals_intersect(event, other)) continue;
      if (!conflict || event_order(&other, conflict)) conflict = &other;
    }
    if (conflict) {
      throw Error(ErrorCode::overlap, "document '" + event.doc_ref + "' is in use by '" +
                                          conflict->annotator_ref + "' (event '" +
                                          conflict->event_ref + "')")
          .with_conflict(conflict->event_ref);
    }
  }
}

WriteOutcome Store::apply_event(const ConsultationEvent& event, bool strict_lending, bool persist) {
  if (const auto it = view_.by_ref_.find(event.event_ref); it != view_.by_ref_.end()) {
    if (view_.events_[it->second] == event) return WriteOutcome::unchanged;
    throw Error(ErrorCode::duplicate,
                "event '" + event.event_ref + "' already stored with different fields");
  }
  check_event(event, strict_lending);
  if (persist) append_line(to_log_line(event));
  index_event(event);
  return WriteOutcome::created;
}

void Store::index_event(ConsultationEvent event) {
  const std::size_t index = view_.events_.size();
  view_.by_ref_.emplace(event.event_ref, index);
  view_.by_user_[event.annotator_ref].push_back(index);
  view_.by_doc_[event.doc_ref].push_back(index);
  view_.by_time_[event.session_start.seconds].push_back(index);
  auto [it, inserted] = view_.first_use_.try_emplace(pair_key(event.annotator_ref, event.doc_ref),
                                                     event.session_start.seconds);
  if (!inserted) it->second = std::min(it->second, event.session_start.seconds);
  view_.n_annotations_ += event.annotations.size();
  view_.events_.push_back(std::move(event));
}

WriteOutcome Store::register_user(const UserRecord& record) {
  std::unique_lock lock(mutex_);
  const auto outcome = apply_user(record, true);
  if (outcome == WriteOutcome::created) sync();
  return outcome;
}

WriteOutcome Store::register_document(const DocumentRecord& record) {
  std::unique_lock lock(mutex_);
  const auto outcome = apply_document(record, true);
  if (outcome == WriteOutcome::created) sync();
  return outcome;
}

WriteOutcome Store::ingest_event(const ConsultationEvent& event, bool strict_lending) {
  std::unique_lock lock(mutex_);
  const auto outcome = apply_event(event, strict_lending, true);
  if (outcome == WriteOutcome::created) sync();
  return outcome;
}

std::vector<BatchOutcome> Store::apply_batch(std::span<const LogRecord> records, bool strict_lending) {
  std::unique_lock lock(mutex_);
  std::vector<BatchOutcome> outcomes;
  outcomes.reserve(records.size());
  bool wrote = false;
  for (const auto& record : records) {
    BatchOutcome result;
    try {
      result.outcome = apply(record, strict_lending, true);
      wrote = wrote || *result.outcome == WriteOutcome::created;
    } catch (const Error& err) {
      if (err.code() == ErrorCode::io) throw;
      result.error = err;
    }
    outcomes.push_back(std::move(result));
  }
  if (wrote) sync();
  return outcomes;
}

std::vector<ConsultationEvent> Store::query(const QuerySelector& selector) const {
  return read([&](const StoreView& view) {
    std::vector<ConsultationEvent> out;
    for (const auto* e : view.query(selector)) out.push_back(*e);
    return out;
  });
}

StoreStats Store::stats() const {
  return read([](const StoreView& view) { return view.stats(); });
}

}  // namespace amiedot
