#include "amiedot/model.hpp"

#include <algorithm>
#include <cctype>

namespace amiedot {

std::string normalize_keyword(std::string_view keyword) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!keyword.empty() && is_space(keyword.front())) keyword.remove_prefix(1);
  while (!keyword.empty() && is_space(keyword.back())) keyword.remove_suffix(1);
  std::string out(keyword);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

TimeConstraint TimeConstraint::at(Timestamp point) {
  TimeConstraint tc;
  tc.kind_ = Kind::at;
  tc.start_ = point;
  tc.end_ = point;
  return tc;
}

TimeConstraint TimeConstraint::range(Timestamp start, Timestamp end) {
  if (!(start < end)) {
    throw Error(ErrorCode::invalid_argument, "time range requires start < end");
  }
  TimeConstraint tc;
  tc.kind_ = Kind::range;
  tc.start_ = start;
  tc.end_ = end;
  return tc;
}

bool TimeConstraint::matches(Timestamp ts) const {
  switch (kind_) {
    case Kind::any: return true;
    case Kind::at: return ts == start_;
    case Kind::range: return start_ <= ts && ts < end_;
  }
  return false;
}

bool QuerySelector::matches(const ConsultationEvent& e) const {
  if (user && e.annotator_ref != *user) return false;
  if (doc && e.doc_ref != *doc) return false;
  return time.matches(e.session_start);
}

Issues validate_user(const UserRecord& r) {
  Issues issues;
  if (r.annotator_ref.empty()) {
    issues.push_back({ErrorCode::validation, "annotator_ref", "must be nonempty"});
  }
  if (r.email.find('@') == std::string::npos) {
    issues.push_back({ErrorCode::validation, "email", "must contain '@'"});
  }
  if (r.area_of_activity.is_other() && r.area_of_activity.label.empty()) {
    issues.push_back({ErrorCode::validation, "area_of_activity", "other requires a label"});
  }
  return issues;
}

Issues validate_document(const DocumentRecord& r) {
  Issues issues;
  if (r.doc_ref.empty()) {
    issues.push_back({ErrorCode::validation, "doc_ref", "must be nonempty"});
  }
  if (r.title.empty()) {
    issues.push_back({ErrorCode::validation, "title", "must be nonempty"});
  }
  for (const auto& kw : r.keywords) {
    if (kw.empty()) {
      issues.push_back({ErrorCode::validation, "keywords", "empty keyword"});
    } else if (normalize_keyword(kw) != kw) {
      issues.push_back({ErrorCode::validation, "keywords", "keyword '" + kw + "' is not normalized"});
    }
  }
  if (r.format.is_other() && r.format.label.empty()) {
    issues.push_back({ErrorCode::validation, "format", "other requires a label"});
  }
  return issues;
}

Issues validate_event(const ConsultationEvent& e, const RefPredicate& user_known,
                      const RefPredicate& doc_known) {
  Issues issues;
  if (e.event_ref.empty()) {
    issues.push_back({ErrorCode::validation, "event_ref", "must be nonempty"});
  }
  if (!user_known(e.annotator_ref)) {
    issues.push_back({ErrorCode::unknown_user, "annotator_ref",
                      "user '" + e.annotator_ref + "' is not registered"});
  }
  if (!doc_known(e.doc_ref)) {
    issues.push_back({ErrorCode::unknown_document, "doc_ref",
                      "document '" + e.doc_ref + "' is not registered"});
  }
  if (!timestamp_representable(e.session_start)) {
    issues.push_back({ErrorCode::malformed_timestamp, "session_start", "outside years 0000..9999"});
  }
  if (e.duration_seconds && *e.duration_seconds < 0) {
    issues.push_back({ErrorCode::negative_duration, "duration_seconds", "must be >= 0"});
  }
  if (e.reason.is_other() && e.reason.label.empty()) {
    issues.push_back({ErrorCode::validation, "reason", "other requires a label"});
  }
  std::set<std::string_view> seen;
  for (const auto& a : e.annotations) {
    if (a.annotation_ref.empty()) {
      issues.push_back({ErrorCode::validation, "annotations", "annotation_ref must be nonempty"});
    } else if (!seen.insert(a.annotation_ref).second) {
      issues.push_back({ErrorCode::validation, "annotations",
                        "duplicate annotation_ref '" + a.annotation_ref + "'"});
    }
  }
  return issues;
}

Issues validate_event(const ConsultationEvent& e, const std::unordered_set<std::string>& known_users,
                      const std::unordered_set<std::string>& known_docs) {
  return validate_event(
      e, [&](const std::string& ref) { return known_users.count(ref) != 0; },
      [&](const std::string& ref) { return known_docs.count(ref) != 0; });
}

}  // namespace amiedot
