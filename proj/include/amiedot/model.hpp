#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "amiedot/error.hpp"
#include "amiedot/time.hpp"

namespace amiedot {

// Closed enumerations. Enumerants are contiguous from zero so that the
// name tables below index directly.

enum class AgeGroup { under_18, from_18_to_25, from_26_to_40, from_41_to_60, over_60 };
enum class ActivityKind { teaching, research, student, general_public, other };
enum class FormatKind { pdf, word, html, text, other };
enum class ReasonKind {
  leisure,
  knowledge_acquisition,
  accidental,
  academic_reading,
  research_reference,
  answer_a_question,
  historic_reference,
  internet_link,
  other,
};
enum class AnnotationType { marking, typographic, reformatting, passage_numbering, text, icon, symbol };
enum class AnnotationLocation {
  left_margin,
  right_margin,
  footer,
  header,
  gutter,
  outside_document,
  end_of_document,
};
enum class AnnotationObjective {
  recapitulation,
  evaluation,
  summary,
  raise_a_point,
  classification,
  structuring,
  differentiating,
  for_information,
  answer_to_question,
  illustration,
  extension_of_document,
  clarify_ambiguity,
};
enum class Approach { new_annotation, follow_up };

template <class E>
struct EnumNames;

#define AMIEDOT_ENUM_NAMES(E, ...)                                         \
  template <>                                                              \
  struct EnumNames<E> {                                                    \
    static constexpr std::array names = {__VA_ARGS__};                     \
  }

using namespace std::string_view_literals;
AMIEDOT_ENUM_NAMES(AgeGroup, "under-18"sv, "18-25"sv, "26-40"sv, "41-60"sv, "over-60"sv);
AMIEDOT_ENUM_NAMES(ActivityKind, "teaching"sv, "research"sv, "student"sv, "general-public"sv, "other"sv);
AMIEDOT_ENUM_NAMES(FormatKind, "pdf"sv, "word"sv, "html"sv, "text"sv, "other"sv);
AMIEDOT_ENUM_NAMES(ReasonKind, "leisure"sv, "knowledge-acquisition"sv, "accidental"sv,
                   "academic-reading"sv, "research-reference"sv, "answer-a-question"sv,
                   "historic-reference"sv, "internet-link"sv, "other"sv);
AMIEDOT_ENUM_NAMES(AnnotationType, "marking"sv, "typographic"sv, "reformatting"sv,
                   "passage-numbering"sv, "text"sv, "icon"sv, "symbol"sv);
AMIEDOT_ENUM_NAMES(AnnotationLocation, "left-margin"sv, "right-margin"sv, "footer"sv, "header"sv,
                   "gutter"sv, "outside-document"sv, "end-of-document"sv);
AMIEDOT_ENUM_NAMES(AnnotationObjective, "recapitulation"sv, "evaluation"sv, "summary"sv,
                   "raise-a-point"sv, "classification"sv, "structuring"sv, "differentiating"sv,
                   "for-information"sv, "answer-to-question"sv, "illustration"sv,
                   "extension-of-document"sv, "clarify-ambiguity"sv);
AMIEDOT_ENUM_NAMES(Approach, "new-annotation"sv, "follow-up"sv);

#undef AMIEDOT_ENUM_NAMES

template <class E>
constexpr std::size_t enum_count() {
  return EnumNames<E>::names.size();
}

template <class E>
constexpr std::string_view to_string(E value) {
  return EnumNames<E>::names[static_cast<std::size_t>(value)];
}

template <class E>
std::optional<E> parse_enum(std::string_view text) {
  const auto& names = EnumNames<E>::names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == text) return static_cast<E>(i);
  }
  return std::nullopt;
}

template <class E>
constexpr E enum_at(std::size_t index) {
  return static_cast<E>(index);
}

/// An enumeration whose `other` enumerant carries a free label.
/// Wire form is the enumerant name, or "other:<label>".
template <class Kind>
struct OpenEnum {
  Kind kind{};
  std::string label;  // meaningful only when kind == Kind::other

  OpenEnum() = default;
  OpenEnum(Kind k) : kind(k) {}  // NOLINT(google-explicit-constructor)
  OpenEnum(Kind k, std::string l) : kind(k), label(std::move(l)) {}

  static OpenEnum other(std::string l) { return OpenEnum(Kind::other, std::move(l)); }

  bool is_other() const { return kind == Kind::other; }
  bool operator==(const OpenEnum&) const = default;
};

template <class Kind>
std::string to_string(const OpenEnum<Kind>& value) {
  std::string out(to_string(value.kind));
  if (value.is_other()) {
    out += ':';
    out += value.label;
  }
  return out;
}

/// Rejects unknown names, bare "other", and "other:" with an empty label.
template <class Kind>
std::optional<OpenEnum<Kind>> parse_open_enum(std::string_view text) {
  constexpr std::string_view prefix = "other:";
  if (text.substr(0, prefix.size()) == prefix) {
    if (text.size() == prefix.size()) return std::nullopt;
    return OpenEnum<Kind>::other(std::string(text.substr(prefix.size())));
  }
  const auto kind = parse_enum<Kind>(text);
  if (!kind || *kind == Kind::other) return std::nullopt;
  return OpenEnum<Kind>(*kind);
}

using AreaOfActivity = OpenEnum<ActivityKind>;
using DocumentFormat = OpenEnum<FormatKind>;
using ConsultationReason = OpenEnum<ReasonKind>;

struct UserRecord {
  std::string annotator_ref;
  std::string first_name;
  std::string last_name;
  std::string email;
  std::optional<std::string> postal_address;
  std::optional<std::string> region;
  AgeGroup age_group = AgeGroup::from_26_to_40;
  std::optional<std::string> country;
  std::optional<std::string> social_class;
  AreaOfActivity area_of_activity{ActivityKind::general_public};

  bool operator==(const UserRecord&) const = default;
};

struct PersonName {
  std::string first_name;
  std::string last_name;

  bool operator==(const PersonName&) const = default;
};

struct DocumentRecord {
  std::string doc_ref;
  std::string title;
  std::set<std::string> keywords;
  std::vector<PersonName> authors;
  std::optional<Date> publication_date;
  DocumentFormat format{FormatKind::pdf};
  std::optional<std::string> abstract;

  bool operator==(const DocumentRecord&) const = default;
};

/// Lowercases (ASCII) and trims surrounding whitespace. Empty results are kept
/// so validation can report them.
std::string normalize_keyword(std::string_view keyword);

struct AnnotationRecord {
  std::string annotation_ref;
  AnnotationType a_type = AnnotationType::text;
  AnnotationLocation location = AnnotationLocation::right_margin;
  AnnotationObjective objective = AnnotationObjective::for_information;
  std::string body;

  bool operator==(const AnnotationRecord&) const = default;
};

struct ConsultationEvent {
  std::string event_ref;
  std::optional<std::string> context_ref;
  std::string annotator_ref;
  std::string doc_ref;
  Timestamp session_start;
  std::optional<std::int64_t> duration_seconds;
  Approach approach = Approach::new_annotation;
  ConsultationReason reason{ReasonKind::leisure};
  std::vector<AnnotationRecord> annotations;

  bool operator==(const ConsultationEvent&) const = default;
};

/// End of the lending interval [session_start, session_start + duration).
/// Only meaningful when duration_seconds is present.
inline Timestamp interval_end(const ConsultationEvent& e) {
  return Timestamp{e.session_start.seconds + e.duration_seconds.value_or(0)};
}

class TimeConstraint {
 public:
  enum class Kind { any, at, range };

  TimeConstraint() = default;
  static TimeConstraint any() { return {}; }
  static TimeConstraint at(Timestamp point);
  /// [start, end). Throws invalid-argument unless start < end.
  static TimeConstraint range(Timestamp start, Timestamp end);

  Kind kind() const { return kind_; }
  bool is_fixed() const { return kind_ != Kind::any; }
  Timestamp start() const { return start_; }
  /// Exclusive end for ranges; equals start for points.
  Timestamp end() const { return end_; }

  bool matches(Timestamp ts) const;
  bool operator==(const TimeConstraint&) const = default;

 private:
  Kind kind_ = Kind::any;
  Timestamp start_{};
  Timestamp end_{};
};

/// Optional user/document/time constraints. A free axis is nullopt / any.
struct QuerySelector {
  std::optional<std::string> user;
  std::optional<std::string> doc;
  TimeConstraint time;

  bool matches(const ConsultationEvent& e) const;
  bool operator==(const QuerySelector&) const = default;
};

using RefPredicate = std::function<bool(const std::string&)>;

Issues validate_user(const UserRecord& record);
Issues validate_document(const DocumentRecord& record);

/// Referential integrity plus per-event invariants. The follow-up ordering
/// rule needs store history and is checked at ingest instead.
Issues validate_event(const ConsultationEvent& event, const RefPredicate& user_known,
                      const RefPredicate& doc_known);
Issues validate_event(const ConsultationEvent& event,
                      const std::unordered_set<std::string>& known_users,
                      const std::unordered_set<std::string>& known_docs);

}  // namespace amiedot
