#include "amiedot/codec.hpp"

#include <initializer_list>

namespace amiedot {
namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::validation, field + ": " + message,
              Issues{{ErrorCode::validation, field, message}});
}

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) fail(what, "expected a JSON object");
}

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) fail(key, "unknown field");
  }
}

std::string get_string(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(key, "missing");
  if (!it->is_string()) fail(key, "expected a string");
  return it->get<std::string>();
}

std::optional<std::string> get_opt_string(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(key, "expected a string");
  return it->get<std::string>();
}

template <class E>
E get_enum(const Json& j, const char* key) {
  const auto text = get_string(j, key);
  const auto value = parse_enum<E>(text);
  if (!value) fail(key, "unknown value '" + text + "'");
  return *value;
}

template <class Kind>
OpenEnum<Kind> get_open_enum(const Json& j, const char* key) {
  const auto text = get_string(j, key);
  const auto value = parse_open_enum<Kind>(text);
  if (!value) fail(key, "unknown value '" + text + "'");
  return *value;
}

Timestamp get_timestamp(const Json& j, const char* key) {
  const auto text = get_string(j, key);
  const auto ts = parse_timestamp(text);
  if (!ts) {
    throw Error(ErrorCode::malformed_timestamp, std::string(key) + ": '" + text + "'",
                Issues{{ErrorCode::malformed_timestamp, key, "not an RFC 3339 UTC timestamp"}});
  }
  return *ts;
}

void put_opt(Json& j, const char* key, const std::optional<std::string>& value) {
  if (value) j[key] = *value;
}

}  // namespace

Json to_json(const UserRecord& r) {
  Json j = Json::object();
  j["annotator_ref"] = r.annotator_ref;
  j["first_name"] = r.first_name;
  j["last_name"] = r.last_name;
  j["email"] = r.email;
  put_opt(j, "postal_address", r.postal_address);
  put_opt(j, "region", r.region);
  j["age_group"] = to_string(r.age_group);
  put_opt(j, "country", r.country);
  put_opt(j, "social_class", r.social_class);
  j["area_of_activity"] = to_string(r.area_of_activity);
  return j;
}

UserRecord user_from_json(const Json& j) {
  require_object(j, "user");
  reject_unknown_keys(j, {"annotator_ref", "first_name", "last_name", "email", "postal_address",
                          "region", "age_group", "country", "social_class", "area_of_activity"});
  UserRecord r;
  r.annotator_ref = get_string(j, "annotator_ref");
  r.first_name = get_string(j, "first_name");
  r.last_name = get_string(j, "last_name");
  r.email = get_string(j, "email");
  r.postal_address = get_opt_string(j, "postal_address");
  r.region = get_opt_string(j, "region");
  r.age_group = get_enum<AgeGroup>(j, "age_group");
  r.country = get_opt_string(j, "country");
  r.social_class = get_opt_string(j, "social_class");
  r.area_of_activity = get_open_enum<ActivityKind>(j, "area_of_activity");
  return r;
}

Json to_json(const DocumentRecord& r) {
  Json j = Json::object();
  j["doc_ref"] = r.doc_ref;
  j["title"] = r.title;
  j["keywords"] = Json::array();
  for (const auto& kw : r.keywords) j["keywords"].push_back(kw);
  j["authors"] = Json::array();
  for (const auto& a : r.authors) {
    j["authors"].push_back({{"first_name", a.first_name}, {"last_name", a.last_name}});
  }
  if (r.publication_date) j["publication_date"] = format_date(*r.publication_date);
  j["format"] = to_string(r.format);
  put_opt(j, "abstract", r.abstract);
  return j;
}

DocumentRecord document_from_json(const Json& j) {
  require_object(j, "document");
  reject_unknown_keys(j, {"doc_ref", "title", "keywords", "authors", "publication_date", "format",
                          "abstract"});
  DocumentRecord r;
  r.doc_ref = get_string(j, "doc_ref");
  r.title = get_string(j, "title");
  if (const auto it = j.find("keywords"); it != j.end()) {
    if (!it->is_array()) fail("keywords", "expected an array");
    for (const auto& kw : *it) {
      if (!kw.is_string()) fail("keywords", "expected strings");
      r.keywords.insert(normalize_keyword(kw.get<std::string>()));
    }
  }
  if (const auto it = j.find("authors"); it != j.end()) {
    if (!it->is_array()) fail("authors", "expected an array");
    for (const auto& a : *it) {
      if (!a.is_object()) fail("authors", "expected objects");
      reject_unknown_keys(a, {"first_name", "last_name"});
      r.authors.push_back({get_string(a, "first_name"), get_string(a, "last_name")});
    }
  }
  if (const auto text = get_opt_string(j, "publication_date")) {
    const auto date = parse_date(*text);
    if (!date) fail("publication_date", "expected YYYY-MM-DD");
    r.publication_date = *date;
  }
  r.format = get_open_enum<FormatKind>(j, "format");
  r.abstract = get_opt_string(j, "abstract");
  return r;
}

Json to_json(const AnnotationRecord& r) {
  return Json{{"annotation_ref", r.annotation_ref},
              {"a_type", to_string(r.a_type)},
              {"location", to_string(r.location)},
              {"objective", to_string(r.objective)},
              {"body", r.body}};
}

AnnotationRecord annotation_from_json(const Json& j) {
  require_object(j, "annotation");
  reject_unknown_keys(j, {"annotation_ref", "a_type", "location", "objective", "body"});
  AnnotationRecord r;
  r.annotation_ref = get_string(j, "annotation_ref");
  r.a_type = get_enum<AnnotationType>(j, "a_type");
  r.location = get_enum<AnnotationLocation>(j, "location");
  r.objective = get_enum<AnnotationObjective>(j, "objective");
  r.body = get_opt_string(j, "body").value_or("");
  return r;
}

Json to_json(const ConsultationEvent& e) {
  Json j = Json::object();
  j["event_ref"] = e.event_ref;
  put_opt(j, "context_ref", e.context_ref);
  j["annotator_ref"] = e.annotator_ref;
  j["doc_ref"] = e.doc_ref;
  j["session_start"] = format_timestamp(e.session_start);
  if (e.duration_seconds) j["duration_seconds"] = *e.duration_seconds;
  j["approach"] = to_string(e.approach);
  j["reason"] = to_string(e.reason);
  j["annotations"] = Json::array();
  for (const auto& a : e.annotations) j["annotations"].push_back(to_json(a));
  return j;
}

ConsultationEvent event_from_json(const Json& j) {
  require_object(j, "event");
  reject_unknown_keys(j, {"event_ref", "context_ref", "annotator_ref", "doc_ref", "session_start",
                          "duration_seconds", "approach", "reason", "annotations"});
  ConsultationEvent e;
  e.event_ref = get_string(j, "event_ref");
  e.context_ref = get_opt_string(j, "context_ref");
  e.annotator_ref = get_string(j, "annotator_ref");
  e.doc_ref = get_string(j, "doc_ref");
  e.session_start = get_timestamp(j, "session_start");
  if (const auto it = j.find("duration_seconds"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) fail("duration_seconds", "expected an integer");
    e.duration_seconds = it->get<std::int64_t>();
  }
  e.approach = get_enum<Approach>(j, "approach");
  e.reason = get_open_enum<ReasonKind>(j, "reason");
  if (const auto it = j.find("annotations"); it != j.end()) {
    if (!it->is_array()) fail("annotations", "expected an array");
    for (const auto& a : *it) e.annotations.push_back(annotation_from_json(a));
  }
  return e;
}

Json to_log_json(const LogRecord& record) {
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        const char* kind = std::is_same_v<T, UserRecord>       ? "user"
                           : std::is_same_v<T, DocumentRecord> ? "document"
                                                               : "event";
        return Json{{"kind", kind}, {"body", to_json(r)}};
      },
      record);
}

LogRecord log_record_from_json(const Json& j) {
  require_object(j, "record");
  reject_unknown_keys(j, {"kind", "body"});
  const auto kind = get_string(j, "kind");
  const auto it = j.find("body");
  if (it == j.end()) fail("body", "missing");
  if (kind == "user") return user_from_json(*it);
  if (kind == "document") return document_from_json(*it);
  if (kind == "event") return event_from_json(*it);
  fail("kind", "unknown record kind '" + kind + "'");
}

std::string to_log_line(const LogRecord& record) { return to_log_json(record).dump(); }

LogRecord parse_log_line(std::string_view line) {
  Json j = Json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::malformed_request, "line is not valid JSON");
  }
  return log_record_from_json(j);
}

}  // namespace amiedot
