#include "amiedot/api.hpp"

#include "amiedot/recommend.hpp"

namespace amiedot {
namespace {

ApiResponse error_response(const Error& err) { return {http_status(err.code()), error_json(err)}; }

ApiResponse plain_error(int status, const char* code, std::string detail) {
  return {status, Json{{"error", code}, {"detail", std::move(detail)}}};
}

LogRecord decode(RecordKind kind, const Json& j) {
  switch (kind) {
    case RecordKind::user: return user_from_json(j);
    case RecordKind::document: return document_from_json(j);
    case RecordKind::event: return event_from_json(j);
  }
  throw Error(ErrorCode::malformed_request, "unknown record kind");
}

std::string record_ref(const LogRecord& record) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, UserRecord>) return r.annotator_ref;
        else if constexpr (std::is_same_v<T, DocumentRecord>) return r.doc_ref;
        else return r.event_ref;
      },
      record);
}

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_user:
    case ErrorCode::unknown_document: return 404;
    case ErrorCode::duplicate:
    case ErrorCode::overlap: return 409;
    case ErrorCode::io:
    case ErrorCode::corrupt_log: return 500;
    default: return 400;
  }
}

std::vector<std::pair<std::size_t, LogRecord>> parse_records(std::string_view text,
                                                             std::optional<RecordKind> kind) {
  std::vector<std::pair<std::size_t, LogRecord>> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (is_blank(line)) continue;
    try {
      Json j = Json::parse(line.begin(), line.end(), nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::malformed_request, "not valid JSON");
      records.emplace_back(line_no, kind ? decode(*kind, j) : log_record_from_json(j));
    } catch (const Error& err) {
      throw Error(err.code(), "line " + std::to_string(line_no) + ": " + err.detail(), err.issues())
          .at_line(line_no);
    }
  }
  return records;
}

ImportReport import_records(Store& store, std::string_view text, std::optional<RecordKind> kind,
                            bool strict_lending) {
  auto parsed = parse_records(text, kind);
  std::vector<LogRecord> records;
  records.reserve(parsed.size());
  for (auto& [line, record] : parsed) records.push_back(std::move(record));
  const auto outcomes = store.apply_batch(records, strict_lending);

  ImportReport report;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].accepted()) {
      (*outcomes[i].outcome == WriteOutcome::created ? report.created : report.unchanged) += 1;
    } else {
      report.rejections.push_back({parsed[i].first, record_ref(records[i]), *outcomes[i].error});
    }
  }
  return report;
}

Api::Api(Store& store, bool strict_lending, Stopwords stopwords)
    : store_(store), strict_lending_(strict_lending), stopwords_(std::move(stopwords)) {}

ApiResponse Api::handle(const ApiRequest& request) const {
  try {
    std::optional<RecordKind> kind;
    if (request.path == "/users") kind = RecordKind::user;
    if (request.path == "/documents") kind = RecordKind::document;
    if (request.path == "/events") kind = RecordKind::event;

    if (kind) {
      if (request.method != "POST") return plain_error(405, "method-not-allowed", "use POST");
      return post(*kind, request.body);
    }
    if (request.method != "GET") {
      return plain_error(405, "method-not-allowed", "use GET");
    }
    return get(request.path, request.params);
  } catch (const Error& err) {
    return error_response(err);
  } catch (const Json::exception& ex) {
    return plain_error(400, "malformed-request", ex.what());
  } catch (const std::exception& ex) {
    return plain_error(500, "internal-error", ex.what());
  }
}

ApiResponse Api::post(RecordKind kind, const std::string& body) const {
  Json single = Json::parse(body, nullptr, false);
  if (!single.is_discarded() && !single.is_object()) {
    throw Error(ErrorCode::malformed_request, "body must be a JSON object or JSON Lines");
  }
  if (single.is_discarded()) {
    std::size_t nonblank = 0;
    for (std::size_t pos = 0; pos <= body.size();) {
      auto nl = body.find('\n', pos);
      if (nl == std::string::npos) nl = body.size();
      if (!is_blank(std::string_view(body).substr(pos, nl - pos))) ++nonblank;
      pos = nl + 1;
    }
    if (nonblank < 2) throw Error(ErrorCode::malformed_request, "body is not valid JSON");
    return {200, to_json(import_records(store_, body, kind, strict_lending_))};
  }

  const auto record = decode(kind, single);
  const WriteOutcome outcome = std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, UserRecord>) return store_.register_user(r);
        else if constexpr (std::is_same_v<T, DocumentRecord>) return store_.register_document(r);
        else return store_.ingest_event(r, strict_lending_);
      },
      record);
  const bool created = outcome == WriteOutcome::created;
  return {created ? 201 : 200,
          Json{{"status", created ? "created" : "unchanged"}, {"ref", record_ref(record)}}};
}

ApiResponse Api::get(const std::string& path, const Params& params) const {
  if (path == "/health") return {200, Json{{"status", "ok"}}};
  if (path == "/stats") return {200, to_json(store_.stats())};
  if (path == "/query") {
    const auto selector = selector_from_params(params);
    return {200, query_json(selector, store_.query(selector))};
  }

  constexpr std::string_view reports = "/reports/";
  if (path.rfind(reports, 0) == 0 && path.size() > reports.size()) {
    const auto name = path.substr(reports.size());
    bool known = false;
    for (const auto& n : report_names()) known = known || n == name;
    if (!known) return plain_error(404, "not-found", "unknown report '" + name + "'");
    return {200, to_json(run_report(store_, name, params, stopwords_))};
  }

  constexpr std::string_view recs = "/recommendations/";
  if (path.rfind(recs, 0) == 0 && path.size() > recs.size()) {
    const auto user = path.substr(recs.size());
    const auto mode_it = params.find("mode");
    const auto mode_text = mode_it == params.end() ? std::string("auto") : mode_it->second;
    const auto mode = parse_recommend_mode(mode_text);
    if (!mode) throw Error(ErrorCode::invalid_argument, "unknown mode '" + mode_text + "'");
    const auto top = top_from_params(params);
    return {200, recommendations_json(user, recommend_with_mode(store_, *mode, user, top,
                                                                time_from_params(params)))};
  }
  return plain_error(404, "not-found", "no route for '" + path + "'");
}

}  // namespace amiedot
