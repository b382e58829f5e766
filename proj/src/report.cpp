#include "amiedot/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <ostream>

namespace amiedot {
namespace {

Json score_json(double score, bool integral) {
  if (integral) return static_cast<std::uint64_t>(score);
  return score;
}

std::optional<std::string> param(const Params& params, const char* key) {
  const auto it = params.find(key);
  if (it == params.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

Timestamp timestamp_param(const std::string& key, const std::string& text) {
  const auto ts = parse_timestamp(text);
  if (!ts) {
    throw Error(ErrorCode::malformed_timestamp, key + ": '" + text + "' is not an RFC 3339 timestamp");
  }
  return *ts;
}

std::int64_t integer_param(const std::string& key, const std::string& text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::invalid_argument, key + ": '" + text + "' is not an integer");
  }
  return value;
}

std::string required(const Params& params, const char* key, const std::string& report) {
  auto value = param(params, key);
  if (!value) throw Error(ErrorCode::invalid_argument, "report '" + report + "' requires " + key);
  return *value;
}

}  // namespace

Json to_json(const RankedList& list) {
  Json entries = Json::array();
  for (const auto& e : list.entries) {
    entries.push_back({{"key", e.key}, {"score", score_json(e.score, list.counts)}});
  }
  return Json{{"entries", std::move(entries)}, {"basis", score_json(list.basis, list.counts)}};
}

Json to_json(const TrendSeries& series) {
  Json buckets = Json::array();
  for (const auto& b : series.buckets) {
    buckets.push_back({{"bucket_start", format_timestamp(b.bucket_start)}, {"count", b.count}});
  }
  return Json{{"bucket_width_seconds", series.bucket_width_seconds}, {"buckets", std::move(buckets)}};
}

Json to_json(const std::vector<DisciplineEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries) out.push_back({{"event_ref", e.event_ref}, {"bodies", e.bodies}});
  return out;
}

Json to_json(const InterestProfile& profile) {
  return Json{{"annotator_ref", profile.annotator_ref},
              {"keyword_weights", profile.keyword_weights},
              {"format_weights", profile.format_weights}};
}

Json to_json(const Recommendation& rec) {
  Json neighbors = Json::array();
  for (const auto& n : rec.contributing_neighbors) {
    neighbors.push_back({{"annotator_ref", n.annotator_ref}, {"similarity", n.similarity}});
  }
  Json j{{"doc_ref", rec.doc_ref}, {"score", rec.score}, {"contributing_neighbors", std::move(neighbors)}};
  if (!rec.matched_keywords.empty()) j["matched_keywords"] = rec.matched_keywords;
  return j;
}

Json to_json(const StoreStats& stats) {
  Json j{{"n_users", stats.n_users},
         {"n_docs", stats.n_docs},
         {"n_events", stats.n_events},
         {"n_annotations", stats.n_annotations}};
  if (stats.time_span) {
    j["time_span"] = {{"first", format_timestamp(stats.time_span->first)},
                      {"last", format_timestamp(stats.time_span->last)}};
  }
  return j;
}

Json query_json(const QuerySelector& selector, const std::vector<ConsultationEvent>& events) {
  Json list = Json::array();
  for (const auto& e : events) list.push_back(to_json(e));
  return Json{{"shape", std::string(classify_selector(selector).code)}, {"events", std::move(list)}};
}

Json recommendations_json(const std::string& user, const std::vector<Recommendation>& recs) {
  Json list = Json::array();
  for (const auto& r : recs) list.push_back(to_json(r));
  return Json{{"annotator_ref", user}, {"recommendations", std::move(list)}};
}

Json error_json(const Error& err) {
  Json j{{"error", std::string(error_code_name(err.code()))}, {"detail", err.detail()}};
  if (!err.conflicting_ref().empty()) j["conflicting_event_ref"] = err.conflicting_ref();
  return j;
}

Json to_json(const ImportReport& report) {
  Json rejections = Json::array();
  for (const auto& r : report.rejections) {
    Json j = error_json(r.error);
    j["line"] = r.line;
    j["ref"] = r.ref;
    rejections.push_back(std::move(j));
  }
  return Json{{"accepted", report.accepted()},
              {"created", report.created},
              {"unchanged", report.unchanged},
              {"rejected", report.rejections.size()},
              {"rejections", std::move(rejections)}};
}

Json to_json(const ReplayReport& report) {
  Json rejections = Json::array();
  for (const auto& r : report.rejections) {
    rejections.push_back(
        {{"event_ref", r.event_ref}, {"error", std::string(error_code_name(r.code))}, {"detail", r.detail}});
  }
  return Json{{"accepted", report.accepted},
              {"rejected", report.rejected},
              {"rejections", std::move(rejections)}};
}

TimeConstraint time_from_params(const Params& params) {
  const auto at = param(params, "at");
  const auto from = param(params, "from");
  const auto to = param(params, "to");
  if (at && (from || to)) {
    throw Error(ErrorCode::invalid_argument, "'at' cannot be combined with 'from'/'to'");
  }
  if (at) return TimeConstraint::at(timestamp_param("at", *at));
  if (!from && !to) return TimeConstraint::any();
  const Timestamp start = from ? timestamp_param("from", *from) : Timestamp{-62167219200};
  const Timestamp end = to ? timestamp_param("to", *to) : Timestamp{253402300800};
  return TimeConstraint::range(start, end);
}

QuerySelector selector_from_params(const Params& params) {
  QuerySelector s;
  s.user = param(params, "user");
  s.doc = param(params, "doc");
  s.time = time_from_params(params);
  return s;
}

std::size_t top_from_params(const Params& params, std::size_t fallback) {
  const auto text = param(params, "top");
  if (!text) return fallback;
  const auto value = integer_param("top", *text);
  if (value < 1) throw Error(ErrorCode::invalid_argument, "top must be >= 1");
  return static_cast<std::size_t>(value);
}

const std::vector<std::string>& report_names() {
  static const std::vector<std::string> names = {"most-consulted", "reasons", "objectives", "activity",
                                                 "groups", "trend", "keywords", "related",
                                                 "discipline", "profile"};
  return names;
}

ReportResult run_report(const Store& store, const std::string& name, const Params& params,
                        const Stopwords& stopwords) {
  if (name == "most-consulted") {
    return most_consulted_documents(store, time_from_params(params), top_from_params(params));
  }
  if (name == "reasons") return reason_frequencies(store, selector_from_params(params));
  if (name == "objectives") return annotation_objective_frequencies(store, selector_from_params(params));
  if (name == "activity") return user_activity(store, time_from_params(params));
  if (name == "groups") {
    const auto by_text = required(params, "by", name);
    const auto by = parse_group_by(by_text);
    if (!by) throw Error(ErrorCode::invalid_argument, "unknown grouping '" + by_text + "'");
    return group_frequency(store, *by, time_from_params(params));
  }
  if (name == "trend") {
    const auto doc = required(params, "doc", name);
    const auto bucket = integer_param("bucket", param(params, "bucket").value_or("86400"));
    return document_trend(store, doc, bucket, time_from_params(params), param(params, "user"));
  }
  if (name == "keywords") {
    return suggest_keywords(store, required(params, "doc", name), top_from_params(params), stopwords);
  }
  if (name == "related") {
    return related_users(store, required(params, "user", name), top_from_params(params));
  }
  if (name == "discipline") {
    return discipline_view(store, required(params, "keyword", name), selector_from_params(params));
  }
  if (name == "profile") {
    return interest_profile(store, required(params, "user", name), time_from_params(params));
  }
  throw Error(ErrorCode::invalid_argument, "unknown report '" + name + "'");
}

Json to_json(const ReportResult& result) {
  return std::visit([](const auto& r) { return to_json(r); }, result);
}

// ---- text ------------------------------------------------------------------

std::string format_score(double score, bool integral) {
  char buf[64];
  if (integral) {
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(score));
  } else {
    std::snprintf(buf, sizeof buf, "%.4f", score);
  }
  return buf;
}

void render(std::ostream& out, const TextTable& table) {
  std::vector<std::size_t> widths(table.headers.size(), 0);
  for (std::size_t c = 0; c < table.headers.size(); ++c) widths[c] = table.headers[c].size();
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < widths.size(); ++c) {
      const std::string cell = c < cells.size() ? cells[c] : "";
      const std::string pad(widths[c] - cell.size(), ' ');
      const bool right = c < table.right_align.size() && table.right_align[c];
      if (c > 0) line += "  ";
      line += right ? pad + cell : cell + pad;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  emit(table.headers);
  std::vector<std::string> rule;
  for (const auto w : widths) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& row : table.rows) emit(row);
}

namespace {

void render_ranked(std::ostream& out, const RankedList& list) {
  TextTable t{{"rank", "key", list.counts ? "count" : "score"}, {}, {true, false, true}};
  std::size_t rank = 0;
  for (const auto& e : list.entries) {
    t.rows.push_back({std::to_string(++rank), e.key, format_score(e.score, list.counts)});
  }
  render(out, t);
  out << "basis: " << format_score(list.basis, list.counts) << '\n';
}

void render_trend(std::ostream& out, const TrendSeries& series) {
  TextTable t{{"bucket_start", "count"}, {}, {false, true}};
  std::uint64_t total = 0;
  for (const auto& b : series.buckets) {
    t.rows.push_back({format_timestamp(b.bucket_start), std::to_string(b.count)});
    total += b.count;
  }
  render(out, t);
  out << "bucket width: " << series.bucket_width_seconds << "s, total: " << total << '\n';
}

void render_discipline(std::ostream& out, const std::vector<DisciplineEntry>& entries) {
  TextTable t{{"event_ref", "annotation"}, {}, {}};
  for (const auto& e : entries) {
    for (const auto& body : e.bodies) t.rows.push_back({e.event_ref, body.empty() ? "(no comment)" : body});
  }
  render(out, t);
}

void render_profile(std::ostream& out, const InterestProfile& p) {
  out << "interest profile of " << p.annotator_ref << '\n';
  TextTable t{{"kind", "value", "weight"}, {}, {false, false, true}};
  for (const auto& [k, w] : p.keyword_weights) t.rows.push_back({"keyword", k, std::to_string(w)});
  for (const auto& [k, w] : p.format_weights) t.rows.push_back({"format", k, std::to_string(w)});
  render(out, t);
}

}  // namespace

void render_text(std::ostream& out, const ReportResult& result) {
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RankedList>) render_ranked(out, r);
        else if constexpr (std::is_same_v<T, TrendSeries>) render_trend(out, r);
        else if constexpr (std::is_same_v<T, InterestProfile>) render_profile(out, r);
        else render_discipline(out, r);
      },
      result);
}

void render_text(std::ostream& out, const std::vector<ConsultationEvent>& events) {
  TextTable t{{"event_ref", "session_start", "user", "doc", "duration", "approach", "reason", "annotations"},
              {},
              {false, false, false, false, true, false, false, true}};
  for (const auto& e : events) {
    t.rows.push_back({e.event_ref, format_timestamp(e.session_start), e.annotator_ref, e.doc_ref,
                      e.duration_seconds ? std::to_string(*e.duration_seconds) : "-",
                      std::string(to_string(e.approach)), to_string(e.reason),
                      std::to_string(e.annotations.size())});
  }
  render(out, t);
}

void render_text(std::ostream& out, const std::vector<Recommendation>& recs) {
  TextTable t{{"rank", "doc_ref", "score", "because of"}, {}, {true, false, true, false}};
  std::size_t rank = 0;
  for (const auto& r : recs) {
    std::string why;
    for (const auto& n : r.contributing_neighbors) {
      if (!why.empty()) why += ", ";
      why += n.annotator_ref + " (" + format_score(n.similarity, false) + ")";
    }
    for (const auto& k : r.matched_keywords) {
      if (!why.empty()) why += ", ";
      why += "keyword " + k;
    }
    t.rows.push_back({std::to_string(++rank), r.doc_ref, format_score(r.score, false), why});
  }
  render(out, t);
}

void render_text(std::ostream& out, const StoreStats& s) {
  out << "users:       " << s.n_users << '\n'
      << "documents:   " << s.n_docs << '\n'
      << "events:      " << s.n_events << '\n'
      << "annotations: " << s.n_annotations << '\n';
  if (s.time_span) {
    out << "time span:   " << format_timestamp(s.time_span->first) << " .. "
        << format_timestamp(s.time_span->last) << '\n';
  }
}

}  // namespace amiedot
