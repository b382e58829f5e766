#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "amiedot/analytics.hpp"
#include "amiedot/codec.hpp"
#include "amiedot/recommend.hpp"
#include "amiedot/store.hpp"
#include "amiedot/workload.hpp"

namespace amiedot {

// JSON shapes shared by the CLI (--json) and the HTTP service, so both emit
// byte-identical documents for the same store state.

Json to_json(const RankedList& list);
Json to_json(const TrendSeries& series);
Json to_json(const std::vector<DisciplineEntry>& entries);
Json to_json(const InterestProfile& profile);
Json to_json(const Recommendation& rec);
Json to_json(const StoreStats& stats);

/// {"shape": code, "events": [...]}
Json query_json(const QuerySelector& selector, const std::vector<ConsultationEvent>& events);
/// {"annotator_ref": user, "recommendations": [...]}
Json recommendations_json(const std::string& user, const std::vector<Recommendation>& recs);
/// {"error": code, "detail": message}, plus "conflicting_event_ref" for overlaps.
Json error_json(const Error& err);

/// Outcome of a multi-record import (CLI `import`, HTTP batch POST).
struct ImportReport {
  struct Line {
    std::size_t line = 0;
    std::string ref;
    Error error;
  };
  std::size_t created = 0;
  std::size_t unchanged = 0;
  std::vector<Line> rejections;

  std::size_t accepted() const { return created + unchanged; }
};

Json to_json(const ImportReport& report);
Json to_json(const ReplayReport& report);

/// Parsed key/value parameters (HTTP query string or CLI flags).
using Params = std::map<std::string, std::string>;

/// Builds a selector from user, doc, at, from, to. `at` excludes from/to; a
/// lone from or to is an open-ended range. Throws invalid-argument or
/// malformed-timestamp.
QuerySelector selector_from_params(const Params& params);
TimeConstraint time_from_params(const Params& params);
std::size_t top_from_params(const Params& params, std::size_t fallback = 10);

using ReportResult = std::variant<RankedList, TrendSeries, std::vector<DisciplineEntry>, InterestProfile>;

/// Names: most-consulted, reasons, objectives, activity, groups, trend,
/// keywords, related, discipline, profile.
const std::vector<std::string>& report_names();
ReportResult run_report(const Store& store, const std::string& name, const Params& params,
                        const Stopwords& stopwords);
Json to_json(const ReportResult& result);

// Aligned plain-text renderings for the CLI.
struct TextTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> right_align;  // per column; missing entries mean left
};
void render(std::ostream& out, const TextTable& table);
void render_text(std::ostream& out, const ReportResult& result);
void render_text(std::ostream& out, const std::vector<ConsultationEvent>& events);
void render_text(std::ostream& out, const std::vector<Recommendation>& recs);
void render_text(std::ostream& out, const StoreStats& stats);

std::string format_score(double score, bool integral);

}  // namespace amiedot
