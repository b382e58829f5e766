#include "amiedot/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "amiedot/api.hpp"
#include "amiedot/recommend.hpp"
#include "amiedot/report.hpp"
#include "amiedot/workload.hpp"

namespace amiedot {
namespace {

struct GlobalOptions {
  std::string log;
  std::string config;
  std::string stopwords;
  bool strict = false;
  bool json = false;
};

struct SelectorOptions {
  std::string user, doc, at, from, to;

  void attach(CLI::App* cmd) {
    cmd->add_option("--user", user, "Annotator ref (fixes the U axis)");
    cmd->add_option("--doc", doc, "Document ref (fixes the D axis)");
    cmd->add_option("--at", at, "Exact session start, RFC 3339");
    cmd->add_option("--from", from, "Range start (inclusive), RFC 3339");
    cmd->add_option("--to", to, "Range end (exclusive), RFC 3339");
  }

  Params params() const {
    Params p;
    if (!user.empty()) p["user"] = user;
    if (!doc.empty()) p["doc"] = doc;
    if (!at.empty()) p["at"] = at;
    if (!from.empty()) p["from"] = from;
    if (!to.empty()) p["to"] = to;
    return p;
  }
};

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Json read_json_object(std::istream& in, const char* what) {
  Json j = Json::parse(read_all(in), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::malformed_request, std::string("stdin: expected one JSON ") + what);
  }
  return j;
}

template <class E>
E enum_flag(const std::string& flag, const std::string& text) {
  const auto value = parse_enum<E>(text);
  if (!value) throw Error(ErrorCode::validation, flag + ": unknown value '" + text + "'");
  return *value;
}

template <class Kind>
OpenEnum<Kind> open_enum_flag(const std::string& flag, const std::string& text) {
  const auto value = parse_open_enum<Kind>(text);
  if (!value) throw Error(ErrorCode::validation, flag + ": unknown value '" + text + "'");
  return *value;
}

std::optional<std::string> opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

void print_json(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

void print_write(std::ostream& out, bool json, const char* what, const std::string& ref, WriteOutcome o) {
  const bool created = o == WriteOutcome::created;
  if (json) {
    print_json(out, Json{{"status", created ? "created" : "unchanged"}, {"ref", ref}});
  } else {
    out << what << ' ' << ref << ": " << (created ? "created" : "unchanged") << '\n';
  }
}

std::atomic<HttpService*> g_service{nullptr};

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Annotation-event store: log document consultations, run tracking queries, "
               "reports and recommendations.",
               "amiedot"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--log", g.log, "Log file (overrides AMIEDOT_LOG and the config file)");
  app.add_option("--config", g.config, "Flat key=value config file");
  app.add_option("--stopwords", g.stopwords, "Stopword list for keyword suggestions");
  app.add_flag("--strict", g.strict, "Reject overlapping use of a document by different users");
  app.add_flag("--json", g.json, "Machine-readable JSON output");

  // import
  auto* import_cmd = app.add_subcommand("import", "Import a JSON-Lines batch ('-' for stdin)");
  std::string import_path;
  import_cmd->add_option("file", import_path, "JSON-Lines file")->required();

  // add-user
  auto* add_user = app.add_subcommand("add-user", "Register a user (flags, or JSON on stdin)");
  std::string u_ref, u_first, u_last, u_email, u_postal, u_region, u_age, u_country, u_class, u_activity;
  add_user->add_option("--ref", u_ref, "Annotator ref; omit to read JSON from stdin");
  add_user->add_option("--first", u_first);
  add_user->add_option("--last", u_last);
  add_user->add_option("--email", u_email);
  add_user->add_option("--postal", u_postal);
  add_user->add_option("--region", u_region);
  add_user->add_option("--age-group", u_age, "under-18 | 18-25 | 26-40 | 41-60 | over-60");
  add_user->add_option("--country", u_country);
  add_user->add_option("--social-class", u_class);
  add_user->add_option("--activity", u_activity, "teaching | research | student | general-public | other:<label>");

  // add-doc
  auto* add_doc = app.add_subcommand("add-doc", "Register a document (flags, or JSON on stdin)");
  std::string d_ref, d_title, d_date, d_format = "pdf", d_abstract;
  std::vector<std::string> d_keywords, d_authors;
  add_doc->add_option("--ref", d_ref, "Document ref; omit to read JSON from stdin");
  add_doc->add_option("--title", d_title);
  add_doc->add_option("--keyword", d_keywords, "Repeatable");
  add_doc->add_option("--author", d_authors, "\"First Last\", repeatable");
  add_doc->add_option("--date", d_date, "Publication date YYYY-MM-DD");
  add_doc->add_option("--format", d_format, "pdf | word | html | text | other:<label>");
  add_doc->add_option("--abstract", d_abstract);

  // add-event
  auto* add_event = app.add_subcommand("add-event", "Record one consultation (flags, or JSON on stdin)");
  std::string e_ref, e_user, e_doc, e_at, e_approach = "new-annotation", e_reason, e_context;
  std::string e_objective, e_comment, e_ann_type, e_location, e_ann_ref = "a1";
  std::optional<std::int64_t> e_duration;
  add_event->add_option("--ref", e_ref, "Event ref (default derived from user, doc and time)");
  add_event->add_option("--user", e_user, "Annotator ref; omit to read JSON from stdin");
  add_event->add_option("--doc", e_doc);
  add_event->add_option("--at", e_at, "Session start, RFC 3339 (default now)");
  add_event->add_option("--duration", e_duration, "Seconds on the document");
  add_event->add_option("--approach", e_approach, "new-annotation | follow-up");
  add_event->add_option("--reason", e_reason, "Why the document was consulted");
  add_event->add_option("--context", e_context);
  add_event->add_option("--objective", e_objective, "Why the annotation was made");
  add_event->add_option("--comment", e_comment, "Free-form annotation text");
  add_event->add_option("--ann-type", e_ann_type, "Annotation type (default text)");
  add_event->add_option("--location", e_location, "Annotation location (default right-margin)");
  add_event->add_option("--ann-ref", e_ann_ref);

  // query
  auto* query_cmd = app.add_subcommand("query", "Tracking query over any of the eight selector shapes");
  SelectorOptions q;
  q.attach(query_cmd);

  // report
  auto* report_cmd = app.add_subcommand("report", "Analytics report");
  std::string r_name, r_by, r_keyword, r_top, r_bucket;
  SelectorOptions r;
  report_cmd->add_option("name", r_name, "most-consulted | reasons | objectives | activity | groups | trend | "
                                         "keywords | related | discipline | profile")
      ->required();
  r.attach(report_cmd);
  report_cmd->add_option("--top", r_top, "Maximum entries (default 10)");
  report_cmd->add_option("--by", r_by, "groups: social_class | area_of_activity | age_group | region");
  report_cmd->add_option("--bucket", r_bucket, "trend: bucket width in seconds (default 86400)");
  report_cmd->add_option("--keyword", r_keyword, "discipline: keyword to match");

  // recommend
  auto* rec_cmd = app.add_subcommand("recommend", "Recommend unconsulted documents for a user");
  std::string rec_user, rec_top, rec_mode = "auto";
  SelectorOptions rec_time;
  rec_cmd->add_option("--user", rec_user)->required();
  rec_cmd->add_option("--top", rec_top, "Maximum entries (default 10)");
  rec_cmd->add_option("--mode", rec_mode, "collaborative | interest | auto");
  rec_cmd->add_option("--at", rec_time.at);
  rec_cmd->add_option("--from", rec_time.from);
  rec_cmd->add_option("--to", rec_time.to);

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Store counts");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic JSON-Lines workload");
  WorkloadSpec spec;
  std::string g_from = format_timestamp(spec.span_start), g_to = format_timestamp(spec.span_end), g_out;
  std::size_t g_overlaps = 0;
  std::uint64_t g_overlap_seed = 7;
  gen_cmd->add_option("--seed", spec.seed);
  gen_cmd->add_option("--users", spec.n_users);
  gen_cmd->add_option("--docs", spec.n_docs);
  gen_cmd->add_option("--events", spec.n_events);
  gen_cmd->add_option("--communities", spec.n_communities);
  gen_cmd->add_option("--from", g_from, "Span start, RFC 3339");
  gen_cmd->add_option("--to", g_to, "Span end, RFC 3339");
  gen_cmd->add_option("--annotation-rate", spec.annotation_rate);
  gen_cmd->add_option("--overlaps", g_overlaps, "Append this many planted lending conflicts");
  gen_cmd->add_option("--overlap-seed", g_overlap_seed);
  gen_cmd->add_option("--out", g_out, "Output file (default stdout)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string s_bind;
  serve_cmd->add_option("--bind", s_bind, "host:port (overrides AMIEDOT_BIND)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    ServiceConfig config;
    if (!g.config.empty()) apply_config_file(config, g.config);
    apply_environment(config);
    if (!g.log.empty()) config.log_path = g.log;
    if (g.strict) config.strict_lending = true;
    if (!g.stopwords.empty()) config.stopword_path = g.stopwords;
    if (!s_bind.empty()) config.bind_address = s_bind;
    validate_config(config);

    const Stopwords stopwords =
        config.stopword_path ? Stopwords::load(*config.stopword_path) : Stopwords::builtin();

    if (gen_cmd->parsed()) {
      const auto from = parse_timestamp(g_from);
      const auto to = parse_timestamp(g_to);
      if (!from || !to) throw Error(ErrorCode::malformed_timestamp, "--from/--to must be RFC 3339");
      spec.span_start = *from;
      spec.span_end = *to;
      auto workload = generate(spec);
      if (g_overlaps > 0) workload.events = plant_overlaps(workload, g_overlaps, g_overlap_seed).events;
      if (g_out.empty()) {
        write_jsonl(out, workload);
      } else {
        std::ofstream file(g_out, std::ios::binary);
        if (!file) throw Error(ErrorCode::io, "cannot write '" + g_out + "'");
        write_jsonl(file, workload);
        if (!file.flush()) throw Error(ErrorCode::io, "write to '" + g_out + "' failed");
      }
      return 0;
    }

    StoreOptions store_options;
    store_options.on_warning = [&err](std::string_view message) { err << "warning: " << message << '\n'; };
    Store store(config.log_path, store_options);

    if (import_cmd->parsed()) {
      std::string text;
      if (import_path == "-") {
        text = read_all(in);
      } else {
        std::ifstream file(import_path, std::ios::binary);
        if (!file) throw Error(ErrorCode::io, "cannot read '" + import_path + "'");
        text = read_all(file);
      }
      const auto report = import_records(store, text, std::nullopt, config.strict_lending);
      if (g.json) {
        print_json(out, to_json(report));
      } else {
        out << "imported " << report.accepted() << " records (" << report.created << " created, "
            << report.unchanged << " unchanged), " << report.rejections.size() << " rejected\n";
        for (const auto& rej : report.rejections) {
          out << "  line " << rej.line << " (" << rej.ref << "): " << rej.error.what() << '\n';
        }
      }
      return report.rejections.empty() ? 0 : 1;
    }

    if (add_user->parsed()) {
      UserRecord u;
      if (u_ref.empty()) {
        u = user_from_json(read_json_object(in, "user object"));
      } else {
        if (u_age.empty()) throw Error(ErrorCode::validation, "--age-group is required");
        if (u_activity.empty()) throw Error(ErrorCode::validation, "--activity is required");
        u.annotator_ref = u_ref;
        u.first_name = u_first;
        u.last_name = u_last;
        u.email = u_email;
        u.postal_address = opt(u_postal);
        u.region = opt(u_region);
        u.age_group = enum_flag<AgeGroup>("--age-group", u_age);
        u.country = opt(u_country);
        u.social_class = opt(u_class);
        u.area_of_activity = open_enum_flag<ActivityKind>("--activity", u_activity);
      }
      print_write(out, g.json, "user", u.annotator_ref, store.register_user(u));
      return 0;
    }

    if (add_doc->parsed()) {
      DocumentRecord d;
      if (d_ref.empty()) {
        d = document_from_json(read_json_object(in, "document object"));
      } else {
        d.doc_ref = d_ref;
        d.title = d_title;
        for (const auto& kw : d_keywords) d.keywords.insert(normalize_keyword(kw));
        for (const auto& a : d_authors) {
          const auto space = a.rfind(' ');
          d.authors.push_back(space == std::string::npos ? PersonName{"", a}
                                                         : PersonName{a.substr(0, space), a.substr(space + 1)});
        }
        if (!d_date.empty()) {
          const auto date = parse_date(d_date);
          if (!date) throw Error(ErrorCode::validation, "--date must be YYYY-MM-DD");
          d.publication_date = *date;
        }
        d.format = open_enum_flag<FormatKind>("--format", d_format);
        d.abstract = opt(d_abstract);
      }
      print_write(out, g.json, "document", d.doc_ref, store.register_document(d));
      return 0;
    }

    if (add_event->parsed()) {
      ConsultationEvent e;
      if (e_user.empty()) {
        e = event_from_json(read_json_object(in, "event object"));
      } else {
        if (e_doc.empty()) throw Error(ErrorCode::validation, "--doc is required");
        if (e_reason.empty()) throw Error(ErrorCode::validation, "--reason is required");
        e.annotator_ref = e_user;
        e.doc_ref = e_doc;
        if (e_at.empty()) {
          e.session_start = now_utc();
        } else {
          const auto ts = parse_timestamp(e_at);
          if (!ts) throw Error(ErrorCode::malformed_timestamp, "--at must be RFC 3339");
          e.session_start = *ts;
        }
        e.event_ref = e_ref.empty() ? "e-" + e_user + "-" + e_doc + "-" + std::to_string(e.session_start.seconds)
                                    : e_ref;
        e.context_ref = opt(e_context);
        e.duration_seconds = e_duration;
        e.approach = enum_flag<Approach>("--approach", e_approach);
        e.reason = open_enum_flag<ReasonKind>("--reason", e_reason);
        if (!e_objective.empty() || !e_comment.empty() || !e_ann_type.empty() || !e_location.empty()) {
          AnnotationRecord a;
          a.annotation_ref = e_ann_ref;
          if (!e_ann_type.empty()) a.a_type = enum_flag<AnnotationType>("--ann-type", e_ann_type);
          if (!e_location.empty()) a.location = enum_flag<AnnotationLocation>("--location", e_location);
          if (!e_objective.empty()) a.objective = enum_flag<AnnotationObjective>("--objective", e_objective);
          a.body = e_comment;
          e.annotations.push_back(std::move(a));
        }
      }
      print_write(out, g.json, "event", e.event_ref, store.ingest_event(e, config.strict_lending));
      return 0;
    }

    if (query_cmd->parsed()) {
      const auto selector = selector_from_params(q.params());
      const auto events = store.query(selector);
      if (g.json) {
        print_json(out, query_json(selector, events));
      } else {
        out << "shape: " << classify_selector(selector).code << '\n';
        render_text(out, events);
        out << events.size() << " event(s)\n";
      }
      return 0;
    }

    if (report_cmd->parsed()) {
      auto params = r.params();
      if (!r_top.empty()) params["top"] = r_top;
      if (!r_by.empty()) params["by"] = r_by;
      if (!r_bucket.empty()) params["bucket"] = r_bucket;
      if (!r_keyword.empty()) params["keyword"] = r_keyword;
      const auto result = run_report(store, r_name, params, stopwords);
      if (g.json) print_json(out, to_json(result));
      else render_text(out, result);
      return 0;
    }

    if (rec_cmd->parsed()) {
      const auto mode = parse_recommend_mode(rec_mode);
      if (!mode) throw Error(ErrorCode::invalid_argument, "unknown mode '" + rec_mode + "'");
      auto params = rec_time.params();
      if (!rec_top.empty()) params["top"] = rec_top;
      const auto recs =
          recommend_with_mode(store, *mode, rec_user, top_from_params(params), time_from_params(params));
      if (g.json) print_json(out, recommendations_json(rec_user, recs));
      else render_text(out, recs);
      return 0;
    }

    if (stats_cmd->parsed()) {
      if (g.json) print_json(out, to_json(store.stats()));
      else render_text(out, store.stats());
      return 0;
    }

    if (serve_cmd->parsed()) {
      const auto bind = parse_bind_address(config.bind_address);
      Api api(store, config.strict_lending, stopwords);
      HttpService service(api);
      if (!service.bind(bind.host, bind.port)) {
        throw Error(ErrorCode::io, "cannot bind " + config.bind_address);
      }

      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      g_service = &service;
      std::thread waiter([&signals] {
        int received = 0;
        sigwait(&signals, &received);
        if (auto* s = g_service.load()) s->stop();
      });

      err << "listening on " << bind.host << ':' << bind.port << " (log " << config.log_path << ")\n";
      const bool ok = service.run();
      g_service = nullptr;
      pthread_kill(waiter.native_handle(), SIGTERM);
      waiter.join();
      pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
      return ok ? 0 : 2;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (g.json) print_json(out, error_json(e));
    return e.code() == ErrorCode::io || e.code() == ErrorCode::corrupt_log ? 2 : 1;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 1;
}

}  // namespace amiedot
