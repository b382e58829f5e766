// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <sys/wait.h>

#include <httplib.h>

#include "amiedot/analytics.hpp"
#include "amiedot/api.hpp"
#include "amiedot/codec.hpp"
#include "amiedot/recommend.hpp"
#include "amiedot/report.hpp"
#include "amiedot/store.hpp"
#include "amiedot/workload.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace amiedot;
using namespace amiedot::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Collects the first few failure messages of a criterion.
class Checker {
 public:
  void expect(bool condition, const std::string& what) {
    if (condition) return;
    ++failures_;
    if (failures_ <= 5) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  Outcome outcome(std::string summary) const {
    if (ok()) return {true, std::move(summary)};
    return {false, std::to_string(failures_) + " failure(s): " + messages_};
  }

 private:
  std::size_t failures_ = 0;
  std::string messages_;
};

std::vector<std::string> user_refs(const Workload& w) {
  std::vector<std::string> out;
  for (const auto& u : w.users) out.push_back(u.annotator_ref);
  return out;
}

std::vector<std::string> doc_refs(const Workload& w) {
  std::vector<std::string> out;
  for (const auto& d : w.documents) out.push_back(d.doc_ref);
  return out;
}

/// One selector per shape, fixed axes drawn from the workload.
std::vector<QuerySelector> selectors_for_all_shapes(Gen& gen, const Workload& w, const WorkloadSpec& spec) {
  const auto users = user_refs(w);
  const auto docs = doc_refs(w);
  std::vector<QuerySelector> out;
  for (int mask = 0; mask < 8; ++mask) {
    QuerySelector s;
    const auto& e = w.events[static_cast<std::size_t>(gen.range(0, static_cast<std::int64_t>(w.events.size()) - 1))];
    if (mask & 4) s.user = gen.coin(0.7) ? e.annotator_ref : users[gen.range(0, users.size() - 1)];
    if (mask & 2) s.doc = gen.coin(0.7) ? e.doc_ref : docs[gen.range(0, docs.size() - 1)];
    if (mask & 1) {
      if (gen.coin()) {
        s.time = TimeConstraint::at(e.session_start);
      } else {
        const auto a = gen.range(spec.span_start.seconds, spec.span_end.seconds);
        const auto b = gen.range(spec.span_start.seconds, spec.span_end.seconds);
        s.time = TimeConstraint::range(Timestamp{std::min(a, b)}, Timestamp{std::max(a, b) + 1});
      }
    }
    out.push_back(s);
  }
  return out;
}

using Pairs = std::vector<std::pair<std::string, std::uint64_t>>;

Pairs as_pairs(const RankedList& list) {
  Pairs out;
  for (const auto& e : list.entries) out.emplace_back(e.key, static_cast<std::uint64_t>(e.score));
  return out;
}

// 1 ------------------------------------------------------------------------

Outcome shape_completeness() {
  struct Row {
    bool u, d, t;
    const char* representation;
  };
  // Fixed-parameter columns and the Representation column of the tracking table.
  const Row table[] = {
      {false, false, false, "{dUdDdT}"}, {false, false, true, "T{dUdD}"}, {false, true, false, "D{dUdT}"},
      {false, true, true, "DT{dU}"},     {true, false, false, "U{dDdT}"}, {true, false, true, "UT{dD}"},
      {true, true, false, "UD{dT}"},     {true, true, true, "UDT"},
  };
  Checker check;
  std::map<std::string, int> seen;
  for (const auto& time : {TimeConstraint::at(Timestamp{0}), TimeConstraint::range(Timestamp{0}, Timestamp{1})}) {
    seen.clear();
    for (const auto& row : table) {
      QuerySelector s;
      if (row.u) s.user = "u";
      if (row.d) s.doc = "d";
      if (row.t) s.time = time;
      const auto shape = classify_selector(s);
      check.expect(shape.code == row.representation,
                   "got " + std::string(shape.code) + " for " + row.representation);
      ++seen[std::string(shape.code)];
    }
    check.expect(seen.size() == 8, "codes not distinct");
    for (const auto& [code, n] : seen) check.expect(n == 1, code + " seen " + std::to_string(n) + " times");
  }
  check.expect(all_shapes().size() == 8, "all_shapes size");
  for (std::size_t i = 0; i < 8 && i < all_shapes().size(); ++i) {
    check.expect(all_shapes()[i].code == table[i].representation, "all_shapes order");
  }
  return check.outcome("8 combinations, 8 distinct codes");
}

// 2 ------------------------------------------------------------------------

Outcome query_oracle() {
  Gen gen(20240101);
  Checker check;
  std::size_t events_total = 0, queries = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto spec = gen.workload_spec(10000, 100, 200);
    const auto w = generate(spec);
    events_total += w.events.size();
    Store store;
    load_workload(w, store, false);
    auto selectors = selectors_for_all_shapes(gen, w, spec);
    selectors.push_back(gen.selector(user_refs(w), doc_refs(w), w.events, spec.span_start.seconds,
                                     spec.span_end.seconds));
    for (const auto& sel : selectors) {
      ++queries;
      const auto got = store.query(sel);
      const auto want = oracle::scan(w.events, oracle::from_selector(sel));
      check.expect(got == want, "trial " + std::to_string(trial) + " shape " +
                                    std::string(classify_selector(sel).code) + ": " +
                                    std::to_string(got.size()) + " vs " + std::to_string(want.size()));
    }
  }
  return check.outcome("200 trials, " + std::to_string(events_total) + " events, " + std::to_string(queries) +
                       " queries");
}

// 3 ------------------------------------------------------------------------

Outcome durability() {
  TempDir dir;
  const auto path = dir.file("log.jsonl");
  WorkloadSpec spec;
  spec.seed = 3;
  spec.n_users = 50;
  spec.n_docs = 80;
  spec.n_events = 5000;
  const auto w = generate(spec);
  Gen gen(33);
  std::vector<QuerySelector> selectors{QuerySelector{}};
  for (int round = 0; round < 10; ++round) {
    for (const auto& s : selectors_for_all_shapes(gen, w, spec)) selectors.push_back(s);
  }

  Checker check;
  std::vector<std::vector<ConsultationEvent>> before;
  {
    Store store(path);
    const auto report = load_workload(w, store, false);
    check.expect(report.accepted == 5000, "accepted " + std::to_string(report.accepted));
    for (const auto& s : selectors) before.push_back(store.query(s));
  }
  Store reopened(path);
  check.expect(reopened.open_warnings().empty(), "warnings on reopen");
  std::set<std::string_view> shapes;
  for (std::size_t i = 0; i < selectors.size(); ++i) {
    shapes.insert(classify_selector(selectors[i]).code);
    check.expect(reopened.query(selectors[i]) == before[i],
                 "selector " + std::to_string(i) + " differs after reopen");
  }
  check.expect(shapes.size() == 8, "not all shapes covered");
  check.expect(before[0].size() == 5000, "full query size");
  return check.outcome("5000 events, " + std::to_string(selectors.size()) + " queries over 8 shapes");
}

// 4 ------------------------------------------------------------------------

Outcome strict_lending() {
  Checker check;
  std::size_t planted_total = 0;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    WorkloadSpec spec;
    spec.seed = seed;
    spec.n_users = 20;
    spec.n_docs = 15;
    spec.n_events = 1500;
    spec.span_end = Timestamp{spec.span_start.seconds + 30 * 86400};  // dense: many near-collisions
    auto w = generate(spec);
    const auto planted = plant_overlaps(w, 40, seed * 7);
    planted_total += planted.planted_refs.size();
    w.events = planted.events;
    Store store;
    const auto report = load_workload(w, store, true);
    check.expect(report.rejected == planted.planted_refs.size(),
                 "seed " + std::to_string(seed) + ": rejected " + std::to_string(report.rejected) + " of " +
                     std::to_string(planted.planted_refs.size()) + " planted");
    for (const auto& r : report.rejections) check.expect(r.code == ErrorCode::overlap, "non-overlap rejection");
    check.expect(!oracle::any_lending_conflict(store.query({})), "conflict survived strict replay");
  }
  return check.outcome("3 batches, " + std::to_string(planted_total) + " planted, all rejected, zero conflicts");
}

// 5 ------------------------------------------------------------------------

Outcome similarity_axioms() {
  Gen gen(555);
  Checker check;
  std::size_t pairs = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto spec = gen.workload_spec(3000, 100, 60);
    const auto w = generate(spec);
    Store store;
    load_workload(w, store, false);
    const auto users = user_refs(w);
    std::map<std::string, std::set<std::string>> sets;
    for (const auto& u : users) sets[u] = oracle::docs_of(w.events, u);
    for (const auto& a : users) {
      for (const auto& b : users) {
        ++pairs;
        const double s = user_similarity(store, a, b);
        const auto exact = oracle::jaccard(sets[a], sets[b]);
        check.expect(s >= 0.0 && s <= 1.0, "out of range");
        check.expect(s == user_similarity(store, b, a), "asymmetric " + a + "," + b);
        check.expect(s == exact.value(), "mismatch " + a + "," + b);
        if (a == b && !sets[a].empty()) check.expect(s == 1.0, "self similarity of " + a);
        std::vector<std::string> common;
        std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                              std::back_inserter(common));
        if (common.empty()) check.expect(s == 0.0, "disjoint but nonzero " + a + "," + b);
      }
    }
  }
  return check.outcome(std::to_string(pairs) + " ordered pairs, exact match");
}

// 6 ------------------------------------------------------------------------

Outcome recommender_brute_force() {
  Gen gen(666);
  Checker check;
  std::size_t lists = 0, items = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const auto n_users = gen.range(1, 5), n_docs = gen.range(1, 8);
    std::vector<std::string> users, docs;
    for (int i = 0; i < n_users; ++i) users.push_back("u" + std::to_string(i));
    for (int i = 0; i < n_docs; ++i) docs.push_back("d" + std::to_string(i));
    Store store;
    seed_registry(store, users, docs);
    for (int i = 0, n = static_cast<int>(gen.range(0, 30)); i < n; ++i) {
      store.ingest_event(make_event("e" + std::to_string(i), users[gen.range(0, n_users - 1)],
                                    docs[gen.range(0, n_docs - 1)], i),
                         false);
    }
    const auto log = store.query({});
    for (const auto& u : users) {
      const auto top = static_cast<std::size_t>(gen.range(1, 8));
      const auto got = recommend(store, u, top);
      const auto want = oracle::recommend(log, users, docs, u, top);
      const auto mine = oracle::docs_of(log, u);
      ++lists;
      const auto where = "instance " + std::to_string(instance) + " user " + u;
      check.expect(got.size() == want.size(), where + ": length");
      for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
        ++items;
        check.expect(got[i].doc_ref == want[i].doc, where + ": order");
        check.expect(std::abs(got[i].score - want[i].score.value()) <= 1e-12, where + ": score");
        check.expect(!mine.count(got[i].doc_ref), where + ": consulted document returned");
        std::set<std::string> neighbors;
        for (const auto& n : got[i].contributing_neighbors) {
          neighbors.insert(n.annotator_ref);
          check.expect(n.similarity == oracle::jaccard(mine, oracle::docs_of(log, n.annotator_ref)).value(),
                       where + ": neighbor similarity");
        }
        check.expect(neighbors == want[i].neighbors, where + ": neighbors");
      }
    }
  }
  return check.outcome("100 instances, " + std::to_string(lists) + " lists, " + std::to_string(items) +
                       " recommendations");
}

// 7 ------------------------------------------------------------------------

Outcome community_recovery() {
  const WorkloadSpec spec;  // the defaults: seed 42, 40 users, 2 communities, 2000 events
  const auto w = generate(spec);
  Store store;
  load_workload(w, store, false);
  std::map<std::string, std::size_t> doc_index;
  for (std::size_t i = 0; i < w.documents.size(); ++i) doc_index[w.documents[i].doc_ref] = i;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < w.users.size(); ++i) {
    const auto recs = recommend(store, w.users[i].annotator_ref, 1);
    if (!recs.empty() && w.doc_community[doc_index[recs[0].doc_ref]] == w.user_community[i]) ++hits;
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(w.users.size());
  std::ostringstream detail;
  detail << hits << "/" << w.users.size() << " users (" << std::fixed << std::setprecision(1) << rate * 100
         << "%, bar 70%)";
  return {rate >= 0.70, detail.str()};
}

// 8 ------------------------------------------------------------------------

Outcome analytics_oracle() {
  Gen gen(888);
  Checker check;
  std::size_t bucketed = 0;
  for (int fixture = 0; fixture < 50; ++fixture) {
    auto spec = gen.workload_spec(2000, 30, 40);
    const auto w = generate(spec);
    Store store;
    load_workload(w, store, false);
    const auto where = "fixture " + std::to_string(fixture);

    TimeConstraint window;
    if (gen.coin(0.7)) {
      const auto a = gen.range(spec.span_start.seconds, spec.span_end.seconds);
      const auto b = gen.range(spec.span_start.seconds, spec.span_end.seconds);
      window = TimeConstraint::range(Timestamp{std::min(a, b)}, Timestamp{std::max(a, b) + 1});
    }
    auto sel = gen.selector(user_refs(w), doc_refs(w), w.events, spec.span_start.seconds, spec.span_end.seconds);
    QuerySelector window_only;
    window_only.time = window;
    const auto in_window = oracle::scan(w.events, oracle::from_selector(window_only));
    const auto in_sel = oracle::scan(w.events, oracle::from_selector(sel));

    std::map<std::string, const UserRecord*> users;
    for (const auto& u : w.users) users[u.annotator_ref] = &u;
    oracle::Tally docs, activity, reasons, objectives;
    std::map<GroupBy, oracle::Tally> groups;
    for (const auto& e : in_window) {
      ++docs[e.doc_ref];
      ++activity[e.annotator_ref];
      const auto& u = *users[e.annotator_ref];
      ++groups[GroupBy::social_class][u.social_class.value_or("unknown")];
      ++groups[GroupBy::region][u.region.value_or("unknown")];
      ++groups[GroupBy::age_group][std::string(to_string(u.age_group))];
      ++groups[GroupBy::area_of_activity][to_string(u.area_of_activity)];
    }
    for (const auto& e : in_sel) {
      ++reasons[to_string(e.reason)];
      for (const auto& a : e.annotations) ++objectives[std::string(to_string(a.objective))];
    }
    const auto top = static_cast<std::size_t>(gen.range(1, 50));
    check.expect(as_pairs(most_consulted_documents(store, window, top)) == oracle::ranked(docs, top),
                 where + ": most_consulted_documents");
    check.expect(as_pairs(user_activity(store, window)) == oracle::ranked(activity, SIZE_MAX),
                 where + ": user_activity");
    check.expect(as_pairs(reason_frequencies(store, sel)) == oracle::ranked(reasons, SIZE_MAX),
                 where + ": reason_frequencies");
    check.expect(as_pairs(annotation_objective_frequencies(store, sel)) == oracle::ranked(objectives, SIZE_MAX),
                 where + ": annotation_objective_frequencies");
    for (auto by : {GroupBy::social_class, GroupBy::region, GroupBy::age_group, GroupBy::area_of_activity}) {
      check.expect(as_pairs(group_frequency(store, by, window)) == oracle::ranked(groups[by], SIZE_MAX),
                   where + ": group_frequency " + std::string(to_string(by)));
    }

    for (int k = 0; k < 3; ++k) {
      const auto& d = w.documents[gen.range(0, w.documents.size() - 1)].doc_ref;
      const auto width = gen.coin() ? gen.range(1, 3600) * 60 : gen.range(86400, 86400 * 60);
      std::optional<std::string> user;
      if (gen.coin(0.3)) user = w.users[gen.range(0, w.users.size() - 1)].annotator_ref;
      QuerySelector trend_sel{user, d, window};
      std::vector<std::int64_t> times;
      for (const auto& e : oracle::scan(w.events, oracle::from_selector(trend_sel))) {
        times.push_back(e.session_start.seconds);
      }
      const auto series = document_trend(store, d, width, window, user);
      std::vector<std::pair<std::int64_t, std::uint64_t>> got;
      std::uint64_t sum = 0;
      for (const auto& b : series.buckets) {
        got.emplace_back(b.bucket_start.seconds, b.count);
        sum += b.count;
      }
      check.expect(got == oracle::buckets(times, width), where + ": document_trend buckets");
      check.expect(sum == times.size(), where + ": trend sum");
      bucketed += times.size();
    }
  }
  return check.outcome("50 fixtures, 6 aggregations, " + std::to_string(bucketed) + " events bucketed");
}

// 9 ------------------------------------------------------------------------

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

struct Process {
  int code = -1;
  std::string out;
};

Process run_tool(const std::string& log, const std::vector<std::string>& args) {
  std::string command = shell_quote(AMIEDOT_CLI_PATH) + " --json --log " + shell_quote(log);
  for (const auto& a : args) command += " " + shell_quote(a);
  command += " 2>/dev/null";
  Process p;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return p;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) p.out.append(buffer, n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

Outcome interface_conformance() {
  Checker check;
  TempDir dir;
  WorkloadSpec spec;
  spec.seed = 9;
  spec.n_users = 12;
  spec.n_docs = 16;
  spec.n_events = 400;
  const auto w = generate(spec);
  const auto fixture = dir.file("fixture.jsonl").string();
  {
    std::ofstream out(fixture, std::ios::binary);
    write_jsonl(out, w);
  }

  // Reference state built directly through the library.
  Store reference;
  std::string fixture_text;
  {
    std::ifstream in(fixture, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    fixture_text = s.str();
  }
  const auto reference_import = import_records(reference, fixture_text, std::nullopt, true);

  const std::string u = w.users[0].annotator_ref, d = w.documents[0].doc_ref;
  QuerySelector q_doc;
  q_doc.doc = d;
  QuerySelector q_user_range{u, std::nullopt,
                             TimeConstraint::range(*parse_timestamp("2024-02-01T00:00:00Z"),
                                                   *parse_timestamp("2024-05-01T00:00:00Z"))};

  struct Case {
    std::string label;
    std::vector<std::string> cli_args;
    std::string http_target;
    Json expected;
  };
  const std::vector<Case> cases{
      {"query all", {"query"}, "/query", query_json({}, reference.query({}))},
      {"query doc", {"query", "--doc", d}, "/query?doc=" + d, query_json(q_doc, reference.query(q_doc))},
      {"query user range",
       {"query", "--user", u, "--from", "2024-02-01T00:00:00Z", "--to", "2024-05-01T00:00:00Z"},
       "/query?user=" + u + "&from=2024-02-01T00:00:00Z&to=2024-05-01T00:00:00Z",
       query_json(q_user_range, reference.query(q_user_range))},
      {"most-consulted", {"report", "most-consulted", "--top", "5"}, "/reports/most-consulted?top=5",
       to_json(most_consulted_documents(reference, {}, 5))},
      {"reasons", {"report", "reasons"}, "/reports/reasons", to_json(reason_frequencies(reference, {}))},
      {"objectives", {"report", "objectives", "--user", u}, "/reports/objectives?user=" + u,
       to_json(annotation_objective_frequencies(reference, QuerySelector{u, std::nullopt, {}}))},
      {"activity", {"report", "activity"}, "/reports/activity", to_json(user_activity(reference, {}))},
      {"groups", {"report", "groups", "--by", "social_class"}, "/reports/groups?by=social_class",
       to_json(group_frequency(reference, GroupBy::social_class, {}))},
      {"trend", {"report", "trend", "--doc", d, "--bucket", "604800"}, "/reports/trend?doc=" + d + "&bucket=604800",
       to_json(document_trend(reference, d, 604800, {}))},
      {"keywords", {"report", "keywords", "--doc", d, "--top", "5"}, "/reports/keywords?doc=" + d + "&top=5",
       to_json(suggest_keywords(reference, d, 5))},
      {"recommend", {"recommend", "--user", u, "--top", "5", "--mode", "collaborative"},
       "/recommendations/" + u + "?top=5&mode=collaborative",
       recommendations_json(u, recommend(reference, u, 5))},
      {"stats", {"stats"}, "/stats", to_json(reference.stats())},
  };

  // CLI: a fresh log through the real binary.
  const auto cli_log = dir.file("cli.jsonl").string();
  const auto imported = run_tool(cli_log, {"--strict", "import", fixture});
  check.expect(imported.code == 0, "cli import exit " + std::to_string(imported.code));
  check.expect(imported.out == to_json(reference_import).dump() + "\n", "cli import report");
  for (const auto& c : cases) {
    const auto r = run_tool(cli_log, c.cli_args);
    check.expect(r.code == 0, "cli " + c.label + " exit " + std::to_string(r.code));
    check.expect(r.out == c.expected.dump() + "\n", "cli " + c.label + " output");
  }
  auto r = run_tool(cli_log, {"recommend", "--user", "nobody"});
  check.expect(r.code == 1, "cli unknown user exit");
  check.expect(r.out.find("unknown-user") != std::string::npos, "cli unknown user body");
  check.expect(run_tool(cli_log, {"bogus-subcommand"}).code == 1, "cli unknown subcommand exit");
  check.expect(run_tool(cli_log, {"import", dir.file("missing.jsonl").string()}).code == 2, "cli io exit");

  // HTTP: a fresh store behind a locally started service, filled over POST.
  Store served(dir.file("http.jsonl"));
  const Api api(served, true);
  HttpService service(api);
  const int port = service.bind_any_port("127.0.0.1");
  if (port <= 0) return {false, "could not bind an ephemeral port"};
  std::thread worker([&] { service.run(); });
  service.wait_until_ready();
  {
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(30, 0);

    std::string users, documents, events;
    for (const auto& x : w.users) users += to_json(x).dump() + "\n";
    for (const auto& x : w.documents) documents += to_json(x).dump() + "\n";
    auto sorted = w.events;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return std::tie(a.session_start, a.event_ref) < std::tie(b.session_start, b.event_ref);
    });
    for (const auto& x : sorted) events += to_json(x).dump() + "\n";
    for (const auto& [path, body] : {std::pair{"/users", users}, std::pair{"/documents", documents},
                                     std::pair{"/events", events}}) {
      const auto res = client.Post(path, body, "application/x-ndjson");
      check.expect(res && res->status == 200, std::string("http batch ") + path);
    }
    auto health = client.Get("/health");
    check.expect(health && health->status == 200, "http health");

    for (const auto& c : cases) {
      const auto res = client.Get(c.http_target);
      check.expect(res && res->status == 200, "http " + c.label + " status");
      check.expect(res && res->body == c.expected.dump(), "http " + c.label + " body");
    }

    // Error paths.
    auto res = client.Post("/events", "{\"event_ref\": ", "application/json");
    check.expect(res && res->status == 400, "http malformed body -> 400");
    res = client.Get("/query?at=not-a-time");
    check.expect(res && res->status == 400, "http bad timestamp -> 400");
    res = client.Get("/recommendations/nobody");
    check.expect(res && res->status == 404, "http unknown user -> 404");
    check.expect(res && Json::parse(res->body).value("error", "") == "unknown-user", "http 404 body");
    res = client.Get("/query?doc=nothing");
    check.expect(res && res->status == 404, "http unknown doc -> 404");

    const auto planted = plant_overlaps(w, 1, 5);
    const auto& intruder = planted.events.back();
    res = client.Post("/events", to_json(intruder).dump(), "application/json");
    check.expect(res && res->status == 409, "http overlap -> 409");
    if (res && res->status == 409) {
      const auto body = Json::parse(res->body);
      check.expect(body.value("error", "") == "overlap-error", "http 409 error code");
      check.expect(body.contains("conflicting_event_ref") && body.contains("detail"), "http 409 body fields");
    }
    auto changed = w.users[0];
    changed.email = "changed@example.org";
    res = client.Post("/users", to_json(changed).dump(), "application/json");
    check.expect(res && res->status == 409, "http duplicate -> 409");
    check.expect(served.stats() == reference.stats(), "error paths mutated state");
  }
  service.stop();
  worker.join();
  return check.outcome(std::to_string(cases.size()) + " library-equivalent outputs via CLI and HTTP, 400/404/409 exercised");
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "shape completeness", 1.0, shape_completeness},
      {2, "query oracle equivalence", 30.0, query_oracle},
      {3, "durability round trip", 10.0, durability},
      {4, "strict lending soundness", 0.0, strict_lending},
      {5, "similarity axioms", 0.0, similarity_axioms},
      {6, "recommender brute force", 0.0, recommender_brute_force},
      {7, "planted community recovery", 10.0, community_recovery},
      {8, "analytics oracle equivalence", 0.0, analytics_oracle},
      {9, "interface conformance", 0.0, interface_conformance},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = outcome.ok;
    std::ostringstream line;
    line << std::fixed << std::setprecision(2);
    if (c.budget_seconds > 0 && seconds >= c.budget_seconds) {
      ok = false;
      outcome.detail += "; over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget";
    }
    line << (ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << outcome.detail << " (" << seconds
         << " s)";
    std::cout << line.str() << std::endl;
    if (!ok) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
