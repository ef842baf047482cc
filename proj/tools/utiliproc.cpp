// utiliproc: load a .upm model, validate it, and run its queries.
//
// Exit codes: 0 success / affirmative verdicts, 1 model or query failure,
// 2 environment and I/O failure.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "utiliproc/utiliproc.hpp"

namespace {

using namespace utiliproc;

struct GlobalFlags {
  std::string path;
  std::string query;  // empty: all queries of the subcommand's kind
  int depth = 8;
  std::string universe;
  std::string mode;
  std::string tolerance = "0";
  int bisim_depth = 4;
  unsigned long long seed = 1;
  int jobs = 1;
  bool json = false;
  bool no_timing = false;
};

int read_source(const std::string& path, std::string& out) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    out = ss.str();
    return 0;
  }
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return 2;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return 0;
}

int load(const GlobalFlags& g, ParseResult& parsed) {
  std::string src;
  if (int rc = read_source(g.path, src); rc != 0) return rc;
  parsed = parse_model(src);
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics.items) std::cerr << d.str() << "\n";
    return 1;
  }
  return 0;
}

RunOptions options(const GlobalFlags& g) {
  RunOptions opt;
  opt.depth = g.depth;
  opt.universe = g.universe;
  opt.mode = g.mode;
  opt.tolerance = rat_from_decimal(g.tolerance);
  opt.bisim_depth = g.bisim_depth;
  opt.include_timing = !g.no_timing;
  return opt;
}

int run_kind(const GlobalFlags& g, QueryKind kind) {
  ParseResult parsed;
  if (int rc = load(g, parsed); rc != 0) return rc;
  const Model& m = parsed.model;

  std::vector<const Query*> todo;
  if (!g.query.empty()) {
    const Query* q = m.find_query(g.query);
    if (!q) {
      std::cerr << "error: no query named '" << g.query << "'\n";
      return 1;
    }
    if (q->kind != kind) {
      std::cerr << "error: query '" << g.query << "' has kind " << query_kind_str(q->kind)
                << "\n";
      return 1;
    }
    todo.push_back(q);
  } else {
    for (const auto& q : m.queries)
      if (q.kind == kind) todo.push_back(&q);
    if (todo.empty()) {
      std::cerr << "error: model has no " << query_kind_str(kind) << " queries\n";
      return 1;
    }
  }

  Runner runner(m, options(g));
  std::vector<RunResult> results(todo.size());
  try {
    if (g.jobs > 1) {
      std::vector<std::future<RunResult>> futs;
      for (const Query* q : todo)
        futs.push_back(std::async(std::launch::async, [&runner, q] { return runner.run(*q); }));
      for (std::size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
    } else {
      for (std::size_t i = 0; i < todo.size(); ++i) results[i] = runner.run(*todo[i]);
    }
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  bool all_ok = true;
  if (g.json) {
    Json arr = Json::array();
    for (const auto& r : results) arr.push_back(runner.to_json(r));
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& r : results) std::cout << human_render(r, !g.no_timing);
  }
  for (const auto& r : results) all_ok &= r.ok;
  return all_ok ? 0 : 1;
}

int cmd_validate(const GlobalFlags& g) {
  std::string src;
  if (int rc = read_source(g.path, src); rc != 0) return rc;
  ParseResult parsed = parse_model(src);
  Diagnostics all = parsed.diagnostics;
  if (!parsed.diagnostics.has_errors()) {
    ValidationOptions vo;
    vo.tolerance = rat_from_decimal(g.tolerance);
    Diagnostics sem = validate_model(parsed.model, vo);
    for (auto& d : sem.items) all.items.push_back(std::move(d));
    all.sort();
  }
  if (g.json) {
    Json arr = Json::array();
    for (const auto& d : all.items)
      arr.push_back(Json{{"severity", d.severity == Severity::Error ? "error" : "warning"},
                         {"line", d.line},
                         {"col", d.col},
                         {"code", d.code},
                         {"message", d.message}});
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& d : all.items) std::cout << d.str() << "\n";
    if (all.items.empty()) std::cout << "ok: no diagnostics\n";
  }
  return all.has_errors() ? 1 : 0;
}

int cmd_laws(const GlobalFlags& g) {
  ParseResult parsed;
  if (int rc = load(g, parsed); rc != 0) return rc;
  const Model& m = parsed.model;
  try {
    ContextUniverse uni = resolve_universe(m, g.universe);
    EquivalenceChecker chk(m, uni, g.depth);
    std::vector<LawResult> laws = check_laws(chk, g.bisim_depth);
    bool all = true;
    Json arr = Json::array();
    for (const auto& l : laws) {
      all &= l.holds;
      if (g.json) {
        Json fj = Json::array();
        for (const auto& f : l.failures)
          fj.push_back(Json{{"left", f.left}, {"right", f.right}});
        arr.push_back(Json{{"law", l.number},
                           {"name", l.name},
                           {"instances", l.checked},
                           {"holds", l.holds},
                           {"failures", fj}});
      } else {
        std::cout << "law " << l.number << " (" << l.name << "): "
                  << (l.holds ? "holds" : "FAILS") << " over " << l.checked << " instances\n";
        for (const auto& f : l.failures)
          std::cout << "  violating instance: " << f.left << "  vs  " << f.right << "\n";
      }
    }
    if (g.json) std::cout << arr.dump(2) << "\n";
    return all ? 0 : 1;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"utility-carrying resource-process calculus tool"};
  app.require_subcommand(1);

  GlobalFlags g;
  if (const char* env = std::getenv("UTILIPROC_DEPTH")) g.depth = std::atoi(env);

  auto add_common = [&](CLI::App* cmd, bool with_query) {
    cmd->add_option("model", g.path, "model file (.upm), or - for stdin")->required();
    if (with_query) cmd->add_option("query", g.query, "query name (default: all of this kind)");
    cmd->add_option("--depth", g.depth, "constant unfolding bound");
    cmd->add_option("--universe", g.universe, "universe name override ('auto' generates one)");
    cmd->add_option("--mode", g.mode, "satisfaction mode override: global|local");
    cmd->add_option("--tolerance", g.tolerance, "absolute comparison tolerance (default exact)");
    cmd->add_option("--bisim-depth", g.bisim_depth, "bisimulation depth bound");
    cmd->add_option("--seed", g.seed, "random seed for sampled suites");
    cmd->add_option("--jobs", g.jobs, "run independent queries in parallel");
    cmd->add_flag("--json", g.json, "structured output");
    cmd->add_flag("--no-timing", g.no_timing, "omit timing fields");
  };

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a model");
  add_common(validate, false);
  CLI::App* check = app.add_subcommand("check", "run satisfaction queries");
  add_common(check, true);
  CLI::App* trace = app.add_subcommand("trace", "replay derivation traces");
  add_common(trace, true);
  CLI::App* bisim = app.add_subcommand("bisim", "run bisimilarity queries");
  add_common(bisim, true);
  CLI::App* trust = app.add_subcommand("trustdomain", "run trust-domain queries");
  add_common(trust, true);
  CLI::App* laws = app.add_subcommand("laws", "check the eight algebraic laws over a universe");
  add_common(laws, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return cmd_validate(g);
    if (app.got_subcommand(check)) return run_kind(g, QueryKind::Check);
    if (app.got_subcommand(trace)) return run_kind(g, QueryKind::Trace);
    if (app.got_subcommand(bisim)) return run_kind(g, QueryKind::Bisim);
    if (app.got_subcommand(trust)) return run_kind(g, QueryKind::TrustDomain);
    if (app.got_subcommand(laws)) return cmd_laws(g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
