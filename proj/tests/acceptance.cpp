// Acceptance suite: one test case per criterion, each printing a [PASS] or
// [FAIL] line through the listener below. Run via ctest or directly.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "helpers.hpp"

using namespace utiliproc;
using testutil::act;
using testutil::res;

namespace {

class CriterionReporter : public Catch::EventListenerBase {
 public:
  using Catch::EventListenerBase::EventListenerBase;
  void testCaseEnded(const Catch::TestCaseStats& stats) override {
    const std::string& name = stats.testInfo->name;
    if (name.rfind("criterion", 0) != 0) return;
    std::printf("[%s] %s\n", stats.totals.assertions.allOk() ? "PASS" : "FAIL", name.c_str());
    std::fflush(stdout);
  }
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

const SumCheck* find_sum_check(const RuleTrace& t) {
  if (t.sum) return &*t.sum;
  for (const auto& p : t.premises)
    if (const SumCheck* s = find_sum_check(p)) return s;
  return nullptr;
}

RunResult run_query(const Model& m, const std::string& name) {
  RunOptions opt;
  opt.include_timing = false;
  Runner runner(m, opt);
  const Query* q = m.find_query(name);
  REQUIRE(q != nullptr);
  return runner.run(*q);
}

// Bisimilarity-preserving rewrites for pair sampling.
TermPtr law_rewrite(const TermPtr& t, std::mt19937_64& rng) {
  switch (rng() % 5) {
    case 0:
      return Term::product(t, Term::unit());
    case 1:
      return Term::product(Term::unit(), t);
    case 2:
      if (t->kind() == TermKind::Product) return Term::product(t->kids()[1], t->kids()[0]);
      return Term::product(Term::unit(), t);
    case 3:
      if (t->kind() == TermKind::Sum && t->kids().size() >= 2) {
        std::vector<TermPtr> kids = t->kids();
        std::swap(kids[0], kids[1]);
        return Term::sum(t->label(), std::move(kids));
      }
      return Term::sum(kNeutralUtility, {t, Term::zero()});
    default:
      return Term::sum(kNeutralUtility, {t, Term::zero()});
  }
}

}  // namespace

CATCH_REGISTER_LISTENER(CriterionReporter)

TEST_CASE("criterion 1: golden derivations from the shipped banker model") {
  Timer timer;
  Model m = testutil::load_model("banker.upm");

  RunResult client_run = run_query(m, "client-run");
  REQUIRE(client_run.ok);
  REQUIRE(client_run.payload["steps"].size() == 1);
  const Json& s4 = client_run.payload["steps"][0]["primary"];
  CHECK(s4["action"] == Json(std::vector<std::string>{"logIn", "present"}));
  CHECK(s4["source"]["resource"] ==
        Json(std::vector<std::string>{"Acnt", "USB", "r1", "r2"}));
  CHECK(s4["source"]["process"] == "Client * Banker");

  // the SUM side-condition values, exactly as tabulated: 0.7 beats 0.5
  bool found_banker_sum = false;
  std::function<void(const Json&)> walk4 = [&](const Json& rt) {
    if (rt.contains("utility") && rt["utility"] == "uB") {
      found_banker_sum = true;
      std::vector<std::string> values;
      for (const auto& bv : rt["branch_values"]) values.push_back(bv["value"]);
      CHECK(values == std::vector<std::string>{"0.7", "0.5"});
      CHECK(rt["chosen_branch"] == 0);
    }
    if (rt.contains("premises"))
      for (const auto& p : rt["premises"]) walk4(p);
  };
  walk4(client_run.payload["steps"][0]["primary"]["rule"]);
  CHECK(found_banker_sum);

  RunResult attacker_run = run_query(m, "attacker-run");
  REQUIRE(attacker_run.ok);
  REQUIRE(attacker_run.payload["steps"].size() == 1);
  const Json& s5 = attacker_run.payload["steps"][0]["primary"];
  CHECK(s5["action"] == Json(std::vector<std::string>{"idle_A", "idle_B"}));
  CHECK(s5["source"]["resource"] == Json(std::vector<std::string>{"USB", "r1", "r2"}));

  bool found_attacker_sum = false;
  std::function<void(const Json&)> walk5 = [&](const Json& rt) {
    if (rt.contains("utility") && rt["utility"] == "uB") {
      found_attacker_sum = true;
      std::vector<std::string> values;
      for (const auto& bv : rt["branch_values"]) values.push_back(bv["value"]);
      CHECK(values == std::vector<std::string>{"0.1", "0.2"});
      CHECK(rt["chosen_branch"] == 1);
    }
    if (rt.contains("premises"))
      for (const auto& p : rt["premises"]) walk5(p);
  };
  walk5(attacker_run.payload["steps"][0]["primary"]["rule"]);
  CHECK(found_attacker_sum);

  CHECK(timer.seconds() < 1.0);
}

TEST_CASE("criterion 2: satisfaction verdicts and their sensitivity to the table") {
  Timer timer;
  Model m = testutil::load_model("banker.upm");

  RunResult client = run_query(m, "client-present");
  CHECK(client.ok);
  CHECK(client.payload["verdict"] == true);

  RunResult attacker = run_query(m, "attacker-no-present");
  CHECK(attacker.ok);
  CHECK(attacker.payload["verdict"] == true);

  // flipping 0.7 and 0.5 flips the first verdict
  Model flipped = m;
  for (auto& u : flipped.utilities) {
    if (u.name != "uB") continue;
    for (auto& [k, v] : u.table) {
      if (v == Rat(7, 10)) v = Rat(1, 2);
      else if (v == Rat(1, 2)) v = Rat(7, 10);
    }
  }
  RunResult client_flipped = run_query(flipped, "client-present");
  CHECK(client_flipped.payload["verdict"] == false);

  CHECK(timer.seconds() < 1.0);
}

TEST_CASE("criterion 3: the eight algebraic laws at depth 4") {
  Timer timer;
  Model m = testutil::load_model("banker.upm");
  ContextUniverse uni = resolve_universe(m, "main");
  CHECK(uni.contexts.size() >= 30);

  // the shipped utility set passes the accordance obligations
  EquivalenceChecker chk(m, uni, 8);
  std::vector<const UtilitySpec*> us;
  for (const auto& u : m.utilities) us.push_back(&u);
  AccordanceReport acc = check_accordance(chk, us);
  for (const auto& [cond, what] : acc.violations) INFO("condition " << cond << ": " << what);
  CHECK(acc.ok());

  std::vector<LawResult> laws = check_laws(chk, 4);
  REQUIRE(laws.size() == 8);
  for (const auto& l : laws) {
    INFO("law " << l.number << " (" << l.name << ")");
    CHECK(l.holds);
  }

  // inject a utility violating condition 3: zero outranks everything
  Model patched = m;
  UtilitySpec bad;
  bad.name = "greedyZero";
  for (const auto& r : uni.resources) bad.table.emplace_back(Context{r, Term::zero()}, Rat(5));
  bad.sort_table();
  patched.utilities.push_back(bad);

  ContextUniverse uni2 = resolve_universe(patched, "main");
  EquivalenceChecker chk2(patched, uni2, 8);
  AccordanceReport acc2 = check_accordance(chk2, {patched.find_utility("greedyZero")});
  CHECK_FALSE(acc2.condition_ok(3));

  std::vector<LawResult> broken = check_laws(chk2, 4);
  const LawResult* law3 = nullptr;
  for (const auto& l : broken)
    if (l.number == 3) law3 = &l;
  REQUIRE(law3 != nullptr);
  CHECK_FALSE(law3->holds);
  REQUIRE_FALSE(law3->failures.empty());
  INFO("violating instance: " << law3->failures.front().left << " vs "
                              << law3->failures.front().right);
  CHECK_FALSE(law3->failures.front().left.empty());

  CHECK(timer.seconds() < 30.0);
}

TEST_CASE("criterion 4: congruence and substitution on 100 sampled related pairs") {
  Timer timer;
  Model m = testutil::load_model("banker.upm");
  ContextUniverse uni = resolve_universe(m, "main");
  EquivalenceChecker chk(m, uni, 8);

  unsigned long long seed = 1;
  if (const char* env = std::getenv("UTILIPROC_SEED")) seed = std::strtoull(env, nullptr, 10);
  std::mt19937_64 rng(seed);

  const std::vector<TermPtr>& pool = uni.terms;
  REQUIRE_FALSE(pool.empty());

  int counterexamples = 0;
  for (int i = 0; i < 100; ++i) {
    TermPtr e = pool[rng() % pool.size()];
    if (rng() % 2) e = Term::product(e, pool[rng() % pool.size()]);
    TermPtr f = law_rewrite(e, rng);
    if (!chk.bisim(e, f, 3).related) {
      ++counterexamples;
      continue;  // generator invariant broken; count loudly below
    }
    TermPtr g = pool[rng() % pool.size()];
    Action a = Action(m.actions[rng() % m.actions.size()].name);
    if (!chk.bisim(Term::prefix(a, e), Term::prefix(a, f), 3).related) ++counterexamples;
    if (!chk.bisim(Term::product(e, g), Term::product(f, g), 3).related) ++counterexamples;
    TermPtr shell = Term::product(Term::hole(), g);
    if (!chk.bisim(substitute(shell, e), substitute(shell, f), 3).related) ++counterexamples;
  }
  CHECK(counterexamples == 0);
  CHECK(timer.seconds() < 60.0);
}

TEST_CASE("criterion 5: logical equivalence of bisimilar pairs to modal depth 2") {
  Timer timer;
  Model m = testutil::load_model("banker.upm");
  ContextUniverse uni = resolve_universe(m, "main");
  EquivalenceChecker chk(m, uni, 8);
  CheckConfig cfg;
  Satisfaction sat(chk, cfg);

  // five templates, instantiated over action pairs, all of modal depth <= 2
  std::vector<FormulaPtr> formulas;
  std::vector<std::pair<Action, Action>> abs = {{act({"present"}), act({"idle_B"})},
                                                {act({"idle_B"}), act({"present"})},
                                                {act({"logIn"}), act({"present"})}};
  for (const auto& [a, b] : abs) {
    formulas.push_back(Formula::diamond(a, Formula::top()));
    formulas.push_back(Formula::box(a, Formula::bottom()));
    formulas.push_back(Formula::diamond(a, Formula::diamond(b, Formula::top())));
    formulas.push_back(Formula::box(a, Formula::diamond(b, Formula::top())));
    formulas.push_back(Formula::land(Formula::diamond(a, Formula::top()),
                                     Formula::lnot(Formula::diamond(b, Formula::top()))));
  }
  for (const auto& f : formulas) REQUIRE(modal_depth(f) <= 2);

  unsigned long long seed = 2;
  if (const char* env = std::getenv("UTILIPROC_SEED")) seed = std::strtoull(env, nullptr, 10);
  std::mt19937_64 rng(seed);

  std::vector<Context> surroundings = {
      empty_context(),
      Context{res({"Acnt", "r1"}), Term::product(Term::constant("Client"), Term::hole())},
      Context{res({"r1"}), Term::product(Term::constant("Attacker"), Term::hole())},
  };

  int checked_pairs = 0;
  int disagreements = 0;
  while (checked_pairs < 50) {
    const Context& base = uni.closed[rng() % uni.closed.size()];
    TermPtr rewritten = law_rewrite(base.process, rng);
    Context other{base.resource, rewritten};
    if (!chk.bisim_contexts(base, other, 3).related) continue;

    const Context& sur = surroundings[rng() % surroundings.size()];
    Context sur2 = sur;
    if (rng() % 2 && sur.open()) {
      sur2 = Context{sur.resource, Term::product(sur.process, Term::unit())};
      if (!chk.bisim(sur.process, sur2.process, 3).related) sur2 = sur;
    }
    ++checked_pairs;
    for (const auto& f : formulas) {
      bool v1 = sat.check(base, sur, f).holds;
      bool v2 = sat.check(other, sur2, f).holds;
      if (v1 != v2) {
        ++disagreements;
        UNSCOPED_INFO("disagree on " << formula_str(f) << " at " << base.str() << " vs "
                                     << other.str());
      }
    }
  }
  CHECK(checked_pairs == 50);
  CHECK(disagreements == 0);
  CHECK(timer.seconds() < 60.0);
}

TEST_CASE("criterion 6: the trust domain admits the client and excludes the attacker") {
  Timer timer;
  Model m = testutil::load_model("trustdomain.upm");

  RunResult main_run = run_query(m, "td-main");
  REQUIRE(main_run.payload["candidates"].size() == 2);
  const Json& client = main_run.payload["candidates"][0];
  const Json& attacker = main_run.payload["candidates"][1];
  CHECK(client["candidate"]["process"] == "[] * Lawyer * Client");
  CHECK(client["trusted"] == true);
  CHECK(client["witness_trace"] == Json::parse(R"([["shareL"]])"));
  CHECK(attacker["candidate"]["process"] == "[] * Lawyer * Attacker");
  CHECK(attacker["trusted"] == false);

  // monotone across the three shipped bounds: nested domains
  auto domain = [&](const char* q) {
    RunResult r = run_query(m, q);
    std::vector<std::string> out;
    for (const auto& c : r.payload["candidates"])
      if (c["trusted"] == true) out.push_back(c["candidate"]["process"]);
    return out;
  };
  std::vector<std::string> tight = domain("td-tight");
  std::vector<std::string> mid = domain("td-main");
  std::vector<std::string> loose = domain("td-loose");
  CHECK(tight.empty());
  CHECK(mid == std::vector<std::string>{"[] * Lawyer * Client"});
  CHECK(loose == std::vector<std::string>{"[] * Lawyer * Client"});
  for (const auto& t : tight) CHECK(std::find(mid.begin(), mid.end(), t) != mid.end());
  for (const auto& t : mid) CHECK(std::find(loose.begin(), loose.end(), t) != loose.end());

  CHECK(timer.seconds() < 10.0);
}

TEST_CASE("criterion 7: validator verdicts on shipped models and negative fixtures") {
  for (const char* name : {"banker.upm", "trustdomain.upm", "laws.upm"}) {
    INFO(name);
    ParseResult pr = parse_model(testutil::read_file(testutil::models_dir() + "/" + name));
    REQUIRE(pr.ok());
    Diagnostics d = validate_model(pr.model);
    for (const auto& i : d.items) INFO(i.str());
    CHECK_FALSE(d.has_errors());
  }

  struct Case {
    const char* file;
    const char* code;
  };
  for (const Case& c : {Case{"mu_split_overlap.upm", codes::kMuSplitOverlap},
                        Case{"mu_homomorphism.upm", codes::kMuHomomorphism},
                        Case{"unguarded.upm", codes::kUnguardedRecursion},
                        Case{"valuation.upm", codes::kValuationNotClosed},
                        Case{"accordance.upm", codes::kAccordanceC3}}) {
    INFO(c.file);
    ParseResult pr = parse_model(testutil::read_file(testutil::fixtures_dir() + "/" + std::string(c.file)));
    REQUIRE(pr.ok());
    Diagnostics d = validate_model(pr.model);
    REQUIRE_FALSE(d.items.empty());
    CHECK(d.has_code(c.code));
    for (const auto& item : d.items) CHECK(item.code == c.code);
  }
}

TEST_CASE("criterion 8: byte-identical structured output across runs") {
  std::string bin = UTILIPROC_BIN;
  std::string models = testutil::models_dir();
  auto run_suite = [&](const std::string& out) {
    std::string cmd;
    cmd += bin + " check " + models + "/banker.upm --json > " + out + " 2>&1 && ";
    cmd += bin + " trace " + models + "/banker.upm --json >> " + out + " 2>&1 && ";
    cmd += bin + " bisim " + models + "/laws.upm --json >> " + out + " 2>&1 && ";
    cmd += bin + " trustdomain " + models + "/trustdomain.upm td-main --json >> " + out +
           " 2>&1 && ";
    cmd += bin + " laws " + models + "/laws.upm --json >> " + out + " 2>&1";
    return std::system(cmd.c_str());
  };
  REQUIRE(run_suite("/tmp/upm_run_a.json") == 0);
  REQUIRE(run_suite("/tmp/upm_run_b.json") == 0);

  auto strip_timing = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
      if (line.find("\"time_ms\"") == std::string::npos) out += line + "\n";
    return out;
  };
  std::string a = strip_timing(testutil::read_file("/tmp/upm_run_a.json"));
  std::string b = strip_timing(testutil::read_file("/tmp/upm_run_b.json"));
  REQUIRE_FALSE(a.empty());
  CHECK(a == b);
}
