#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace utiliproc;
using testutil::act;
using testutil::res;

namespace {

struct Checkers {
  testutil::BankerWorld w;
  ContextUniverse uni = resolve_universe(w.model, "main");
  EquivalenceChecker chk{w.model, uni, 8};
};

// Rewrites that preserve bisimilarity by the algebraic laws; used to
// generate related-but-unequal pairs.
TermPtr law_rewrite(const TermPtr& t, std::mt19937_64& rng) {
  switch (rng() % 5) {
    case 0:
      return Term::product(t, Term::unit());
    case 1:
      return Term::product(Term::unit(), t);
    case 2:
      if (t->kind() == TermKind::Product) return Term::product(t->kids()[1], t->kids()[0]);
      return Term::product(t, Term::unit());
    case 3:
      if (t->kind() == TermKind::Sum && t->kids().size() == 2)
        return Term::sum(t->label(), {t->kids()[1], t->kids()[0]});
      return Term::sum(kNeutralUtility, {t, Term::zero()});
    default:
      return Term::sum(kNeutralUtility, {t, Term::zero()});
  }
}

TermPtr random_term(const std::vector<TermPtr>& pool, std::mt19937_64& rng, int depth = 2) {
  if (depth == 0 || rng() % 3 == 0) return pool[rng() % pool.size()];
  switch (rng() % 3) {
    case 0:
      return Term::product(random_term(pool, rng, depth - 1), random_term(pool, rng, depth - 1));
    case 1:
      return Term::sum(kNeutralUtility,
                       {random_term(pool, rng, depth - 1), random_term(pool, rng, depth - 1)});
    default:
      return pool[rng() % pool.size()];
  }
}

}  // namespace

TEST_CASE("bisim basics") {
  Checkers c;
  TermPtr banker = Term::constant("Banker");

  SECTION("reflexivity") { CHECK(c.chk.bisim(banker, banker, 4).related); }
  SECTION("unit of product") {
    CHECK(c.chk.bisim(Term::product(banker, Term::unit()), banker, 4).related);
  }
  SECTION("distinct prefixes differ, with a counterexample") {
    TermPtr pa = Term::prefix(act({"present"}), Term::unit());
    TermPtr pb = Term::prefix(act({"idle_B"}), Term::unit());
    // depth-1 oracle: both fire at the banker's resource with different
    // actions, so no matching is possible
    TransitionSet ta =
        enumerate_transitions(c.w.model, Context{c.w.r_banker, pa}, empty_context(),
                              unit_context(), 8);
    TransitionSet tb =
        enumerate_transitions(c.w.model, Context{c.w.r_banker, pb}, empty_context(),
                              unit_context(), 8);
    REQUIRE(ta.items.size() == 1);
    REQUIRE(tb.items.size() == 1);
    REQUIRE(ta.items[0].action != tb.items[0].action);

    EquivalenceVerdict v = c.chk.bisim(pa, pb, 2);
    CHECK_FALSE(v.related);
    CHECK_FALSE(v.counterexample.empty());
  }
  SECTION("depth zero relates everything") {
    CHECK(c.chk.bisim(Term::prefix(act({"present"}), Term::unit()), Term::zero(), 0).related);
  }
}

TEST_CASE("bisim is monotone in depth") {
  Checkers c;
  std::vector<std::pair<TermPtr, TermPtr>> pairs = {
      {Term::prefix(act({"present"}), Term::unit()), Term::prefix(act({"idle_B"}), Term::unit())},
      {Term::constant("Banker"), Term::constant("Client")},
      {Term::constant("Banker"), Term::prefix(act({"present"}), Term::constant("Banker'"))},
      {Term::unit(), Term::zero()},
      {Term::product(Term::constant("Banker"), Term::unit()), Term::constant("Banker")},
  };
  for (const auto& [a, b] : pairs) {
    bool prev = true;
    for (int d = 0; d <= 4; ++d) {
      bool now = c.chk.bisim(a, b, d).related;
      INFO(term_str(a) << " vs " << term_str(b) << " at depth " << d);
      if (!prev) CHECK_FALSE(now);  // related at d+1 implies related at d
      prev = now;
    }
  }
}

TEST_CASE("bisim is an equivalence at fixed depth over a term sample") {
  Checkers c;
  std::vector<TermPtr> ts = {Term::unit(),
                             Term::zero(),
                             Term::constant("Banker"),
                             Term::constant("Banker'"),
                             Term::product(Term::constant("Banker"), Term::unit()),
                             Term::prefix(act({"present"}), Term::unit()),
                             Term::prefix(act({"present"}), Term::constant("Banker'"))};
  const int d = 3;
  for (const auto& a : ts) {
    CHECK(c.chk.bisim(a, a, d).related);
    for (const auto& b : ts) {
      bool ab = c.chk.bisim(a, b, d).related;
      bool ba = c.chk.bisim(b, a, d).related;
      CHECK(ab == ba);
      for (const auto& e : ts) {
        bool be = c.chk.bisim(b, e, d).related;
        bool ae = c.chk.bisim(a, e, d).related;
        if (ab && be) CHECK(ae);
      }
    }
  }
}

TEST_CASE("bisim on contexts requires equal resources") {
  Checkers c;
  TermPtr e = Term::constant("Banker");
  Context a{c.w.r_banker, e};
  CHECK(c.chk.bisim_contexts(a, a, 3).related);
  Context b{c.w.r_client, e};
  EquivalenceVerdict v = c.chk.bisim_contexts(a, b, 3);
  CHECK_FALSE(v.related);
  CHECK_FALSE(v.counterexample.empty());

  Context padded{c.w.r_banker, Term::sum("uB", {e, Term::zero()})};
  CHECK(c.chk.bisim_contexts(padded, a, 3).related);
}

TEST_CASE("congruence sampling under prefix, product and sum") {
  Checkers c;
  std::mt19937_64 rng(7);
  std::vector<TermPtr> pool = c.uni.terms;
  REQUIRE_FALSE(pool.empty());
  int rounds = 40;
  for (int i = 0; i < rounds; ++i) {
    TermPtr e = random_term(pool, rng);
    TermPtr f = law_rewrite(e, rng);
    INFO("pair " << term_str(e) << "  ~  " << term_str(f));
    REQUIRE(c.chk.bisim(e, f, 3).related);

    TermPtr g = pool[rng() % pool.size()];
    CHECK(c.chk.bisim(Term::prefix(act({"present"}), e), Term::prefix(act({"present"}), f), 3)
              .related);
    CHECK(c.chk.bisim(Term::product(e, g), Term::product(f, g), 3).related);
    CHECK(c.chk.bisim(Term::sum("uB", {e, g}), Term::sum("uB", {f, g}), 3).related);
  }
}

TEST_CASE("substitution compatibility on related pairs") {
  Checkers c;
  std::mt19937_64 rng(11);
  std::vector<TermPtr> pool = c.uni.terms;
  for (int i = 0; i < 25; ++i) {
    TermPtr f = random_term(pool, rng);
    TermPtr h = law_rewrite(f, rng);
    // open pairs: plug related closed terms into the same open shell
    TermPtr shell = Term::product(Term::hole(), pool[rng() % pool.size()]);
    TermPtr ef = substitute(shell, f);
    TermPtr gh = substitute(shell, h);
    CHECK(c.chk.bisim(ef, gh, 3).related);
  }
}

TEST_CASE("local equivalence") {
  Checkers c;
  Context client_outer{c.w.r_client, Term::product(Term::constant("Client"), Term::hole())};
  Context attacker_outer{c.w.r_attacker, Term::product(Term::constant("Attacker"), Term::hole())};
  Context banker{c.w.r_banker, Term::constant("Banker")};
  Context d = unit_context();

  SECTION("reflexivity on identical triples") {
    CHECK(c.chk.local_equiv(client_outer, banker, d, client_outer, banker, d, 3).related);
  }
  SECTION("differing primary resources violate condition 3") {
    Context poorer{res({"r2"}), Term::constant("Banker")};
    EquivalenceVerdict v = c.chk.local_equiv(client_outer, banker, d, client_outer, poorer, d, 3);
    CHECK_FALSE(v.related);
    CHECK_FALSE(v.counterexample.empty());
  }
  SECTION("commuted product factors are locally equivalent") {
    Context ab{c.w.r_full, Term::product(Term::constant("Client"), Term::constant("Banker"))};
    Context ba{c.w.r_full, Term::product(Term::constant("Banker"), Term::constant("Client"))};
    Context sur = empty_context();
    CHECK(c.chk.local_equiv(sur, ab, d, sur, ba, d, 3).related);
  }
  SECTION("different behaviour under the same outer is caught") {
    Context idle{c.w.r_banker, Term::prefix(act({"idle_B"}), Term::constant("Banker'"))};
    EquivalenceVerdict v = c.chk.local_equiv(client_outer, banker, d, client_outer, idle, d, 2);
    // under the client the banker presents, the idler idles
    CHECK_FALSE(v.related);
  }
}

TEST_CASE("local equivalence congruence failure is searched, not assumed") {
  // The relation is not preserved by the product constructor in general.
  // Search the universe for a witness; finding none in a small universe is
  // acceptable, asserting congruence is not.
  Checkers c;
  std::vector<Context> primaries = {{c.w.r_banker, Term::constant("Banker")},
                                    {c.w.r_banker, Term::prefix(act({"present"}), Term::unit())},
                                    {c.w.r_attacker, Term::constant("Attacker")}};
  Context sur = empty_context();
  Context d = unit_context();
  int related_pairs = 0, broken_by_product = 0;
  for (const auto& a : primaries)
    for (const auto& b : primaries) {
      if (!c.chk.local_equiv(sur, a, d, sur, b, d, 2).related) continue;
      ++related_pairs;
      for (const auto& g : {Term::constant("Client"), Term::constant("Attacker")}) {
        Context ag{a.resource, Term::product(a.process, g)};
        Context bg{b.resource, Term::product(b.process, g)};
        if (!c.chk.local_equiv(sur, ag, d, sur, bg, d, 2).related) ++broken_by_product;
      }
    }
  CHECK(related_pairs > 0);
  INFO("product-composition broke " << broken_by_product << " locally-related pairs");
  SUCCEED();
}

TEST_CASE("respects-bisimilarity obligation") {
  Checkers c;

  SECTION("the neutral utility is blameless") {
    UtilitySpec zero;
    zero.name = "z";
    ObligationReport r = check_respects_bisim(c.chk, zero, 3);
    CHECK(r.ok());
  }
  SECTION("the shipped banker utility passes over its universe") {
    const UtilitySpec* ub = c.w.model.find_utility("uB");
    REQUIRE(ub != nullptr);
    CHECK(check_respects_bisim(c.chk, *ub, 3).ok());
    CHECK(check_table_keys(c.chk, *ub, 3).ok());
  }
  SECTION("bisimilar keys with unequal values are reported") {
    UtilitySpec bad;
    bad.name = "bad";
    TermPtr e = Term::constant("Banker");
    bad.table.emplace_back(canonicalize(Context{c.w.r_banker, Term::product(e, Term::unit())}),
                           Rat(1));
    bad.table.emplace_back(canonicalize(Context{c.w.r_banker, Term::sum("uB", {e, Term::zero()})}),
                           Rat(2));
    bad.sort_table();
    // both keys canonicalize to plain Banker forms that are bisimilar
    ObligationReport r = check_table_keys(c.chk, bad, 3);
    CHECK_FALSE(r.ok());
  }
}

TEST_CASE("accordance obligation") {
  Checkers c;

  SECTION("the neutral utility alone is accordant") {
    UtilitySpec zero;
    zero.name = "z";
    AccordanceReport r = check_accordance(c.chk, {&zero});
    CHECK(r.ok());
  }
  SECTION("shipped utility set reports per condition") {
    std::vector<const UtilitySpec*> us;
    for (const auto& u : c.w.model.utilities) us.push_back(&u);
    AccordanceReport r = check_accordance(c.chk, us);
    for (int cond = 1; cond <= 4; ++cond) {
      INFO("condition " << cond);
      CHECK(r.condition_ok(cond));
    }
  }
  SECTION("valuing the zero process above others violates condition 3") {
    UtilitySpec bad;
    bad.name = "bad";
    bad.table.emplace_back(Context{c.w.r_banker, Term::zero()}, Rat(5));
    bad.sort_table();
    AccordanceReport r = check_accordance(c.chk, {&bad});
    CHECK_FALSE(r.condition_ok(3));
  }
}

TEST_CASE("laws hold on the banker universe and break with a discordant utility") {
  Checkers c;
  std::vector<LawResult> laws = check_laws(c.chk, 4);
  REQUIRE(laws.size() == 8);
  for (const auto& l : laws) {
    INFO("law " << l.number << " " << l.name);
    CHECK(l.holds);
    CHECK(l.checked > 0);
  }

  // Inject a condition-3-violating utility: zero becomes the best branch, so
  // E +bad 0 is stuck where E reduces.
  Model patched = c.w.model;
  UtilitySpec bad;
  bad.name = "bad";
  for (const auto& r : c.uni.resources) bad.table.emplace_back(Context{r, Term::zero()}, Rat(5));
  bad.sort_table();
  patched.utilities.push_back(bad);
  ContextUniverse uni2 = resolve_universe(patched, "main");
  EquivalenceChecker chk2(patched, uni2, 8);

  AccordanceReport acc = check_accordance(chk2, {patched.find_utility("bad")});
  CHECK_FALSE(acc.condition_ok(3));

  std::vector<LawResult> broken = check_laws(chk2, 4);
  const LawResult* law3 = nullptr;
  for (const auto& l : broken)
    if (l.number == 3) law3 = &l;
  REQUIRE(law3 != nullptr);
  CHECK_FALSE(law3->holds);
  CHECK_FALSE(law3->failures.empty());
}

TEST_CASE("explicit universes quantify the verdict") {
  // a universe with no resources that enable any action cannot distinguish
  // prefixed processes, and says so honestly at its depth
  std::string src = R"(
atoms { x }
actions {
  a requires { x } produces { x }
  b requires { x } produces { x }
}
process P = a : 1
universe empty_res { ({} ; 1) }
universe live { ({ x } ; 1) }
query q : bisim { left = a : 1 right = b : 1 universe = live }
)";
  ParseResult pr = parse_model(src);
  REQUIRE(pr.ok());
  ContextUniverse empty_res = resolve_universe(pr.model, "empty_res");
  EquivalenceChecker weak(pr.model, empty_res, 4);
  TermPtr pa = Term::prefix(act({"a"}), Term::unit());
  TermPtr pb = Term::prefix(act({"b"}), Term::unit());
  CHECK(weak.bisim(pa, pb, 3).related);  // bounded-affirmative only

  ContextUniverse live = resolve_universe(pr.model, "live");
  EquivalenceChecker strong(pr.model, live, 4);
  CHECK_FALSE(strong.bisim(pa, pb, 3).related);  // refutation is sound
}
