#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "utiliproc/diagnostics.hpp"
#include "utiliproc/lexer.hpp"
#include "utiliproc/model.hpp"

namespace utiliproc {

namespace detail {

struct ParseAbort {
  int line, col;
  std::string message;
};

struct Reference {
  enum Kind { AtomName, ActionName, UtilityName, ProcessName, CostName, PropName, UniverseName };
  Kind kind;
  std::string name;
  int line, col;
};

inline const std::set<std::string>& top_keywords() {
  static const std::set<std::string> kw = {"atoms",    "actions",  "mu",       "process",
                                           "utility",  "cost",     "atomprop", "universe",
                                           "query"};
  return kw;
}

}  // namespace detail

// Recursive-descent parser for the .upm modelling language. Grammar and
// examples live in docs/modelfile.md; the shipped models are the
// conformance fixtures.
class Parser {
 public:
  explicit Parser(const std::string& source) : toks_(lex(source)) {}

  Model parse(Diagnostics& diags) {
    Model m;
    while (!at(Tok::End)) {
      if (!at(Tok::Ident)) {
        diags.error(peek().line, peek().col, codes::kParse,
                    "expected a declaration, found '" + peek().text + "'");
        sync();
        continue;
      }
      try {
        const std::string& kw = peek().text;
        if (kw == "atoms") parse_atoms(m, diags);
        else if (kw == "actions") parse_actions(m, diags);
        else if (kw == "mu") parse_mu(m);
        else if (kw == "process") parse_process(m, diags);
        else if (kw == "utility") parse_utility(m, diags);
        else if (kw == "cost") parse_cost(m, diags);
        else if (kw == "atomprop") parse_atomprop(m, diags);
        else if (kw == "universe") parse_universe(m, diags);
        else if (kw == "query") parse_query(m, diags);
        else {
          diags.error(peek().line, peek().col, codes::kParse, "unknown declaration '" + kw + "'");
          sync();
        }
      } catch (const detail::ParseAbort& a) {
        diags.error(a.line, a.col, codes::kParse, a.message);
        sync();
      }
    }
    if (!diags.has_errors()) {
      resolve_references(m, diags);
      if (m.queries.empty())
        diags.warning(0, 0, codes::kNoQueries, "model declares no queries");
    }
    diags.sort();
    return m;
  }

 private:
  // -- token plumbing ------------------------------------------------------

  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* text) const { return at(Tok::Ident) && peek().text == text; }
  Token eat() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw detail::ParseAbort{peek().line, peek().col, msg};
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + ", found '" + peek().text + "'");
    return eat();
  }
  Token expect_ident(const char* text) {
    if (!at_ident(text)) fail(std::string("expected '") + text + "', found '" + peek().text + "'");
    return eat();
  }
  void sync() {
    while (!at(Tok::End) && !(at(Tok::Ident) && detail::top_keywords().count(peek().text)))
      eat();
  }
  void refer(detail::Reference::Kind kind, const std::string& name, const Token& tok) {
    refs_.push_back({kind, name, tok.line, tok.col});
  }

  // -- shared pieces -------------------------------------------------------

  Rat parse_number() {
    Token t = expect(Tok::Number, "a number");
    try {
      return rat_from_decimal(t.text);
    } catch (const std::exception& e) {
      throw detail::ParseAbort{t.line, t.col, e.what()};
    }
  }

  Resource parse_resource() {
    expect(Tok::LBrace, "'{'");
    Resource r;
    while (!at(Tok::RBrace)) {
      Token name = expect(Tok::Ident, "an atom name");
      refer(detail::Reference::AtomName, name.text, name);
      int n = 1;
      if (at(Tok::Colon)) {
        eat();
        Rat c = parse_number();
        if (c.denominator() != 1 || c.numerator() <= 0)
          throw detail::ParseAbort{name.line, name.col, "multiplicity must be a positive integer"};
        n = static_cast<int>(c.numerator());
      }
      r.add(name.text, n);
    }
    expect(Tok::RBrace, "'}'");
    return r;
  }

  Action parse_action_expr() {
    if (at(Tok::Number) && peek().text == "1") {
      eat();
      return Action::unit();
    }
    std::vector<std::string> factors;
    Token first = expect(Tok::Ident, "an action name");
    refer(detail::Reference::ActionName, first.text, first);
    factors.push_back(first.text);
    while (at(Tok::Dot)) {
      eat();
      Token f = expect(Tok::Ident, "an action name");
      refer(detail::Reference::ActionName, f.text, f);
      factors.push_back(f.text);
    }
    return Action(std::move(factors));
  }

  std::string parse_utility_name() {
    if (at(Tok::Number) && peek().text == "0") {
      eat();
      return kNeutralUtility;
    }
    Token t = expect(Tok::Ident, "a utility name");
    refer(detail::Reference::UtilityName, t.text, t);
    return t.text;
  }

  Context parse_context() {
    expect(Tok::LParen, "'('");
    Resource r = parse_resource();
    expect(Tok::Semi, "';'");
    TermPtr t = parse_term();
    expect(Tok::RParen, "')'");
    return Context{std::move(r), std::move(t)};
  }

  // -- process terms -------------------------------------------------------

  TermPtr parse_term() {  // sum level
    TermPtr cur = parse_product();
    bool flat = false;
    std::string cur_u;
    while (at(Tok::Plus)) {
      eat();
      std::string u = kNeutralUtility;
      if (at(Tok::LBracket)) {
        eat();
        u = parse_utility_name();
        expect(Tok::RBracket, "']'");
      }
      TermPtr rhs = parse_product();
      if (flat && u == cur_u) {
        std::vector<TermPtr> kids = cur->kids();
        kids.push_back(rhs);
        cur = Term::sum(u, std::move(kids));
      } else {
        cur = Term::sum(u, {cur, rhs});
        flat = true;
        cur_u = u;
      }
    }
    return cur;
  }

  TermPtr parse_product() {
    TermPtr cur = parse_prefix();
    while (at(Tok::Star)) {
      eat();
      cur = Term::product(cur, parse_prefix());
    }
    return cur;
  }

  TermPtr parse_prefix() {
    // "1 : P" is a unit-action prefix; bare "1" is the unit process.
    if (at(Tok::Number) && peek().text == "1" && peek(1).kind == Tok::Colon) {
      eat();
      eat();
      return Term::prefix(Action::unit(), parse_prefix());
    }
    if (at(Tok::Ident) && !at_ident("sum")) {
      // Either an action prefix (possibly composite) or a constant.
      if (peek(1).kind == Tok::Colon || peek(1).kind == Tok::Dot) {
        Action a = parse_action_expr();
        expect(Tok::Colon, "':'");
        return Term::prefix(std::move(a), parse_prefix());
      }
      Token name = eat();
      refer(detail::Reference::ProcessName, name.text, name);
      return Term::constant(name.text);
    }
    return parse_atom_term();
  }

  TermPtr parse_atom_term() {
    if (at(Tok::Number)) {
      Token t = eat();
      if (t.text == "1") return Term::unit();
      if (t.text == "0") return Term::zero();
      throw detail::ParseAbort{t.line, t.col, "expected a process term, found '" + t.text + "'"};
    }
    if (at(Tok::LBracket)) {
      eat();
      expect(Tok::RBracket, "']'");
      return Term::hole();
    }
    if (at(Tok::LParen)) {
      eat();
      TermPtr t = parse_term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at_ident("sum")) {
      eat();
      expect(Tok::LBracket, "'['");
      std::string u = parse_utility_name();
      expect(Tok::RBracket, "']'");
      expect(Tok::LBrace, "'{'");
      std::vector<TermPtr> branches;
      while (!at(Tok::RBrace)) {
        branches.push_back(parse_term());
        if (at(Tok::Semi)) eat();
      }
      expect(Tok::RBrace, "'}'");
      return Term::sum(u, std::move(branches));
    }
    fail("expected a process term, found '" + peek().text + "'");
  }

  // -- formulas ------------------------------------------------------------

  FormulaPtr parse_formula() {  // -> and -* level, right-associative
    FormulaPtr lhs = parse_or();
    if (at(Tok::Arrow)) {
      eat();
      return Formula::implies(lhs, parse_formula());
    }
    if (at(Tok::Wand)) {
      eat();
      return Formula::wand(lhs, parse_formula());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr cur = parse_and();
    while (at_ident("or")) {
      eat();
      cur = Formula::lor(cur, parse_and());
    }
    return cur;
  }

  FormulaPtr parse_and() {
    FormulaPtr cur = parse_star();
    while (at_ident("and")) {
      eat();
      cur = Formula::land(cur, parse_star());
    }
    return cur;
  }

  FormulaPtr parse_star() {
    FormulaPtr cur = parse_unary();
    while (at(Tok::Star)) {
      eat();
      cur = Formula::star(cur, parse_unary());
    }
    return cur;
  }

  FormulaPtr parse_unary() {
    if (at_ident("not")) {
      eat();
      return Formula::lnot(parse_unary());
    }
    if (at_ident("true")) {
      eat();
      return Formula::top();
    }
    if (at_ident("false")) {
      eat();
      return Formula::bottom();
    }
    if (at_ident("emp")) {
      eat();
      return Formula::mult_unit();
    }
    if (at(Tok::Lt)) {
      eat();
      if (at_ident("pref")) {
        eat();
        std::string u = parse_utility_name();
        expect(Tok::Gt, "'>'");
        return Formula::pref_diamond(u, parse_unary());
      }
      Action a = parse_action_expr();
      expect(Tok::Gt, "'>'");
      return Formula::diamond(std::move(a), parse_unary());
    }
    if (at(Tok::LBracket)) {
      eat();
      if (at_ident("pref")) {
        eat();
        std::string u = parse_utility_name();
        expect(Tok::RBracket, "']'");
        return Formula::pref_box(u, parse_unary());
      }
      Action a = parse_action_expr();
      expect(Tok::RBracket, "']'");
      return Formula::box(std::move(a), parse_unary());
    }
    if (at(Tok::LParen)) {
      eat();
      FormulaPtr f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Ident)) {
      Token t = eat();
      refer(detail::Reference::PropName, t.text, t);
      return Formula::atom(t.text);
    }
    fail("expected a formula, found '" + peek().text + "'");
  }

  // -- declarations --------------------------------------------------------

  void parse_atoms(Model& m, Diagnostics& diags) {
    eat();  // atoms
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      Token name = expect(Tok::Ident, "an atom name");
      int cap = 1;
      if (at(Tok::Colon)) {
        eat();
        Rat c = parse_number();
        if (c.denominator() != 1 || c.numerator() <= 0)
          throw detail::ParseAbort{name.line, name.col, "capacity must be a positive integer"};
        cap = static_cast<int>(c.numerator());
      }
      if (m.atoms.declared(name.text))
        diags.error(name.line, name.col, codes::kDuplicateDecl,
                    "atom '" + name.text + "' declared twice");
      m.atoms.declare(name.text, cap);
    }
    expect(Tok::RBrace, "'}'");
  }

  void parse_actions(Model& m, Diagnostics& diags) {
    eat();  // actions
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      Token name = expect(Tok::Ident, "an action name");
      if (m.find_action(name.text))
        diags.error(name.line, name.col, codes::kDuplicateDecl,
                    "action '" + name.text + "' declared twice");
      expect_ident("requires");
      Resource req = parse_resource();
      expect_ident("produces");
      Resource prod = parse_resource();
      m.actions.push_back({name.text, std::move(req), std::move(prod)});
    }
    expect(Tok::RBrace, "'}'");
  }

  void parse_mu(Model& m) {
    eat();  // mu
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      Token open = expect(Tok::LParen, "'('");
      Action a = parse_action_expr();
      expect(Tok::Semi, "';'");
      Resource at_r = parse_resource();
      expect(Tok::RParen, "')'");
      expect(Tok::Equals, "'='");
      Resource result = parse_resource();
      m.mu_facts.push_back({std::move(a), std::move(at_r), std::move(result), open.line, open.col});
    }
    expect(Tok::RBrace, "'}'");
  }

  void parse_process(Model& m, Diagnostics& diags) {
    eat();  // process
    Token name = expect(Tok::Ident, "a process name");
    if (m.find_process(name.text))
      diags.error(name.line, name.col, codes::kDuplicateDecl,
                  "process '" + name.text + "' declared twice");
    expect(Tok::Equals, "'='");
    m.processes.push_back({name.text, parse_term()});
  }

  void parse_utility(Model& m, Diagnostics& diags) {
    eat();  // utility
    if (at(Tok::Number) && peek().text == kNeutralUtility) {
      Token zero = eat();
      diags.error(zero.line, zero.col, codes::kReservedName,
                  "utility name '0' is reserved for the neutral utility");
    }
    Token name = at(Tok::Ident) ? eat() : Token{Tok::Ident, "_reserved", peek().line, peek().col};
    if (m.find_utility(name.text))
      diags.error(name.line, name.col, codes::kDuplicateDecl,
                  "utility '" + name.text + "' declared twice");
    UtilitySpec u;
    u.name = name.text;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      if (at_ident("default")) {
        eat();
        expect(Tok::Equals, "'='");
        u.fallback = parse_number();
        continue;
      }
      Token open = peek();
      Context key = parse_context();
      if (key.open())
        diags.error(open.line, open.col, codes::kQueryInvalid,
                    "utility table keys must be closed contexts");
      expect(Tok::Equals, "'='");
      Rat v = parse_number();
      u.table.emplace_back(canonicalize(key), v);
    }
    expect(Tok::RBrace, "'}'");
    u.sort_table();
    m.utilities.push_back(std::move(u));
  }

  void parse_cost(Model& m, Diagnostics& diags) {
    eat();  // cost
    Token name = expect(Tok::Ident, "a cost name");
    if (m.find_cost(name.text))
      diags.error(name.line, name.col, codes::kDuplicateDecl,
                  "cost '" + name.text + "' declared twice");
    CostSpec c;
    c.name = name.text;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      Token act = expect(Tok::Ident, "an action name");
      refer(detail::Reference::ActionName, act.text, act);
      expect(Tok::Equals, "'='");
      c.per_action[act.text] = parse_number();
    }
    expect(Tok::RBrace, "'}'");
    m.costs.push_back(std::move(c));
  }

  void parse_atomprop(Model& m, Diagnostics& diags) {
    eat();  // atomprop
    Token name = expect(Tok::Ident, "an atomic proposition name");
    if (m.find_atomprop(name.text))
      diags.error(name.line, name.col, codes::kDuplicateDecl,
                  "atomprop '" + name.text + "' declared twice");
    AtomProp p;
    p.name = name.text;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) p.members.push_back(canonicalize(parse_context()));
    expect(Tok::RBrace, "'}'");
    std::sort(p.members.begin(), p.members.end(), ContextLess{});
    m.valuation.push_back(std::move(p));
  }

  void parse_universe(Model& m, Diagnostics& diags) {
    eat();  // universe
    Token name = expect(Tok::Ident, "a universe name");
    if (m.find_universe(name.text))
      diags.error(name.line, name.col, codes::kDuplicateDecl,
                  "universe '" + name.text + "' declared twice");
    UniverseDecl u;
    u.name = name.text;
    if (at_ident("auto")) {
      eat();
      u.auto_gen = true;
      if (at(Tok::LParen)) {
        eat();
        Rat cap = parse_number();
        expect(Tok::RParen, "')'");
        u.cap = static_cast<int>(cap.numerator() / cap.denominator());
      }
    } else {
      expect(Tok::LBrace, "'{'");
      while (!at(Tok::RBrace)) u.contexts.push_back(parse_context());
      expect(Tok::RBrace, "'}'");
    }
    m.universes.push_back(std::move(u));
  }

  void parse_query(Model& m, Diagnostics& diags) {
    eat();  // query
    Token name = expect(Tok::Ident, "a query name");
    if (m.find_query(name.text))
      diags.error(name.line, name.col, codes::kDuplicateDecl,
                  "query '" + name.text + "' declared twice");
    expect(Tok::Colon, "':'");
    Token kind = expect(Tok::Ident, "a query kind");
    Query q;
    q.name = name.text;
    if (kind.text == "check") q.kind = QueryKind::Check;
    else if (kind.text == "bisim") q.kind = QueryKind::Bisim;
    else if (kind.text == "trace") q.kind = QueryKind::Trace;
    else if (kind.text == "trustdomain") q.kind = QueryKind::TrustDomain;
    else throw detail::ParseAbort{kind.line, kind.col, "unknown query kind '" + kind.text + "'"};

    CheckQuery cq;
    BisimQuery bq;
    TraceQuery tq;
    TrustQuery dq;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      Token key = expect(Tok::Ident, "a query field");
      expect(Tok::Equals, "'='");
      const std::string& k = key.text;
      if (k == "primary") (q.kind == QueryKind::Check ? cq.primary : tq.primary) = parse_context();
      else if (k == "surrounding")
        (q.kind == QueryKind::Check ? cq.surrounding : tq.surrounding) = parse_context();
      else if (k == "formula")
        (q.kind == QueryKind::Check ? cq.formula : dq.formula) = parse_formula();
      else if (k == "left") bq.left = parse_term();
      else if (k == "right") bq.right = parse_term();
      else if (k == "agent") dq.agent = parse_context();
      else if (k == "cost") {
        Token c = expect(Tok::Ident, "a cost name");
        refer(detail::Reference::CostName, c.text, c);
        dq.cost = c.text;
      } else if (k == "bound") dq.bound = parse_number();
      else if (k == "maxlen") {
        Rat n = parse_number();
        dq.max_trace_length = static_cast<int>(n.numerator() / n.denominator());
      } else if (k == "levels") {
        expect(Tok::LBracket, "'['");
        while (!at(Tok::RBracket)) {
          dq.levels.push_back(parse_number());
          if (at(Tok::Comma)) eat();
        }
        expect(Tok::RBracket, "']'");
      } else if (k == "candidates") {
        expect(Tok::LBracket, "'['");
        while (!at(Tok::RBracket)) {
          dq.candidates.push_back(parse_context());
          if (at(Tok::Comma)) eat();
        }
        expect(Tok::RBracket, "']'");
      } else if (k == "actions") {
        expect(Tok::LBracket, "'['");
        while (!at(Tok::RBracket)) {
          tq.actions.push_back(parse_action_expr());
          if (at(Tok::Comma)) eat();
        }
        expect(Tok::RBracket, "']'");
      } else if (k == "universe") {
        Token un = expect(Tok::Ident, "a universe name");
        if (un.text != "auto") refer(detail::Reference::UniverseName, un.text, un);
        q.universe = un.text;
      } else if (k == "depth") {
        Rat n = parse_number();
        q.depth = static_cast<int>(n.numerator() / n.denominator());
      } else if (k == "mode") {
        Token md = expect(Tok::Ident, "'global' or 'local'");
        if (md.text != "global" && md.text != "local")
          throw detail::ParseAbort{md.line, md.col, "mode must be 'global' or 'local'"};
        q.mode = md.text;
      } else {
        throw detail::ParseAbort{key.line, key.col, "unknown query field '" + k + "'"};
      }
    }
    expect(Tok::RBrace, "'}'");
    switch (q.kind) {
      case QueryKind::Check:
        if (!cq.formula)
          diags.error(name.line, name.col, codes::kQueryInvalid,
                      "check query '" + q.name + "' needs a formula");
        q.body = std::move(cq);
        break;
      case QueryKind::Bisim:
        if (!bq.left || !bq.right)
          diags.error(name.line, name.col, codes::kQueryInvalid,
                      "bisim query '" + q.name + "' needs left and right terms");
        q.body = std::move(bq);
        break;
      case QueryKind::Trace:
        q.body = std::move(tq);
        break;
      case QueryKind::TrustDomain:
        if (!dq.formula)
          diags.error(name.line, name.col, codes::kQueryInvalid,
                      "trustdomain query '" + q.name + "' needs a formula");
        if (dq.cost.empty())
          diags.error(name.line, name.col, codes::kQueryInvalid,
                      "trustdomain query '" + q.name + "' needs a cost table");
        q.body = std::move(dq);
        break;
    }
    m.queries.push_back(std::move(q));
  }

  // -- reference resolution --------------------------------------------------

  void resolve_references(const Model& m, Diagnostics& diags) {
    for (const auto& r : refs_) {
      bool ok = true;
      const char* what = "";
      switch (r.kind) {
        case detail::Reference::AtomName:
          ok = m.atoms.declared(r.name);
          what = "atom";
          break;
        case detail::Reference::ActionName:
          ok = m.find_action(r.name) != nullptr;
          what = "action";
          break;
        case detail::Reference::UtilityName:
          ok = r.name == kNeutralUtility || m.find_utility(r.name) != nullptr;
          what = "utility";
          break;
        case detail::Reference::ProcessName:
          ok = m.find_process(r.name) != nullptr;
          what = "process";
          break;
        case detail::Reference::CostName:
          ok = m.find_cost(r.name) != nullptr;
          what = "cost";
          break;
        case detail::Reference::PropName:
          ok = m.find_atomprop(r.name) != nullptr;
          what = "atomic proposition";
          break;
        case detail::Reference::UniverseName:
          ok = m.find_universe(r.name) != nullptr;
          what = "universe";
          break;
      }
      if (!ok)
        diags.error(r.line, r.col, codes::kUnknownName,
                    std::string(what) + " '" + r.name + "' is not declared");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<detail::Reference> refs_;
};

struct ParseResult {
  Model model;
  Diagnostics diagnostics;
  bool ok() const { return !diagnostics.has_errors(); }
};

inline ParseResult parse_model(const std::string& source) {
  ParseResult out;
  Parser p(source);
  out.model = p.parse(out.diagnostics);
  return out;
}

}  // namespace utiliproc
