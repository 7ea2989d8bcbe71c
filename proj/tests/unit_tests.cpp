#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "lpmln/engine.hpp"
#include "lpmln/ground.hpp"
#include "lpmln/oracle.hpp"
#include "lpmln/parser.hpp"
#include "lpmln/plog.hpp"
#include "lpmln/translate.hpp"

using namespace lpmln;

namespace {

std::set<Atom> atoms(std::initializer_list<const char*> names) {
  std::set<Atom> out;
  for (const char* n : names) out.insert(Atom(n));
  return out;
}

std::vector<FormulaPtr> formulas_of(const GroundProgram& g) {
  std::vector<FormulaPtr> fs;
  for (const auto& r : g.rules) fs.push_back(r.formula);
  return fs;
}

const char* kExample1 = R"(
10 :: q :- p.
1 :: r :- p.
5 :: p.
-20 :: bot :- not r.
)";

const char* kExample2 = R"(
alpha :: bird(jo) :- residentBird(jo).
alpha :: bird(jo) :- migratoryBird(jo).
alpha :: :- residentBird(jo), migratoryBird(jo).
2 :: residentBird(jo).
1 :: migratoryBird(jo).
)";

const char* kMonty = R"(
sort door = {1, 2, 3, 4}.
attr prize : -> door.
attr selected : -> door.
attr open : -> door.
attr canOpen : door -> bool.
var D : door.
~canOpen(D) :- selected = D.
~canOpen(D) :- prize = D.
canOpen(D) :- not ~canOpen(D).
[r1] random(prize).
[r2] random(selected).
[r3] random(open : {X : canOpen(X)}).
pr[r1](prize = 1) = 3/10.
pr[r1](prize = 3) = 1/5.
obs(selected = 1).
obs(open = 2).
obs(prize != 2).
)";

}  // namespace

TEST_CASE("rational arithmetic") {
  Rational a(1, 2), b(1, 3);
  CHECK((a + b) == Rational(5, 6));
  CHECK((a - b) == Rational(1, 6));
  CHECK((a * b) == Rational(1, 6));
  CHECK((a / b) == Rational(3, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4).str() == "-1/2");
  CHECK(Rational(6, 3).str() == "2");
  CHECK(Rational::parse("3/10") == Rational(3, 10));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("-1.5") == Rational(-3, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("terms and atoms") {
  CHECK(Term::rational(Rational(4, 2)) == Term::integer(2));
  CHECK(Term::integer(3).str() == "3");
  CHECK(Atom("p", {Term::integer(1), Term::sym("a")}).str() == "p(1, a)");
  CHECK(Atom("p") < Atom("q"));
}

TEST_CASE("parser round trips") {
  const char* sources[] = {
      kExample1,
      kExample2,
      "sort d = {1, 2, 3}.\nvar X : d.\nalpha :: p(X) ; q(X) :- r(X), not s(X).\n",
      "sort d = {1, 2}.\nvar X : d.\n1 :: :- q(X), (p(1) -> p(2)).\n",
      "2 :: (p -> q).\n-3.5 :: (not (p | q)).\n",
      "sort d = {a, b}.\nvar X : d.\n1 :: w :- 2 = #count{X : p(X)}.\n"
      "1 :: v :- 1/2 = #sum{1/4 : p(a); 1/4 : p(b)}.\n",
  };
  for (const char* src : sources) {
    LpmlnProgram p1 = parse_lpmln(src);
    std::string printed = print_lpmln(p1);
    LpmlnProgram p2 = parse_lpmln(printed);
    REQUIRE(p1.rules.size() == p2.rules.size());
    for (std::size_t i = 0; i < p1.rules.size(); ++i) {
      CHECK(p1.rules[i].weight == p2.rules[i].weight);
      CHECK(formula_equal(p1.rules[i].formula, p2.rules[i].formula));
    }
    CHECK(print_lpmln(p2) == printed);
  }
}

TEST_CASE("parser errors") {
  CHECK_THROWS_AS(parse_lpmln("1 :: p :- q"), ParseError);          // missing period
  CHECK_THROWS_AS(parse_lpmln("1 :: p(X)."), ParseError);           // undeclared variable
  CHECK_THROWS_AS(parse_lpmln("var X : d.\n1 :: p(X)."), ParseError);  // unknown sort
}

TEST_CASE("grounder instantiates variables") {
  LpmlnProgram p = parse_lpmln(
      "sort d = {1, 2, 3}.\nvar X : d.\nvar Y : d.\n1 :: p(X, Y) :- X != Y.\n");
  GroundProgram g = ground(p);
  CHECK(g.rules.size() == 9);  // instances are retained, comparisons folded
  int firing = 0;
  for (const auto& r : g.rules) {
    // A false X != Y collapses the body to bot and the rule to a tautology.
    std::set<Atom> none;
    if (!satisfies(r.formula, none)) ++firing;
  }
  CHECK(firing == 6);
  CHECK(g.signature.size() == 9);
}

TEST_CASE("count expansion") {
  std::vector<Atom> as{Atom("a"), Atom("b"), Atom("c")};
  FormulaPtr two = expand_count(as, 2);
  CHECK(satisfies(two, atoms({"a", "b"})));
  CHECK(satisfies(two, atoms({"a", "c"})));
  CHECK_FALSE(satisfies(two, atoms({"a"})));
  CHECK_FALSE(satisfies(two, atoms({"a", "b", "c"})));
  CHECK(expand_count(as, 5)->kind == FKind::Bot);
}

TEST_CASE("sum expansion merges duplicate atoms") {
  std::vector<SumItem> items{{Rational(1, 2), Atom("a")},
                             {Rational(1, 4), Atom("a")},
                             {Rational(1, 4), Atom("b")}};
  FormulaPtr f = expand_sum(items, Rational(3, 4));
  CHECK(satisfies(f, atoms({"a"})));          // 1/2 + 1/4 from both a-items
  CHECK_FALSE(satisfies(f, atoms({"b"})));
  CHECK_FALSE(satisfies(f, atoms({"a", "b"})));
  FormulaPtr g = expand_sum(items, Rational(1));
  CHECK(satisfies(g, atoms({"a", "b"})));
}

TEST_CASE("aggregate caps") {
  std::vector<Atom> as;
  for (int i = 0; i < 13; ++i) as.push_back(Atom("p" + std::to_string(i)));
  CHECK_THROWS_AS(expand_count(as, 1), CapError);
}

TEST_CASE("reduct fixpoint property") {
  oracle::GeneratorConfig cfg;
  cfg.atom_budget = 4;
  cfg.rule_budget = 5;
  for (unsigned seed = 0; seed < 50; ++seed) {
    cfg.seed = seed;
    GroundProgram prog = oracle::gen_program(cfg);
    Signature sig = Signature::from(prog.signature);
    for (int mask = 0; mask < (1 << sig.size()); ++mask) {
      Interp I(sig.size());
      for (int i = 0; i < sig.size(); ++i) I.set(i, (mask >> i) & 1);
      for (const auto& r : prog.rules)
        CHECK(satisfies(r.formula, I, sig) == satisfies(reduct(r.formula, I, sig), I, sig));
    }
  }
}

TEST_CASE("stable model enumeration on known programs") {
  auto models = [](const char* src) {
    GroundProgram g = ground(parse_lpmln(src));
    return enumerate_stable_atoms(formulas_of(g), g.signature);
  };
  CHECK(models("alpha :: p :- not q.\nalpha :: q :- not p.\n") ==
        std::set<std::set<Atom>>{atoms({"p"}), atoms({"q"})});
  CHECK(models("alpha :: p ; q.\n") ==
        std::set<std::set<Atom>>{atoms({"p"}), atoms({"q"})});
  CHECK(models("alpha :: p :- p.\n") == std::set<std::set<Atom>>{atoms({})});
  CHECK(models("alpha :: p.\nalpha :: :- p.\n") == std::set<std::set<Atom>>{});
  CHECK(models("alpha :: (p | not p).\n") ==
        std::set<std::set<Atom>>{atoms({}), atoms({"p"})});
}

TEST_CASE("splitting agrees with fallback and the reference") {
  oracle::GeneratorConfig cfg;
  cfg.atom_budget = 6;
  cfg.rule_budget = 8;
  cfg.rule_form_only = true;
  for (unsigned seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    GroundProgram prog = oracle::gen_program(cfg);
    auto fs = formulas_of(prog);
    Signature sig = Signature::from(prog.signature);
    auto split = enumerate_stable(fs, sig, EnumCaps{}, EnumStrategy::Splitting);
    auto fall = enumerate_stable(fs, sig, EnumCaps{}, EnumStrategy::Fallback);
    CHECK(split == fall);
    auto ref = oracle::brute_stable(fs, prog.signature);
    std::set<std::set<Atom>> got;
    for (const auto& I : split) got.insert(to_atoms(I, sig));
    CHECK(got == ref);
  }
}

TEST_CASE("weak constraint optimality") {
  WcProgram p;
  p.signature = atoms({"a", "b"});
  p.base.push_back(f_choice(f_atom(Atom("a"))));
  p.base.push_back(f_choice(f_atom(Atom("b"))));
  p.weak.push_back({f_atom(Atom("a")), -2.0, 0});
  p.weak.push_back({f_atom(Atom("b")), 1.0, 0});
  p.weak.push_back({f_atom(Atom("b")), -1.0, 1});
  auto opt = optimal_models(p);
  // Level 1 dominates: b must hold; then a is free of level-1 cost and a lowers
  // level 0.
  CHECK(opt == std::set<std::set<Atom>>{atoms({"a", "b"})});
  CHECK(penalty(p, atoms({"a", "b"}), 0) == doctest::Approx(-1.0));
  CHECK(penalty(p, atoms({"a", "b"}), 1) == doctest::Approx(-1.0));
}

TEST_CASE("weighted program semantics on the first example") {
  GroundProgram g = ground(parse_lpmln(kExample1));
  auto sm = sm_set(g);
  CHECK(sm.size() == 5);
  auto w = [&](std::set<Atom> I) {
    auto r = weight(g, I);
    REQUIRE(r.has_value());
    return r->soft;
  };
  CHECK(w(atoms({})) == doctest::Approx(11.0));
  CHECK(w(atoms({"p"})) == doctest::Approx(5.0));
  CHECK(w(atoms({"p", "q"})) == doctest::Approx(15.0));
  CHECK(w(atoms({"p", "r"})) == doctest::Approx(-14.0));
  CHECK(w(atoms({"p", "q", "r"})) == doctest::Approx(-4.0));
  CHECK_FALSE(weight(g, atoms({"q"})).has_value());

  auto maps = map_models(g);
  CHECK(maps == std::set<std::set<Atom>>{atoms({"p", "q"})});

  ModelTable t = probability_table(g);
  double z = std::exp(11.0) + std::exp(5.0) + std::exp(15.0) + std::exp(-14.0) +
             std::exp(-4.0);
  for (const auto& e : t.entries) {
    auto r = weight(g, e.interpretation);
    CHECK(e.probability == doctest::Approx(std::exp(r->soft) / z).epsilon(1e-9));
  }
  CHECK(t.entries.front().interpretation == atoms({"p", "q"}));
}

TEST_CASE("hard rules on the second example") {
  GroundProgram g = ground(parse_lpmln(kExample2));
  ModelTable t = probability_table(g);
  CHECK(t.k_max == 3);
  REQUIRE(t.entries.size() == 3);
  double z = 1.0 + std::exp(2.0) + std::exp(1.0);
  Term jo = Term::sym("jo");
  std::set<Atom> rb{Atom("bird", {jo}), Atom("residentBird", {jo})};
  std::set<Atom> mb{Atom("bird", {jo}), Atom("migratoryBird", {jo})};
  for (const auto& e : t.entries) {
    double expect = e.interpretation == rb   ? std::exp(2.0) / z
                    : e.interpretation == mb ? std::exp(1.0) / z
                                             : 1.0 / z;
    CHECK(e.probability == doctest::Approx(expect).epsilon(1e-9));
  }
  double m = marginal(g, f_atom(Atom("bird", {Term::sym("jo")})));
  CHECK(m == doctest::Approx((std::exp(2.0) + std::exp(1.0)) / z).epsilon(1e-9));
}

TEST_CASE("rule view") {
  GroundProgram g = ground(parse_lpmln("1 :: p ; q :- r, not s.\n2 :: (p -> (q | r)).\n"));
  auto v = rule_view(g.rules[0].formula);
  REQUIRE(v.has_value());
  CHECK(v->head.size() == 2);
  CHECK(v->body_lits.size() == 2);
  CHECK(rule_view(g.rules[1].formula).has_value());
  GroundProgram g2 = ground(parse_lpmln("1 :: (not (p | q)).\n"));
  CHECK_FALSE(rule_view(g2.rules[0].formula).has_value());
}

TEST_CASE("reserved predicate is rejected") {
  GroundProgram g = ground(parse_lpmln("1 :: unsat(1).\n"));
  CHECK_THROWS_AS(lpmln2wc(g), RuleFormError);
  CHECK_THROWS_AS(lpmln2wc_pnt_rule(g), RuleFormError);
}

TEST_CASE("aspcore2 emission") {
  GroundProgram g = ground(parse_lpmln(kExample2));
  std::string text = emit_aspcore2(lpmln2wc_rule_clingo(g, true), 1000);
  CHECK(text.find(":~ residentBird(jo), migratoryBird(jo). [1000@1]") != std::string::npos);
  CHECK(text.find("[-2000@0]") == std::string::npos);  // soft rules become unsat penalties
  std::string wc = emit_aspcore2(lpmln2wc(g, true), 1000);
  CHECK(wc.find("bird(jo) :- residentBird(jo).") != std::string::npos);
  CHECK(wc.find("[-2000@0]") != std::string::npos);
}

TEST_CASE("phi extension marks falsified rules") {
  GroundProgram g = ground(parse_lpmln(kExample1));
  auto t = lpmln2wc_pnt_rule(g);
  auto ext = phi_extend(g, atoms({"p", "q"}), t);
  CHECK(ext.count(Atom("unsat", {Term::integer(2)})));   // r :- p is falsified
  CHECK(ext.count(Atom("unsat", {Term::integer(4)})));   // bot :- not r is falsified
  CHECK_FALSE(ext.count(Atom("unsat", {Term::integer(1)})));
}

TEST_CASE("plog parsing and validation errors") {
  CHECK_THROWS_AS(plog::parse_plog("sort d = {1}.\nattr a : -> d.\npr[r9](a = 1) = 1/2.\n"),
                  ParseError);  // unknown rule
  CHECK_THROWS_AS(
      plog::parse_plog("sort d = {1}.\nattr a : -> d.\n[r1] random(a).\npr[r1](a = 1) = 3/2.\n"),
      ParseError);  // probability outside [0, 1]
  CHECK_THROWS_AS(plog::parse_plog("sort d = {1}.\nattr a : -> d.\na = 7.\n"),
                  ParseError);  // value outside the range
  CHECK_THROWS_AS(plog::parse_plog("sort d = {1}.\nattr a : -> d.\nb = 1.\n"),
                  ParseError);  // unknown attribute
}

TEST_CASE("plog dice") {
  const char* src = R"(
sort score = {1, 2, 3, 4, 5, 6}.
attr roll : -> score.
[r1] random(roll).
pr[r1](roll = 6) = 1/4.
)";
  plog::PlogProgram p = plog::parse_plog(src);
  CHECK(plog::validate_conditions(p).empty());
  auto worlds = plog::possible_worlds(p);
  REQUIRE(worlds.size() == 6);
  for (const auto& w : worlds) {
    REQUIRE(w.happen.size() == 1);
    bool six = w.happen[0].value == Term::integer(6);
    CHECK(w.mu_hat == (six ? Rational(1, 4) : Rational(3, 20)));
  }
  auto rep = plog::crosscheck(p);
  CHECK(rep.bijection_ok);
  CHECK(rep.worlds == 6);
  CHECK(rep.max_deviation < 1e-9);
}

TEST_CASE("plog observations condition the distribution") {
  const char* src = R"(
sort score = {1, 2, 3}.
attr roll : -> score.
[r1] random(roll).
obs(roll != 1).
)";
  auto worlds = plog::possible_worlds(plog::parse_plog(src));
  REQUIRE(worlds.size() == 2);
  for (const auto& w : worlds) CHECK(w.mu == doctest::Approx(0.5));
}

TEST_CASE("plog do overrides random selection") {
  const char* src = R"(
sort score = {1, 2, 3}.
attr roll : -> score.
[r1] random(roll).
do(roll = 2).
)";
  auto worlds = plog::possible_worlds(plog::parse_plog(src));
  REQUIRE(worlds.size() == 1);
  CHECK(worlds[0].world.count(plog::eq_atom("roll", {}, Term::integer(2))));
  CHECK(worlds[0].happen.empty());  // intervened, no random factor
  CHECK(worlds[0].mu == doctest::Approx(1.0));
}

TEST_CASE("plog condition violations are reported") {
  const char* two_rules = R"(
sort d = {1, 2}.
attr a : -> d.
[r1] random(a).
[r2] random(a).
)";
  auto v1 = plog::validate_conditions(plog::parse_plog(two_rules));
  REQUIRE_FALSE(v1.empty());
  CHECK(v1.front().condition == 1);

  const char* two_prs = R"(
sort d = {1, 2}.
attr a : -> d.
[r1] random(a).
pr[r1](a = 1) = 1/2.
pr[r1](a = 1) = 1/3.
)";
  auto v2 = plog::validate_conditions(plog::parse_plog(two_prs));
  REQUIRE_FALSE(v2.empty());
  CHECK(v2.front().condition == 2);
}

TEST_CASE("monty hall reference values") {
  plog::PlogProgram p = plog::parse_plog(kMonty);
  CHECK(plog::validate_conditions(p).empty());
  auto worlds = plog::possible_worlds(p);
  REQUIRE(worlds.size() == 3);
  std::map<Term, const plog::WorldReport*> by_prize;
  for (const auto& w : worlds)
    for (const auto& h : w.happen)
      if (h.target.attr == "prize") by_prize[h.value] = &w;
  REQUIRE(by_prize.size() == 3);
  CHECK(by_prize.at(Term::integer(1))->mu_hat == Rational(1, 40));
  CHECK(by_prize.at(Term::integer(3))->mu_hat == Rational(1, 40));
  CHECK(by_prize.at(Term::integer(4))->mu_hat == Rational(1, 32));
  CHECK(by_prize.at(Term::integer(1))->mu == doctest::Approx(4.0 / 13.0).epsilon(1e-9));
  CHECK(by_prize.at(Term::integer(3))->mu == doctest::Approx(4.0 / 13.0).epsilon(1e-9));
  CHECK(by_prize.at(Term::integer(4))->mu == doctest::Approx(5.0 / 13.0).epsilon(1e-9));
}

TEST_CASE("plog translation prints and reparses") {
  LpmlnProgram t = plog::plog2lpmln(plog::parse_plog(R"(
sort d = {1, 2}.
attr a : -> d.
[r1] random(a).
pr[r1](a = 1) = 1/3.
)"));
  std::string printed = print_lpmln(t);
  LpmlnProgram back = parse_lpmln(printed);
  REQUIRE(back.rules.size() == t.rules.size());
  for (std::size_t i = 0; i < t.rules.size(); ++i)
    CHECK(formula_equal(t.rules[i].formula, back.rules[i].formula));
}

TEST_CASE("plog clingo emission") {
  std::string text = plog::emit_clingo(plog::parse_plog(kMonty), 1000);
  CHECK(text.find(":~ not assPr_r1_1(prize,1). [") != std::string::npos);
  CHECK(text.find("#count{") != std::string::npos);
  CHECK(text.find("#sum{") != std::string::npos);
  CHECK(text.find("rat(") != std::string::npos);
}
