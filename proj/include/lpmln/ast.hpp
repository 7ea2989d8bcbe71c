#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpmln/rational.hpp"

namespace lpmln {

struct Term {
  enum class Kind { Symbol, Int, Rat, Var };

  Kind kind = Kind::Symbol;
  std::string name;  // Symbol / Var
  std::string sort;  // Var only
  std::int64_t ival = 0;
  Rational rat;

  static Term sym(std::string s) {
    Term t;
    t.kind = Kind::Symbol;
    t.name = std::move(s);
    return t;
  }
  static Term integer(std::int64_t v) {
    Term t;
    t.kind = Kind::Int;
    t.ival = v;
    return t;
  }
  // Integral rationals are canonicalized to Int so 2/1 == 2.
  static Term rational(const Rational& r) {
    if (r.is_integer()) return integer(r.num());
    Term t;
    t.kind = Kind::Rat;
    t.rat = r;
    return t;
  }
  static Term var(std::string n, std::string s) {
    Term t;
    t.kind = Kind::Var;
    t.name = std::move(n);
    t.sort = std::move(s);
    return t;
  }

  bool is_ground() const { return kind != Kind::Var; }
  bool is_numeric() const { return kind == Kind::Int || kind == Kind::Rat; }
  Rational numeric_value() const {
    return kind == Kind::Int ? Rational(ival) : rat;
  }

  std::string str() const {
    switch (kind) {
      case Kind::Symbol:
      case Kind::Var:
        return name;
      case Kind::Int:
        return std::to_string(ival);
      case Kind::Rat:
        return rat.str();
    }
    return {};
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Symbol:
        return a.name == b.name;
      case Kind::Var:
        return a.name == b.name && a.sort == b.sort;
      case Kind::Int:
        return a.ival == b.ival;
      case Kind::Rat:
        return a.rat == b.rat;
    }
    return false;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    switch (a.kind) {
      case Kind::Symbol:
        return a.name < b.name;
      case Kind::Var:
        return a.name != b.name ? a.name < b.name : a.sort < b.sort;
      case Kind::Int:
        return a.ival < b.ival;
      case Kind::Rat:
        return a.rat < b.rat;
    }
    return false;
  }
};

struct Atom {
  std::string pred;
  std::vector<Term> args;

  Atom() = default;
  explicit Atom(std::string p, std::vector<Term> a = {})
      : pred(std::move(p)), args(std::move(a)) {}

  bool is_ground() const {
    for (const auto& t : args)
      if (!t.is_ground()) return false;
    return true;
  }

  std::string str() const {
    if (args.empty()) return pred;
    std::string s = pred + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += ", ";
      s += args[i].str();
    }
    return s + ")";
  }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.args < b.args;
  }
};

enum class FKind { Bot, Top, AtomRef, Not, And, Or, Implies, Cmp, Count, Sum };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string cmp_op_str(CmpOp op);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct CountItem {
  Term binder;  // variable
  Atom pattern;
};

struct SumItem {
  Rational weight;
  Atom pattern;
};

struct Formula {
  FKind kind = FKind::Bot;
  Atom atom;         // AtomRef
  FormulaPtr a, b;   // Not: a; And/Or/Implies: a, b
  CmpOp op = CmpOp::Eq;
  Term lhs, rhs;     // Cmp operands; aggregate target in lhs
  std::vector<CountItem> count_items;
  std::vector<SumItem> sum_items;
};

FormulaPtr f_bot();
FormulaPtr f_top();
FormulaPtr f_atom(Atom a);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_cmp(Term lhs, CmpOp op, Term rhs);
FormulaPtr f_count(Term target, std::vector<CountItem> items);
FormulaPtr f_sum(Term target, std::vector<SumItem> items);

// Left-associative conjunction/disjunction of a list; empty list gives Top/Bot.
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);
FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs);

// Choice formula F | not F.
FormulaPtr f_choice(FormulaPtr f);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
bool formula_is_ground(const FormulaPtr& f);
// True when the formula contains no Cmp/Count/Sum node and no variable.
bool formula_is_core_ground(const FormulaPtr& f);
void collect_atoms(const FormulaPtr& f, std::set<Atom>& out);
// Atoms with a strictly positive occurrence (not inside an implication
// antecedent or a negation).
void collect_strictly_positive(const FormulaPtr& f, std::set<Atom>& out);

struct Weight {
  bool hard = false;
  double soft = 0.0;

  static Weight alpha() {
    Weight w;
    w.hard = true;
    return w;
  }
  static Weight value(double v) {
    Weight w;
    w.soft = v;
    return w;
  }
  friend bool operator==(const Weight& a, const Weight& b) {
    return a.hard == b.hard && (a.hard || a.soft == b.soft);
  }
};

struct WeightedFormula {
  int index = 0;  // 1-based, source order
  Weight weight;
  FormulaPtr formula;
};

struct LpmlnProgram {
  std::map<std::string, std::vector<Term>> sorts;
  std::map<std::string, std::string> var_sorts;
  std::vector<WeightedFormula> rules;
};

struct GroundProgram {
  std::vector<WeightedFormula> rules;  // index = position + 1
  std::vector<int> source_index;       // per rule, index in the source program
  std::set<Atom> signature;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

class CapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconsistentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RuleFormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lpmln
