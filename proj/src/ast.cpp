#include "lpmln/ast.hpp"

namespace lpmln {

std::string cmp_op_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace {
FormulaPtr make(FKind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}
}  // namespace

FormulaPtr f_bot() {
  static const FormulaPtr f = make(FKind::Bot);
  return f;
}

FormulaPtr f_top() {
  static const FormulaPtr f = make(FKind::Top);
  return f;
}

FormulaPtr f_atom(Atom a) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::AtomRef;
  f->atom = std::move(a);
  return f;
}

FormulaPtr f_not(FormulaPtr g) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Not;
  f->a = std::move(g);
  return f;
}

namespace {
FormulaPtr binary(FKind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}
}  // namespace

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return binary(FKind::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return binary(FKind::Or, std::move(a), std::move(b)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return binary(FKind::Implies, std::move(a), std::move(b));
}

FormulaPtr f_cmp(Term lhs, CmpOp op, Term rhs) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Cmp;
  f->lhs = std::move(lhs);
  f->op = op;
  f->rhs = std::move(rhs);
  return f;
}

FormulaPtr f_count(Term target, std::vector<CountItem> items) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Count;
  f->lhs = std::move(target);
  f->count_items = std::move(items);
  return f;
}

FormulaPtr f_sum(Term target, std::vector<SumItem> items) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Sum;
  f->lhs = std::move(target);
  f->sum_items = std::move(items);
  return f;
}

FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_top();
  FormulaPtr r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = f_and(r, fs[i]);
  return r;
}

FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_bot();
  FormulaPtr r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = f_or(r, fs[i]);
  return r;
}

FormulaPtr f_choice(FormulaPtr f) { return f_or(f, f_not(f)); }

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FKind::Bot:
    case FKind::Top:
      return true;
    case FKind::AtomRef:
      return a->atom == b->atom;
    case FKind::Not:
      return formula_equal(a->a, b->a);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return formula_equal(a->a, b->a) && formula_equal(a->b, b->b);
    case FKind::Cmp:
      return a->op == b->op && a->lhs == b->lhs && a->rhs == b->rhs;
    case FKind::Count: {
      if (a->lhs != b->lhs || a->count_items.size() != b->count_items.size()) return false;
      for (std::size_t i = 0; i < a->count_items.size(); ++i)
        if (a->count_items[i].binder != b->count_items[i].binder ||
            a->count_items[i].pattern != b->count_items[i].pattern)
          return false;
      return true;
    }
    case FKind::Sum: {
      if (a->lhs != b->lhs || a->sum_items.size() != b->sum_items.size()) return false;
      for (std::size_t i = 0; i < a->sum_items.size(); ++i)
        if (a->sum_items[i].weight != b->sum_items[i].weight ||
            a->sum_items[i].pattern != b->sum_items[i].pattern)
          return false;
      return true;
    }
  }
  return false;
}

bool formula_is_ground(const FormulaPtr& f) {
  if (!f) return true;
  switch (f->kind) {
    case FKind::Bot:
    case FKind::Top:
      return true;
    case FKind::AtomRef:
      return f->atom.is_ground();
    case FKind::Not:
      return formula_is_ground(f->a);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return formula_is_ground(f->a) && formula_is_ground(f->b);
    case FKind::Cmp:
      return f->lhs.is_ground() && f->rhs.is_ground();
    case FKind::Count:
    case FKind::Sum:
      return false;
  }
  return false;
}

bool formula_is_core_ground(const FormulaPtr& f) {
  if (!f) return true;
  switch (f->kind) {
    case FKind::Bot:
    case FKind::Top:
      return true;
    case FKind::AtomRef:
      return f->atom.is_ground();
    case FKind::Not:
      return formula_is_core_ground(f->a);
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      return formula_is_core_ground(f->a) && formula_is_core_ground(f->b);
    case FKind::Cmp:
    case FKind::Count:
    case FKind::Sum:
      return false;
  }
  return false;
}

void collect_atoms(const FormulaPtr& f, std::set<Atom>& out) {
  if (!f) return;
  switch (f->kind) {
    case FKind::Bot:
    case FKind::Top:
    case FKind::Cmp:
      return;
    case FKind::AtomRef:
      out.insert(f->atom);
      return;
    case FKind::Not:
      collect_atoms(f->a, out);
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      collect_atoms(f->a, out);
      collect_atoms(f->b, out);
      return;
    case FKind::Count:
      for (const auto& it : f->count_items) out.insert(it.pattern);
      return;
    case FKind::Sum:
      for (const auto& it : f->sum_items) out.insert(it.pattern);
      return;
  }
}

namespace {
void strictly_positive_rec(const FormulaPtr& f, bool strict, std::set<Atom>& out) {
  if (!f) return;
  switch (f->kind) {
    case FKind::Bot:
    case FKind::Top:
    case FKind::Cmp:
    case FKind::Count:
    case FKind::Sum:
      return;
    case FKind::AtomRef:
      if (strict) out.insert(f->atom);
      return;
    case FKind::Not:
      strictly_positive_rec(f->a, false, out);
      return;
    case FKind::And:
    case FKind::Or:
      strictly_positive_rec(f->a, strict, out);
      strictly_positive_rec(f->b, strict, out);
      return;
    case FKind::Implies:
      strictly_positive_rec(f->a, false, out);
      strictly_positive_rec(f->b, strict, out);
      return;
  }
}
}  // namespace

void collect_strictly_positive(const FormulaPtr& f, std::set<Atom>& out) {
  strictly_positive_rec(f, true, out);
}

}  // namespace lpmln
