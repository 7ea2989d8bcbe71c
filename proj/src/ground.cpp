#include "lpmln/ground.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace lpmln {

namespace {

using Subst = std::map<std::string, Term>;

Term subst_term(const Term& t, const Subst& s) {
  if (t.kind != Term::Kind::Var) return t;
  auto it = s.find(t.name);
  return it != s.end() ? it->second : t;
}

Atom subst_atom(const Atom& a, const Subst& s) {
  Atom r(a.pred);
  r.args.reserve(a.args.size());
  for (const auto& t : a.args) r.args.push_back(subst_term(t, s));
  return r;
}

void collect_free_vars(const FormulaPtr& f, std::map<std::string, std::string>& vars) {
  if (!f) return;
  auto from_term = [&](const Term& t) {
    if (t.kind == Term::Kind::Var) vars.emplace(t.name, t.sort);
  };
  auto from_atom = [&](const Atom& a) {
    for (const auto& t : a.args) from_term(t);
  };
  switch (f->kind) {
    case FKind::Bot:
    case FKind::Top:
      return;
    case FKind::AtomRef:
      from_atom(f->atom);
      return;
    case FKind::Not:
      collect_free_vars(f->a, vars);
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      collect_free_vars(f->a, vars);
      collect_free_vars(f->b, vars);
      return;
    case FKind::Cmp:
      from_term(f->lhs);
      from_term(f->rhs);
      return;
    case FKind::Count: {
      from_term(f->lhs);
      for (const auto& it : f->count_items) {
        std::map<std::string, std::string> inner;
        for (const auto& t : it.pattern.args)
          if (t.kind == Term::Kind::Var) inner.emplace(t.name, t.sort);
        inner.erase(it.binder.name);
        vars.insert(inner.begin(), inner.end());
      }
      return;
    }
    case FKind::Sum:
      from_term(f->lhs);
      for (const auto& it : f->sum_items) from_atom(it.pattern);
      return;
  }
}

bool eval_cmp(const Term& l, CmpOp op, const Term& r) {
  if (l.is_numeric() && r.is_numeric()) {
    Rational a = l.numeric_value();
    Rational b = r.numeric_value();
    switch (op) {
      case CmpOp::Eq: return a == b;
      case CmpOp::Ne: return a != b;
      case CmpOp::Lt: return a < b;
      case CmpOp::Le: return a <= b;
      case CmpOp::Gt: return a > b;
      case CmpOp::Ge: return a >= b;
    }
  }
  if (l.kind == Term::Kind::Symbol && r.kind == Term::Kind::Symbol) {
    if (op == CmpOp::Eq) return l.name == r.name;
    if (op == CmpOp::Ne) return l.name != r.name;
    throw std::runtime_error("ordering comparison on symbols: " + l.str() + " " +
                             cmp_op_str(op) + " " + r.str());
  }
  throw std::runtime_error("comparison between incomparable terms: " + l.str() + " " +
                           cmp_op_str(op) + " " + r.str());
}

struct GroundCtx {
  const LpmlnProgram& prog;
  const GroundCaps& caps;
};

FormulaPtr process(const FormulaPtr& f, const Subst& s, const GroundCtx& ctx) {
  switch (f->kind) {
    case FKind::Bot:
    case FKind::Top:
      return f;
    case FKind::AtomRef: {
      Atom a = subst_atom(f->atom, s);
      if (!a.is_ground()) throw std::runtime_error("unsorted variable in atom " + a.str());
      return f_atom(std::move(a));
    }
    case FKind::Not:
      return f_not(process(f->a, s, ctx));
    case FKind::And:
      return f_and(process(f->a, s, ctx), process(f->b, s, ctx));
    case FKind::Or:
      return f_or(process(f->a, s, ctx), process(f->b, s, ctx));
    case FKind::Implies:
      return f_implies(process(f->a, s, ctx), process(f->b, s, ctx));
    case FKind::Cmp: {
      Term l = subst_term(f->lhs, s);
      Term r = subst_term(f->rhs, s);
      if (!l.is_ground() || !r.is_ground())
        throw std::runtime_error("unsorted variable in comparison");
      return eval_cmp(l, f->op, r) ? f_top() : f_bot();
    }
    case FKind::Count: {
      Term target = subst_term(f->lhs, s);
      if (!target.is_ground())
        throw std::runtime_error("count target must be ground after instantiation");
      std::vector<Atom> atoms;
      for (const auto& item : f->count_items) {
        auto sit = ctx.prog.sorts.find(item.binder.sort);
        if (sit == ctx.prog.sorts.end())
          throw std::runtime_error("undeclared sort for binder " + item.binder.name);
        for (const auto& val : sit->second) {
          Subst s2 = s;
          s2[item.binder.name] = val;
          Atom a = subst_atom(item.pattern, s2);
          if (!a.is_ground())
            throw std::runtime_error("unsorted variable in count pattern " + a.str());
          atoms.push_back(std::move(a));
        }
      }
      std::sort(atoms.begin(), atoms.end());
      atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
      if (!target.is_numeric() || !target.numeric_value().is_integer())
        throw std::runtime_error("count target must be an integer");
      return expand_count(atoms, target.numeric_value().num(), ctx.caps);
    }
    case FKind::Sum: {
      Term target = subst_term(f->lhs, s);
      if (!target.is_ground() || !target.is_numeric())
        throw std::runtime_error("sum target must be a ground number");
      std::vector<SumItem> items;
      for (const auto& item : f->sum_items) {
        SumItem g;
        g.weight = item.weight;
        g.pattern = subst_atom(item.pattern, s);
        if (!g.pattern.is_ground())
          throw std::runtime_error("unsorted variable in sum pattern " + g.pattern.str());
        items.push_back(std::move(g));
      }
      return expand_sum(items, target.numeric_value(), ctx.caps);
    }
  }
  return f;
}

}  // namespace

FormulaPtr expand_count(const std::vector<Atom>& atoms, std::int64_t m,
                        const GroundCaps& caps) {
  if (static_cast<int>(atoms.size()) > caps.max_agg_atoms)
    throw CapError("aggregate over " + std::to_string(atoms.size()) +
                   " atoms exceeds cap " + std::to_string(caps.max_agg_atoms));
  if (m < 0 || m > static_cast<std::int64_t>(atoms.size())) return f_bot();
  std::vector<FormulaPtr> disjuncts;
  const std::uint32_t n = static_cast<std::uint32_t>(atoms.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != m) continue;
    std::vector<FormulaPtr> conj;
    for (std::uint32_t i = 0; i < n; ++i) {
      FormulaPtr a = f_atom(atoms[i]);
      conj.push_back((mask >> i) & 1u ? a : f_not(a));
    }
    disjuncts.push_back(f_and_all(conj));
  }
  return f_or_all(disjuncts);
}

FormulaPtr expand_sum(const std::vector<SumItem>& items, const Rational& t,
                      const GroundCaps& caps) {
  // Merge duplicate atoms: a true atom contributes every weight attached to it.
  std::map<Atom, Rational> merged;
  for (const auto& it : items) {
    auto [pos, fresh] = merged.emplace(it.pattern, it.weight);
    if (!fresh) pos->second += it.weight;
  }
  std::vector<Atom> atoms;
  std::vector<Rational> weights;
  for (const auto& [a, w] : merged) {
    atoms.push_back(a);
    weights.push_back(w);
  }
  if (static_cast<int>(atoms.size()) > caps.max_agg_atoms)
    throw CapError("aggregate over " + std::to_string(atoms.size()) +
                   " atoms exceeds cap " + std::to_string(caps.max_agg_atoms));
  std::vector<FormulaPtr> disjuncts;
  const std::uint32_t n = static_cast<std::uint32_t>(atoms.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Rational sum(0);
    for (std::uint32_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) sum += weights[i];
    if (sum != t) continue;
    std::vector<FormulaPtr> conj;
    for (std::uint32_t i = 0; i < n; ++i) {
      FormulaPtr a = f_atom(atoms[i]);
      conj.push_back((mask >> i) & 1u ? a : f_not(a));
    }
    disjuncts.push_back(f_and_all(conj));
  }
  return f_or_all(disjuncts);
}

GroundProgram ground(const LpmlnProgram& program, const GroundCaps& caps) {
  GroundProgram out;
  GroundCtx ctx{program, caps};
  int next_index = 1;
  for (const auto& wf : program.rules) {
    std::map<std::string, std::string> vars;
    collect_free_vars(wf.formula, vars);
    std::vector<std::pair<std::string, const std::vector<Term>*>> domains;
    for (const auto& [name, sort] : vars) {
      auto it = program.sorts.find(sort);
      if (it == program.sorts.end())
        throw std::runtime_error("variable " + name + " has undeclared sort '" + sort + "'");
      domains.emplace_back(name, &it->second);
    }
    std::vector<std::size_t> idx(domains.size(), 0);
    while (true) {
      Subst s;
      for (std::size_t i = 0; i < domains.size(); ++i)
        s[domains[i].first] = (*domains[i].second)[idx[i]];
      WeightedFormula inst;
      inst.index = next_index++;
      inst.weight = wf.weight;
      inst.formula = process(wf.formula, s, ctx);
      out.rules.push_back(std::move(inst));
      out.source_index.push_back(wf.index);
      // Odometer over the variable domains.
      std::size_t i = 0;
      for (; i < domains.size(); ++i) {
        if (++idx[i] < domains[i].second->size()) break;
        idx[i] = 0;
      }
      if (i == domains.size()) break;
      if (domains.empty()) break;
    }
  }
  for (const auto& r : out.rules) collect_atoms(r.formula, out.signature);
  return out;
}

}  // namespace lpmln
