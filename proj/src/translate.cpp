#include "lpmln/translate.hpp"

#include <cmath>
#include <sstream>

namespace lpmln {

namespace {

bool is_literal(const FormulaPtr& f) {
  if (f->kind == FKind::AtomRef || f->kind == FKind::Top) return true;
  return f->kind == FKind::Not && f->a->kind == FKind::AtomRef;
}

bool flatten_conj(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == FKind::And) return flatten_conj(f->a, out) && flatten_conj(f->b, out);
  if (!is_literal(f)) return false;
  if (f->kind != FKind::Top) out.push_back(f);
  return true;
}

bool flatten_disj_atoms(const FormulaPtr& f, std::vector<Atom>& out) {
  if (f->kind == FKind::Or)
    return flatten_disj_atoms(f->a, out) && flatten_disj_atoms(f->b, out);
  if (f->kind != FKind::AtomRef) return false;
  out.push_back(f->atom);
  return true;
}

Atom unsat_atom(int index) { return Atom("unsat", {Term::integer(index)}); }

void reject_reserved_unsat(const GroundProgram& prog) {
  for (const auto& a : prog.signature)
    if (a.pred == "unsat")
      throw RuleFormError("input program uses the reserved predicate 'unsat'");
}

std::set<Atom> source_signature(const GroundProgram& prog) {
  std::set<Atom> sig = prog.signature;
  for (const auto& r : prog.rules) collect_atoms(r.formula, sig);
  return sig;
}

}  // namespace

std::optional<RuleView> rule_view(const FormulaPtr& f) {
  RuleView v;
  if (f->kind == FKind::Implies) {
    if (f->b->kind != FKind::Bot && !flatten_disj_atoms(f->b, v.head)) return std::nullopt;
    if (!flatten_conj(f->a, v.body_lits)) return std::nullopt;
    v.body = f->a;
    return v;
  }
  // Fact forms: atom, disjunction of atoms.
  if (f->kind == FKind::AtomRef || f->kind == FKind::Or) {
    if (!flatten_disj_atoms(f, v.head)) return std::nullopt;
    v.body = f_top();
    return v;
  }
  if (f->kind == FKind::Bot) {
    v.body = f_top();
    return v;
  }
  return std::nullopt;
}

TranslationOutput lpmln2wc(const GroundProgram& prog, bool strict_hard) {
  reject_reserved_unsat(prog);
  TranslationOutput out;
  out.mode = strict_hard ? TranslationMode::WcStrictHard : TranslationMode::Wc;
  out.wc.signature = source_signature(prog);
  for (const auto& r : prog.rules) {
    out.wc.base.push_back(strict_hard && r.weight.hard ? r.formula : f_choice(r.formula));
    WeakConstraint wc;
    wc.formula = r.formula;
    if (r.weight.hard) {
      wc.weight = -1.0;
      wc.level = 1;
    } else {
      wc.weight = -r.weight.soft;
      wc.level = 0;
    }
    out.wc.weak.push_back(std::move(wc));
  }
  return out;
}

TranslationOutput lpmln2wc_pnt(const GroundProgram& prog) {
  reject_reserved_unsat(prog);
  TranslationOutput out;
  out.mode = TranslationMode::Pnt;
  out.wc.signature = source_signature(prog);
  for (const auto& r : prog.rules) {
    out.wc.base.push_back(f_choice(r.formula));
    WeakConstraint wc;
    wc.formula = f_not(r.formula);
    if (r.weight.hard) {
      wc.weight = 1.0;
      wc.level = 1;
    } else {
      wc.weight = r.weight.soft;
      wc.level = 0;
    }
    out.wc.weak.push_back(std::move(wc));
  }
  return out;
}

TranslationOutput lpmln2wc_pnt_rule(const GroundProgram& prog) {
  reject_reserved_unsat(prog);
  TranslationOutput out;
  out.mode = TranslationMode::PntRule;
  out.wc.signature = source_signature(prog);
  for (const auto& r : prog.rules) {
    Atom u = unsat_atom(r.index);
    out.unsat_map[r.index] = u;
    out.wc.signature.insert(u);
    out.wc.base.push_back(f_implies(f_not(r.formula), f_atom(u)));
    out.wc.base.push_back(f_implies(f_not(f_atom(u)), r.formula));
    WeakConstraint wc;
    wc.formula = f_atom(u);
    if (r.weight.hard) {
      wc.weight = 1.0;
      wc.level = 1;
    } else {
      wc.weight = r.weight.soft;
      wc.level = 0;
    }
    out.wc.weak.push_back(std::move(wc));
  }
  return out;
}

TranslationOutput lpmln2wc_rule_clingo(const GroundProgram& prog, bool simplify_constraints) {
  reject_reserved_unsat(prog);
  TranslationOutput out;
  out.mode = simplify_constraints ? TranslationMode::ClingoSimplified : TranslationMode::Clingo;
  out.wc.signature = source_signature(prog);
  for (const auto& r : prog.rules) {
    auto v = rule_view(r.formula);
    if (!v)
      throw RuleFormError("rule " + std::to_string(r.index) +
                          " is not in rule form: " + "head must be atoms or bot, body a "
                          "conjunction of literals");
    const double w = r.weight.hard ? 1.0 : r.weight.soft;
    const int level = r.weight.hard ? 1 : 0;
    if (simplify_constraints && v->head.empty()) {
      WeakConstraint wc;
      wc.formula = v->body;
      wc.weight = w;
      wc.level = level;
      out.wc.weak.push_back(std::move(wc));
      continue;
    }
    Atom u = unsat_atom(r.index);
    out.unsat_map[r.index] = u;
    out.wc.signature.insert(u);
    // unsat(i) <- Body, not Head.
    FormulaPtr unsat_body = v->body;
    for (const auto& h : v->head) unsat_body = f_and(unsat_body, f_not(f_atom(h)));
    out.wc.base.push_back(f_implies(unsat_body, f_atom(u)));
    // Head <- Body, not unsat(i).
    std::vector<FormulaPtr> head_fs;
    for (const auto& h : v->head) head_fs.push_back(f_atom(h));
    out.wc.base.push_back(
        f_implies(f_and(v->body, f_not(f_atom(u))), f_or_all(head_fs)));
    WeakConstraint wc;
    wc.formula = f_atom(u);
    wc.weight = w;
    wc.level = level;
    out.wc.weak.push_back(std::move(wc));
  }
  return out;
}

TranslationOutput mln2wc(const GroundProgram& prog) {
  TranslationOutput out = lpmln2wc(prog, false);
  out.mode = TranslationMode::Mln;
  for (const auto& a : source_signature(prog)) out.wc.base.push_back(f_choice(f_atom(a)));
  return out;
}

std::set<Atom> phi_extend(const GroundProgram& prog, const std::set<Atom>& I,
                          const TranslationOutput& t) {
  std::set<Atom> out = I;
  for (const auto& r : prog.rules) {
    auto it = t.unsat_map.find(r.index);
    if (it == t.unsat_map.end()) continue;
    if (!satisfies(r.formula, I)) out.insert(it->second);
  }
  return out;
}

namespace {

std::string term_text(const Term& t) { return t.str(); }

std::string atom_text(const Atom& a) {
  if (a.args.empty()) return a.pred;
  std::string s = a.pred + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += term_text(a.args[i]);
  }
  return s + ")";
}

std::string literal_text(const FormulaPtr& f) {
  if (f->kind == FKind::AtomRef) return atom_text(f->atom);
  if (f->kind == FKind::Not && f->a->kind == FKind::AtomRef)
    return "not " + atom_text(f->a->atom);
  throw RuleFormError("weak constraint formula is not a conjunction of literals");
}

// Recognizes the F | not F shape produced by f_choice.
const FormulaPtr* choice_inner(const FormulaPtr& f) {
  if (f->kind == FKind::Or && f->b->kind == FKind::Not &&
      formula_equal(f->a, f->b->a))
    return &f->a;
  return nullptr;
}

// Collects the literal conjunction for a weak constraint. Rule-form formulas
// are charged through their violation condition (body plus negated head) with
// the weight flipped; penalties shift by a per-level constant only, so the
// optimal models are unchanged.
bool wc_literals(const FormulaPtr& f, std::vector<FormulaPtr>& lits, bool& flip) {
  flip = false;
  if (flatten_conj(f, lits)) return true;
  lits.clear();
  const FormulaPtr* g = &f;
  if (f->kind == FKind::Not)
    g = &f->a;
  else
    flip = true;
  auto v = rule_view(*g);
  if (!v) return false;
  lits = v->body_lits;
  for (const auto& h : v->head) lits.push_back(f_not(f_atom(h)));
  return true;
}

long long scaled_weight(double w, long long scale) {
  double scaled = static_cast<double>(scale) * w;
  long long r = std::llround(scaled);
  if (std::llabs(r) > (1ll << 31))
    throw std::runtime_error("scaled weight magnitude exceeds 2^31");
  return r;
}

}  // namespace

std::string emit_aspcore2(const TranslationOutput& t, long long scale) {
  if (scale <= 0) throw std::runtime_error("scale must be positive");
  std::ostringstream out;
  out << "% weak constraint weights scaled by " << scale << "\n";
  for (const auto& f : t.wc.base) {
    if (const FormulaPtr* inner = choice_inner(f)) {
      auto v = rule_view(*inner);
      if (!v) throw RuleFormError("choice base formula is not in rule form");
      if (v->head.empty()) continue;  // choice over a constraint is a tautology
      if (v->head.size() > 1)
        throw RuleFormError("choice over a disjunctive head has no aspcore2 form");
      std::string line = "{" + atom_text(v->head[0]) + "}";
      if (!v->body_lits.empty()) {
        line += " :- ";
        for (std::size_t i = 0; i < v->body_lits.size(); ++i) {
          if (i) line += ", ";
          line += literal_text(v->body_lits[i]);
        }
      }
      out << line << ".\n";
      continue;
    }
    auto v = rule_view(f);
    if (!v) throw RuleFormError("base formula is not in rule form");
    std::string line;
    for (std::size_t i = 0; i < v->head.size(); ++i) {
      if (i) line += " ; ";
      line += atom_text(v->head[i]);
    }
    if (!v->body_lits.empty() || v->head.empty()) {
      line += line.empty() ? ":- " : " :- ";
      if (v->body_lits.empty()) line += "#true";
      for (std::size_t i = 0; i < v->body_lits.size(); ++i) {
        if (i) line += ", ";
        line += literal_text(v->body_lits[i]);
      }
    }
    out << line << ".\n";
  }
  for (const auto& wc : t.wc.weak) {
    std::vector<FormulaPtr> lits;
    bool flip = false;
    if (!wc_literals(wc.formula, lits, flip))
      throw RuleFormError("weak constraint formula is not a conjunction of literals");
    out << ":~ ";
    if (lits.empty()) out << "#true";
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i) out << ", ";
      out << literal_text(lits[i]);
    }
    double w = flip ? -wc.weight : wc.weight;
    out << ". [" << scaled_weight(w, scale) << "@" << wc.level << "]\n";
  }
  return out.str();
}

}  // namespace lpmln
