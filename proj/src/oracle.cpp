#include "lpmln/oracle.hpp"

#include <functional>
#include <random>

namespace lpmln::oracle {

namespace {

bool osat(const FormulaPtr& f, const std::set<Atom>& I) {
  switch (f->kind) {
    case FKind::Bot:
      return false;
    case FKind::Top:
      return true;
    case FKind::AtomRef:
      return I.count(f->atom) > 0;
    case FKind::Not:
      return !osat(f->a, I);
    case FKind::And:
      return osat(f->a, I) && osat(f->b, I);
    case FKind::Or:
      return osat(f->a, I) || osat(f->b, I);
    case FKind::Implies:
      return !osat(f->a, I) || osat(f->b, I);
    default:
      throw std::runtime_error("oracle: non-ground formula");
  }
}

FormulaPtr oreduct(const FormulaPtr& f, const std::set<Atom>& I) {
  if (!osat(f, I)) return f_bot();
  switch (f->kind) {
    case FKind::Top:
    case FKind::AtomRef:
      return f;
    case FKind::Not:
      return f_implies(oreduct(f->a, I), f_bot());
    case FKind::And:
      return f_and(oreduct(f->a, I), oreduct(f->b, I));
    case FKind::Or:
      return f_or(oreduct(f->a, I), oreduct(f->b, I));
    case FKind::Implies:
      return f_implies(oreduct(f->a, I), oreduct(f->b, I));
    default:
      throw std::runtime_error("oracle: non-ground formula");
  }
}

std::set<Atom> from_mask(const std::vector<Atom>& atoms, std::uint32_t mask) {
  std::set<Atom> I;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if ((mask >> i) & 1u) I.insert(atoms[i]);
  return I;
}

}  // namespace

bool brute_satisfies(const FormulaPtr& f, const std::set<Atom>& I) { return osat(f, I); }

std::set<std::set<Atom>> brute_stable(const std::vector<FormulaPtr>& formulas,
                                      const std::set<Atom>& signature) {
  std::set<Atom> all = signature;
  for (const auto& f : formulas) collect_atoms(f, all);
  std::vector<Atom> atoms(all.begin(), all.end());
  if (atoms.size() > 16) throw CapError("oracle signature exceeds 16 atoms");
  const std::uint32_t total = 1u << atoms.size();
  std::set<std::set<Atom>> out;
  for (std::uint32_t im = 0; im < total; ++im) {
    std::set<Atom> I = from_mask(atoms, im);
    bool ok = true;
    for (const auto& f : formulas)
      if (!osat(f, I)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    std::vector<FormulaPtr> reducts;
    for (const auto& f : formulas) reducts.push_back(oreduct(f, I));
    bool minimal = true;
    for (std::uint32_t jm = 0; jm < total && minimal; ++jm) {
      if (jm == im || (jm & im) != jm) continue;  // proper subsets of I only
      std::set<Atom> J = from_mask(atoms, jm);
      bool sat_red = true;
      for (const auto& r : reducts)
        if (!osat(r, J)) {
          sat_red = false;
          break;
        }
      if (sat_red) minimal = false;
    }
    if (minimal) out.insert(std::move(I));
  }
  return out;
}

std::set<std::set<Atom>> brute_map_mln(const GroundProgram& prog, double eps) {
  std::set<Atom> all = prog.signature;
  for (const auto& r : prog.rules) collect_atoms(r.formula, all);
  std::vector<Atom> atoms(all.begin(), all.end());
  if (atoms.size() > 16) throw CapError("oracle signature exceeds 16 atoms");
  const std::uint32_t total = 1u << atoms.size();
  long long best_hard = -1;
  double best_soft = 0.0;
  std::vector<std::uint32_t> best;
  for (std::uint32_t im = 0; im < total; ++im) {
    std::set<Atom> I = from_mask(atoms, im);
    long long hard = 0;
    double soft = 0.0;
    for (const auto& r : prog.rules) {
      if (!osat(r.formula, I)) continue;
      if (r.weight.hard)
        ++hard;
      else
        soft += r.weight.soft;
    }
    if (best.empty() || hard > best_hard ||
        (hard == best_hard && soft > best_soft + eps)) {
      best_hard = hard;
      best_soft = soft;
      best.clear();
      best.push_back(im);
    } else if (hard == best_hard && soft >= best_soft - eps) {
      best.push_back(im);
    }
  }
  std::set<std::set<Atom>> out;
  for (auto im : best) out.insert(from_mask(atoms, im));
  return out;
}

GroundProgram gen_program(const GeneratorConfig& cfg) {
  std::mt19937 rng(cfg.seed);
  GroundProgram prog;
  std::vector<Atom> atoms;
  for (int i = 0; i < cfg.atom_budget; ++i) atoms.push_back(Atom("p" + std::to_string(i)));
  for (const auto& a : atoms) prog.signature.insert(a);
  if (cfg.atom_budget == 0) return prog;

  auto rand_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto rand_atom_f = [&]() { return f_atom(atoms[rand_int(0, cfg.atom_budget - 1)]); };

  std::function<FormulaPtr(int)> rand_formula = [&](int depth) -> FormulaPtr {
    if (depth <= 0 || rand_int(0, 3) == 0) {
      int pick = rand_int(0, 9);
      if (pick == 0) return f_bot();
      if (pick == 1) return f_top();
      return rand_atom_f();
    }
    switch (rand_int(0, 3)) {
      case 0:
        return f_not(rand_formula(depth - 1));
      case 1:
        return f_and(rand_formula(depth - 1), rand_formula(depth - 1));
      case 2:
        return f_or(rand_formula(depth - 1), rand_formula(depth - 1));
      default:
        return f_implies(rand_formula(depth - 1), rand_formula(depth - 1));
    }
  };

  auto rand_rule_form = [&]() -> FormulaPtr {
    std::vector<FormulaPtr> body;
    int nbody = rand_int(0, 3);
    for (int i = 0; i < nbody; ++i) {
      FormulaPtr lit = rand_atom_f();
      if (rand_int(0, 1)) lit = f_not(lit);
      body.push_back(lit);
    }
    FormulaPtr head;
    int nhead = rand_int(0, 2);
    if (nhead == 0) {
      head = f_bot();
    } else {
      std::vector<FormulaPtr> hs;
      for (int i = 0; i < nhead; ++i) hs.push_back(rand_atom_f());
      head = f_or_all(hs);
    }
    if (body.empty() && nhead > 0) return head;  // fact
    return f_implies(f_and_all(body), head);
  };

  int nrules = rand_int(1, cfg.rule_budget);
  for (int i = 0; i < nrules; ++i) {
    WeightedFormula wf;
    wf.index = i + 1;
    if (cfg.allow_hard &&
        std::uniform_real_distribution<double>(0, 1)(rng) < cfg.hard_probability)
      wf.weight = Weight::alpha();
    else
      wf.weight = Weight::value(rand_int(-cfg.weight_span, cfg.weight_span));
    wf.formula = cfg.rule_form_only ? rand_rule_form() : rand_formula(cfg.max_depth);
    prog.rules.push_back(std::move(wf));
    prog.source_index.push_back(i + 1);
  }
  for (const auto& r : prog.rules) collect_atoms(r.formula, prog.signature);
  return prog;
}

}  // namespace lpmln::oracle
