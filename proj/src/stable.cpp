#include "lpmln/stable.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lpmln {

Signature Signature::from(const std::set<Atom>& atoms) {
  Signature s;
  s.atoms.assign(atoms.begin(), atoms.end());
  for (int i = 0; i < static_cast<int>(s.atoms.size()); ++i) s.index[s.atoms[i]] = i;
  return s;
}

int Interp::count() const {
  int c = 0;
  for (auto w : w_) c += std::popcount(w);
  return c;
}

std::set<Atom> to_atoms(const Interp& I, const Signature& sig) {
  std::set<Atom> out;
  for (int i = 0; i < sig.size(); ++i)
    if (I.test(i)) out.insert(sig.atoms[i]);
  return out;
}

Interp from_atoms(const std::set<Atom>& atoms, const Signature& sig) {
  Interp I(sig.size());
  for (const auto& a : atoms) {
    int id = sig.id(a);
    if (id >= 0) I.set(id, true);
  }
  return I;
}

bool satisfies(const FormulaPtr& f, const Interp& I, const Signature& sig) {
  switch (f->kind) {
    case FKind::Bot:
      return false;
    case FKind::Top:
      return true;
    case FKind::AtomRef: {
      int id = sig.id(f->atom);
      return id >= 0 && I.test(id);
    }
    case FKind::Not:
      return !satisfies(f->a, I, sig);
    case FKind::And:
      return satisfies(f->a, I, sig) && satisfies(f->b, I, sig);
    case FKind::Or:
      return satisfies(f->a, I, sig) || satisfies(f->b, I, sig);
    case FKind::Implies:
      return !satisfies(f->a, I, sig) || satisfies(f->b, I, sig);
    default:
      throw std::runtime_error("satisfaction undefined for non-ground formula node");
  }
}

bool satisfies(const FormulaPtr& f, const std::set<Atom>& I) {
  switch (f->kind) {
    case FKind::Bot:
      return false;
    case FKind::Top:
      return true;
    case FKind::AtomRef:
      return I.count(f->atom) > 0;
    case FKind::Not:
      return !satisfies(f->a, I);
    case FKind::And:
      return satisfies(f->a, I) && satisfies(f->b, I);
    case FKind::Or:
      return satisfies(f->a, I) || satisfies(f->b, I);
    case FKind::Implies:
      return !satisfies(f->a, I) || satisfies(f->b, I);
    default:
      throw std::runtime_error("satisfaction undefined for non-ground formula node");
  }
}

FormulaPtr reduct(const FormulaPtr& f, const Interp& I, const Signature& sig) {
  if (!satisfies(f, I, sig)) return f_bot();
  switch (f->kind) {
    case FKind::Top:
    case FKind::AtomRef:
      return f;
    case FKind::Not:
      // not F is F -> bot; since I satisfies not F, F reduces to bot.
      return f_implies(f_bot(), f_bot());
    case FKind::And:
      return f_and(reduct(f->a, I, sig), reduct(f->b, I, sig));
    case FKind::Or:
      return f_or(reduct(f->a, I, sig), reduct(f->b, I, sig));
    case FKind::Implies:
      return f_implies(reduct(f->a, I, sig), reduct(f->b, I, sig));
    default:
      throw std::runtime_error("reduct undefined for non-ground formula node");
  }
}

FormulaPtr reduct(const FormulaPtr& f, const std::set<Atom>& I) {
  std::set<Atom> atoms;
  collect_atoms(f, atoms);
  for (const auto& a : I) atoms.insert(a);
  Signature sig = Signature::from(atoms);
  return reduct(f, from_atoms(I, sig), sig);
}

bool is_stable_relative(const std::vector<FormulaPtr>& formulas, const Interp& I,
                        const std::vector<int>& sigma_ids, const Signature& sig) {
  for (const auto& f : formulas)
    if (!satisfies(f, I, sig)) return false;
  std::vector<FormulaPtr> reducts;
  reducts.reserve(formulas.size());
  for (const auto& f : formulas) reducts.push_back(reduct(f, I, sig));
  std::vector<int> true_sigma;
  for (int id : sigma_ids)
    if (I.test(id)) true_sigma.push_back(id);
  const int k = static_cast<int>(true_sigma.size());
  if (k > 24)
    throw CapError("relative stability check over " + std::to_string(k) +
                   " true atoms exceeds cap");
  const std::uint32_t full = (k == 32 ? 0xffffffffu : (1u << k) - 1u);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    Interp J = I;
    for (int i = 0; i < k; ++i) J.set(true_sigma[i], (mask >> i) & 1u);
    bool sat_all = true;
    for (const auto& r : reducts)
      if (!satisfies(r, J, sig)) {
        sat_all = false;
        break;
      }
    if (sat_all) return false;
  }
  return true;
}

bool is_stable_relative(const std::vector<FormulaPtr>& formulas, const std::set<Atom>& I,
                        const std::set<Atom>& sigma, const Signature& sig) {
  std::vector<int> ids;
  for (const auto& a : sigma) {
    int id = sig.id(a);
    if (id >= 0) ids.push_back(id);
  }
  return is_stable_relative(formulas, from_atoms(I, sig), ids, sig);
}

namespace {

// Iterative Tarjan; returns component index per node, components emitted in
// dependency-first order (an edge u->v means u depends on v; v's component
// gets the smaller index).
std::vector<int> tarjan_scc(const std::vector<std::vector<int>>& adj, int& ncomp) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> indexv(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0;
  ncomp = 0;
  struct Frame {
    int v;
    std::size_t child;
  };
  for (int start = 0; start < n; ++start) {
    if (indexv[start] != -1) continue;
    std::vector<Frame> frames{{start, 0}};
    indexv[start] = low[start] = next_index++;
    stack.push_back(start);
    on_stack[start] = 1;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      if (fr.child < adj[fr.v].size()) {
        int w = adj[fr.v][fr.child++];
        if (indexv[w] == -1) {
          indexv[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.v] = std::min(low[fr.v], indexv[w]);
        }
      } else {
        if (low[fr.v] == indexv[fr.v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = ncomp;
            if (w == fr.v) break;
          }
          ++ncomp;
        }
        int v = fr.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return comp;
}

std::set<Interp> enumerate_splitting(const std::vector<FormulaPtr>& formulas,
                                     const Signature& sig, const EnumCaps& caps) {
  const int n = sig.size();
  std::vector<std::vector<int>> adj(n);
  std::vector<std::vector<int>> formula_atoms(formulas.size());
  for (std::size_t fi = 0; fi < formulas.size(); ++fi) {
    std::set<Atom> heads, all;
    collect_strictly_positive(formulas[fi], heads);
    collect_atoms(formulas[fi], all);
    std::vector<int> head_ids, all_ids;
    for (const auto& a : heads) head_ids.push_back(sig.id(a));
    for (const auto& a : all) all_ids.push_back(sig.id(a));
    formula_atoms[fi] = all_ids;
    for (int h : head_ids) {
      for (int h2 : head_ids)
        if (h != h2) adj[h].push_back(h2);
      for (int a : all_ids)
        if (a != h) adj[h].push_back(a);
    }
  }
  int ncomp = 0;
  std::vector<int> comp = tarjan_scc(adj, ncomp);
  std::vector<std::vector<int>> comp_atoms(ncomp);
  for (int i = 0; i < n; ++i) comp_atoms[comp[i]].push_back(i);
  std::vector<std::vector<FormulaPtr>> comp_formulas(ncomp);
  std::vector<FormulaPtr> constant_formulas;
  for (std::size_t fi = 0; fi < formulas.size(); ++fi) {
    if (formula_atoms[fi].empty()) {
      constant_formulas.push_back(formulas[fi]);
      continue;
    }
    int c = -1;
    for (int a : formula_atoms[fi]) c = std::max(c, comp[a]);
    comp_formulas[c].push_back(formulas[fi]);
  }

  std::vector<Interp> frontier{Interp(n)};
  for (int c = 0; c < ncomp; ++c) {
    const auto& q = comp_atoms[c];
    if (static_cast<int>(q.size()) > caps.max_component)
      throw CapError("component of " + std::to_string(q.size()) +
                     " atoms exceeds cap " + std::to_string(caps.max_component));
    const std::uint32_t nmask = 1u << q.size();
    const std::size_t total = frontier.size() * nmask;
    std::vector<char> keep(total, 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long t = 0; t < static_cast<long long>(total); ++t) {
      Interp cand = frontier[t >> q.size()];
      std::uint32_t mask = static_cast<std::uint32_t>(t) & (nmask - 1);
      for (std::size_t i = 0; i < q.size(); ++i) cand.set(q[i], (mask >> i) & 1u);
      if (is_stable_relative(comp_formulas[c], cand, q, sig)) keep[t] = 1;
    }
    std::vector<Interp> next;
    for (std::size_t t = 0; t < total; ++t) {
      if (!keep[t]) continue;
      Interp cand = frontier[t >> q.size()];
      std::uint32_t mask = static_cast<std::uint32_t>(t) & (nmask - 1);
      for (std::size_t i = 0; i < q.size(); ++i) cand.set(q[i], (mask >> i) & 1u);
      next.push_back(std::move(cand));
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  std::set<Interp> out;
  for (const auto& I : frontier) {
    bool ok = true;
    for (const auto& f : constant_formulas)
      if (!satisfies(f, I, sig)) {
        ok = false;
        break;
      }
    if (ok) out.insert(I);
  }
  return out;
}

std::set<Interp> enumerate_fallback(const std::vector<FormulaPtr>& formulas,
                                    const Signature& sig, const EnumCaps& caps) {
  const int n = sig.size();
  if (n > caps.max_atoms || n > 30)
    throw CapError("signature of " + std::to_string(n) + " atoms exceeds cap " +
                   std::to_string(caps.max_atoms));
  const std::uint32_t total = 1u << n;
  std::vector<char> keep(total, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (long long m = 0; m < static_cast<long long>(total); ++m) {
    const std::uint32_t mask = static_cast<std::uint32_t>(m);
    Interp I(n);
    for (int i = 0; i < n; ++i) I.set(i, (mask >> i) & 1u);
    bool sat_all = true;
    for (const auto& f : formulas)
      if (!satisfies(f, I, sig)) {
        sat_all = false;
        break;
      }
    if (!sat_all) continue;
    std::vector<FormulaPtr> reducts;
    reducts.reserve(formulas.size());
    for (const auto& f : formulas) reducts.push_back(reduct(f, I, sig));
    bool minimal = true;
    // Proper subsets of the true atoms.
    for (std::uint32_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
      Interp J(n);
      for (int i = 0; i < n; ++i) J.set(i, (sub >> i) & 1u);
      bool sat_red = true;
      for (const auto& r : reducts)
        if (!satisfies(r, J, sig)) {
          sat_red = false;
          break;
        }
      if (sat_red) {
        minimal = false;
        break;
      }
      if (sub == 0) break;
    }
    if (mask == 0) minimal = true;  // no proper subsets
    if (minimal) keep[m] = 1;
  }
  std::set<Interp> out;
  for (std::uint32_t m = 0; m < total; ++m) {
    if (!keep[m]) continue;
    Interp I(n);
    for (int i = 0; i < n; ++i) I.set(i, (m >> i) & 1u);
    out.insert(I);
  }
  return out;
}

}  // namespace

std::set<Interp> enumerate_stable(const std::vector<FormulaPtr>& formulas,
                                  const Signature& sig, const EnumCaps& caps,
                                  EnumStrategy strategy) {
  for (const auto& f : formulas)
    if (!formula_is_core_ground(f))
      throw std::runtime_error("enumerate_stable requires ground aggregate-free formulas");
  switch (strategy) {
    case EnumStrategy::Splitting:
      return enumerate_splitting(formulas, sig, caps);
    case EnumStrategy::Fallback:
      return enumerate_fallback(formulas, sig, caps);
    case EnumStrategy::Auto:
      try {
        return enumerate_splitting(formulas, sig, caps);
      } catch (const CapError&) {
        if (sig.size() <= caps.max_atoms) return enumerate_fallback(formulas, sig, caps);
        throw;
      }
  }
  return {};
}

std::set<std::set<Atom>> enumerate_stable_atoms(const std::vector<FormulaPtr>& formulas,
                                                const std::set<Atom>& signature,
                                                const EnumCaps& caps,
                                                EnumStrategy strategy) {
  std::set<Atom> atoms = signature;
  for (const auto& f : formulas) collect_atoms(f, atoms);
  Signature sig = Signature::from(atoms);
  std::set<std::set<Atom>> out;
  for (const auto& I : enumerate_stable(formulas, sig, caps, strategy))
    out.insert(to_atoms(I, sig));
  return out;
}

double penalty(const WcProgram& p, const std::set<Atom>& I, int level) {
  double sum = 0.0;
  for (const auto& wc : p.weak)
    if (wc.level == level && satisfies(wc.formula, I)) sum += wc.weight;
  return sum;
}

bool dominated(const WcProgram& p, const std::set<Atom>& I, const std::set<Atom>& I2,
               double eps) {
  std::set<int> levels;
  for (const auto& wc : p.weak) levels.insert(wc.level);
  for (int l : levels) {
    double pl = penalty(p, I, l);
    double pl2 = penalty(p, I2, l);
    if (pl2 < pl - eps) {
      bool higher_equal = true;
      for (int k : levels) {
        if (k <= l) continue;
        if (std::abs(penalty(p, I, k) - penalty(p, I2, k)) > eps) {
          higher_equal = false;
          break;
        }
      }
      if (higher_equal) return true;
    }
  }
  return false;
}

std::set<std::set<Atom>> optimal_models(const WcProgram& p, const EnumCaps& caps,
                                        double eps, EnumStrategy strategy) {
  auto stable = enumerate_stable_atoms(p.base, p.signature, caps, strategy);
  std::set<std::set<Atom>> out;
  for (const auto& I : stable) {
    bool dom = false;
    for (const auto& J : stable) {
      if (I == J) continue;
      if (dominated(p, I, J, eps)) {
        dom = true;
        break;
      }
    }
    if (!dom) out.insert(I);
  }
  return out;
}

}  // namespace lpmln
