#include "lpmln/engine.hpp"

#include <algorithm>
#include <cmath>

namespace lpmln {

namespace {

std::vector<FormulaPtr> choice_program(const GroundProgram& prog) {
  std::vector<FormulaPtr> fs;
  fs.reserve(prog.rules.size());
  for (const auto& r : prog.rules) fs.push_back(f_choice(r.formula));
  return fs;
}

WeightPair weight_unchecked(const GroundProgram& prog, const std::set<Atom>& I) {
  WeightPair w;
  for (const auto& r : prog.rules) {
    if (!satisfies(r.formula, I)) continue;
    if (r.weight.hard)
      ++w.hard;
    else
      w.soft += r.weight.soft;
  }
  return w;
}

long long hard_count(const GroundProgram& prog) {
  long long n = 0;
  for (const auto& r : prog.rules)
    if (r.weight.hard) ++n;
  return n;
}

}  // namespace

std::set<std::set<Atom>> sm_set(const GroundProgram& prog, const EnumCaps& caps,
                                EnumStrategy strategy) {
  return enumerate_stable_atoms(choice_program(prog), prog.signature, caps, strategy);
}

std::optional<WeightPair> weight(const GroundProgram& prog, const std::set<Atom>& I) {
  // I is in SM[prog] iff I is stable for the rules it satisfies.
  std::set<Atom> atoms = prog.signature;
  for (const auto& a : I) atoms.insert(a);
  Signature sig = Signature::from(atoms);
  std::vector<FormulaPtr> satisfied;
  for (const auto& r : prog.rules)
    if (satisfies(r.formula, I)) satisfied.push_back(r.formula);
  std::vector<int> sigma(sig.size());
  for (int i = 0; i < sig.size(); ++i) sigma[i] = i;
  if (!is_stable_relative(satisfied, from_atoms(I, sig), sigma, sig)) return std::nullopt;
  return weight_unchecked(prog, I);
}

std::pair<std::set<std::set<Atom>>, long long> probabilistic_candidates(
    const GroundProgram& prog, const EnumCaps& caps, EnumStrategy strategy) {
  const long long nhard = hard_count(prog);
  // Hard rules as strict formulas, soft rules as choices: stable models of
  // this program are exactly the SM members satisfying every hard rule.
  std::vector<FormulaPtr> fs;
  fs.reserve(prog.rules.size());
  for (const auto& r : prog.rules)
    fs.push_back(r.weight.hard ? r.formula : f_choice(r.formula));
  auto strict = enumerate_stable_atoms(fs, prog.signature, caps, strategy);
  if (!strict.empty() || nhard == 0) return {std::move(strict), nhard};
  // Hard rules jointly unsatisfiable in SM: fall back to the full set.
  auto all = sm_set(prog, caps, strategy);
  if (all.empty()) throw InconsistentError("inconsistent program: SM is empty");
  long long k_max = 0;
  std::map<const std::set<Atom>*, long long> ks;
  bool first = true;
  for (const auto& I : all) {
    long long k = weight_unchecked(prog, I).hard;
    ks[&I] = k;
    if (first || k > k_max) k_max = k;
    first = false;
  }
  std::set<std::set<Atom>> best;
  for (const auto& I : all)
    if (ks[&I] == k_max) best.insert(I);
  return {std::move(best), k_max};
}

ModelTable probability_table(const GroundProgram& prog, const EnumCaps& caps,
                             bool include_all, EnumStrategy strategy) {
  ModelTable table;
  std::set<std::set<Atom>> top;
  std::vector<ModelEntry> extra;
  if (include_all) {
    auto all = sm_set(prog, caps, strategy);
    if (all.empty()) throw InconsistentError("inconsistent program: SM is empty");
    bool first = true;
    for (const auto& I : all) {
      long long k = weight_unchecked(prog, I).hard;
      if (first || k > table.k_max) table.k_max = k;
      first = false;
    }
    for (const auto& I : all) {
      WeightPair w = weight_unchecked(prog, I);
      if (w.hard == table.k_max) {
        top.insert(I);
      } else {
        ModelEntry e;
        e.interpretation = I;
        e.weight = w;
        e.probability = 0.0;
        extra.push_back(std::move(e));
      }
    }
  } else {
    auto [best, k_max] = probabilistic_candidates(prog, caps, strategy);
    if (best.empty()) throw InconsistentError("inconsistent program: SM is empty");
    top = std::move(best);
    table.k_max = k_max;
  }
  // log-sum-exp over the maximal-k entries.
  std::vector<ModelEntry> entries;
  double smax = 0.0;
  bool first = true;
  for (const auto& I : top) {
    ModelEntry e;
    e.interpretation = I;
    e.weight = weight_unchecked(prog, I);
    if (first || e.weight.soft > smax) smax = e.weight.soft;
    first = false;
    entries.push_back(std::move(e));
  }
  double z = 0.0;
  for (const auto& e : entries) z += std::exp(e.weight.soft - smax);
  for (auto& e : entries) e.probability = std::exp(e.weight.soft - smax) / z;
  std::sort(entries.begin(), entries.end(), [](const ModelEntry& a, const ModelEntry& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.interpretation < b.interpretation;
  });
  std::sort(extra.begin(), extra.end(), [](const ModelEntry& a, const ModelEntry& b) {
    if (a.weight.hard != b.weight.hard) return a.weight.hard > b.weight.hard;
    if (a.weight.soft != b.weight.soft) return a.weight.soft > b.weight.soft;
    return a.interpretation < b.interpretation;
  });
  table.entries = std::move(entries);
  table.entries.insert(table.entries.end(), extra.begin(), extra.end());
  return table;
}

std::set<std::set<Atom>> map_models(const GroundProgram& prog, const EnumCaps& caps,
                                    double eps, EnumStrategy strategy) {
  auto [best, k_max] = probabilistic_candidates(prog, caps, strategy);
  (void)k_max;
  if (best.empty()) throw InconsistentError("inconsistent program: SM is empty");
  double smax = 0.0;
  bool first = true;
  std::map<const std::set<Atom>*, double> soft;
  for (const auto& I : best) {
    double s = weight_unchecked(prog, I).soft;
    soft[&I] = s;
    if (first || s > smax) smax = s;
    first = false;
  }
  std::set<std::set<Atom>> out;
  for (const auto& I : best)
    if (soft[&I] >= smax - eps) out.insert(I);
  return out;
}

double marginal(const GroundProgram& prog, const FormulaPtr& query, const EnumCaps& caps) {
  ModelTable table = probability_table(prog, caps);
  double p = 0.0;
  for (const auto& e : table.entries)
    if (satisfies(query, e.interpretation)) p += e.probability;
  return p;
}

}  // namespace lpmln
