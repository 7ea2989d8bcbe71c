#pragma once

#include <optional>

#include "lpmln/stable.hpp"

namespace lpmln {

struct WeightPair {
  long long hard = 0;  // satisfied hard rules
  double soft = 0.0;   // sum of satisfied soft weights
};

inline bool weight_less(const WeightPair& a, const WeightPair& b, double eps = 1e-9) {
  if (a.hard != b.hard) return a.hard < b.hard;
  return a.soft < b.soft - eps;
}

struct ModelEntry {
  std::set<Atom> interpretation;
  WeightPair weight;
  double probability = 0.0;
};

struct ModelTable {
  std::vector<ModelEntry> entries;  // descending probability, then lexicographic atoms
  long long k_max = 0;
};

std::set<std::set<Atom>> sm_set(const GroundProgram& prog, const EnumCaps& caps = {},
                                EnumStrategy strategy = EnumStrategy::Auto);

// (k, s) of I when I is in SM[prog]; nullopt marks conceptual weight zero.
std::optional<WeightPair> weight(const GroundProgram& prog, const std::set<Atom>& I);

// SM members attaining the maximal hard count, plus that count. Computed
// without full SM enumeration when the hard rules are jointly satisfiable.
std::pair<std::set<std::set<Atom>>, long long> probabilistic_candidates(
    const GroundProgram& prog, const EnumCaps& caps = {},
    EnumStrategy strategy = EnumStrategy::Auto);

// include_all additionally lists SM members below k_max with probability 0;
// it forces a full SM[prog] enumeration.
ModelTable probability_table(const GroundProgram& prog, const EnumCaps& caps = {},
                             bool include_all = false,
                             EnumStrategy strategy = EnumStrategy::Auto);

std::set<std::set<Atom>> map_models(const GroundProgram& prog, const EnumCaps& caps = {},
                                    double eps = 1e-9,
                                    EnumStrategy strategy = EnumStrategy::Auto);

double marginal(const GroundProgram& prog, const FormulaPtr& query,
                const EnumCaps& caps = {});

}  // namespace lpmln
