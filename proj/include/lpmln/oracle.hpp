#pragma once

#include <set>

#include "lpmln/ast.hpp"

// Brute-force reference implementations and program generators for the
// property suites. Self-contained on purpose: shares only the AST types with
// the engine.
namespace lpmln::oracle {

bool brute_satisfies(const FormulaPtr& f, const std::set<Atom>& I);

std::set<std::set<Atom>> brute_stable(const std::vector<FormulaPtr>& formulas,
                                      const std::set<Atom>& signature);

// Classical-model MAP for the MLN reading: argmax over all interpretations of
// (satisfied hard count, satisfied soft sum), lexicographic.
std::set<std::set<Atom>> brute_map_mln(const GroundProgram& prog, double eps = 1e-9);

struct GeneratorConfig {
  int atom_budget = 5;
  int rule_budget = 6;
  int max_depth = 3;
  double hard_probability = 0.25;
  int weight_span = 3;  // soft weights drawn from {-span..span}
  bool rule_form_only = false;
  bool allow_hard = true;
  unsigned seed = 0;
};

GroundProgram gen_program(const GeneratorConfig& cfg);

}  // namespace lpmln::oracle
