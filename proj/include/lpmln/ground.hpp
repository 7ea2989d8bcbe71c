#pragma once

#include "lpmln/ast.hpp"

namespace lpmln {

struct GroundCaps {
  int max_agg_atoms = 12;
};

GroundProgram ground(const LpmlnProgram& program, const GroundCaps& caps = {});

// Exact m-of-A expansion: true iff exactly m atoms of A are true.
FormulaPtr expand_count(const std::vector<Atom>& atoms, std::int64_t m,
                        const GroundCaps& caps = {});

// Exact subset-sum expansion: true iff the weights of the true atoms sum to t.
FormulaPtr expand_sum(const std::vector<SumItem>& items, const Rational& t,
                      const GroundCaps& caps = {});

}  // namespace lpmln
