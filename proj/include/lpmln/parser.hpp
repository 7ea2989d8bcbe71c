#pragma once

#include <string>

#include "lpmln/ast.hpp"

namespace lpmln {

LpmlnProgram parse_lpmln(const std::string& text);

std::string print_lpmln(const LpmlnProgram& program);

// Statement text (no trailing '.') for a single formula; rule sugar is used
// when the formula has rule shape.
std::string statement_str(const FormulaPtr& f);

// Fully explicit formula text (used inside parenthesized positions).
std::string formula_str(const FormulaPtr& f);

std::string weight_str(const Weight& w);

}  // namespace lpmln
