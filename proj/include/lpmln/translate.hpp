#pragma once

#include <map>
#include <optional>

#include "lpmln/stable.hpp"

namespace lpmln {

enum class TranslationMode { Wc, WcStrictHard, Pnt, PntRule, Clingo, ClingoSimplified, Mln };

struct TranslationOutput {
  WcProgram wc;
  std::map<int, Atom> unsat_map;  // ground rule index -> unsat atom
  TranslationMode mode = TranslationMode::Wc;
};

// Decomposed Head <- Body rule shape; head empty means bot.
struct RuleView {
  std::vector<Atom> head;
  FormulaPtr body;                  // conjunction of literals (Top if none)
  std::vector<FormulaPtr> body_lits;
};

std::optional<RuleView> rule_view(const FormulaPtr& f);

TranslationOutput lpmln2wc(const GroundProgram& prog, bool strict_hard = false);
TranslationOutput lpmln2wc_pnt(const GroundProgram& prog);
TranslationOutput lpmln2wc_pnt_rule(const GroundProgram& prog);
TranslationOutput lpmln2wc_rule_clingo(const GroundProgram& prog,
                                       bool simplify_constraints = false);
TranslationOutput mln2wc(const GroundProgram& prog);

// I extended with the unsat atoms of the rules it falsifies (per mode).
std::set<Atom> phi_extend(const GroundProgram& prog, const std::set<Atom>& I,
                          const TranslationOutput& t);

std::string emit_aspcore2(const TranslationOutput& t, long long scale = 1000);

}  // namespace lpmln
