#pragma once

#include <string>
#include <tuple>

#include "lpmln/engine.hpp"
#include "lpmln/stable.hpp"

namespace lpmln::plog {

struct Attribute {
  std::string name;
  std::vector<std::string> arg_sorts;
  std::string range_sort;  // "bool" for boolean attributes
};

// c(u1, ..., un); args may contain variables before grounding.
struct AttrRef {
  std::string attr;
  std::vector<Term> args;

  friend bool operator==(const AttrRef& a, const AttrRef& b) {
    return a.attr == b.attr && a.args == b.args;
  }
  friend bool operator<(const AttrRef& a, const AttrRef& b) {
    if (a.attr != b.attr) return a.attr < b.attr;
    return a.args < b.args;
  }
  std::string str() const { return Atom(attr, args).str(); }
};

struct Literal {
  enum class Kind { Attr, Cmp };
  Kind kind = Kind::Attr;
  bool naf = false;  // prefixed with 'not'
  AttrRef ref;       // Attr: ref = value
  Term value;
  Term lhs, rhs;     // Cmp
  CmpOp op = CmpOp::Eq;
};

struct NormalRule {
  AttrRef head;
  Term head_value;
  std::vector<Literal> body;
};

struct RandomRule {
  std::string id;
  AttrRef target;
  std::string range_pred;  // unary boolean attribute; empty = unrestricted
  std::vector<Literal> body;
};

struct PrAtom {
  int index = 0;  // 1-based position in P
  std::string rule_id;
  AttrRef target;
  Term value;
  std::vector<Literal> condition;
  Rational p;
};

struct ObsFact {
  AttrRef target;
  Term value;
  bool negated = false;  // Obs(c != v)
};

struct DoFact {
  AttrRef target;
  Term value;
};

struct PlogProgram {
  std::map<std::string, std::vector<Term>> sorts;
  std::map<std::string, Attribute> attributes;
  std::map<std::string, std::string> var_sorts;
  std::vector<NormalRule> rules;
  std::vector<RandomRule> selections;
  std::vector<PrAtom> pr_atoms;
  std::vector<ObsFact> obs;
  std::vector<DoFact> acts;
};

PlogProgram parse_plog(const std::string& text);

// Core-signature encodings of the P-log atoms.
Atom eq_atom(const std::string& attr, const std::vector<Term>& args, const Term& v);
Atom intervene_atom(const std::string& attr, const std::vector<Term>& args);
Atom obs_atom(const std::string& attr, const std::vector<Term>& args, const Term& v,
              bool negated);
Atom do_atom(const std::string& attr, const std::vector<Term>& args, const Term& v);
Atom poss_atom(const std::string& rule_id, const std::string& attr,
               const std::vector<Term>& args, const Term& v);
Atom poss_with_asspr_atom(const std::string& rule_id, int pr_index, const std::string& attr,
                          const std::vector<Term>& args, const Term& v);
Atom asspr_atom(const std::string& rule_id, int pr_index, const std::string& attr,
                const std::vector<Term>& args, const Term& v);
Atom poss_with_asspr_any_atom(const std::string& attr, const std::vector<Term>& args,
                              const Term& v);
Atom poss_with_defpr_atom(const std::string& attr, const std::vector<Term>& args,
                          const Term& v);
Atom num_defpr_atom(const std::string& attr, const std::vector<Term>& args, std::int64_t m);
Atom rempr_atom(const std::string& attr, const std::vector<Term>& args, const Rational& k);
Atom total_defpr_atom(const std::string& attr, const std::vector<Term>& args,
                      const Rational& k);

// The ASP encoding of the logical part; all rules hard.
GroundProgram tau(const PlogProgram& p);

// Signature of tau: eq atoms for every attribute, intervene atoms for random
// attributes, and the obs/nobs/do atoms of the program.
std::set<Atom> tau_signature(const PlogProgram& p);

struct ConditionViolation {
  int condition = 0;  // 1 or 2
  std::string detail;
};

std::vector<ConditionViolation> validate_conditions(const PlogProgram& p,
                                                    const EnumCaps& caps = {});

struct HappenEntry {
  AttrRef target;  // ground
  Term value;
  Rational probability;
  bool assigned = false;  // via an applied pr-atom
};

struct WorldReport {
  std::set<Atom> world;
  std::vector<HappenEntry> happen;
  Rational mu_hat;
  double mu = 0.0;
};

std::vector<WorldReport> possible_worlds(const PlogProgram& p, const EnumCaps& caps = {});

LpmlnProgram plog2lpmln(const PlogProgram& p);

// Extension of a possible world by the sigma3 atoms.
std::set<Atom> phi(const PlogProgram& p, const std::set<Atom>& world);

struct CrosscheckReport {
  bool bijection_ok = false;
  double max_deviation = 0.0;
  int worlds = 0;  // nonzero-probability worlds
  std::string detail;
};

CrosscheckReport crosscheck(const PlogProgram& p, const EnumCaps& caps = {});

// clingo-compatible text: hard rules as plain rules (with native aggregates),
// soft rules (all constraints) as weak constraints with scaled weights.
std::string emit_clingo(const PlogProgram& p, long long scale = 1000);

}  // namespace lpmln::plog
