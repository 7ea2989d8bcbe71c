#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "lpmln/ast.hpp"

namespace lpmln {

struct Signature {
  std::vector<Atom> atoms;  // sorted, unique
  std::map<Atom, int> index;

  static Signature from(const std::set<Atom>& atoms);
  int id(const Atom& a) const {
    auto it = index.find(a);
    return it == index.end() ? -1 : it->second;
  }
  int size() const { return static_cast<int>(atoms.size()); }
};

// Bitset interpretation over a Signature's atom order.
class Interp {
 public:
  Interp() = default;
  explicit Interp(int nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}

  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i, bool v) {
    if (v)
      w_[i >> 6] |= std::uint64_t(1) << (i & 63);
    else
      w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
  }
  int nbits() const { return n_; }
  int count() const;

  friend bool operator==(const Interp& a, const Interp& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  friend bool operator<(const Interp& a, const Interp& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.w_ < b.w_;
  }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

std::set<Atom> to_atoms(const Interp& I, const Signature& sig);
Interp from_atoms(const std::set<Atom>& atoms, const Signature& sig);

bool satisfies(const FormulaPtr& f, const Interp& I, const Signature& sig);
bool satisfies(const FormulaPtr& f, const std::set<Atom>& I);

FormulaPtr reduct(const FormulaPtr& f, const Interp& I, const Signature& sig);
FormulaPtr reduct(const FormulaPtr& f, const std::set<Atom>& I);

// Lemma-style relative stability: I satisfies all formulas, and no J that
// agrees with I outside sigma and is a proper subset of I on sigma satisfies
// every reduct.
bool is_stable_relative(const std::vector<FormulaPtr>& formulas, const Interp& I,
                        const std::vector<int>& sigma_ids, const Signature& sig);
bool is_stable_relative(const std::vector<FormulaPtr>& formulas, const std::set<Atom>& I,
                        const std::set<Atom>& sigma, const Signature& sig);

struct EnumCaps {
  int max_component = 16;
  int max_atoms = 24;
};

enum class EnumStrategy { Auto, Splitting, Fallback };

std::set<Interp> enumerate_stable(const std::vector<FormulaPtr>& formulas,
                                  const Signature& sig, const EnumCaps& caps = {},
                                  EnumStrategy strategy = EnumStrategy::Auto);

std::set<std::set<Atom>> enumerate_stable_atoms(const std::vector<FormulaPtr>& formulas,
                                                const std::set<Atom>& signature,
                                                const EnumCaps& caps = {},
                                                EnumStrategy strategy = EnumStrategy::Auto);

struct WeakConstraint {
  FormulaPtr formula;
  double weight = 0.0;
  int level = 0;
};

struct WcProgram {
  std::vector<FormulaPtr> base;
  std::vector<WeakConstraint> weak;
  std::set<Atom> signature;
};

double penalty(const WcProgram& p, const std::set<Atom>& I, int level);

bool dominated(const WcProgram& p, const std::set<Atom>& I, const std::set<Atom>& I2,
               double eps = 1e-9);

std::set<std::set<Atom>> optimal_models(const WcProgram& p, const EnumCaps& caps = {},
                                        double eps = 1e-9,
                                        EnumStrategy strategy = EnumStrategy::Auto);

}  // namespace lpmln
