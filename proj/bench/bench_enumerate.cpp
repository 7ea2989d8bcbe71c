// Compares the parallel stable-model enumeration against the serial
// brute-force reference on batches of generated ground programs.
#include <chrono>
#include <cstdio>

#include "lpmln/oracle.hpp"
#include "lpmln/stable.hpp"

using namespace lpmln;
using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
  int batches = argc > 1 ? std::atoi(argv[1]) : 200;
  oracle::GeneratorConfig cfg;
  cfg.atom_budget = 12;
  cfg.rule_budget = 14;
  cfg.max_depth = 3;

  double t_engine = 0.0, t_oracle = 0.0;
  long long models = 0;
  int mismatches = 0;
  for (int b = 0; b < batches; ++b) {
    cfg.seed = static_cast<unsigned>(9000 + b);
    GroundProgram prog = oracle::gen_program(cfg);
    std::vector<FormulaPtr> fs;
    for (const auto& r : prog.rules) fs.push_back(r.formula);

    auto t0 = Clock::now();
    auto fast = enumerate_stable_atoms(fs, prog.signature, EnumCaps{});
    auto t1 = Clock::now();
    auto slow = oracle::brute_stable(fs, prog.signature);
    auto t2 = Clock::now();

    t_engine += std::chrono::duration<double>(t1 - t0).count();
    t_oracle += std::chrono::duration<double>(t2 - t1).count();
    models += static_cast<long long>(fast.size());
    if (fast != slow) ++mismatches;
  }
  std::printf("batches:    %d\n", batches);
  std::printf("models:     %lld\n", models);
  std::printf("mismatches: %d\n", mismatches);
  std::printf("engine:     %.3fs\n", t_engine);
  std::printf("reference:  %.3fs\n", t_oracle);
  std::printf("speedup:    %.2fx\n", t_oracle / (t_engine > 0 ? t_engine : 1e-9));
  return mismatches == 0 ? 0 : 1;
}
