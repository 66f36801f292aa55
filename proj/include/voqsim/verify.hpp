#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voqsim/engine.hpp"

namespace voqsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Scale of the deadlock-freedom matrix: every (mesh, mode, depth, pattern)
// cell valid for the mesh runs seeds_per_cell times at injection rate 1.0
// with a distinct seed, checking that the detector never fires and that
// every full progress window delivers packets.
struct MatrixScale {
  std::uint64_t cycles = 50000;
  int seeds_per_cell = 1;
  std::uint64_t seed_base = 1;
  int jobs = 0;
};

std::vector<Pattern> valid_patterns(const Mesh& mesh);

CheckResult check_turn_enumeration();
CheckResult check_fprime_implies_f(int samples, std::uint64_t seed);
CheckResult check_2x2_impossibility(int seeds, std::uint64_t cycles, int jobs = 0);
CheckResult check_deadlock_reachability(int seeds, std::uint64_t cycles, int jobs = 0,
                                        int packet_size = 1, double rate = 1.0);
CheckResult check_deadlock_freedom(const std::vector<Algorithm>& algs, const MatrixScale& scale);
CheckResult check_worst_case_replay(int samples, std::uint64_t seed);

// The verify subcommand: the five suites at the given scale; quick shrinks
// the stochastic suites for smoke use.
std::vector<CheckResult> run_verification(bool quick, int jobs = 0);

}  // namespace voqsim
