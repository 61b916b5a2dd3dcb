#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spca/solver.hpp"

namespace spca {

enum class Strategy { nai, sfa, bat, otf };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct MultiStartPlan {
  int l = 1;                    // total starting points
  Strategy strategy = Strategy::nai;
  int r = 1;                    // batch width (NAI forces 1, SFA forces l)
  std::uint64_t seed = 0;
  StartScheme scheme = StartScheme::gaussian_sphere;

  void validate() const;  // throws std::invalid_argument
  int effective_width() const;
};

struct MultiStartReport {
  RunResult best;                 // max objective, ties to lowest start_index
  std::vector<RunResult> all_results;
  long total_sweeps = 0;          // batched matrix-product sweeps executed
  double wall_time = 0.0;         // seconds, monotonic clock
  std::vector<int> per_start_iterations;
  int batches = 0;                // BAT: fixed batches run
  int replacements = 0;           // OTF: dynamic slot replacements
};

// Runs l AM solves from generate_start(p, seed, 0..l-1) under the chosen
// schedule and returns the best-by-objective. Scheduling affects sweep
// counts and wall time only; the per-start results are strategy-invariant.
MultiStartReport run_multistart(const Formulation& form, const DataMatrix& A,
                                const MultiStartPlan& plan, const SolverConfig& cfg);

struct SweepStats {
  double mean_iterations = 0.0;
  long total_sweeps = 0;
  double speedup_vs_baseline = 1.0;  // baseline wall time / report wall time
};

SweepStats sweep_stats(const MultiStartReport& report,
                       double baseline_wall_time = 0.0);

}  // namespace spca
