#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spca/formulation.hpp"
#include "spca/matrix.hpp"

namespace spca {

struct SolverConfig {
  int max_iterations = 200;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

enum class RunStatus { running, converged, max_iterations, degenerate, zero_loading };

std::string to_string(RunStatus s);

struct RunResult {
  std::vector<double> loading;  // unit vector; zero vector under zero_loading
  double objective = 0.0;
  int iterations = 0;
  RunStatus status = RunStatus::running;
  int start_index = 0;
  std::vector<double> merit_history;  // F(x^(k+1), y^(k)) per sweep
};

enum class StartScheme { gaussian_sphere, column };

// Deterministic in (seed, index). gaussian_sphere draws a standard normal
// vector and normalizes it; column returns the basis vector e_{index mod p}.
std::vector<double> generate_start(int p, std::uint64_t seed, int index,
                                   StartScheme scheme = StartScheme::gaussian_sphere);

// Advances up to `width` independent AM runs one sweep at a time, sharing the
// batched matrix products. Slots hold at most one run each; finished slots
// keep their column in the product block until harvested or reloaded.
class AmBatch {
 public:
  AmBatch(const Formulation& form, const DataMatrix& A, int width,
          const SolverConfig& cfg);

  void load_start(int slot, std::span<const double> x0, int start_index);
  bool slot_active(int slot) const { return slots_[slot].state == SlotState::active; }
  bool slot_finished(int slot) const { return slots_[slot].state == SlotState::finished; }
  RunResult harvest(int slot);  // finished slot -> idle
  int active_count() const { return active_count_; }
  int width() const { return static_cast<int>(slots_.size()); }

  // One (y-step, x-step) pass over all active slots.
  void sweep();

 private:
  enum class SlotState { idle, active, finished };
  struct Slot {
    SlotState state = SlotState::idle;
    int start_index = 0;
    int iterations = 0;
    bool has_prev_merit = false;
    double prev_merit = 0.0;
    std::vector<double> merit_history;
    RunResult result;  // filled when finished
  };

  void finish(int slot, RunStatus status, const std::vector<double>& loading);

  const Formulation form_;
  const DataMatrix& A_;
  const SolverConfig cfg_;
  VectorBatch X_, U_, V_;
  std::vector<Slot> slots_;
  int active_count_ = 0;
};

// One AM run. Implemented as a width-1 batch, so batched and sequential
// solves share the exact arithmetic path.
RunResult am_solve(const Formulation& form, const DataMatrix& A,
                   std::span<const double> x0, const SolverConfig& cfg);

struct BatchSolveResult {
  std::vector<RunResult> results;  // one per column of X0
  int sweeps = 0;
};

// All columns of X0 advanced together; converged columns freeze while the
// rest continue. Results are bitwise identical to per-column am_solve.
BatchSolveResult am_solve_batch(const Formulation& form, const DataMatrix& A,
                                const VectorBatch& X0, const SolverConfig& cfg);

// Fixed-sweep-count iterate streams (no stopping rule), for cross-checking
// against reference solvers. xs[k] = x^(k) (xs[0] = x0), ys[k] = y^(k).
// Stops early if an iterate degenerates.
struct IterateTrace {
  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
  bool truncated = false;
};
IterateTrace am_iterates(const Formulation& form, const DataMatrix& A,
                         std::span<const double> x0, int sweeps);

}  // namespace spca
