#include "spca/solver.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "spca/parallel.hpp"

namespace spca {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::running: return "running";
    case RunStatus::converged: return "converged";
    case RunStatus::max_iterations: return "max-iterations";
    case RunStatus::degenerate: return "degenerate";
    case RunStatus::zero_loading: return "zero-loading";
  }
  return "unknown";
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// f(x) without the feasibility gate, for degenerate-run reporting.
double objective_value(const Formulation& form, const DataMatrix& A,
                       std::span<const double> x) {
  const std::vector<double> ax = A.mult(x);
  const double var = form.variance == VarianceNorm::l2 ? l2_norm(ax) : l1_norm(ax);
  if (form.mode == SparsityMode::constraint) return var;
  if (form.sparsity == SparsityNorm::l0)
    return var * var - form.param * l0_count(x);
  return var - form.param * l1_norm(x);
}

bool stop_rule(double f_new, double f_old, double tol) {
  if (f_old > 1e-12) return f_new / f_old <= 1.0 + tol;
  // Ratio test undefined for nonpositive or vanishing previous merit
  // (possible for penalized formulations early on); absolute fallback.
  return f_new - f_old <= tol * std::max(1.0, std::abs(f_new));
}

}  // namespace

std::vector<double> generate_start(int p, std::uint64_t seed, int index,
                                   StartScheme scheme) {
  if (p < 1) throw std::invalid_argument("generate_start: p must be >= 1");
  std::vector<double> x(p, 0.0);
  if (scheme == StartScheme::column) {
    x[static_cast<std::size_t>(index) % p] = 1.0;
    return x;
  }
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index))));
  std::normal_distribution<double> normal(0.0, 1.0);
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (int i = 0; i < p; ++i) {
      x[i] = normal(rng);
      nrm += x[i] * x[i];
    }
  } while (nrm == 0.0);
  nrm = std::sqrt(nrm);
  for (int i = 0; i < p; ++i) x[i] /= nrm;
  return x;
}

AmBatch::AmBatch(const Formulation& form, const DataMatrix& A, int width,
                 const SolverConfig& cfg)
    : form_(form), A_(A), cfg_(cfg),
      X_(A.cols(), width), U_(A.rows(), width), V_(A.cols(), width),
      slots_(width) {
  if (width < 1) throw std::invalid_argument("batch width must be >= 1");
  if (cfg.max_iterations < 1 || cfg.tol <= 0.0)
    throw std::invalid_argument("invalid solver configuration");
  form.validate(A.cols());
}

void AmBatch::load_start(int slot, std::span<const double> x0, int start_index) {
  if (static_cast<int>(x0.size()) != A_.cols())
    throw std::invalid_argument("start vector dimension mismatch");
  Slot& s = slots_[slot];
  if (s.state == SlotState::active) throw std::logic_error("slot is busy");
  s = Slot{};
  s.state = SlotState::active;
  s.start_index = start_index;
  std::copy(x0.begin(), x0.end(), X_.col(slot));
  ++active_count_;
}

void AmBatch::finish(int slot, RunStatus status, const std::vector<double>& loading) {
  Slot& s = slots_[slot];
  s.result.loading = loading;
  s.result.status = status;
  s.result.iterations = s.iterations;
  s.result.start_index = s.start_index;
  s.result.merit_history = std::move(s.merit_history);
  s.result.objective = status == RunStatus::zero_loading
                           ? 0.0
                           : objective_value(form_, A_, loading);
  s.state = SlotState::finished;
  --active_count_;
}

RunResult AmBatch::harvest(int slot) {
  Slot& s = slots_[slot];
  if (s.state != SlotState::finished) throw std::logic_error("slot has no result");
  RunResult r = std::move(s.result);
  s = Slot{};
  std::fill(X_.col(slot), X_.col(slot) + X_.dim, 0.0);
  return r;
}

void AmBatch::sweep() {
  if (active_count_ == 0) return;
  const int w = width();
  const int n = A_.rows();
  const int p = A_.cols();

  A_.mult(X_, U_);

  // y-step, in place on U. Degeneracy (u = 0 under L2 variance) is flagged
  // and resolved serially below.
  std::vector<char> degenerate(w, 0);
  parallel_for(
      w,
      [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j) {
          if (slots_[j].state != SlotState::active) continue;
          YStepResult ys = y_step(form_, U_.column(j));
          if (!ys.ok) {
            degenerate[j] = 1;
            continue;
          }
          std::copy(ys.y.begin(), ys.y.end(), U_.col(j));
        }
      },
      static_cast<std::size_t>(n));
  for (int j = 0; j < w; ++j) {
    if (degenerate[j]) {
      ++slots_[j].iterations;
      finish(j, RunStatus::degenerate,
             std::vector<double>(X_.col(j), X_.col(j) + p));
    }
  }
  if (active_count_ == 0) return;

  A_.mult_t(U_, V_);

  // x-step, stopping test, and per-slot bookkeeping. Slot state transitions
  // are applied serially afterwards.
  enum class Outcome : char { none, converged, max_iter, zero, degen };
  std::vector<Outcome> outcome(w, Outcome::none);
  parallel_for(
      w,
      [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j) {
          Slot& s = slots_[j];
          if (s.state != SlotState::active) continue;
          ++s.iterations;
          XStepResult xs = x_step(form_, V_.column(j));
          if (xs.zero_loading) {
            if (form_.mode == SparsityMode::penalty) {
              std::fill(X_.col(j), X_.col(j) + p, 0.0);
              outcome[j] = Outcome::zero;
            } else {
              outcome[j] = Outcome::degen;  // v = 0, keep last valid x
            }
            continue;
          }
          const double f = merit_from_product(form_, V_.column(j), xs.x);
          std::copy(xs.x.begin(), xs.x.end(), X_.col(j));
          s.merit_history.push_back(f);
          const bool converged =
              s.has_prev_merit && stop_rule(f, s.prev_merit, cfg_.tol);
          s.prev_merit = f;
          s.has_prev_merit = true;
          if (converged)
            outcome[j] = Outcome::converged;
          else if (s.iterations >= cfg_.max_iterations)
            outcome[j] = Outcome::max_iter;
        }
      },
      static_cast<std::size_t>(p) * 8);
  for (int j = 0; j < w; ++j) {
    if (slots_[j].state != SlotState::active) continue;
    const std::vector<double> x(X_.col(j), X_.col(j) + p);
    switch (outcome[j]) {
      case Outcome::converged: finish(j, RunStatus::converged, x); break;
      case Outcome::max_iter: finish(j, RunStatus::max_iterations, x); break;
      case Outcome::zero: finish(j, RunStatus::zero_loading, x); break;
      case Outcome::degen: finish(j, RunStatus::degenerate, x); break;
      case Outcome::none: break;
    }
  }
}

RunResult am_solve(const Formulation& form, const DataMatrix& A,
                   std::span<const double> x0, const SolverConfig& cfg) {
  AmBatch batch(form, A, 1, cfg);
  batch.load_start(0, x0, 0);
  while (batch.slot_active(0)) batch.sweep();
  return batch.harvest(0);
}

BatchSolveResult am_solve_batch(const Formulation& form, const DataMatrix& A,
                                const VectorBatch& X0, const SolverConfig& cfg) {
  AmBatch batch(form, A, X0.width, cfg);
  for (int j = 0; j < X0.width; ++j) batch.load_start(j, X0.column(j), j);
  BatchSolveResult out;
  while (batch.active_count() > 0) {
    batch.sweep();
    ++out.sweeps;
  }
  out.results.reserve(X0.width);
  for (int j = 0; j < X0.width; ++j) out.results.push_back(batch.harvest(j));
  return out;
}

IterateTrace am_iterates(const Formulation& form, const DataMatrix& A,
                         std::span<const double> x0, int sweeps) {
  IterateTrace trace;
  std::vector<double> x(x0.begin(), x0.end());
  trace.xs.push_back(x);
  for (int k = 0; k < sweeps; ++k) {
    YStepResult ys = y_step(form, A.mult(x));
    if (!ys.ok) {
      trace.truncated = true;
      break;
    }
    trace.ys.push_back(ys.y);
    XStepResult xs = x_step(form, A.mult_t(ys.y));
    if (xs.zero_loading) {
      trace.truncated = true;
      break;
    }
    x = std::move(xs.x);
    trace.xs.push_back(x);
  }
  return trace;
}

}  // namespace spca
