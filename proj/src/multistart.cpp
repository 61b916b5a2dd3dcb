#include "spca/multistart.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace spca {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::nai: return "nai";
    case Strategy::sfa: return "sfa";
    case Strategy::bat: return "bat";
    case Strategy::otf: return "otf";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "nai") return Strategy::nai;
  if (name == "sfa") return Strategy::sfa;
  if (name == "bat") return Strategy::bat;
  if (name == "otf") return Strategy::otf;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

void MultiStartPlan::validate() const {
  if (l < 1) throw std::invalid_argument("starts l must be >= 1");
  if ((strategy == Strategy::bat || strategy == Strategy::otf) &&
      (r < 1 || r > l))
    throw std::invalid_argument("batch width r must be in [1, l]");
}

int MultiStartPlan::effective_width() const {
  switch (strategy) {
    case Strategy::nai: return 1;
    case Strategy::sfa: return l;
    default: return r;
  }
}

MultiStartReport run_multistart(const Formulation& form, const DataMatrix& A,
                                const MultiStartPlan& plan, const SolverConfig& cfg) {
  plan.validate();
  form.validate(A.cols());
  const auto t0 = std::chrono::steady_clock::now();

  MultiStartReport report;
  report.all_results.resize(plan.l);
  const int p = A.cols();
  auto start = [&](int index) {
    return generate_start(p, plan.seed, index, plan.scheme);
  };

  if (plan.strategy == Strategy::nai) {
    for (int i = 0; i < plan.l; ++i) {
      RunResult r = am_solve(form, A, start(i), cfg);
      r.start_index = i;
      report.total_sweeps += r.iterations;
      report.all_results[i] = std::move(r);
    }
  } else if (plan.strategy == Strategy::sfa || plan.strategy == Strategy::bat) {
    const int r = plan.strategy == Strategy::sfa ? plan.l : plan.r;
    for (int base = 0; base < plan.l; base += r) {
      const int width = std::min(r, plan.l - base);
      AmBatch batch(form, A, width, cfg);
      for (int j = 0; j < width; ++j) batch.load_start(j, start(base + j), base + j);
      while (batch.active_count() > 0) {
        batch.sweep();
        ++report.total_sweeps;
      }
      for (int j = 0; j < width; ++j)
        report.all_results[base + j] = batch.harvest(j);
      ++report.batches;
    }
  } else {  // OTF: dynamic replacement, convergence checked every sweep
    const int width = std::min(plan.r, plan.l);
    AmBatch batch(form, A, width, cfg);
    int next = 0;
    for (; next < width; ++next) batch.load_start(next, start(next), next);
    int done = 0;
    while (done < plan.l) {
      batch.sweep();
      ++report.total_sweeps;
      for (int j = 0; j < width; ++j) {
        if (!batch.slot_finished(j)) continue;
        RunResult r = batch.harvest(j);
        report.all_results[r.start_index] = std::move(r);
        ++done;
        if (next < plan.l) {
          batch.load_start(j, start(next), next);
          ++next;
          ++report.replacements;
        }
      }
    }
  }

  report.per_start_iterations.reserve(plan.l);
  int best = 0;
  for (int i = 0; i < plan.l; ++i) {
    report.per_start_iterations.push_back(report.all_results[i].iterations);
    if (report.all_results[i].objective > report.all_results[best].objective)
      best = i;  // ties keep the lowest start index
  }
  report.best = report.all_results[best];

  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

SweepStats sweep_stats(const MultiStartReport& report, double baseline_wall_time) {
  SweepStats s;
  s.total_sweeps = report.total_sweeps;
  if (!report.per_start_iterations.empty()) {
    double sum = 0.0;
    for (int it : report.per_start_iterations) sum += it;
    s.mean_iterations = sum / static_cast<double>(report.per_start_iterations.size());
  }
  if (baseline_wall_time > 0.0 && report.wall_time > 0.0)
    s.speedup_vs_baseline = baseline_wall_time / report.wall_time;
  return s;
}

}  // namespace spca
