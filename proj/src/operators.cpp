#include "spca/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spca {

std::vector<double> hard_threshold_top_s(std::span<const double> a, int s) {
  const int m = static_cast<int>(a.size());
  if (s < 0 || s > m) throw std::out_of_range("hard_threshold_top_s: s out of range");
  std::vector<double> out(m, 0.0);
  if (s == 0) return out;
  if (s == m) {
    std::copy(a.begin(), a.end(), out.begin());
    return out;
  }
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  auto keep_before = [&a](int i, int j) {
    const double ai = std::abs(a[i]), aj = std::abs(a[j]);
    if (ai != aj) return ai > aj;
    return i < j;
  };
  std::nth_element(idx.begin(), idx.begin() + (s - 1), idx.end(), keep_before);
  for (int k = 0; k < s; ++k) out[idx[k]] = a[idx[k]];
  return out;
}

std::vector<double> hard_threshold_penalty(std::span<const double> a, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] * a[i] > gamma) out[i] = a[i];
  return out;
}

std::vector<double> soft_threshold(std::span<const double> a, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double shrunk = std::abs(a[i]) - gamma;
    if (shrunk > 0.0) out[i] = sgn(a[i]) * shrunk;
  }
  return out;
}

namespace {

// ||V_lambda(a)||_1 - sqrt(s) * ||V_lambda(a)||_2, computed in one pass.
double shrunk_ratio_gap(std::span<const double> a, double lambda, double sqrt_s) {
  double l1 = 0.0, sq = 0.0;
  for (double ai : a) {
    const double v = std::abs(ai) - lambda;
    if (v > 0.0) {
      l1 += v;
      sq += v * v;
    }
  }
  return l1 - sqrt_s * std::sqrt(sq);
}

}  // namespace

double lambda_s(std::span<const double> a, double s) {
  const int m = static_cast<int>(a.size());
  if (m == 0) throw std::invalid_argument("lambda_s: empty vector");
  if (s < 1.0 || s > static_cast<double>(m))
    throw std::out_of_range("lambda_s: s must be in [1, len(a)]");
  const double sqrt_s = std::sqrt(s);
  double l1 = 0.0, sq = 0.0, amax = 0.0;
  for (double ai : a) {
    const double v = std::abs(ai);
    l1 += v;
    sq += ai * ai;
    amax = std::max(amax, v);
  }
  if (sq == 0.0) throw std::invalid_argument("lambda_s: zero vector");
  if (l1 <= sqrt_s * std::sqrt(sq)) return 0.0;  // constraint inactive

  // Bisect to machine resolution and keep the upper endpoint, where the
  // shrunk ratio is guaranteed <= sqrt(s): the normalized output then
  // satisfies the L1 budget even when the shrunk vector is nearly zero.
  double lo = 0.0, hi = amax;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * amax; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shrunk_ratio_gap(a, mid, sqrt_s) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = hi;

  // If the ratio stays above sqrt(s) all the way to ||a||_inf (tied maxima
  // with multiplicity > s), the minimizer is the limiting value ||a||_inf
  // and the shrunk vector vanishes there.
  double v1 = 0.0, v2 = 0.0;
  for (double ai : a) {
    const double v = std::abs(ai) - lambda;
    if (v > 0.0) {
      v1 += v;
      v2 += v * v;
    }
  }
  if (v2 == 0.0 || v1 > (sqrt_s + 1e-6) * std::sqrt(v2)) return amax;
  return lambda;
}

S4Result s4_maximizer(std::span<const double> a, double s) {
  const double lambda = lambda_s(a, s);
  std::vector<double> w = soft_threshold(a, lambda);
  double nrm = 0.0;
  for (double wi : w) nrm += wi * wi;
  nrm = std::sqrt(nrm);
  if (nrm == 0.0)
    throw std::domain_error("s4_maximizer: shrunk vector vanished (degenerate input)");
  for (double& wi : w) wi /= nrm;
  return {std::move(w), lambda * std::sqrt(s) + nrm};
}

}  // namespace spca
