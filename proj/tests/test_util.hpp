#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "spca/matrix.hpp"

namespace spca::testutil {

inline DataMatrix random_dense(int n, int p, std::uint64_t seed,
                               double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> values(static_cast<std::size_t>(n) * p);
  for (double& v : values) v = dist(rng);
  return DataMatrix::dense(n, p, std::move(values));
}

inline std::vector<double> random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  double nrm = 0.0;
  for (double& vi : v) {
    vi = normal(rng);
    nrm += vi * vi;
  }
  nrm = std::sqrt(nrm);
  for (double& vi : v) vi /= nrm;
  return v;
}

// Uniform draw from the Euclidean unit ball.
inline std::vector<double> random_in_ball(int dim, std::mt19937_64& rng) {
  std::vector<double> v = random_unit(dim, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scale = std::pow(u(rng), 1.0 / dim);
  for (double& vi : v) vi *= scale;
  return v;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace spca::testutil
