#pragma once

#include <span>
#include <vector>

namespace spca {

// sgn(0) = 0, which is a valid subgradient of |.| at 0 and makes the
// hard-penalty operator zero out boundary entries.
inline double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

// Keeps the s largest-magnitude entries of a, zeroes the rest. Ties at the
// cutoff are broken by keeping the lowest index.
std::vector<double> hard_threshold_top_s(std::span<const double> a, int s);

// Keeps entry i iff a_i^2 > gamma (boundary a_i^2 == gamma is zeroed).
std::vector<double> hard_threshold_penalty(std::span<const double> a, double gamma);

// Shrinks magnitudes by gamma toward zero, preserving signs.
std::vector<double> soft_threshold(std::span<const double> a, double gamma);

// The scalar minimizing lambda*sqrt(s) + ||soft_threshold(a, lambda)||_2 over
// lambda >= 0. Solved by bisection on the stationarity condition
// ||V_lambda(a)||_1 = sqrt(s) * ||V_lambda(a)||_2, whose left side ratio is
// nonincreasing in lambda. Returns 0 when ||a||_1 <= sqrt(s)*||a||_2, and
// ||a||_inf when the ratio never drops to sqrt(s) (tied maxima, degenerate).
double lambda_s(std::span<const double> a, double s);

struct S4Result {
  std::vector<double> x;  // unit vector, ||x||_1 <= sqrt(s)
  double value;           // lambda*sqrt(s) + ||V_lambda(a)||_2
};

// Maximizer of a^T z over { ||z||_2 <= 1, ||z||_1 <= sqrt(s) }.
// Throws std::domain_error when the shrunk vector vanishes (a = 0 or all
// maxima tied with multiplicity exceeding s).
S4Result s4_maximizer(std::span<const double> a, double s);

}  // namespace spca
