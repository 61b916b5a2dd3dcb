#pragma once

#include <span>
#include <string>
#include <vector>

#include "spca/formulation.hpp"
#include "spca/matrix.hpp"

namespace spca {

struct OracleResult {
  double optimum = 0.0;
  std::vector<int> argmax_support;  // when applicable
  bool certified = true;            // false when only a best-found value
  std::string certificate;          // enumeration performed
};

// One iteration of the linearize-and-maximize reference method, computed via
// the explicit subgradient formulas of the derived convex objective. For
// constrained formulations z lives in x-space; for penalized formulations z
// lives in y-space.
struct GPowerStepResult {
  std::vector<double> z;
  bool ok = true;  // false <=> subgradient undefined (degenerate)
};
GPowerStepResult gpower_step(const Formulation& form, const DataMatrix& A,
                             std::span<const double> z);

// Exhaustive solver for the L0-constrained problems: enumerates supports of
// size s; per support, L2 variance uses power iteration on the Gram matrix
// and L1 variance enumerates sign vectors. Requires p <= 14 (and n <= 14 for
// L1 variance).
OracleResult brute_force_l0_constrained(const DataMatrix& A, int s,
                                        VarianceNorm variance);

// Exhaustive (rows 5, 6, 8) or best-found (row 7) solver for the penalized
// problems. Requires p <= 12 (and n <= 12 where signs are enumerated).
OracleResult brute_force_penalized(const DataMatrix& A, const Formulation& form);

// Largest singular value via power iteration on A^T A with Rayleigh-quotient
// stopping. Returns 0 for the zero matrix.
double power_method_sigma_max(const DataMatrix& A, double tol = 1e-12);

}  // namespace spca
