#pragma once

#include <span>
#include <string>
#include <vector>

#include "spca/matrix.hpp"

namespace spca {

enum class VarianceNorm { l2, l1 };
enum class SparsityNorm { l0, l1 };
enum class SparsityMode { constraint, penalty };

// One of the 8 sparse PCA problems: a variance norm, a sparsity-inducing
// norm, how the sparsity norm is used, and its parameter (the cardinality
// budget s in constraint mode, the penalty weight gamma in penalty mode).
struct Formulation {
  VarianceNorm variance = VarianceNorm::l2;
  SparsityNorm sparsity = SparsityNorm::l0;
  SparsityMode mode = SparsityMode::constraint;
  double param = 1.0;  // s (constraint) or gamma (penalty)

  int row() const;  // 1..8
  static Formulation from_row(int row, double param);

  // Throws std::invalid_argument if the parameter is out of range for a
  // p-dimensional problem.
  void validate(int p) const;

  std::string describe() const;
};

// f(x): the native objective of the formulation. The L0 count on external
// vectors uses |x_i| > 1e-12 (the solver itself produces exact zeros).
// Throws std::domain_error when x is infeasible (tolerance 1e-8).
double objective(const Formulation& form, const DataMatrix& A,
                 std::span<const double> x);

// F(x,y): the bilinear merit of the reformulation.
double merit(const Formulation& form, const DataMatrix& A,
             std::span<const double> x, std::span<const double> y);

// Same merit, given the precomputed product v = A^T y.
double merit_from_product(const Formulation& form, std::span<const double> v,
                          std::span<const double> x);

// argmax over Y given u = A x. For L2 variance u = 0 is degenerate: the
// returned flag is false and y is unspecified.
struct YStepResult {
  std::vector<double> y;
  bool ok = true;  // false <=> degenerate (u = 0 under L2 variance)
};
YStepResult y_step(const Formulation& form, std::span<const double> u);

// argmax over X given v = A^T y. zero_loading means the thresholded vector
// vanished: for penalty modes x* = 0 is the subproblem optimum; for
// constraint modes it signals a degenerate v.
struct XStepResult {
  std::vector<double> x;
  bool zero_loading = false;
};
XStepResult x_step(const Formulation& form, std::span<const double> v);

int l0_count(std::span<const double> x, double eps = 0.0);
double l1_norm(std::span<const double> x);
double l2_norm(std::span<const double> x);

}  // namespace spca
