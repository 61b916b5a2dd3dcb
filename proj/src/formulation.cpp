#include "spca/formulation.hpp"

#include <cmath>
#include <stdexcept>

#include "spca/operators.hpp"

namespace spca {

int l0_count(std::span<const double> x, double eps) {
  int c = 0;
  for (double xi : x)
    if (std::abs(xi) > eps) ++c;
  return c;
}

double l1_norm(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += std::abs(xi);
  return s;
}

double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

int Formulation::row() const {
  if (mode == SparsityMode::constraint) {
    if (sparsity == SparsityNorm::l0) return variance == VarianceNorm::l2 ? 1 : 2;
    return variance == VarianceNorm::l2 ? 3 : 4;
  }
  if (sparsity == SparsityNorm::l0) return variance == VarianceNorm::l2 ? 5 : 6;
  return variance == VarianceNorm::l2 ? 7 : 8;
}

Formulation Formulation::from_row(int row, double param) {
  if (row < 1 || row > 8) throw std::invalid_argument("formulation row must be 1..8");
  Formulation f;
  f.mode = row <= 4 ? SparsityMode::constraint : SparsityMode::penalty;
  const int r = (row - 1) % 4;
  f.sparsity = (r / 2 == 0) ? SparsityNorm::l0 : SparsityNorm::l1;
  f.variance = (r % 2 == 0) ? VarianceNorm::l2 : VarianceNorm::l1;
  f.param = param;
  return f;
}

void Formulation::validate(int p) const {
  if (mode == SparsityMode::constraint) {
    if (param < 1.0 || param > static_cast<double>(p))
      throw std::invalid_argument("s must be in [1, p]");
  } else if (param < 0.0) {
    throw std::invalid_argument("gamma must be >= 0");
  }
}

std::string Formulation::describe() const {
  std::string d = variance == VarianceNorm::l2 ? "L2-variance" : "L1-variance";
  d += sparsity == SparsityNorm::l0 ? " L0" : " L1";
  d += mode == SparsityMode::constraint ? "-constrained" : "-penalized";
  return d;
}

namespace {

void check_feasible(const Formulation& form, std::span<const double> x) {
  constexpr double tol = 1e-8;
  if (l2_norm(x) > 1.0 + tol)
    throw std::domain_error("objective: ||x||_2 exceeds 1");
  if (form.mode == SparsityMode::constraint) {
    if (form.sparsity == SparsityNorm::l0) {
      if (l0_count(x, 1e-12) > static_cast<int>(form.param))
        throw std::domain_error("objective: ||x||_0 exceeds s");
    } else if (l1_norm(x) > std::sqrt(form.param) + tol) {
      throw std::domain_error("objective: ||x||_1 exceeds sqrt(s)");
    }
  }
}

}  // namespace

double objective(const Formulation& form, const DataMatrix& A,
                 std::span<const double> x) {
  if (static_cast<int>(x.size()) != A.cols())
    throw std::invalid_argument("objective: dimension mismatch");
  check_feasible(form, x);
  const std::vector<double> ax = A.mult(x);
  const double var = form.variance == VarianceNorm::l2 ? l2_norm(ax) : l1_norm(ax);
  switch (form.row()) {
    case 1:
    case 2:
    case 3:
    case 4:
      return var;
    case 5:
    case 6:
      return var * var - form.param * l0_count(x, 1e-12);
    default:
      return var - form.param * l1_norm(x);
  }
}

double merit_from_product(const Formulation& form, std::span<const double> v,
                          std::span<const double> x) {
  if (v.size() != x.size())
    throw std::invalid_argument("merit: dimension mismatch");
  double yax = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) yax += v[i] * x[i];
  switch (form.row()) {
    case 1:
    case 2:
    case 3:
    case 4:
      return yax;
    case 5:
    case 6:
      return yax * yax - form.param * l0_count(x);
    default:
      return yax - form.param * l1_norm(x);
  }
}

double merit(const Formulation& form, const DataMatrix& A,
             std::span<const double> x, std::span<const double> y) {
  if (static_cast<int>(x.size()) != A.cols() ||
      static_cast<int>(y.size()) != A.rows())
    throw std::invalid_argument("merit: dimension mismatch");
  return merit_from_product(form, A.mult_t(y), x);
}

YStepResult y_step(const Formulation& form, std::span<const double> u) {
  YStepResult r;
  r.y.resize(u.size());
  if (form.variance == VarianceNorm::l1) {
    for (std::size_t i = 0; i < u.size(); ++i) r.y[i] = sgn(u[i]);
    return r;
  }
  const double nrm = l2_norm(u);
  if (nrm == 0.0) {
    r.ok = false;
    return r;
  }
  for (std::size_t i = 0; i < u.size(); ++i) r.y[i] = u[i] / nrm;
  return r;
}

XStepResult x_step(const Formulation& form, std::span<const double> v) {
  XStepResult r;
  std::vector<double> w;
  if (form.mode == SparsityMode::constraint) {
    if (form.sparsity == SparsityNorm::l0) {
      w = hard_threshold_top_s(v, static_cast<int>(form.param));
    } else {
      double sq = 0.0;
      for (double vi : v) sq += vi * vi;
      if (sq == 0.0) {
        r.zero_loading = true;
        return r;
      }
      w = soft_threshold(v, lambda_s(v, form.param));
    }
  } else if (form.sparsity == SparsityNorm::l0) {
    w = hard_threshold_penalty(v, form.param);
  } else {
    w = soft_threshold(v, form.param);
  }
  const double nrm = l2_norm(w);
  if (nrm == 0.0) {
    r.zero_loading = true;
    return r;
  }
  for (double& wi : w) wi /= nrm;
  r.x = std::move(w);
  return r;
}

}  // namespace spca
