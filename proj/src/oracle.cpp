#include "spca/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spca/operators.hpp"

namespace spca {

namespace {

std::vector<double> normalized(std::vector<double> v) {
  const double nrm = l2_norm(v);
  if (nrm == 0.0) return {};
  for (double& vi : v) vi /= nrm;
  return v;
}

// Largest eigenvalue of the small symmetric Gram matrix G (row-major s x s)
// by power iteration, restarted from a few deterministic directions.
double gram_top_eigenvalue(const std::vector<double>& G, int s, double tol) {
  double best = 0.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<double> v(s);
    for (int i = 0; i < s; ++i)
      v[i] = 1.0 + 0.37 * attempt * (i + 1) + 0.013 * ((i * 7 + attempt) % 5);
    double nrm = l2_norm(v);
    for (double& vi : v) vi /= nrm;
    double lambda = 0.0;
    for (int it = 0; it < 50000; ++it) {
      std::vector<double> w(s, 0.0);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) w[i] += G[static_cast<std::size_t>(i) * s + j] * v[j];
      double rq = 0.0;
      for (int i = 0; i < s; ++i) rq += v[i] * w[i];
      const double wn = l2_norm(w);
      if (wn == 0.0) {
        lambda = 0.0;
        break;
      }
      for (int i = 0; i < s; ++i) v[i] = w[i] / wn;
      if (it > 2 && std::abs(rq - lambda) <= tol * std::max(1.0, std::abs(rq))) {
        lambda = rq;
        break;
      }
      lambda = rq;
    }
    best = std::max(best, lambda);
  }
  return best;
}

// sigma_max(A restricted to columns in `support`)^2, via its Gram matrix.
double submatrix_sigma_sq(const DataMatrix& A, const std::vector<int>& support,
                          double tol) {
  const int s = static_cast<int>(support.size());
  if (s == 0) return 0.0;
  std::vector<std::vector<double>> cols(s);
  for (int j = 0; j < s; ++j) cols[j] = A.column(support[j]);
  std::vector<double> G(static_cast<std::size_t>(s) * s, 0.0);
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j) {
      double d = 0.0;
      for (int k = 0; k < A.rows(); ++k) d += cols[i][k] * cols[j][k];
      G[static_cast<std::size_t>(i) * s + j] = d;
      G[static_cast<std::size_t>(j) * s + i] = d;
    }
  return gram_top_eigenvalue(G, s, tol);
}

template <typename Fn>
void for_each_support(int p, int s, Fn&& fn) {
  std::vector<int> support(s);
  for (int i = 0; i < s; ++i) support[i] = i;
  while (true) {
    fn(support);
    int i = s - 1;
    while (i >= 0 && support[i] == p - s + i) --i;
    if (i < 0) break;
    ++support[i];
    for (int j = i + 1; j < s; ++j) support[j] = support[j - 1] + 1;
  }
}

// All sign vectors y in {-1,+1}^n, visiting column scores a_j^T y.
template <typename Fn>
void for_each_sign_vector(const DataMatrix& A, Fn&& fn) {
  const int n = A.rows(), p = A.cols();
  std::vector<std::vector<double>> cols(p);
  for (int j = 0; j < p; ++j) cols[j] = A.column(j);
  std::vector<double> y(n, 1.0), score(p);
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < n; ++i) y[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    for (int j = 0; j < p; ++j) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += cols[j][i] * y[i];
      score[j] = d;
    }
    fn(y, score);
  }
}

}  // namespace

GPowerStepResult gpower_step(const Formulation& form, const DataMatrix& A,
                             std::span<const double> z) {
  GPowerStepResult out;
  if (form.mode == SparsityMode::constraint) {
    // x-space: subgradient of F_Y at x, maximized over X in closed form.
    if (static_cast<int>(z.size()) != A.cols())
      throw std::invalid_argument("gpower_step: expected a p-vector");
    const std::vector<double> ax = A.mult(z);
    std::vector<double> grad;
    if (form.variance == VarianceNorm::l2) {
      // F_Y'(x) = A^T A x / ||Ax||_2
      const double nrm = l2_norm(ax);
      if (nrm == 0.0) {
        out.ok = false;
        return out;
      }
      grad = A.mult_t(ax);
      for (double& g : grad) g /= nrm;
    } else {
      // F_Y'(x) = A^T sgn(Ax)
      std::vector<double> s(ax.size());
      for (std::size_t i = 0; i < ax.size(); ++i) s[i] = sgn(ax[i]);
      grad = A.mult_t(s);
    }
    if (l2_norm(grad) == 0.0) {
      out.ok = false;
      return out;
    }
    std::vector<double> next;
    if (form.sparsity == SparsityNorm::l0)
      next = normalized(hard_threshold_top_s(grad, static_cast<int>(form.param)));
    else
      next = normalized(soft_threshold(grad, lambda_s(grad, form.param)));
    if (next.empty()) {
      out.ok = false;
      return out;
    }
    out.z = std::move(next);
    return out;
  }

  // y-space: subgradient of F_X at y, maximized over Y in closed form.
  if (static_cast<int>(z.size()) != A.rows())
    throw std::invalid_argument("gpower_step: expected an n-vector");
  const std::vector<double> aty = A.mult_t(z);
  std::vector<double> grad;
  if (form.sparsity == SparsityNorm::l0) {
    // F_X'(y) = 2 A U_gamma(A^T y)
    grad = A.mult(hard_threshold_penalty(aty, form.param));
    for (double& g : grad) g *= 2.0;
  } else {
    // A x^(k+1) with x^(k+1) the L1-penalty maximizer of F(., y)
    std::vector<double> x = normalized(soft_threshold(aty, form.param));
    if (x.empty()) {
      out.ok = false;
      return out;
    }
    grad = A.mult(x);
  }
  if (form.variance == VarianceNorm::l2) {
    out.z = normalized(std::move(grad));
    if (out.z.empty()) out.ok = false;
  } else {
    out.z.resize(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) out.z[i] = sgn(grad[i]);
  }
  return out;
}

OracleResult brute_force_l0_constrained(const DataMatrix& A, int s,
                                        VarianceNorm variance) {
  const int n = A.rows(), p = A.cols();
  if (p > 14) throw std::invalid_argument("brute force limited to p <= 14");
  if (variance == VarianceNorm::l1 && n > 14)
    throw std::invalid_argument("sign enumeration limited to n <= 14");
  if (s < 1 || s > p) throw std::invalid_argument("s must be in [1, p]");

  OracleResult best;
  best.optimum = 0.0;
  if (variance == VarianceNorm::l2) {
    for_each_support(p, s, [&](const std::vector<int>& support) {
      const double sigma_sq = submatrix_sigma_sq(A, support, 1e-14);
      if (std::sqrt(sigma_sq) > best.optimum) {
        best.optimum = std::sqrt(sigma_sq);
        best.argmax_support = support;
      }
    });
    best.certificate = "enumerated all supports of size " + std::to_string(s) +
                       ", sigma_max per support by power iteration";
  } else {
    for_each_sign_vector(A, [&](const std::vector<double>&,
                                const std::vector<double>& score) {
      // Best size-s support for this sign vector: top-s squared scores.
      std::vector<double> sq(score.size());
      for (std::size_t j = 0; j < score.size(); ++j) sq[j] = score[j] * score[j];
      std::vector<int> idx(p);
      for (int j = 0; j < p; ++j) idx[j] = j;
      std::nth_element(idx.begin(), idx.begin() + (s - 1), idx.end(),
                       [&](int a, int b) { return sq[a] > sq[b]; });
      double sum = 0.0;
      for (int k = 0; k < s; ++k) sum += sq[idx[k]];
      const double val = std::sqrt(sum);
      if (val > best.optimum) {
        best.optimum = val;
        best.argmax_support.assign(idx.begin(), idx.begin() + s);
        std::sort(best.argmax_support.begin(), best.argmax_support.end());
      }
    });
    best.certificate = "enumerated all 2^n sign vectors with top-s column scores";
  }
  return best;
}

OracleResult brute_force_penalized(const DataMatrix& A, const Formulation& form) {
  const int n = A.rows(), p = A.cols();
  if (form.mode != SparsityMode::penalty)
    throw std::invalid_argument("expected a penalized formulation");
  if (p > 12) throw std::invalid_argument("brute force limited to p <= 12");
  const double gamma = form.param;
  OracleResult best;
  best.optimum = 0.0;  // x = 0 is always feasible with value 0

  const int row = form.row();
  if (row == 5) {
    for (int s = 1; s <= p; ++s) {
      for_each_support(p, s, [&](const std::vector<int>& support) {
        const double val = submatrix_sigma_sq(A, support, 1e-14) - gamma * s;
        if (val > best.optimum) {
          best.optimum = val;
          best.argmax_support = support;
        }
      });
    }
    best.certificate = "enumerated all supports, sigma_max^2 - gamma*|S| per support";
    return best;
  }

  if (n > 12) throw std::invalid_argument("sign enumeration limited to n <= 12");
  if (row == 6) {
    for_each_sign_vector(A, [&](const std::vector<double>&,
                                const std::vector<double>& score) {
      double val = 0.0;
      std::vector<int> support;
      for (int j = 0; j < p; ++j) {
        const double gain = score[j] * score[j] - gamma;
        if (gain > 0.0) {
          val += gain;
          support.push_back(j);
        }
      }
      if (val > best.optimum) {
        best.optimum = val;
        best.argmax_support = std::move(support);
      }
    });
    best.certificate = "enumerated all 2^n sign vectors of the derived objective";
    return best;
  }

  if (row == 8) {
    for_each_sign_vector(A, [&](const std::vector<double>&,
                                const std::vector<double>& score) {
      const std::vector<double> v = soft_threshold(score, gamma);
      const double val = l2_norm(v);
      if (val > best.optimum) {
        best.optimum = val;
        best.argmax_support.clear();
        for (int j = 0; j < p; ++j)
          if (v[j] != 0.0) best.argmax_support.push_back(j);
      }
    });
    best.certificate = "enumerated all 2^n sign vectors of the derived objective";
    return best;
  }

  // Row 7: the derived objective is maximized over the Euclidean sphere,
  // which is not enumerable. Best-found value by polished random restarts.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int restart = 0; restart < 512; ++restart) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = normal(rng);
    y = normalized(std::move(y));
    if (y.empty()) continue;
    for (int it = 0; it < 500; ++it) {
      const std::vector<double> v = soft_threshold(A.mult_t(y), gamma);
      if (l2_norm(v) == 0.0) break;
      std::vector<double> y_next = normalized(A.mult(v));
      if (y_next.empty()) break;
      double delta = 0.0;
      for (int i = 0; i < n; ++i) delta = std::max(delta, std::abs(y_next[i] - y[i]));
      y = std::move(y_next);
      if (delta < 1e-14) break;
    }
    const double val = l2_norm(soft_threshold(A.mult_t(y), gamma));
    best.optimum = std::max(best.optimum, val);
  }
  best.certified = false;
  best.certificate = "best-found: 512 polished random restarts on the sphere";
  return best;
}

double power_method_sigma_max(const DataMatrix& A, double tol) {
  const int p = A.cols();
  std::vector<double> x(p);
  for (int i = 0; i < p; ++i) x[i] = 1.0 + 0.1 * ((i * 13) % 7);
  double nrm = l2_norm(x);
  for (double& xi : x) xi /= nrm;
  double sigma_sq = 0.0;
  for (int it = 0; it < 100000; ++it) {
    const std::vector<double> w = A.mult_t(A.mult(x));
    double rq = 0.0;
    for (int i = 0; i < p; ++i) rq += x[i] * w[i];
    const double wn = l2_norm(w);
    if (wn == 0.0) return 0.0;
    for (int i = 0; i < p; ++i) x[i] = w[i] / wn;
    if (it > 2 && std::abs(rq - sigma_sq) <= tol * std::max(1.0, rq)) {
      sigma_sq = rq;
      break;
    }
    sigma_sq = rq;
  }
  return std::sqrt(std::max(0.0, sigma_sq));
}

}  // namespace spca
