#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "spca/formulation.hpp"
#include "spca/operators.hpp"
#include "test_util.hpp"

using namespace spca;
namespace tu = spca::testutil;

namespace {

Formulation make(int row, double param) { return Formulation::from_row(row, param); }

// Random feasible x for the formulation (rejection sampling for L1 budget).
std::vector<double> random_feasible_x(const Formulation& form, int p,
                                      std::mt19937_64& rng) {
  while (true) {
    std::vector<double> x = tu::random_in_ball(p, rng);
    if (form.mode == SparsityMode::penalty) return x;
    if (form.sparsity == SparsityNorm::l0) {
      const int s = static_cast<int>(form.param);
      const auto t = hard_threshold_top_s(x, s);
      return t;
    }
    if (l1_norm(x) <= std::sqrt(form.param)) return x;
  }
}

std::vector<double> random_feasible_y(const Formulation& form, int n,
                                      std::mt19937_64& rng) {
  if (form.variance == VarianceNorm::l2) return tu::random_in_ball(n, rng);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> y(n);
  for (double& yi : y) yi = dist(rng);
  return y;
}

}  // namespace

TEST_CASE("row mapping round-trips the 2x2x2 grid") {
  for (int row = 1; row <= 8; ++row) {
    const Formulation f = make(row, 1.0);
    CHECK(f.row() == row);
  }
  CHECK(make(1, 1).variance == VarianceNorm::l2);
  CHECK(make(2, 1).variance == VarianceNorm::l1);
  CHECK(make(3, 1).sparsity == SparsityNorm::l1);
  CHECK(make(6, 0.5).mode == SparsityMode::penalty);
  CHECK_THROWS_AS(Formulation::from_row(9, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make(1, 0.0).validate(4), std::invalid_argument);
  CHECK_THROWS_AS(make(5, -1.0).validate(4), std::invalid_argument);
}

TEST_CASE("objective examples") {
  DataMatrix I2 = DataMatrix::dense(2, 2, {1, 0, 0, 1});
  CHECK(objective(make(1, 1), I2, std::vector<double>{1, 0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(objective(make(5, 0.5), I2, std::vector<double>{1, 0}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  DataMatrix A = DataMatrix::dense(2, 2, {1, 3, 2, 4});
  CHECK(objective(make(2, 1), A, std::vector<double>{0, 1}) ==
        doctest::Approx(6.0).epsilon(1e-12));
  // infeasible x rejected in constrained modes
  CHECK_THROWS_AS(objective(make(1, 1), I2,
                            std::vector<double>{std::sqrt(0.5), std::sqrt(0.5)}),
                  std::domain_error);
}

TEST_CASE("merit examples") {
  DataMatrix A = DataMatrix::dense(2, 2, {1, 3, 2, 4});
  const std::vector<double> x{0.6, 0.8};
  const std::vector<double> y{0.8, -0.6};
  const double yax = tu::dot(y, A.mult(x));
  for (int row = 1; row <= 4; ++row)
    CHECK(merit(make(row, row <= 2 ? 2.0 : 4.0), A, x, y) ==
          doctest::Approx(yax).epsilon(1e-12));
  // gamma = 0 collapse: row 5 merit is row 1 merit squared
  CHECK(merit(make(5, 0.0), A, x, y) ==
        doctest::Approx(yax * yax).epsilon(1e-12));
  CHECK(merit(make(7, 0.5), A, x, y) ==
        doctest::Approx(yax - 0.5 * l1_norm(x)).epsilon(1e-12));
  CHECK_THROWS_AS(merit(make(1, 2), A, std::vector<double>{1.0}, y),
                  std::invalid_argument);
}

TEST_CASE("merit bounded by objective for constrained rows") {
  std::mt19937_64 rng(99);
  for (int row = 1; row <= 4; ++row) {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 4 + static_cast<int>(rng() % 8);
      const int p = 4 + static_cast<int>(rng() % 8);
      DataMatrix A = tu::random_dense(n, p, rng());
      const Formulation form = make(row, 2.0);
      const auto x = random_feasible_x(form, p, rng);
      const auto y = random_feasible_y(form, n, rng);
      CHECK(merit(form, A, x, y) <= objective(form, A, x) + 1e-9);
    }
  }
}

TEST_CASE("y_step examples") {
  CHECK(y_step(make(1, 1), std::vector<double>{3, 4}).y ==
        std::vector<double>{0.6, 0.8});
  CHECK(y_step(make(2, 1), std::vector<double>{-2, 0, 5}).y ==
        std::vector<double>{-1, 0, 1});
  // L1 variance of an all-zero product is feasible with merit 0
  CHECK(y_step(make(2, 1), std::vector<double>{0, 0}).y ==
        std::vector<double>{0, 0});
  CHECK_FALSE(y_step(make(1, 1), std::vector<double>{0, 0}).ok);
}

TEST_CASE("x_step examples") {
  const auto r1 = x_step(make(1, 1), std::vector<double>{1, -4, 2});
  CHECK(r1.x == std::vector<double>{0, -1, 0});

  const auto r2 = x_step(make(7, 1.0), std::vector<double>{3, -1, 0.5});
  CHECK(r2.x == std::vector<double>{1, 0, 0});

  const auto r3 = x_step(make(5, 100.0), std::vector<double>{2, 1});
  CHECK(r3.zero_loading);
}

TEST_CASE("y_step merit matches the variance norm") {
  std::mt19937_64 rng(41);
  for (int row = 1; row <= 8; ++row) {
    const Formulation form = make(row, row <= 4 ? 2.0 : 0.1);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 4 + static_cast<int>(rng() % 10);
      const int p = 4 + static_cast<int>(rng() % 10);
      DataMatrix A = tu::random_dense(n, p, rng());
      const auto x = random_feasible_x(form, p, rng);
      const auto u = A.mult(x);
      const auto ys = y_step(form, u);
      REQUIRE(ys.ok);
      const double yau = tu::dot(ys.y, u);
      const double expect =
          form.variance == VarianceNorm::l2 ? l2_norm(u) : l1_norm(u);
      CHECK(std::abs(yau - expect) <= 1e-10 * std::max(1.0, expect));
    }
  }
}

TEST_CASE("x_step output feasibility") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int row = 1; row <= 8; ++row) {
    for (int trial = 0; trial < 50; ++trial) {
      const int p = 3 + static_cast<int>(rng() % 12);
      const double param = row <= 4 ? 1.0 + static_cast<double>(rng() % p)
                                    : 0.2;
      const Formulation form = make(row, param);
      std::vector<double> v(p);
      for (double& vi : v) vi = dist(rng);
      const auto r = x_step(form, v);
      if (r.zero_loading) continue;
      CHECK(std::abs(l2_norm(r.x) - 1.0) <= 1e-10);
      if (row == 1 || row == 2)
        CHECK(l0_count(r.x) <= static_cast<int>(param));
      if (row == 3 || row == 4)
        CHECK(l1_norm(r.x) <= std::sqrt(param) + 1e-8);
      // footnote inequality
      CHECK(l1_norm(r.x) <=
            std::sqrt(static_cast<double>(l0_count(r.x))) * l2_norm(r.x) + 1e-12);
    }
  }
}

TEST_CASE("x_step maximizes the subproblem over random feasible points") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int row = 1; row <= 8; ++row) {
    const int p = 6;
    const double param = row <= 4 ? 2.0 : 0.3;
    const Formulation form = make(row, param);
    std::vector<double> v(p);
    for (double& vi : v) vi = dist(rng);
    const auto r = x_step(form, v);
    double best;
    if (r.zero_loading) {
      REQUIRE(form.mode == SparsityMode::penalty);
      best = 0.0;
    } else {
      best = merit_from_product(form, v, r.x);
    }
    for (int k = 0; k < 100000; ++k) {
      const auto z = random_feasible_x(form, p, rng);
      CHECK(merit_from_product(form, v, z) <= best + 1e-9);
    }
  }
}

TEST_CASE("parameter collapse: every x_step reduces to plain normalization") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 4 + static_cast<int>(rng() % 8);
    std::vector<double> v(p);
    for (double& vi : v) vi = dist(rng);
    const double nrm = l2_norm(v);
    std::vector<double> expect(p);
    for (int i = 0; i < p; ++i) expect[i] = v[i] / nrm;
    for (int row = 1; row <= 8; ++row) {
      const Formulation form = make(row, row <= 4 ? static_cast<double>(p) : 0.0);
      const auto r = x_step(form, v);
      REQUIRE(!r.zero_loading);
      CHECK(tu::max_abs_diff(r.x, expect) <= 1e-12);
    }
  }
}
