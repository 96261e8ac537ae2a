#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ordpat/cov.hpp"
#include "ordpat/rng.hpp"

using namespace ordpat;
using Catch::Approx;

TEST_CASE("fgn_autocov basics") {
  CHECK(fgn_autocov(0.5, 1) == Approx(0.0).margin(1e-15));
  CHECK(fgn_autocov(0.5, 7) == Approx(0.0).margin(1e-15));
  CHECK(fgn_autocov(0.3, 0) == 1.0);
  for (double h : {0.2, 0.6, 0.8, 0.9})
    CHECK(fgn_autocov(h, 1) == Approx(std::exp2(2 * h - 1) - 1.0).epsilon(1e-14));
  CHECK(fgn_autocov(0.8, 1) == Approx(0.5157166).epsilon(1e-6));
  CHECK_THROWS_AS(fgn_autocov(0.0, 1), input_error);
  CHECK_THROWS_AS(fgn_autocov(1.0, 1), input_error);
}

TEST_CASE("fgn_autocov has the H(2H-1) k^{2H-2} tail") {
  for (double h : {0.6, 0.75, 0.9}) {
    const double k = 1e6;
    const double lim = fgn_autocov(h, static_cast<std::int64_t>(k)) * std::pow(k, 2.0 - 2.0 * h);
    CHECK(lim == Approx(h * (2.0 * h - 1.0)).epsilon(0.01));
  }
}

TEST_CASE("toeplitz_sigma fills r(|i-j|)") {
  const ToeplitzCov eye = toeplitz_sigma(CovModel::fgn(0.5), 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(eye.sigma(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-15));

  const double r1 = fgn_autocov(0.8, 1);
  const ToeplitzCov s2 = toeplitz_sigma(CovModel::fgn(0.8), 2);
  CHECK(s2.sigma(0, 1) == Approx(r1));
  CHECK(s2.sigma(1, 0) == Approx(r1));
  CHECK(s2.sigma(0, 0) == 1.0);

  const ToeplitzCov t2 = toeplitz_sigma(CovModel::from_table({1.0, 0.5}), 2);
  CHECK(t2.sigma(0, 1) == 0.5);
}

TEST_CASE("table models validate") {
  CHECK_THROWS_AS(CovModel::from_table({0.9, 0.1}), input_error);
  CHECK_THROWS_AS(CovModel::from_table({1.0, 1.5}), input_error);
  // valid 2x2 but not positive definite at dimension 3
  const CovModel bad = CovModel::from_table({1.0, 0.9, -0.9});
  CHECK_NOTHROW(toeplitz_sigma(bad, 2));
  CHECK_THROWS_AS(toeplitz_sigma(bad, 3), numeric_error);
}

TEST_CASE("cholesky matches the closed-form 2x2 factor and reconstructs") {
  const double r = 0.3;
  const Matrix l = cholesky_lower(toeplitz_sigma(CovModel::from_table({1.0, r}), 2));
  CHECK(l(0, 0) == Approx(1.0));
  CHECK(l(1, 0) == Approx(r));
  CHECK(l(1, 1) == Approx(std::sqrt(1.0 - r * r)));
  CHECK(l(0, 1) == 0.0);

  CHECK(cholesky_lower(Matrix::identity(4)) == Matrix::identity(4));

  // PD Toeplitz from fGn models: reconstruction within 1e-12 up to p = 16
  for (double h : {0.55, 0.75, 0.95}) {
    for (std::size_t p : {5u, 16u}) {
      const ToeplitzCov cov = toeplitz_sigma(CovModel::fgn(h), p);
      const Matrix lf = cholesky_lower(cov);
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < p; ++k) s += lf(i, k) * lf(j, k);
          CHECK(std::fabs(s - cov.sigma(i, j)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("solve_sigma computes Sigma^{-1} v") {
  const ToeplitzCov eye = toeplitz_sigma(CovModel::fgn(0.5), 3);
  const std::vector<double> v{1.0, 2.0, 3.0};
  CHECK(solve_sigma(eye, v) == std::vector<double>{1.0, 2.0, 3.0});

  const ToeplitzCov s = toeplitz_sigma(CovModel::from_table({1.0, 0.5}), 2);
  const std::vector<double> x = solve_sigma(s, std::vector<double>{1.0, 1.0});
  CHECK(x[0] == Approx(2.0 / 3.0));
  CHECK(x[1] == Approx(2.0 / 3.0));

  // constant right-hand side (c, c): each entry c(1-r)/(1-r^2)
  for (double r : {-0.4, 0.2, 0.7}) {
    const double c = 0.37;
    const ToeplitzCov sr = toeplitz_sigma(CovModel::from_table({1.0, r}), 2);
    const std::vector<double> y = solve_sigma(sr, std::vector<double>{c, c});
    CHECK(y[0] == Approx(c * (1.0 - r) / (1.0 - r * r)).epsilon(1e-12));
    CHECK(y[1] == Approx(y[0]).epsilon(1e-12));
  }

  // residual check on a bigger system
  const std::size_t p = 16;
  const ToeplitzCov big = toeplitz_sigma(CovModel::fgn(0.85), p);
  CounterRng rng(3);
  std::vector<double> rhs(p);
  rng.fill_normals(rhs);
  const std::vector<double> sol = solve_sigma(big, rhs);
  const std::vector<double> back = big.sigma.mul(sol);
  for (std::size_t i = 0; i < p; ++i) CHECK(std::fabs(back[i] - rhs[i]) < 1e-10);
}

TEST_CASE("positive definiteness of fGn Toeplitz matrices") {
  for (double h : {0.05, 0.3, 0.5, 0.7, 0.95})
    CHECK_NOTHROW(cholesky_lower(toeplitz_sigma(CovModel::fgn(h), 16)));
}

TEST_CASE("c(H) and g(x)") {
  CHECK(c_of_h(0.5) == Approx(0.5).epsilon(1e-15));
  CHECK(g_of_x(0.5) == Approx(0.5).epsilon(1e-15));
  CHECK(g_of_x(0.0) == 1.0);
  CHECK(g_of_x(1.0) == 0.0);
  CHECK(c_of_h(0.9) == Approx(0.2343039).epsilon(1e-6));
  CHECK(c_of_h(0.8) == Approx(0.3275257).epsilon(1e-6));

  // strictly decreasing in H, range inside (0, 2/3)
  double prev = 1.0;
  for (int i = 1; i <= 99; ++i) {
    const double c = c_of_h(i / 100.0);
    CHECK(c < prev);
    CHECK(c > 0.0);
    CHECK(c < 2.0 / 3.0);
    prev = c;
  }

  // mutual inverses: g(c(H)) = H to 1e-12, c(g(x)) = x on the shared range
  for (int i = 1; i <= 99; ++i) {
    const double h = i / 100.0;
    CHECK(std::fabs(g_of_x(c_of_h(h)) - h) < 1e-12);
  }
  for (double x : {0.1, 0.3, 0.5, 0.6}) CHECK(c_of_h(g_of_x(x)) == Approx(x).epsilon(1e-12));

  // the max{0, .} clamp: frequencies above 2/3 map to H = 0
  CHECK(g_of_x(0.7) == 0.0);
  CHECK_THROWS_AS(g_of_x(-0.1), input_error);
  CHECK_THROWS_AS(g_of_x(1.1), input_error);
  CHECK_THROWS_AS(c_of_h(0.0), input_error);
}

TEST_CASE("differenced white noise sums to zero exactly") {
  // r_Z(0) = 2, r_Z(+-1) = -1, all other lags 0
  const CovModel wn = CovModel::from_table({1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
                                            0.0, 0.0});
  CHECK(increment_antipersistence_check(wn, 10) == 0.0);
}

TEST_CASE("differenced fGn is antipersistent") {
  CHECK(std::fabs(increment_antipersistence_check(CovModel::fgn(0.8), 10000)) < 0.01);
  CHECK(std::fabs(increment_antipersistence_check(CovModel::fgn(0.9), 100000)) < 0.01);
  // the truncated sum keeps shrinking with the cutoff
  const CovModel m = CovModel::fgn(0.8);
  CHECK(std::fabs(increment_antipersistence_check(m, 10000)) <
        std::fabs(increment_antipersistence_check(m, 1000)));
  CHECK(std::fabs(increment_antipersistence_check(m, 1000)) <
        std::fabs(increment_antipersistence_check(m, 100)));
}

TEST_CASE("both forms of the turning-point probability agree") {
  // 1 - (2/pi) asin(2^{H-1}) equals 1/2 - asin(r_H(1))/pi through the
  // double-angle identity
  for (int i = 1; i <= 19; ++i) {
    const double h = i / 20.0;
    const double via_r = 0.5 - std::asin(fgn_autocov(h, 1)) / std::numbers::pi;
    CHECK(c_of_h(h) == Approx(via_r).margin(1e-14));
  }
}

TEST_CASE("covariance tables load from CSV") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "ordpat_test_table.csv";
  {
    std::ofstream out(path);
    out << "1.0\n0.5\n0.25\n";
  }
  const CovModel m = CovModel::table_from_csv(path.string());
  CHECK(m.r(0) == 1.0);
  CHECK(m.r(1) == 0.5);
  CHECK(m.r(-2) == 0.25);
  CHECK_THROWS_AS(m.r(3), input_error);
  CHECK_THROWS_AS(CovModel::table_from_csv("/nonexistent/file.csv"), input_error);
  fs::remove(path);

  CHECK_THROWS_AS(m.memory_exponent(), regime_error);
  CovModel m2 = m;
  m2.set_lrd_parameters(0.4, 0.48);
  CHECK(m2.memory_exponent() == 0.4);
  CHECK(m2.slowly_varying_limit() == 0.48);
}

TEST_CASE("slowly varying limit is restricted to H > 1/2") {
  CHECK(CovModel::fgn(0.8).slowly_varying_limit() == Approx(0.48));
  CHECK_THROWS_AS(CovModel::fgn(0.4).slowly_varying_limit(), regime_error);
}
