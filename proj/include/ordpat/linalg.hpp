#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ordpat/errors.hpp"

namespace ordpat {

// Dense square matrix, row-major. Sized for the small covariance problems
// handled here (p <= 4096).
class Matrix {
 public:
  Matrix() : n_(0) {}
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t dim() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::vector<double> mul(std::span<const double> v) const {
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * v[j];
      out[i] = s;
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
inline Matrix cholesky_lower(const Matrix& m) {
  const std::size_t n = m.dim();
  Matrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0)) throw numeric_error("matrix is not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

// Solve L y = b for lower-triangular L.
inline std::vector<double> forward_solve(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.dim();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

// Solve L^t x = y for lower-triangular L.
inline std::vector<double> transposed_solve(const Matrix& l, std::span<const double> y) {
  const std::size_t n = l.dim();
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

// Solve A x = b given the Cholesky factor L of A.
inline std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b) {
  const std::vector<double> y = forward_solve(l, b);
  return transposed_solve(l, y);
}

}  // namespace ordpat
