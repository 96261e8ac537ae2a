#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ordpat/errors.hpp"
#include "ordpat/linalg.hpp"

namespace ordpat {

// Autocovariance of fractional Gaussian noise,
//   r_H(k) = ((k+1)^{2H} - 2k^{2H} + (k-1)^{2H}) / 2.
// Evaluated via expm1/log1p so the second difference survives large k
// without catastrophic cancellation.
inline double fgn_autocov(double hurst, std::int64_t k) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw input_error("Hurst parameter must be in (0,1)");
  if (k < 0) k = -k;
  if (k == 0) return 1.0;
  const double kk = static_cast<double>(k);
  const double e = 2.0 * hurst;
  const double up = std::expm1(e * std::log1p(1.0 / kk));
  const double down = k == 1 ? -1.0 : std::expm1(e * std::log1p(-1.0 / kk));
  return 0.5 * std::pow(kk, e) * (up + down);
}

// Autocovariance model of the stationary increment process.
class CovModel {
 public:
  enum class Kind { Fgn, Table };

  static CovModel fgn(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw input_error("Hurst parameter must be in (0,1)");
    CovModel m;
    m.kind_ = Kind::Fgn;
    m.hurst_ = hurst;
    return m;
  }

  static CovModel from_table(std::vector<double> values) {
    if (values.empty() || values[0] != 1.0) throw input_error("table must start with r(0) = 1");
    for (double v : values) {
      if (!std::isfinite(v) || std::fabs(v) > 1.0)
        throw input_error("table autocovariances must be finite and in [-1,1]");
    }
    CovModel m;
    m.kind_ = Kind::Table;
    m.table_ = std::move(values);
    return m;
  }

  // One lag value per line, lag 0 first.
  static CovModel table_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open covariance table: " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      double v;
      if (!(ss >> v)) throw input_error("bad covariance table line: " + line);
      values.push_back(v);
    }
    return from_table(std::move(values));
  }

  Kind kind() const { return kind_; }
  double hurst() const {
    if (kind_ != Kind::Fgn) throw input_error("model has no Hurst parameter");
    return hurst_;
  }

  double r(std::int64_t k) const {
    if (k < 0) k = -k;
    if (kind_ == Kind::Fgn) return fgn_autocov(hurst_, k);
    if (static_cast<std::size_t>(k) >= table_.size())
      throw input_error("lag beyond covariance table");
    return table_[static_cast<std::size_t>(k)];
  }

  // Memory parameter; D = 2 - 2H for fGn, user-supplied for tables.
  double memory_exponent() const {
    if (kind_ == Kind::Fgn) return 2.0 - 2.0 * hurst_;
    if (!d_) throw regime_error("memory exponent not set for table model");
    return *d_;
  }

  // L(n) -> H(2H-1) for fGn; only defined for H > 1/2, which is the regime
  // the standardizations support.
  double slowly_varying_limit() const {
    if (kind_ == Kind::Fgn) {
      if (!(hurst_ > 0.5)) throw regime_error("slowly varying limit requires H > 1/2");
      return hurst_ * (2.0 * hurst_ - 1.0);
    }
    if (!l_inf_) throw regime_error("slowly varying limit not set for table model");
    return *l_inf_;
  }

  void set_lrd_parameters(double d, double l_inf) {
    if (!(d > 0.0 && d < 1.0)) throw input_error("memory exponent must be in (0,1)");
    if (!(l_inf > 0.0)) throw input_error("slowly varying limit must be positive");
    d_ = d;
    l_inf_ = l_inf;
  }

 private:
  Kind kind_ = Kind::Fgn;
  double hurst_ = 0.5;
  std::vector<double> table_;
  std::optional<double> d_;
  std::optional<double> l_inf_;
};

// Symmetric Toeplitz covariance (r(|i-j|)) of a window of the process.
struct ToeplitzCov {
  Matrix sigma;
  std::size_t dim() const { return sigma.dim(); }
};

inline ToeplitzCov toeplitz_sigma(const CovModel& model, std::size_t p) {
  if (p == 0) throw input_error("dimension must be positive");
  Matrix m(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      m(i, j) = model.r(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j));
  if (model.kind() == CovModel::Kind::Table) cholesky_lower(m);  // validate PD
  return ToeplitzCov{std::move(m)};
}

inline Matrix cholesky_lower(const ToeplitzCov& cov) { return cholesky_lower(cov.sigma); }

// Sigma^{-1} v via the Cholesky factor.
inline std::vector<double> solve_sigma(const ToeplitzCov& cov, std::span<const double> v) {
  return cholesky_solve(cholesky_lower(cov.sigma), v);
}

// Turning-point probability of fGn, c(H) = 1 - (2/pi) arcsin(2^{H-1}).
inline double c_of_h(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw input_error("Hurst parameter must be in (0,1)");
  return 1.0 - 2.0 / std::numbers::pi * std::asin(std::exp2(hurst - 1.0));
}

// Inverse map g(x) = max{0, log2(cos(pi x / 2)) + 1} on [0,1].
inline double g_of_x(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw input_error("argument must be in [0,1]");
  const double c = std::cos(std::numbers::pi * x / 2.0);
  if (c <= 0.0) return 0.0;
  return std::max(0.0, std::log2(c) + 1.0);
}

// Truncated autocovariance sum sum_{|k|<=K} r_Z(k) of the differenced process
// Z_j = X_j - X_{j-1}; tends to 0 for LRD models (antipersistence).
inline double increment_antipersistence_check(const CovModel& model, std::int64_t K) {
  if (K < 0) throw input_error("truncation must be nonnegative");
  auto r_z = [&](std::int64_t k) {
    return 2.0 * model.r(k) - model.r(k - 1) - model.r(k + 1);
  };
  double sum = r_z(0);
  for (std::int64_t k = 1; k <= K; ++k) sum += 2.0 * r_z(k);
  return sum;
}

}  // namespace ordpat
