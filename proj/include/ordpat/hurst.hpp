#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "ordpat/coeffs.hpp"
#include "ordpat/cov.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/estimators.hpp"

namespace ordpat {

enum class HurstRegime { Srd, Boundary, Lrd };

struct HurstResult {
  double h_hat = 0.0;
  double c_hat = 0.0;
  std::size_t n = 0;
  std::optional<double> standardized;
  HurstRegime regime = HurstRegime::Srd;
};

inline HurstRegime classify_regime(double h) {
  if (std::fabs(h - 0.75) < 0.01) return HurstRegime::Boundary;
  return h > 0.75 ? HurstRegime::Lrd : HurstRegime::Srd;
}

// Zero-Crossing estimator: turning-point frequency mapped through g.
inline HurstResult estimate_hurst(const SeriesView& series, int threads = 0) {
  const Estimate ph = p_hat(series, turning_point_group(), threads);
  HurstResult res;
  res.c_hat = 4.0 * ph.value;
  res.h_hat = g_of_x(res.c_hat);
  res.n = ph.n;
  res.regime = classify_regime(res.h_hat);
  return res;
}

struct HurstLimitConstants {
  double prefactor;    // sqrt(4H-3) / (sqrt(H) (2H-1)), multiplies n^{2-2H}
  double limit_scale;  // scale of the Rosenblatt limit variable
};

inline HurstLimitConstants hurst_limit_constants(double hurst) {
  if (!(hurst > 0.75 && hurst < 1.0))
    throw regime_error("the Hurst limit law requires 3/4 < H < 1");
  const double prefactor =
      std::sqrt(4.0 * hurst - 3.0) / (std::sqrt(hurst) * (2.0 * hurst - 1.0));
  const double c = c_of_h(hurst);
  const double limit_scale = std::numbers::pi / std::numbers::ln2 *
                             std::tan(std::numbers::pi * c / 2.0) * phi0() * phi0() *
                             std::sqrt(std::exp2(2.0 - 2.0 * hurst) - 1.0);
  return HurstLimitConstants{prefactor, limit_scale};
}

// prefactor * n^{2-2H} (H_hat - H); converges to limit_scale times a
// Rosenblatt variable for H > 3/4.
inline double standardize_hurst(const HurstResult& result, double true_hurst) {
  const HurstLimitConstants k = hurst_limit_constants(true_hurst);
  return k.prefactor * std::pow(static_cast<double>(result.n), 2.0 - 2.0 * true_hurst) *
         (result.h_hat - true_hurst);
}

}  // namespace ordpat
