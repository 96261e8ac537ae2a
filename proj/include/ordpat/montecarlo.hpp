#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ordpat/coeffs.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/estimators.hpp"
#include "ordpat/fgn.hpp"
#include "ordpat/hurst.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/rng.hpp"

namespace ordpat {

namespace detail {

// Inverse standard normal CDF, Acklam's rational approximation with one
// Halley refinement step; good to ~1e-15 over (0,1).
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw input_error("quantile level must be in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

struct RawMoments {
  double mean = 0.0, var = 0.0, skewness = 0.0, excess_kurtosis = 0.0;
};

// One-pass central moment accumulation (numerically stable update formulas).
inline RawMoments raw_moments(std::span<const double> xs) {
  double m = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  double n = 0.0;
  for (double x : xs) {
    const double n1 = n;
    n += 1.0;
    const double delta = x - m;
    const double dn = delta / n;
    const double dn2 = dn * dn;
    const double t = delta * dn * n1;
    m += dn;
    m4 += t * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2 - 4.0 * dn * m3;
    m3 += t * dn * (n - 2.0) - 3.0 * dn * m2;
    m2 += t;
  }
  RawMoments out;
  out.mean = m;
  if (n < 2.0) return out;
  const double v = m2 / n;
  out.var = v;
  if (v > 0.0) {
    out.skewness = (m3 / n) / std::pow(v, 1.5);
    out.excess_kurtosis = (m4 / n) / (v * v) - 3.0;
  }
  return out;
}

}  // namespace detail

struct Moments {
  double mean = 0.0, var = 0.0, skewness = 0.0, excess_kurtosis = 0.0;
  double se_mean = 0.0, se_var = 0.0, se_skewness = 0.0, se_excess_kurtosis = 0.0;
  std::size_t bootstrap_resamples = 0;
};

// Moments with bootstrap standard errors (fixed sub-seed for determinism).
inline Moments summarize(std::span<const double> samples, std::size_t resamples = 1000,
                         std::uint64_t bootstrap_seed = 0x626f6f74ull) {
  if (samples.empty()) throw input_error("cannot summarize an empty sample");
  const detail::RawMoments base = detail::raw_moments(samples);
  Moments out;
  out.mean = base.mean;
  out.var = base.var;
  out.skewness = base.skewness;
  out.excess_kurtosis = base.excess_kurtosis;
  out.bootstrap_resamples = resamples;
  if (resamples == 0) return out;

  CounterRng rng(bootstrap_seed);
  const std::size_t n = samples.size();
  std::vector<double> draw(n);
  detail::RawMoments acc_mean, acc_sq;
  std::vector<detail::RawMoments> reps(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_unit() * static_cast<double>(n));
      draw[i] = samples[j < n ? j : n - 1];
    }
    reps[b] = detail::raw_moments(draw);
  }
  auto sd_of = [&](auto proj) {
    double s = 0.0, s2 = 0.0;
    for (const auto& r : reps) {
      const double v = proj(r);
      s += v;
      s2 += v * v;
    }
    const double m = s / static_cast<double>(resamples);
    const double var = std::max(0.0, s2 / static_cast<double>(resamples) - m * m);
    return std::sqrt(var);
  };
  out.se_mean = sd_of([](const detail::RawMoments& r) { return r.mean; });
  out.se_var = sd_of([](const detail::RawMoments& r) { return r.var; });
  out.se_skewness = sd_of([](const detail::RawMoments& r) { return r.skewness; });
  out.se_excess_kurtosis = sd_of([](const detail::RawMoments& r) { return r.excess_kurtosis; });
  return out;
}

struct Histogram {
  std::vector<double> edges;        // bins + 1 edges
  std::vector<std::size_t> counts;  // per bin, summing to the sample size
};

inline Histogram histogram(std::span<const double> samples, int bins) {
  if (bins < 1) throw input_error("need at least one histogram bin");
  if (samples.empty()) throw input_error("cannot bin an empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it, hi = *hi_it;
  Histogram h;
  h.edges.resize(bins + 1);
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + width * b;
  h.edges[bins] = hi;
  for (double x : samples) {
    int b = width > 0.0 ? static_cast<int>((x - lo) / width) : 0;
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

struct Kde {
  std::vector<double> grid, density;
  double bandwidth = 0.0;
};

// Gaussian kernel density on a 512-point grid; Silverman bandwidth
// 1.06 sd N^{-1/5} unless one is supplied.
inline Kde kde(std::span<const double> samples, std::optional<double> bandwidth = std::nullopt) {
  if (samples.empty()) throw input_error("cannot smooth an empty sample");
  if (bandwidth && !(*bandwidth > 0.0)) throw input_error("bandwidth must be positive");
  const detail::RawMoments m = detail::raw_moments(samples);
  double bw = bandwidth.value_or(1.06 * std::sqrt(m.var) *
                                 std::pow(static_cast<double>(samples.size()), -0.2));
  if (!(bw > 0.0)) bw = 1e-9;  // degenerate sample under the Silverman rule
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it - 4.0 * bw, hi = *hi_it + 4.0 * bw;
  constexpr std::size_t kGrid = 512;
  Kde out;
  out.bandwidth = bw;
  out.grid.resize(kGrid);
  out.density.resize(kGrid);
  const double step = (hi - lo) / (kGrid - 1);
  const double inv = 1.0 / (bw * std::sqrt(2.0 * std::numbers::pi) *
                            static_cast<double>(samples.size()));
  for (std::size_t g = 0; g < kGrid; ++g) {
    const double x = lo + step * g;
    double s = 0.0;
    for (double v : samples) {
      const double z = (x - v) / bw;
      s += std::exp(-0.5 * z * z);
    }
    out.grid[g] = x;
    out.density[g] = s * inv;
  }
  return out;
}

struct QqPlot {
  std::vector<double> theoretical;  // standard normal quantiles at (i-1/2)/N
  std::vector<double> sample;       // order statistics
};

inline QqPlot qq_normal(std::span<const double> samples) {
  if (samples.empty()) throw input_error("cannot make a QQ plot of an empty sample");
  QqPlot out;
  out.sample.assign(samples.begin(), samples.end());
  std::sort(out.sample.begin(), out.sample.end());
  const std::size_t n = out.sample.size();
  out.theoretical.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.theoretical[i] =
        detail::inverse_normal_cdf((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------------------
// Campaign runner

struct QHatStatistic {
  Pattern pattern;
};
struct PHatStatistic {
  ReversalGroup group;
};
struct HurstStatistic {};

using CampaignStatistic = std::variant<QHatStatistic, PHatStatistic, HurstStatistic>;

struct CampaignConfig {
  std::size_t paths = 2000;
  std::size_t n = std::size_t{1} << 16;  // increments per path
  double hurst = 0.8;
  CampaignStatistic statistic = HurstStatistic{};
  std::uint64_t seed = 0;
  int bins = 40;
  std::optional<double> kde_bandwidth;     // default: Silverman
  std::optional<double> p_override;        // pattern probability when h > 2
  std::optional<double> alpha_sum_override;  // limit constant when h > 2
  int threads = 0;
};

struct SimReport {
  std::vector<double> standardized;  // sorted ascending
  Moments moments;
  Histogram histogram;
  Kde kde;
  QqPlot qq;
  LimitLaw theory;
};

namespace detail {

inline LimitLaw campaign_theory(const CampaignConfig& cfg, const CovModel& model) {
  const double d = model.memory_exponent();
  if (std::holds_alternative<QHatStatistic>(cfg.statistic)) {
    const Pattern& p = std::get<QHatStatistic>(cfg.statistic).pattern;
    double alpha_sum;
    if (cfg.alpha_sum_override) {
      alpha_sum = *cfg.alpha_sum_override;
    } else if (p.order() <= 2) {
      alpha_sum = rank1_closed_form(p, model.r(1)).alpha_sum;
    } else {
      throw input_error("campaigns with h > 2 need alpha_sum_override from the oracle");
    }
    return limit_law_rank1(d, alpha_sum);
  }
  if (std::holds_alternative<PHatStatistic>(cfg.statistic)) {
    const ReversalGroup& g = std::get<PHatStatistic>(cfg.statistic).group;
    double alpha_sum;
    if (cfg.alpha_sum_override) {
      alpha_sum = *cfg.alpha_sum_override;
    } else if (g.order() == 2) {
      alpha_sum = rank2_closed_form(g, model.r(1)).alpha_sum;
    } else {
      throw input_error("campaigns with h != 2 need alpha_sum_override from the oracle");
    }
    return limit_law_rank2(d, alpha_sum);
  }
  const HurstLimitConstants k = hurst_limit_constants(cfg.hurst);
  return LimitLaw{LimitKind::Rosenblatt, k.limit_scale, 2.0 - 2.0 * cfg.hurst, 0.0, cfg.hurst};
}

}  // namespace detail

// Simulate cfg.paths fGn paths, compute the statistic on each, standardize
// with the matching limit-law constants, and aggregate. Deterministic for a
// fixed config and independent of the worker count: path i draws from stream
// i of the seed and results are merged by path index.
inline SimReport run_campaign(const CampaignConfig& cfg) {
  if (cfg.paths == 0) throw input_error("need at least one path");
  const CovModel model = CovModel::fgn(cfg.hurst);
  SimReport report;
  report.theory = detail::campaign_theory(cfg, model);  // also validates the regime

  const FgnSynthesizer synth(cfg.hurst, cfg.n, SynthMethod::Circulant);
  std::vector<double> stats(cfg.paths);
  parallel_shards(cfg.paths, cfg.threads, [&](std::size_t i) {
    const std::vector<double> x = synth.path(cfg.seed, i);
    const SeriesView series{x, SeriesKind::Increments};
    if (std::holds_alternative<QHatStatistic>(cfg.statistic)) {
      const Pattern& p = std::get<QHatStatistic>(cfg.statistic).pattern;
      stats[i] = standardize_rank1(q_hat(series, p, 1), model, p, cfg.p_override);
    } else if (std::holds_alternative<PHatStatistic>(cfg.statistic)) {
      const ReversalGroup& g = std::get<PHatStatistic>(cfg.statistic).group;
      stats[i] = standardize_rank2(p_hat(series, g, 1), model, g, cfg.p_override);
    } else {
      stats[i] = standardize_hurst(estimate_hurst(series, 1), cfg.hurst);
    }
  });

  std::sort(stats.begin(), stats.end());
  report.standardized = std::move(stats);
  report.moments = summarize(report.standardized, 1000, cfg.seed ^ 0x626f6f74ull);
  report.histogram = histogram(report.standardized, cfg.bins);
  report.kde = kde(report.standardized, cfg.kde_bandwidth);
  report.qq = qq_normal(report.standardized);
  return report;
}

}  // namespace ordpat
