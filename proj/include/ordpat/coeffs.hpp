#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "ordpat/cov.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/linalg.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/pattern.hpp"
#include "ordpat/rng.hpp"

namespace ordpat {

// Standard normal density at 0, (2 pi)^{-1/2}.
inline double phi0() { return 1.0 / std::sqrt(2.0 * std::numbers::pi); }

// ---------------------------------------------------------------------------
// Limit laws

inline double c_d_constant(double d) {
  if (!(d > 0.0 && d < 1.0)) throw input_error("memory exponent must be in (0,1)");
  return 2.0 / ((1.0 - d) * (2.0 - d));
}

inline double c2_constant(double d) {
  if (!(d > 0.0 && d < 1.0)) throw input_error("memory exponent must be in (0,1)");
  if (d >= 0.5) throw regime_error("C2 requires D < 1/2");
  return 1.0 / ((1.0 - 2.0 * d) * (2.0 - d));
}

enum class LimitKind { Gaussian, Rosenblatt };

struct LimitLaw {
  LimitKind kind;
  double scale;                 // Gaussian: sqrt(c_D)|sum alpha|; Rosenblatt: sum alpha, signed
  double rate_exponent;         // exponent of n in the normalization
  double slowly_varying_power;  // exponent of L(n) in the normalization
  double rosenblatt_hurst;      // parameter of the Rosenblatt limit, NaN for Gaussian

  double variance() const { return scale * scale; }
  bool degenerate() const { return scale == 0.0; }
};

inline LimitLaw limit_law_rank1(double d, double alpha_sum) {
  const double cd = c_d_constant(d);
  return LimitLaw{LimitKind::Gaussian, std::sqrt(cd) * std::fabs(alpha_sum), d / 2.0, 0.5,
                  std::numeric_limits<double>::quiet_NaN()};
}

inline LimitLaw limit_law_rank2(double d, double alpha_sum) {
  if (!(d > 0.0 && d < 1.0)) throw input_error("memory exponent must be in (0,1)");
  if (d >= 0.5)
    throw regime_error("rank-2 limit requires D < 1/2; D >= 1/2 is the short-range regime");
  return LimitLaw{LimitKind::Rosenblatt, alpha_sum, d, 1.0, 1.0 - d / 2.0};
}

// ---------------------------------------------------------------------------
// Closed forms for h <= 2

namespace detail {

inline void require_corr(double r1) {
  if (!(std::fabs(r1) < 1.0)) throw input_error("lag-1 correlation must satisfy |r| < 1");
}

// c vector of the base patterns the closed forms are derived for.
inline std::array<double, 2> base_rank1_210(double r) {
  const double c = phi0() * (1.0 + r) / 2.0;
  return {c, c};
}

inline std::array<double, 2> base_rank1_201(double r) {
  const double c1 = phi0() / 2.0 * (std::sqrt(1.0 + r) / std::numbers::sqrt2 - 1.0);
  const double c2 = phi0() / 2.0 * (std::sqrt(1.0 + r) / std::numbers::sqrt2 - r);
  return {c1, c2};
}

struct SymmetryMap {
  bool negate;   // space reversal flips the sign of every c_k
  bool reflect;  // time reversal sends c_k to -c_{h+1-k}
};

// Expresses p through one of {base, S, T, TS}.
inline SymmetryMap match_against_base(const Pattern& p, const Pattern& base) {
  if (p == base) return {false, false};
  if (p == space_reverse(base)) return {true, false};
  if (p == time_reverse(base)) return {true, true};
  if (p == time_reverse(space_reverse(base))) return {false, true};
  throw not_closed_form("pattern is not in the base pattern's reversal group");
}

template <std::size_t N>
inline std::vector<double> apply_map(const std::array<double, N>& base, SymmetryMap m) {
  std::vector<double> c(base.begin(), base.end());
  if (m.reflect) std::reverse(c.begin(), c.end());
  if (m.negate) {
    for (double& v : c) v = -v;
  }
  return c;
}

}  // namespace detail

struct Rank1Coeffs {
  Pattern pattern;
  double r1;
  std::vector<double> c;      // c_k = E[X_k 1{pattern}]
  std::vector<double> alpha;  // Sigma^{-1} c
  double alpha_sum;
};

// Hermite coefficients of order 1 for patterns of order h <= 2, from the
// closed-form integrals; anything larger goes through the oracle.
inline Rank1Coeffs rank1_closed_form(const Pattern& pattern, double r1) {
  detail::require_corr(r1);
  const int h = pattern.order();
  if (h == 1) {
    const double c1 = pattern[0] == 1 ? phi0() : -phi0();
    return Rank1Coeffs{pattern, r1, {c1}, {c1}, c1};
  }
  if (h != 2) throw not_closed_form("rank-1 closed forms cover orders 1 and 2 only");

  const Pattern base210({2, 1, 0});
  const Pattern base201({2, 0, 1});
  std::vector<double> c;
  if (reversal_group(pattern).contains(base210)) {
    c = detail::apply_map(detail::base_rank1_210(r1), detail::match_against_base(pattern, base210));
  } else {
    c = detail::apply_map(detail::base_rank1_201(r1), detail::match_against_base(pattern, base201));
  }
  ToeplitzCov sigma = toeplitz_sigma(CovModel::from_table({1.0, r1}), 2);
  std::vector<double> alpha = solve_sigma(sigma, c);
  return Rank1Coeffs{pattern, r1, c, alpha, alpha[0] + alpha[1]};
}

// Per-pattern order-2 coefficients (c_11, c_12, c_22) for h = 2.
struct PatternRank2 {
  double c11, c12, c22;
};

inline PatternRank2 rank2_pattern_closed_form(const Pattern& pattern, double r1) {
  detail::require_corr(r1);
  if (pattern.order() != 2) throw not_closed_form("order-2 closed forms cover h = 2 only");
  const double s = std::sqrt(1.0 - r1 * r1);
  const double p2 = phi0() * phi0();
  PatternRank2 base{};
  const Pattern base210({2, 1, 0});
  const Pattern base201({2, 0, 1});
  const Pattern* base_pattern = nullptr;
  if (reversal_group(pattern).contains(base210)) {
    base = {p2 * r1 * s, p2 * s, p2 * r1 * s};
    base_pattern = &base210;
  } else {
    base = {-p2 * s / 2.0, -p2 * s / 2.0, -p2 * s * (2.0 * r1 - 1.0) / 2.0};
    base_pattern = &base201;
  }
  // Space reversal leaves the c_{i,j} fixed; time reversal swaps indices
  // through i -> h+1-i.
  const detail::SymmetryMap m = detail::match_against_base(pattern, *base_pattern);
  if (m.reflect) std::swap(base.c11, base.c22);
  return base;
}

struct Rank2Coeffs {
  ReversalGroup group;
  double r1;
  Matrix c2;     // C_ij = E[(X_i X_j - E X_i X_j) f], f the group-averaged indicator
  Matrix alpha;  // Sigma^{-1} C Sigma^{-1}
  double alpha_sum;
};

inline Rank2Coeffs rank2_closed_form(const ReversalGroup& group, double r1) {
  detail::require_corr(r1);
  if (group.order() != 2) throw not_closed_form("rank-2 closed forms cover h = 2 only");
  const PatternRank2 pc = rank2_pattern_closed_form(group.canonical(), r1);
  Matrix c2(2);
  // Averaging over the group symmetrizes the diagonal: C_11 = C_22 =
  // (c11 + c22)/2, C_12 = c12.
  c2(0, 0) = c2(1, 1) = 0.5 * (pc.c11 + pc.c22);
  c2(0, 1) = c2(1, 0) = pc.c12;
  ToeplitzCov sigma = toeplitz_sigma(CovModel::from_table({1.0, r1}), 2);
  const Matrix l = cholesky_lower(sigma.sigma);
  Matrix alpha(2);
  for (std::size_t j = 0; j < 2; ++j) {
    const std::array<double, 2> col{c2(0, j), c2(1, j)};
    const std::vector<double> t = cholesky_solve(l, col);  // Sigma^{-1} C
    alpha(0, j) = t[0];
    alpha(1, j) = t[1];
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const std::array<double, 2> row{alpha(i, 0), alpha(i, 1)};
    const std::vector<double> t = cholesky_solve(l, row);  // ... Sigma^{-1}
    alpha(i, 0) = t[0];
    alpha(i, 1) = t[1];
  }
  const double alpha_sum = alpha(0, 0) + alpha(0, 1) + alpha(1, 0) + alpha(1, 1);
  return Rank2Coeffs{group, r1, std::move(c2), std::move(alpha), alpha_sum};
}

// Model-implied probability of a single pattern for h <= 2 (orthant closed
// forms); r1 is the lag-1 correlation of the increments.
inline double pattern_probability(double r1, const Pattern& pattern) {
  detail::require_corr(r1);
  const int h = pattern.order();
  if (h == 1) return 0.5;
  if (h != 2) throw not_closed_form("closed-form probabilities cover orders 1 and 2 only");
  const double a = std::asin(r1);
  if (reversal_group(pattern).contains(Pattern({2, 1, 0})))
    return 0.25 + a / (2.0 * std::numbers::pi);
  return 0.125 - a / (4.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Appendix route: coefficients in Cholesky coordinates, b = E[Y 1{...}],
// alpha = (A^{-1})^t b. Independent of the direct Sigma^{-1} c route.

struct CholeskyPathCoeffs {
  std::vector<double> b;
  std::vector<double> alpha;
  double alpha_sum;
};

inline CholeskyPathCoeffs rank1_cholesky_path(const Pattern& pattern, double r1) {
  detail::require_corr(r1);
  if (!(pattern == Pattern({2, 1, 0})))
    throw not_closed_form("the Cholesky-coordinate route is derived for (2,1,0)");
  const double s = std::sqrt(1.0 - r1 * r1);
  std::vector<double> b{phi0() * (1.0 + r1) / 2.0, phi0() * s / 2.0};
  ToeplitzCov sigma = toeplitz_sigma(CovModel::from_table({1.0, r1}), 2);
  const Matrix l = cholesky_lower(sigma.sigma);
  std::vector<double> alpha = transposed_solve(l, b);  // solves L^t alpha = b
  const double alpha_sum = alpha[0] + alpha[1];
  return CholeskyPathCoeffs{std::move(b), std::move(alpha), alpha_sum};
}

// ---------------------------------------------------------------------------
// Monte Carlo oracle

using OracleTarget = std::variant<Pattern, ReversalGroup>;

namespace detail {

inline int target_order(const OracleTarget& t) {
  return std::holds_alternative<Pattern>(t) ? std::get<Pattern>(t).order()
                                            : std::get<ReversalGroup>(t).order();
}

// Indicator weight of the increment-pattern event: 1{pattern} for a single
// pattern, (1/#group) 1{in group} for a reversal group.
class TargetIndicator {
 public:
  explicit TargetIndicator(const OracleTarget& t) {
    if (std::holds_alternative<Pattern>(t)) {
      indices_.push_back(std::get<Pattern>(t).index());
      weight_ = 1.0;
    } else {
      const ReversalGroup& g = std::get<ReversalGroup>(t);
      for (const Pattern& p : g.members()) indices_.push_back(p.index());
      weight_ = 1.0 / static_cast<double>(g.size());
    }
  }

  // x: h increments. Evaluates the cumulative-sum window on the stack.
  double operator()(const double* x, int h) const {
    double w[kMaxOrder + 2];
    w[0] = 0.0;
    for (int i = 0; i < h; ++i) w[i + 1] = w[i] + x[i];
    const std::uint32_t idx = encode_index(w, h + 1);
    for (std::uint32_t m : indices_)
      if (m == idx) return weight_;
    return 0.0;
  }

  double weight() const { return weight_; }

 private:
  std::vector<std::uint32_t> indices_;
  double weight_;
};

inline constexpr std::size_t kOracleShards = 64;

struct Accumulator {
  std::vector<double> sum, sumsq;
  std::size_t count = 0;
  explicit Accumulator(std::size_t k) : sum(k, 0.0), sumsq(k, 0.0) {}
  void add(const double* v, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
      sum[i] += v[i];
      sumsq[i] += v[i] * v[i];
    }
    ++count;
  }
  void merge(const Accumulator& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sumsq[i] += o.sumsq[i];
    }
    count += o.count;
  }
  double mean(std::size_t i) const { return sum[i] / static_cast<double>(count); }
  double se(std::size_t i) const {
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sumsq[i] - sum[i] * sum[i] / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

// Draws sharded Gaussian vectors X = L z and folds fn(x, shard_accumulator).
template <class Fn>
inline std::vector<Accumulator> sample_sharded(const Matrix& chol, std::size_t samples,
                                               std::uint64_t seed, int threads,
                                               std::size_t stats, Fn&& fn) {
  const std::size_t h = chol.dim();
  std::vector<Accumulator> acc(kOracleShards, Accumulator(stats));
  parallel_shards(kOracleShards, threads, [&](std::size_t shard) {
    const std::size_t base = samples / kOracleShards;
    const std::size_t mine = base + (shard < samples % kOracleShards ? 1 : 0);
    CounterRng rng(seed, shard);
    std::vector<double> z(h), x(h);
    for (std::size_t it = 0; it < mine; ++it) {
      rng.fill_normals(z);
      for (std::size_t i = 0; i < h; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += chol(i, k) * z[k];
        x[i] = s;
      }
      fn(x.data(), acc[shard]);
    }
  });
  for (std::size_t s = 1; s < kOracleShards; ++s) acc[0].merge(acc[s]);
  acc.erase(acc.begin() + 1, acc.end());
  return acc;
}

inline void check_oracle_pre(const OracleTarget& target, const ToeplitzCov& sigma,
                             std::size_t samples) {
  if (samples < 10000) throw input_error("oracle needs at least 1e4 samples");
  if (static_cast<std::size_t>(target_order(target)) != sigma.dim())
    throw input_error("covariance dimension must equal the pattern order");
}

}  // namespace detail

struct Rank1Oracle {
  std::vector<double> c, c_se;
  std::vector<double> alpha;
  double alpha_sum, alpha_sum_se;
  double p, p_se;  // probability of the target event
  std::size_t samples;
};

// Plain Monte Carlo estimates of the order-1 coefficients c_k = E[X_k f].
inline Rank1Oracle mc_rank1(const OracleTarget& target, const ToeplitzCov& sigma,
                            std::size_t samples, std::uint64_t seed, int threads = 0) {
  detail::check_oracle_pre(target, sigma, samples);
  const std::size_t h = sigma.dim();
  const Matrix l = cholesky_lower(sigma.sigma);
  const std::vector<double> ones(h, 1.0);
  const std::vector<double> w = cholesky_solve(l, ones);  // Sigma^{-1} 1
  detail::TargetIndicator f(target);

  const std::size_t stats = h + 2;  // c_1..c_h, w'X f, f
  auto acc = detail::sample_sharded(l, samples, seed, threads, stats,
                                    [&](const double* x, detail::Accumulator& a) {
                                      double v[kMaxOrder + 2];
                                      const double fx = f(x, static_cast<int>(h));
                                      double wx = 0.0;
                                      for (std::size_t k = 0; k < h; ++k) {
                                        v[k] = x[k] * fx;
                                        wx += w[k] * x[k];
                                      }
                                      v[h] = wx * fx;
                                      v[h + 1] = fx;
                                      a.add(v, stats);
                                    });
  Rank1Oracle out;
  out.samples = acc[0].count;
  out.c.resize(h);
  out.c_se.resize(h);
  for (std::size_t k = 0; k < h; ++k) {
    out.c[k] = acc[0].mean(k);
    out.c_se[k] = acc[0].se(k);
  }
  out.alpha = cholesky_solve(l, out.c);
  out.alpha_sum = acc[0].mean(h);
  out.alpha_sum_se = acc[0].se(h);
  out.p = acc[0].mean(h + 1) / f.weight();
  out.p_se = acc[0].se(h + 1) / f.weight();
  return out;
}

struct Rank2Oracle {
  Matrix c2, c2_se;
  Matrix alpha;
  double alpha_sum, alpha_sum_se;
  std::size_t samples;  // antithetic pairs
};

// Antithetic-pair Monte Carlo estimates of the order-2 coefficients
// C_ij = E[(X_i X_j - Sigma_ij) f]; the +-X pairing cancels the odd-order
// part of the integrand exactly.
inline Rank2Oracle mc_rank2(const OracleTarget& target, const ToeplitzCov& sigma,
                            std::size_t samples, std::uint64_t seed, int threads = 0) {
  detail::check_oracle_pre(target, sigma, samples);
  const std::size_t h = sigma.dim();
  const Matrix l = cholesky_lower(sigma.sigma);
  const std::vector<double> ones(h, 1.0);
  const std::vector<double> w = cholesky_solve(l, ones);
  double w_sigma_w = 0.0;
  for (std::size_t i = 0; i < h; ++i) w_sigma_w += w[i];  // w' Sigma w = w' 1
  detail::TargetIndicator f(target);

  const std::size_t pairs = h * (h + 1) / 2;
  const std::size_t stats = pairs + 1;
  auto acc = detail::sample_sharded(
      l, samples, seed, threads, stats, [&](const double* x, detail::Accumulator& a) {
        double v[kMaxOrder * (kMaxOrder + 1) / 2 + 1];
        double neg[kMaxOrder];
        for (std::size_t i = 0; i < h; ++i) neg[i] = -x[i];
        const double fbar = 0.5 * (f(x, static_cast<int>(h)) + f(neg, static_cast<int>(h)));
        std::size_t slot = 0;
        double wx = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
          wx += w[i] * x[i];
          for (std::size_t j = i; j < h; ++j)
            v[slot++] = (x[i] * x[j] - sigma.sigma(i, j)) * fbar;
        }
        v[pairs] = (wx * wx - w_sigma_w) * fbar;
        a.add(v, stats);
      });
  Rank2Oracle out;
  out.samples = acc[0].count;
  out.c2 = Matrix(h);
  out.c2_se = Matrix(h);
  std::size_t slot = 0;
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = i; j < h; ++j) {
      out.c2(i, j) = out.c2(j, i) = acc[0].mean(slot);
      out.c2_se(i, j) = out.c2_se(j, i) = acc[0].se(slot);
      ++slot;
    }
  }
  out.alpha = Matrix(h);
  std::vector<double> col(h);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < h; ++i) col[i] = out.c2(i, j);
    const std::vector<double> t = cholesky_solve(l, col);
    for (std::size_t i = 0; i < h; ++i) out.alpha(i, j) = t[i];
  }
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < h; ++j) col[j] = out.alpha(i, j);
    const std::vector<double> t = cholesky_solve(l, col);
    for (std::size_t j = 0; j < h; ++j) out.alpha(i, j) = t[j];
  }
  out.alpha_sum = acc[0].mean(pairs);
  out.alpha_sum_se = acc[0].se(pairs);
  return out;
}

// ---------------------------------------------------------------------------
// Hermite rank probe

enum class HermiteRankEstimate { Rank1, Rank2, Degenerate, Inconclusive };

// Declares a coefficient set zero when every entry is within 4 standard
// errors of 0 and nonzero when any entry exceeds 6; in between the probe
// refuses to classify.
inline HermiteRankEstimate hermite_rank_probe(const OracleTarget& target,
                                              const ToeplitzCov& sigma, std::size_t samples,
                                              std::uint64_t seed, int threads = 0) {
  auto z_of = [](double value, double se) {
    if (se == 0.0) return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::fabs(value) / se;
  };
  const Rank1Oracle o1 = mc_rank1(target, sigma, samples, seed, threads);
  double z1 = 0.0;
  for (std::size_t k = 0; k < o1.c.size(); ++k) z1 = std::max(z1, z_of(o1.c[k], o1.c_se[k]));
  if (z1 > 6.0) return HermiteRankEstimate::Rank1;
  if (z1 > 4.0) return HermiteRankEstimate::Inconclusive;

  const Rank2Oracle o2 = mc_rank2(target, sigma, samples, seed ^ 0x517cc1b727220a95ull, threads);
  double z2 = 0.0;
  const std::size_t h = sigma.dim();
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i; j < h; ++j) z2 = std::max(z2, z_of(o2.c2(i, j), o2.c2_se(i, j)));
  if (z2 > 6.0) return HermiteRankEstimate::Rank2;
  if (z2 > 4.0) return HermiteRankEstimate::Inconclusive;
  return HermiteRankEstimate::Degenerate;
}

// ---------------------------------------------------------------------------
// Increment degeneracy check: order-1 coefficients of the *stationary-window*
// indicator 1{Pi(X_0,...,X_h) = pi}. Individual c_k are nonzero while
// sum alpha = 1' Sigma^{-1} c vanishes for functions of increments.

struct IncrementAlphaCheck {
  std::vector<double> c, c_se;
  double alpha_sum, alpha_sum_se;
  std::size_t samples;
};

inline IncrementAlphaCheck increment_alpha_sum_check(const Pattern& pattern,
                                                     const ToeplitzCov& sigma,
                                                     std::size_t samples, std::uint64_t seed,
                                                     int threads = 0) {
  if (samples < 10000) throw input_error("oracle needs at least 1e4 samples");
  const std::size_t p = sigma.dim();
  if (p != static_cast<std::size_t>(pattern.order()) + 1)
    throw input_error("covariance dimension must equal the window length h+1");
  const Matrix l = cholesky_lower(sigma.sigma);
  const std::vector<double> ones(p, 1.0);
  const std::vector<double> w = cholesky_solve(l, ones);
  const std::uint32_t want = pattern.index();

  const std::size_t stats = p + 1;
  auto acc = detail::sample_sharded(l, samples, seed, threads, stats,
                                    [&](const double* x, detail::Accumulator& a) {
                                      double v[kMaxOrder + 2];
                                      const double fx =
                                          detail::encode_index(x, static_cast<int>(p)) == want
                                              ? 1.0
                                              : 0.0;
                                      double wx = 0.0;
                                      for (std::size_t k = 0; k < p; ++k) {
                                        v[k] = x[k] * fx;
                                        wx += w[k] * x[k];
                                      }
                                      v[p] = wx * fx;
                                      a.add(v, stats);
                                    });
  IncrementAlphaCheck out;
  out.samples = acc[0].count;
  out.c.resize(p);
  out.c_se.resize(p);
  for (std::size_t k = 0; k < p; ++k) {
    out.c[k] = acc[0].mean(k);
    out.c_se[k] = acc[0].se(k);
  }
  out.alpha_sum = acc[0].mean(p);
  out.alpha_sum_se = acc[0].se(p);
  return out;
}

}  // namespace ordpat
