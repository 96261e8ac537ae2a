#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ordpat/coeffs.hpp"
#include "ordpat/cov.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/pattern.hpp"

namespace ordpat {

enum class SeriesKind { Levels, Increments };

// Non-owning view of a finite real sequence plus how to read it: as the
// observed path (levels) or as its increment process.
struct SeriesView {
  std::span<const double> values;
  SeriesKind kind = SeriesKind::Levels;
};

struct Estimate {
  double value = 0.0;  // relative frequency in [0,1]
  std::size_t n = 0;   // number of windows
};

namespace detail {

inline void check_series(const SeriesView& s) {
  for (double v : s.values)
    if (!std::isfinite(v)) throw input_error("series contains a non-finite value");
}

inline std::size_t window_count(const SeriesView& s, int h) {
  const std::size_t len = s.values.size();
  const std::size_t need = s.kind == SeriesKind::Levels ? static_cast<std::size_t>(h) + 1
                                                        : static_cast<std::size_t>(h);
  if (len < need) throw input_error("series too short for the requested order");
  return s.kind == SeriesKind::Levels ? len - h : len - h + 1;
}

// Sliding count of windows whose pattern index passes `member`; parallel fold
// over disjoint ranges, integer counts make the merge order-independent.
template <class Member>
inline std::size_t count_pattern_windows(const SeriesView& s, int h, Member member,
                                         int threads) {
  check_series(s);
  const std::size_t n = window_count(s, h);
  const double* x = s.values.data();
  const bool levels = s.kind == SeriesKind::Levels;
  constexpr std::size_t kChunk = 1 << 15;
  const std::size_t shards = (n + kChunk - 1) / kChunk;
  std::vector<std::size_t> counts(shards, 0);
  parallel_shards(shards, threads, [&](std::size_t shard) {
    const std::size_t lo = shard * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    std::size_t hit = 0;
    double w[kMaxOrder + 2];
    for (std::size_t i = lo; i < hi; ++i) {
      std::uint32_t idx;
      if (levels) {
        idx = encode_index(x + i, h + 1);
      } else {
        w[0] = 0.0;
        for (int j = 0; j < h; ++j) w[j + 1] = w[j] + x[i + j];
        idx = encode_index(w, h + 1);
      }
      if (member(idx)) ++hit;
    }
    counts[shard] = hit;
  });
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  return total;
}

}  // namespace detail

// Relative frequency of one ordinal pattern over all sliding windows.
inline Estimate q_hat(const SeriesView& series, const Pattern& pattern, int threads = 0) {
  const int h = pattern.order();
  const std::uint32_t want = pattern.index();
  const std::size_t hits = detail::count_pattern_windows(
      series, h, [&](std::uint32_t idx) { return idx == want; }, threads);
  const std::size_t n = detail::window_count(series, h);
  return Estimate{static_cast<double>(hits) / static_cast<double>(n), n};
}

// Rao-Blackwellized estimator: group hits averaged over the group size.
// Equals the mean of q_hat over the group members on every series.
inline Estimate p_hat(const SeriesView& series, const ReversalGroup& group, int threads = 0) {
  const int h = group.order();
  std::uint32_t members[4];
  const int m = group.size();
  for (int i = 0; i < m; ++i) members[i] = group.members()[i].index();
  const std::size_t hits = detail::count_pattern_windows(
      series, h,
      [&](std::uint32_t idx) {
        for (int i = 0; i < m; ++i)
          if (members[i] == idx) return true;
        return false;
      },
      threads);
  const std::size_t n = detail::window_count(series, h);
  return Estimate{static_cast<double>(hits) / (static_cast<double>(m) * static_cast<double>(n)),
                  n};
}

inline const ReversalGroup& turning_point_group() {
  static const ReversalGroup group = reversal_group(Pattern({2, 0, 1}));
  return group;
}

// Frequency of changes in the up-and-down behaviour; equals 4 p_hat of the
// four-element h=2 group, exactly.
inline double c_hat(const SeriesView& series, int threads = 0) {
  return 4.0 * p_hat(series, turning_point_group(), threads).value;
}

// Sample autocovariance of the increment process at a lag, not centered at
// the mean; the divisor is the number of products.
inline double r_hat(const SeriesView& series, std::size_t lag) {
  detail::check_series(series);
  std::vector<double> diffed;
  std::span<const double> x = series.values;
  if (series.kind == SeriesKind::Levels) {
    if (x.size() < 2) throw input_error("series too short");
    diffed.resize(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) diffed[i] = x[i + 1] - x[i];
    x = diffed;
  }
  if (lag >= x.size()) throw input_error("lag exceeds series length");
  double s = 0.0;
  const std::size_t m = x.size() - lag;
  for (std::size_t i = 0; i < m; ++i) s += x[i] * x[i + lag];
  return s / static_cast<double>(m);
}

// n^{D/2} L^{-1/2} (q_hat - p(pi)); p comes from the orthant closed form for
// h <= 2 or must be supplied from the oracle.
inline double standardize_rank1(const Estimate& est, const CovModel& model,
                                const Pattern& pattern,
                                std::optional<double> p_true = std::nullopt) {
  const double d = model.memory_exponent();
  const double l_inf = model.slowly_varying_limit();
  const double p = p_true ? *p_true : pattern_probability(model.r(1), pattern);
  return std::pow(static_cast<double>(est.n), d / 2.0) / std::sqrt(l_inf) * (est.value - p);
}

// n^D (2 C_2)^{-1/2} L^{-1} (p_hat - p(pi)), defined for D < 1/2.
inline double standardize_rank2(const Estimate& est, const CovModel& model,
                                const ReversalGroup& group,
                                std::optional<double> p_true = std::nullopt) {
  const double d = model.memory_exponent();
  if (d >= 0.5) throw regime_error("rank-2 standardization requires D < 1/2");
  const double l_inf = model.slowly_varying_limit();
  const double p = p_true ? *p_true : pattern_probability(model.r(1), group.canonical());
  const double norm = std::pow(static_cast<double>(est.n), d) /
                      std::sqrt(2.0 * c2_constant(d)) / l_inf;
  return norm * (est.value - p);
}

}  // namespace ordpat
