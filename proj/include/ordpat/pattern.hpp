#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ordpat/errors.hpp"

// Pattern orders are capped so the (h+1)! tables stay enumerable. Override
// per translation set with -DORDPAT_MAX_ORDER=n (consistently, or the types
// change meaning across TUs).
#ifndef ORDPAT_MAX_ORDER
#define ORDPAT_MAX_ORDER 8
#endif

namespace ordpat {

inline constexpr int kMaxOrder = ORDPAT_MAX_ORDER;
static_assert(kMaxOrder >= 1 && kMaxOrder <= 11, "pattern indices are 32-bit Lehmer ranks");

namespace detail {

inline constexpr auto kFactorial = [] {
  std::array<std::uint32_t, kMaxOrder + 2> f{};
  f[0] = 1;
  for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * static_cast<std::uint32_t>(i);
  return f;
}();

inline std::uint32_t lehmer_rank(std::span<const int> perm) {
  const int m = static_cast<int>(perm.size());
  std::uint32_t rank = 0;
  for (int j = 0; j < m; ++j) {
    int smaller_after = 0;
    for (int k = j + 1; k < m; ++k) {
      if (perm[k] < perm[j]) ++smaller_after;
    }
    rank += static_cast<std::uint32_t>(smaller_after) * kFactorial[m - 1 - j];
  }
  return rank;
}

inline void check_order(int h) {
  if (h < 1 || h > kMaxOrder)
    throw input_error("pattern order must be in [1, " + std::to_string(kMaxOrder) + "]");
}

}  // namespace detail

// An ordinal pattern of order h: the permutation (pi_0,...,pi_h) of {0..h}
// such that the window values satisfy x[pi_0] >= ... >= x[pi_h], with ties
// broken so that the larger window index comes first.
class Pattern {
 public:
  explicit Pattern(std::vector<int> perm) : perm_(std::move(perm)) {
    const int m = static_cast<int>(perm_.size());
    detail::check_order(m - 1);
    std::vector<char> seen(m, 0);
    for (int v : perm_) {
      if (v < 0 || v >= m || seen[v]) throw input_error("not a permutation of {0..h}");
      seen[v] = 1;
    }
    index_ = detail::lehmer_rank(perm_);
  }

  int order() const { return static_cast<int>(perm_.size()) - 1; }
  const std::vector<int>& perm() const { return perm_; }
  int operator[](int j) const { return perm_[j]; }

  // Lexicographic rank within S_h, cached at construction.
  std::uint32_t index() const { return index_; }

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.perm_ == b.perm_;
  }
  friend auto operator<=>(const Pattern& a, const Pattern& b) {
    return a.perm_ <=> b.perm_;
  }

 private:
  std::vector<int> perm_;
  std::uint32_t index_;
};

// Closure of a pattern under space and time reversal; 2 or 4 members,
// sorted lexicographically so that members().front() is canonical.
class ReversalGroup {
 public:
  explicit ReversalGroup(std::vector<Pattern> members) : members_(std::move(members)) {}
  const std::vector<Pattern>& members() const { return members_; }
  const Pattern& canonical() const { return members_.front(); }
  int size() const { return static_cast<int>(members_.size()); }
  int order() const { return members_.front().order(); }

  bool contains(const Pattern& p) const {
    return std::find(members_.begin(), members_.end(), p) != members_.end();
  }

  friend bool operator==(const ReversalGroup& a, const ReversalGroup& b) {
    return a.members_ == b.members_;
  }

 private:
  std::vector<Pattern> members_;
};

// Ranks R_i = #{j : x_i <= x_j}; for tie-free windows this is the inverse
// description of the pattern (R_i = j+1 <=> pi_j = i).
struct RankVector {
  std::vector<int> ranks;
};

namespace detail {

// Lehmer index of the pattern of a window, allocation-free. Descending
// stable order with larger index first on ties.
inline std::uint32_t encode_index(const double* w, int m) {
  int idx[kMaxOrder + 1];
  for (int i = 0; i < m; ++i) idx[i] = i;
  for (int i = 1; i < m; ++i) {  // insertion sort, m <= 9
    const int v = idx[i];
    int j = i - 1;
    while (j >= 0 && (w[idx[j]] < w[v] || (w[idx[j]] == w[v] && idx[j] < v))) {
      idx[j + 1] = idx[j];
      --j;
    }
    idx[j + 1] = v;
  }
  std::uint32_t rank = 0;
  for (int j = 0; j < m; ++j) {
    int smaller_after = 0;
    for (int k = j + 1; k < m; ++k)
      if (idx[k] < idx[j]) ++smaller_after;
    rank += static_cast<std::uint32_t>(smaller_after) * kFactorial[m - 1 - j];
  }
  return rank;
}

inline void check_window(std::span<const double> w, std::size_t min_len) {
  if (w.size() < min_len) throw input_error("window too short");
  if (w.size() > kMaxOrder + 1) throw input_error("window longer than the configured cap");
  for (double v : w)
    if (!std::isfinite(v)) throw input_error("non-finite value in window");
}

}  // namespace detail

inline Pattern encode_pattern(std::span<const double> window) {
  detail::check_window(window, 2);
  const int m = static_cast<int>(window.size());
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return window[a] > window[b] || (window[a] == window[b] && a > b);
  });
  return Pattern(std::move(idx));
}

inline Pattern encode_pattern(std::initializer_list<double> window) {
  return encode_pattern(std::span<const double>(window.begin(), window.size()));
}

// Pattern of the cumulative-sum path (0, x_0, x_0+x_1, ...) of h increments.
inline Pattern pattern_of_increments(std::span<const double> incs) {
  if (incs.empty()) throw input_error("need at least one increment");
  if (incs.size() > kMaxOrder) throw input_error("window longer than the configured cap");
  std::vector<double> window(incs.size() + 1);
  window[0] = 0.0;
  for (std::size_t i = 0; i < incs.size(); ++i) {
    if (!std::isfinite(incs[i])) throw input_error("non-finite value in window");
    window[i + 1] = window[i] + incs[i];
  }
  return encode_pattern(window);
}

inline Pattern pattern_of_increments(std::initializer_list<double> incs) {
  return pattern_of_increments(std::span<const double>(incs.begin(), incs.size()));
}

// Reflection on a horizontal line: (pi_h,...,pi_0).
inline Pattern space_reverse(const Pattern& p) {
  std::vector<int> perm(p.perm().rbegin(), p.perm().rend());
  return Pattern(std::move(perm));
}

// Reflection on a vertical line: (h-pi_0,...,h-pi_h).
inline Pattern time_reverse(const Pattern& p) {
  const int h = p.order();
  std::vector<int> perm(p.perm().size());
  for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = h - p[static_cast<int>(j)];
  return Pattern(std::move(perm));
}

inline ReversalGroup reversal_group(const Pattern& p) {
  std::vector<Pattern> members{p, space_reverse(p), time_reverse(p),
                               time_reverse(space_reverse(p))};
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return ReversalGroup(std::move(members));
}

// All (h+1)! patterns of order h in lexicographic order.
inline std::vector<Pattern> enumerate_patterns(int h) {
  detail::check_order(h);
  std::vector<int> perm(h + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Pattern> out;
  out.reserve(detail::kFactorial[h + 1]);
  do {
    out.emplace_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Partition of S_h into reversal groups, ordered by canonical member.
inline std::vector<ReversalGroup> partition_groups(int h) {
  std::vector<ReversalGroup> out;
  for (const Pattern& p : enumerate_patterns(h)) {
    ReversalGroup g = reversal_group(p);
    if (g.canonical() == p) out.push_back(std::move(g));
  }
  return out;
}

inline std::uint32_t pattern_index(const Pattern& p) { return p.index(); }

inline Pattern pattern_from_index(int h, std::uint32_t index) {
  detail::check_order(h);
  const int m = h + 1;
  if (index >= detail::kFactorial[m]) throw input_error("pattern index out of range");
  std::vector<int> pool(m);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> perm;
  perm.reserve(m);
  for (int j = m - 1; j >= 0; --j) {
    const std::uint32_t f = detail::kFactorial[j];
    const std::uint32_t q = index / f;
    index %= f;
    perm.push_back(pool[q]);
    pool.erase(pool.begin() + q);
  }
  return Pattern(std::move(perm));
}

inline RankVector rank_vector(std::span<const double> window) {
  detail::check_window(window, 2);
  const int m = static_cast<int>(window.size());
  RankVector rv;
  rv.ranks.resize(m);
  for (int i = 0; i < m; ++i) {
    int r = 0;
    for (int j = 0; j < m; ++j)
      if (window[i] <= window[j]) ++r;
    rv.ranks[i] = r;
  }
  return rv;
}

// Tie-free correspondence R_i = j+1 <=> pi_j = i.
inline RankVector pattern_to_ranks(const Pattern& p) {
  RankVector rv;
  rv.ranks.resize(p.perm().size());
  for (std::size_t j = 0; j < p.perm().size(); ++j) rv.ranks[p[static_cast<int>(j)]] = static_cast<int>(j) + 1;
  return rv;
}

inline Pattern ranks_to_pattern(const RankVector& rv) {
  std::vector<int> perm(rv.ranks.size());
  for (std::size_t i = 0; i < rv.ranks.size(); ++i) {
    const int j = rv.ranks[i] - 1;
    if (j < 0 || j >= static_cast<int>(perm.size())) throw input_error("invalid rank vector");
    perm[j] = static_cast<int>(i);
  }
  return Pattern(std::move(perm));
}

}  // namespace ordpat
