#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace ordpat {

// Counter-based generator in the Philox 2x64-10 style: a 128-bit counter
// (block index, stream id) is mixed under a 64-bit key (the seed) by ten
// multiply-xor rounds. Any (seed, stream, block) word is reachable without
// generating its predecessors, so independent streams are cheap and every
// path of a campaign is reproducible in isolation.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    if (avail_ == 0) {
      block(block_index_++, buf_);
      avail_ = 2;
    }
    return buf_[2 - avail_--];
  }

  // Uniform on [0,1) from the top 53 bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via the Box-Muller transform; this is the fixed variate
  // transform for the whole library. u1 is mapped into (0,1] so the log is
  // finite; normals are produced in pairs and the second one is cached.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  void fill_normals(std::span<double> out) {
    for (double& v : out) v = next_normal();
  }

 private:
  static std::uint64_t mul_hi(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) >> 64);
  }

  void block(std::uint64_t ctr, std::uint64_t out[2]) const {
    constexpr std::uint64_t kMult = 0xD2B74407B1CE6E93ull;
    constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ull;
    std::uint64_t x0 = ctr;
    std::uint64_t x1 = stream_;
    std::uint64_t key = seed_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t hi = mul_hi(x0, kMult);
      const std::uint64_t lo = x0 * kMult;
      x0 = hi ^ key ^ x1;
      x1 = lo;
      key += kWeyl;
    }
    out[0] = x0;
    out[1] = x1;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int avail_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ordpat
