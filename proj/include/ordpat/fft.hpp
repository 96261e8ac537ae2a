#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "ordpat/errors.hpp"

namespace ordpat {

// Iterative radix-2 FFT for power-of-two sizes. Twiddles come from a table so
// repeated transforms of the same size (one per synthesized path) stay cheap
// and free of phase drift.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n == 0 || !std::has_single_bit(n)) throw input_error("FFT size must be a power of two");
    twiddle_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddle_[k] = {std::cos(a), std::sin(a)};
    }
  }

  std::size_t size() const { return n_; }

  // In-place forward transform: X_k = sum_j x_j e^{-2 pi i jk/n}.
  void forward(std::vector<std::complex<double>>& x) const { run(x, false); }

  // In-place inverse transform including the 1/n factor.
  void inverse(std::vector<std::complex<double>>& x) const {
    run(x, true);
    const double inv = 1.0 / static_cast<double>(n_);
    for (auto& v : x) v *= inv;
  }

 private:
  void run(std::vector<std::complex<double>>& x, bool invert) const {
    if (x.size() != n_) throw input_error("FFT input size mismatch");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n_; ++i) {
      std::size_t bit = n_ >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t stride = n_ / len;
      for (std::size_t i = 0; i < n_; i += len) {
        for (std::size_t k = 0; k < len / 2; ++k) {
          std::complex<double> w = twiddle_[k * stride];
          if (invert) w = std::conj(w);
          const std::complex<double> u = x[i + k];
          const std::complex<double> v = x[i + k + len / 2] * w;
          x[i + k] = u + v;
          x[i + k + len / 2] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::complex<double>> twiddle_;
};

}  // namespace ordpat
