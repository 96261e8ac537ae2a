#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "ordpat/cov.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/fft.hpp"
#include "ordpat/linalg.hpp"
#include "ordpat/rng.hpp"

namespace ordpat {

enum class SynthMethod { Circulant, Cholesky };

inline constexpr std::size_t kCholeskySynthCap = 4096;

struct SynthConfig {
  double hurst;
  std::size_t n;
  std::uint64_t seed;
  SynthMethod method = SynthMethod::Circulant;
};

namespace detail {

inline std::size_t next_pow2(std::size_t n) { return std::bit_ceil(n); }

// First row of the even circulant embedding of the n x n fGn Toeplitz matrix,
// padded so the embedding size is a power of two: (r(0),...,r(m),r(m-1),...,r(1)).
inline std::vector<double> embedding_row(double hurst, std::size_t n) {
  const std::size_t m = next_pow2(n);
  std::vector<double> row(2 * m);
  for (std::size_t k = 0; k <= m; ++k) row[k] = fgn_autocov(hurst, static_cast<std::int64_t>(k));
  for (std::size_t k = 1; k < m; ++k) row[2 * m - k] = row[k];
  return row;
}

}  // namespace detail

// Eigenvalues of the circulant embedding used for synthesis; nonnegative for
// fGn, and checked against a -1e-9 numerical floor as a self-test.
inline std::vector<double> embedding_spectrum(double hurst, std::size_t n) {
  if (n == 0) throw input_error("path length must be positive");
  std::vector<double> row = detail::embedding_row(hurst, n);
  const std::size_t M = row.size();
  std::vector<std::complex<double>> buf(M);
  for (std::size_t k = 0; k < M; ++k) buf[k] = row[k];
  Fft(M).forward(buf);
  std::vector<double> lambda(M);
  for (std::size_t k = 0; k < M; ++k) lambda[k] = buf[k].real();
  return lambda;
}

// Exact stationary Gaussian synthesis with the fGn autocovariance. The
// spectral weights are precomputed once, so drawing many paths of the same
// length amortizes to one FFT per path.
class FgnSynthesizer {
 public:
  FgnSynthesizer(double hurst, std::size_t n, SynthMethod method = SynthMethod::Circulant)
      : hurst_(hurst), n_(n), method_(method) {
    if (n == 0) throw input_error("path length must be positive");
    if (method == SynthMethod::Circulant) {
      std::vector<double> lambda = embedding_spectrum(hurst, n);
      const std::size_t M = lambda.size();
      double max_lambda = 0.0;
      for (double l : lambda) max_lambda = std::max(max_lambda, l);
      for (double l : lambda) {
        if (l < -1e-9 * max_lambda)
          throw numeric_error("circulant embedding has a negative eigenvalue");
      }
      weight_.resize(M);
      for (std::size_t k = 0; k < M; ++k) {
        const double l = std::max(lambda[k], 0.0);
        const bool real_slot = (k == 0 || k == M / 2);
        weight_[k] = std::sqrt(l / static_cast<double>(real_slot ? M : 2 * M));
      }
      fft_ = std::make_shared<Fft>(M);
    } else {
      if (n > kCholeskySynthCap)
        throw input_error("Cholesky synthesis is capped at n = " +
                          std::to_string(kCholeskySynthCap));
      chol_ = cholesky_lower(toeplitz_sigma(CovModel::fgn(hurst), n));
    }
  }

  double hurst() const { return hurst_; }
  std::size_t length() const { return n_; }
  SynthMethod method() const { return method_; }

  // Deterministic function of (seed, stream); safe to call concurrently.
  std::vector<double> path(std::uint64_t seed, std::uint64_t stream = 0) const {
    CounterRng rng(seed, stream);
    if (method_ == SynthMethod::Cholesky) {
      std::vector<double> z(n_);
      rng.fill_normals(z);
      std::vector<double> x(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += chol_(i, k) * z[k];
        x[i] = s;
      }
      return x;
    }
    const std::size_t M = weight_.size();
    std::vector<double> z(M);
    rng.fill_normals(z);
    // Hermitian spectral weights: slot 0 and M/2 are real and use z[0], z[1];
    // slot k pairs with M-k and uses (z[2k], z[2k+1]).
    std::vector<std::complex<double>> a(M);
    a[0] = weight_[0] * z[0];
    a[M / 2] = weight_[M / 2] * z[1];
    for (std::size_t k = 1; k < M / 2; ++k) {
      const std::complex<double> v{weight_[k] * z[2 * k], weight_[k] * z[2 * k + 1]};
      a[k] = v;
      a[M - k] = std::conj(v);
    }
    fft_->forward(a);
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = a[j].real();
    return x;
  }

 private:
  double hurst_;
  std::size_t n_;
  SynthMethod method_;
  std::vector<double> weight_;
  std::shared_ptr<Fft> fft_;
  Matrix chol_;
};

inline std::vector<double> synth_fgn(const SynthConfig& cfg) {
  return FgnSynthesizer(cfg.hurst, cfg.n, cfg.method).path(cfg.seed);
}

// Partial-sum path of length n+1 starting at 0; diff(synth_fbm) == synth_fgn.
inline std::vector<double> synth_fbm(const SynthConfig& cfg) {
  const std::vector<double> incs = synth_fgn(cfg);
  std::vector<double> out(incs.size() + 1);
  out[0] = 0.0;
  for (std::size_t i = 0; i < incs.size(); ++i) out[i + 1] = out[i] + incs[i];
  return out;
}

}  // namespace ordpat
