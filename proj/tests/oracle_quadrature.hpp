#pragma once

// Test-only oracle: the bivariate pattern integrals reduced to 1-D integrals
// over the conditioning variable, evaluated by adaptive Simpson quadrature.
// Shares no code with the closed forms it checks.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// P(W >= a), E[W 1{W>=a}], E[W^2 1{W>=a}] for W ~ N(mu, sigma^2).
inline double prob_ge(double mu, double sigma, double a) {
  return norm_cdf(-(a - mu) / sigma);
}

inline double trunc_mean(double mu, double sigma, double a) {
  const double z = (a - mu) / sigma;
  return mu * norm_cdf(-z) + sigma * norm_pdf(z);
}

inline double trunc_sq(double mu, double sigma, double a) {
  const double z = (a - mu) / sigma;
  return (mu * mu + sigma * sigma) * norm_cdf(-z) + sigma * (2.0 * mu + sigma * z) * norm_pdf(z);
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return detail::adapt(f, a, b, fa, fm, fb, detail::simpson(f, a, b, fa, fm, fb), tol, 48);
}

struct PatternIntegrals {
  double p;             // P(event)
  double c1, c2;        // E[X_k 1{event}]
  double c11, c12, c22; // E[(X_i X_j - E X_i X_j) 1{event}]
};

// Event {X1 >= 0, X2 >= 0} for (X1,X2) standard bivariate normal with
// correlation r; X2 | X1 = y ~ N(r y, 1 - r^2).
inline PatternIntegrals integrals_210(double r) {
  const double s = std::sqrt(1.0 - r * r);
  PatternIntegrals out{};
  out.p = integrate([&](double y) { return norm_pdf(y) * prob_ge(r * y, s, 0.0); }, 0.0, 10.0);
  out.c1 = integrate([&](double y) { return y * norm_pdf(y) * prob_ge(r * y, s, 0.0); }, 0.0, 10.0);
  out.c2 = integrate([&](double y) { return norm_pdf(y) * trunc_mean(r * y, s, 0.0); }, 0.0, 10.0);
  out.c11 = integrate([&](double y) { return (y * y - 1.0) * norm_pdf(y) * prob_ge(r * y, s, 0.0); },
                      0.0, 10.0);
  out.c12 = integrate([&](double y) { return y * norm_pdf(y) * trunc_mean(r * y, s, 0.0); }, 0.0,
                      10.0) -
            r * out.p;
  out.c22 = integrate([&](double y) { return norm_pdf(y) * trunc_sq(r * y, s, 0.0); }, 0.0, 10.0) -
            out.p;
  return out;
}

// Event {X1 <= 0, X2 >= -X1}.
inline PatternIntegrals integrals_201(double r) {
  const double s = std::sqrt(1.0 - r * r);
  PatternIntegrals out{};
  out.p = integrate([&](double y) { return norm_pdf(y) * prob_ge(r * y, s, -y); }, -10.0, 0.0);
  out.c1 = integrate([&](double y) { return y * norm_pdf(y) * prob_ge(r * y, s, -y); }, -10.0, 0.0);
  out.c2 =
      integrate([&](double y) { return norm_pdf(y) * trunc_mean(r * y, s, -y); }, -10.0, 0.0);
  out.c11 = integrate(
      [&](double y) { return (y * y - 1.0) * norm_pdf(y) * prob_ge(r * y, s, -y); }, -10.0, 0.0);
  out.c12 = integrate([&](double y) { return y * norm_pdf(y) * trunc_mean(r * y, s, -y); }, -10.0,
                      0.0) -
            r * out.p;
  out.c22 =
      integrate([&](double y) { return norm_pdf(y) * trunc_sq(r * y, s, -y); }, -10.0, 0.0) -
      out.p;
  return out;
}

}  // namespace oracle
