// Closed-form limit constants for the h=2 patterns next to their Monte Carlo
// oracle estimates.

#include <cstdio>

#include "ordpat/ordpat.hpp"

int main() {
  using namespace ordpat;
  const double hurst = 0.8;
  const double r1 = fgn_autocov(hurst, 1);
  const ToeplitzCov sigma = toeplitz_sigma(CovModel::fgn(hurst), 2);

  std::printf("fGn H = %.2f, r(1) = %.5f\n\n", hurst, r1);
  for (const Pattern& p : {Pattern({2, 1, 0}), Pattern({2, 0, 1})}) {
    const Rank1Coeffs cf = rank1_closed_form(p, r1);
    const Rank1Oracle mc = mc_rank1(p, sigma, 200000, 7);
    std::printf("pattern (%d,%d,%d):  sum alpha  closed %.5f   oracle %.5f +- %.5f\n", p[0],
                p[1], p[2], cf.alpha_sum, mc.alpha_sum, mc.alpha_sum_se);
    const LimitLaw law = limit_law_rank1(2.0 - 2.0 * hurst, cf.alpha_sum);
    std::printf("   q_hat limit: N(0, %.5f), rate n^{-%.2f}\n", law.variance(),
                law.rate_exponent);
  }

  const ReversalGroup g = reversal_group(Pattern({2, 0, 1}));
  const Rank2Coeffs cf2 = rank2_closed_form(g, r1);
  const Rank2Oracle mc2 = mc_rank2(g, sigma, 200000, 7);
  std::printf("\n4-group:  sum alpha  closed %.5f   oracle %.5f +- %.5f\n", cf2.alpha_sum,
              mc2.alpha_sum, mc2.alpha_sum_se);
  const LimitLaw law2 = limit_law_rank2(2.0 - 2.0 * hurst, cf2.alpha_sum);
  std::printf("   p_hat limit: %.5f x Rosenblatt(H=%.2f)\n", law2.scale, law2.rosenblatt_hurst);
  return 0;
}
