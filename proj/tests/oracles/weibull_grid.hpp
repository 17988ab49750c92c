#pragma once

// Brute-force Weibull MLE: coarse-to-fine grid over (log kappa, log lambda)
// maximizing the closed-form log-likelihood of strictly positive values.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace osr::oracle {

struct GridFit {
  double kappa = 0.0;
  double lambda = 0.0;
  double log_likelihood = -INFINITY;
};

inline double weibull_log_likelihood(std::span<const double> x, double kappa, double lambda) {
  double ll = 0.0;
  for (double v : x) {
    const double z = v / lambda;
    ll += std::log(kappa / lambda) + (kappa - 1.0) * std::log(z) - std::pow(z, kappa);
  }
  return ll;
}

inline GridFit weibull_grid_mle(std::span<const double> x, int nodes = 17, int rounds = 30) {
  const double n = static_cast<double>(x.size());
  const double top = *std::max_element(x.begin(), x.end());
  double sum_log = 0.0;
  for (double v : x) sum_log += std::log(v / top);

  // Work in units of `top`; lambda is rescaled at the end.
  double lk_lo = std::log(0.05), lk_hi = std::log(50.0);
  double ll_lo = std::log(1e-4), ll_hi = std::log(2.0);
  GridFit best;
  std::vector<double> powsum(static_cast<std::size_t>(nodes));
  for (int round = 0; round < rounds; ++round) {
    const double dk = (lk_hi - lk_lo) / (nodes - 1);
    const double dl = (ll_hi - ll_lo) / (nodes - 1);
    int bk = 0, bl = 0;
    double best_ll = -INFINITY;
    for (int i = 0; i < nodes; ++i) {
      const double kappa = std::exp(lk_lo + i * dk);
      double s = 0.0;
      for (double v : x) s += std::pow(v / top, kappa);
      powsum[static_cast<std::size_t>(i)] = s;
      for (int j = 0; j < nodes; ++j) {
        const double log_lambda = ll_lo + j * dl;
        const double ll = n * std::log(kappa) - n * kappa * log_lambda + (kappa - 1.0) * sum_log -
                          s * std::exp(-kappa * log_lambda);
        if (ll > best_ll) {
          best_ll = ll;
          bk = i;
          bl = j;
        }
      }
    }
    const double ck = lk_lo + bk * dk;
    const double cl = ll_lo + bl * dl;
    lk_lo = ck - 2 * dk;
    lk_hi = ck + 2 * dk;
    ll_lo = cl - 2 * dl;
    ll_hi = cl + 2 * dl;
    best.kappa = std::exp(ck);
    best.lambda = std::exp(cl) * top;
  }
  best.log_likelihood = weibull_log_likelihood(x, best.kappa, best.lambda);
  return best;
}

}  // namespace osr::oracle
