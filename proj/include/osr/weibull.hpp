#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace osr {

/// Translated two-parameter Weibull distribution fitted to the upper tail of
/// a score sample.
///
/// The density lives on x > rho:
///   F(x) = 1 - exp(-((x - rho) / lambda)^kappa)
///
/// When `apply_translation` is false on evaluation, rho is treated as zero
/// (the untranslated form exp(-(x / lambda)^kappa)).
struct WeibullModel {
  double rho = 0.0;
  double kappa = 1.0;
  double lambda = 1.0;
  std::size_t tail_size = 0;

  [[nodiscard]] bool valid() const noexcept;

  [[nodiscard]] double cdf(double x, bool apply_translation = true) const noexcept;
  [[nodiscard]] double survival(double x, bool apply_translation = true) const noexcept;

  /// Log-likelihood of `values` under the model, in the translated frame.
  /// Returns -inf if any value lies on or left of rho.
  [[nodiscard]] double log_likelihood(std::span<const double> values) const noexcept;

  friend bool operator==(const WeibullModel&, const WeibullModel&) = default;
};

/// Returns the q largest samples in descending order. Ties at the cut keep
/// input order.
[[nodiscard]] std::vector<double> select_tail(std::span<const double> samples, std::size_t q);

/// Translation applied to a descending tail: 0 when every value is already
/// strictly positive, otherwise min(tail) - max(1e-6, 1e-6 * |min(tail)|).
[[nodiscard]] double tail_translation(std::span<const double> tail);

/// Maximum-likelihood Weibull fit to the q largest values of `samples`
/// (FitHigh). The shape is found by bisection on [1e-3, 1e3]; the bracket
/// is widened by decades up to [1e-6, 1e6] when the root lies outside.
/// Throws Error with kInsufficientData, kDegenerateData or kNoConvergence.
[[nodiscard]] WeibullModel fit_high(std::span<const double> samples, std::size_t q);

/// Shape score whose root is the profile MLE of kappa for strictly positive
/// `shifted` values. Increasing in kappa.
[[nodiscard]] double shape_score(std::span<const double> shifted, double kappa);

}  // namespace osr
