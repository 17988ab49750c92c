#include "osr/weibull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "osr/error.hpp"

namespace osr {

namespace {

constexpr double kShapeLo = 1e-3;
constexpr double kShapeHi = 1e3;
// Outer limits when the root lies outside [kShapeLo, kShapeHi].
constexpr double kShapeFloor = 1e-6;
constexpr double kShapeCeiling = 1e6;
constexpr double kScoreTolerance = 1e-10;
constexpr int kMaxIterations = 200;

// Scale-free pieces of the shape score. `scaled` holds x / max(x) in (0, 1].
struct ScaledTail {
  std::vector<double> log_scaled;
  double mean_log = 0.0;
  double max_value = 0.0;
};

ScaledTail scale_tail(std::span<const double> shifted) {
  ScaledTail t;
  t.max_value = *std::max_element(shifted.begin(), shifted.end());
  t.log_scaled.reserve(shifted.size());
  for (double x : shifted) t.log_scaled.push_back(std::log(x / t.max_value));
  t.mean_log = std::accumulate(t.log_scaled.begin(), t.log_scaled.end(), 0.0) /
               static_cast<double>(shifted.size());
  return t;
}

double score_scaled(const ScaledTail& t, double kappa) {
  double sum_w = 0.0;
  double sum_wl = 0.0;
  for (double ly : t.log_scaled) {
    const double w = std::exp(kappa * ly);
    sum_w += w;
    sum_wl += w * ly;
  }
  return sum_wl / sum_w - 1.0 / kappa - t.mean_log;
}

}  // namespace

bool WeibullModel::valid() const noexcept {
  return std::isfinite(rho) && std::isfinite(kappa) && std::isfinite(lambda) &&
         kappa > 0.0 && lambda > 0.0 && tail_size >= 2;
}

double WeibullModel::cdf(double x, bool apply_translation) const noexcept {
  const double z = x - (apply_translation ? rho : 0.0);
  if (!(z > 0.0)) return 0.0;
  return -std::expm1(-std::pow(z / lambda, kappa));
}

double WeibullModel::survival(double x, bool apply_translation) const noexcept {
  const double z = x - (apply_translation ? rho : 0.0);
  if (!(z > 0.0)) return 1.0;
  return std::exp(-std::pow(z / lambda, kappa));
}

double WeibullModel::log_likelihood(std::span<const double> values) const noexcept {
  const double n = static_cast<double>(values.size());
  double sum_log = 0.0;
  double sum_pow = 0.0;
  for (double v : values) {
    const double z = v - rho;
    if (!(z > 0.0)) return -std::numeric_limits<double>::infinity();
    sum_log += std::log(z);
    sum_pow += std::pow(z / lambda, kappa);
  }
  return n * std::log(kappa) - n * kappa * std::log(lambda) + (kappa - 1.0) * sum_log -
         sum_pow;
}

std::vector<double> select_tail(std::span<const double> samples, std::size_t q) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto take = std::min(q, samples.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (samples[a] != samples[b]) return samples[a] > samples[b];
                      return a < b;
                    });
  std::vector<double> tail(take);
  for (std::size_t i = 0; i < take; ++i) tail[i] = samples[order[i]];
  return tail;
}

double tail_translation(std::span<const double> tail) {
  const double smallest = *std::min_element(tail.begin(), tail.end());
  if (smallest > 0.0) return 0.0;
  const double eps = std::max(1e-6, 1e-6 * std::abs(smallest));
  return smallest - eps;
}

double shape_score(std::span<const double> shifted, double kappa) {
  return score_scaled(scale_tail(shifted), kappa);
}

WeibullModel fit_high(std::span<const double> samples, std::size_t q) {
  if (q < 2 || samples.size() < q) {
    std::ostringstream msg;
    msg << "fit_high needs q >= 2 and at least q samples (q = " << q
        << ", samples = " << samples.size() << ")";
    throw Error(ErrorCode::kInsufficientData, msg.str());
  }
  for (double s : samples) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kNonFiniteValue, "fit_high: non-finite sample");
  }

  const std::vector<double> tail = select_tail(samples, q);
  if (tail.front() == tail.back()) {
    throw Error(ErrorCode::kDegenerateData, "fit_high: selected tail has zero variance");
  }

  const double rho = tail_translation(tail);
  std::vector<double> shifted(tail.size());
  std::transform(tail.begin(), tail.end(), shifted.begin(), [rho](double v) { return v - rho; });

  const ScaledTail scaled = scale_tail(shifted);
  double lo = kShapeLo;
  double hi = kShapeHi;
  double f_lo = score_scaled(scaled, lo);
  double f_hi = score_scaled(scaled, hi);
  while (!(f_hi > 0.0) && hi < kShapeCeiling) {
    lo = hi;
    f_lo = f_hi;
    hi *= 10.0;
    f_hi = score_scaled(scaled, hi);
  }
  while (!(f_lo < 0.0) && lo > kShapeFloor) {
    hi = lo;
    f_hi = f_lo;
    lo /= 10.0;
    f_lo = score_scaled(scaled, lo);
  }
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw Error(ErrorCode::kNoConvergence,
                "fit_high: shape score has no root in [1e-6, 1e6]");
  }

  double kappa = 0.5 * (lo + hi);
  bool converged = false;
  for (int it = 0; it < kMaxIterations; ++it) {
    kappa = 0.5 * (lo + hi);
    if (kappa <= lo || kappa >= hi) {
      converged = true;  // bracket exhausted at double precision
      break;
    }
    const double f = score_scaled(scaled, kappa);
    if (std::abs(f) < kScoreTolerance) {
      converged = true;
      break;
    }
    (f < 0.0 ? lo : hi) = kappa;
  }
  if (!converged) {
    throw Error(ErrorCode::kNoConvergence, "fit_high: bisection iteration budget exhausted");
  }

  double mean_pow = 0.0;
  for (double ly : scaled.log_scaled) mean_pow += std::exp(kappa * ly);
  mean_pow /= static_cast<double>(shifted.size());

  WeibullModel model;
  model.rho = rho;
  model.kappa = kappa;
  model.lambda = scaled.max_value * std::pow(mean_pow, 1.0 / kappa);
  model.tail_size = q;
  return model;
}

}  // namespace osr
