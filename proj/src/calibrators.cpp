#include "osr/calibrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "osr/error.hpp"
#include "per_class.hpp"

namespace osr {

namespace {

void check_dimension(std::span<const double> a, std::size_t k) {
  if (a.size() != k) {
    std::ostringstream msg;
    msg << "activation vector has length " << a.size() << ", calibrator expects " << k;
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
}

// Applies the modulation vector and appends the removed mass as logit K.
CalibratedOutput finish(std::span<const double> a, std::vector<double> modulation) {
  const auto k = a.size();
  CalibratedOutput out;
  out.revised_activations.resize(k);
  double unknown = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out.revised_activations[i] = a[i] * modulation[i];
    unknown += a[i] - a[i] * modulation[i];
  }
  out.unknown_activation = unknown;

  std::vector<double> logits(out.revised_activations);
  logits.push_back(unknown);
  out.probabilities = softmax(logits);
  out.predicted = argmax(std::span<const double>(out.probabilities));
  out.rejected = out.predicted == k;
  out.modulation = std::move(modulation);
  return out;
}

std::vector<std::size_t> rows_of_class(const ActivationSet& set, std::size_t cls) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < set.rows(); ++i) {
    if (set.labels()[i] == static_cast<std::int32_t>(cls)) idx.push_back(i);
  }
  return idx;
}

std::size_t resolve_rank_depth(std::optional<std::size_t> requested, std::size_t k,
                               std::string_view name) {
  const auto depth = requested.value_or(k);
  if (depth > k) {
    std::ostringstream msg;
    msg << name << " = " << depth << " exceeds the number of classes " << k;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  return depth;
}

template <typename Loop>
MetaMaxCalibrator build_metamax(const ActivationSet& train, std::size_t q,
                                std::optional<std::size_t> beta, bool apply_translation,
                                Loop&& loop) {
  const auto k = train.num_classes();
  MetaMaxCalibrator cal;
  cal.q = q;
  cal.beta = resolve_rank_depth(beta, k, "beta");
  cal.apply_translation = apply_translation;
  cal.class_models.resize(k);
  cal.training_counts.assign(k, 0);

  const ActivationSet correct = correctly_classified(train);
  loop(k, [&](std::size_t j) {
    const auto pooled = pooled_non_match(correct, j);
    cal.training_counts[j] = pooled.size() / (k - 1);
    if (pooled.size() < q) {
      std::ostringstream msg;
      msg << "class " << j << " has " << pooled.size()
          << " pooled non-match scores, fewer than q = " << q;
      throw Error(ErrorCode::kInsufficientData, msg.str());
    }
    cal.class_models[j] = fit_high(pooled, q);
  });
  return cal;
}

template <typename Loop>
OpenMaxCalibrator build_openmax(const ActivationSet& train, std::size_t eta, DistanceKind kind,
                                std::optional<std::size_t> alpha, Loop&& loop) {
  const auto k = train.num_classes();
  if (eta < 2) throw Error(ErrorCode::kInsufficientData, "eta must be at least 2");
  OpenMaxCalibrator cal;
  cal.alpha = resolve_rank_depth(alpha, k, "alpha");
  if (cal.alpha == 0) throw Error(ErrorCode::kInvalidArgument, "alpha must be at least 1");
  cal.eta = eta;
  cal.distance_kind = kind;
  cal.mavs.resize(k);
  cal.class_models.resize(k);
  cal.distance_scales.assign(k, 1.0);
  cal.training_counts.assign(k, 0);

  const ActivationSet correct = correctly_classified(train);
  loop(k, [&](std::size_t j) {
    const auto n = rows_of_class(correct, j).size();
    cal.training_counts[j] = n;
    if (n < eta) {
      std::ostringstream msg;
      msg << "class " << j << " has " << n << " correctly classified rows, fewer than eta = "
          << eta;
      throw Error(ErrorCode::kInsufficientData, msg.str());
    }
    auto cd = class_distances(correct, j, kind);
    cal.class_models[j] = fit_high(cd.distances, eta);
    cal.mavs[j] = std::move(cd.mav);
    cal.distance_scales[j] = cd.scale;
  });
  return cal;
}

void sequential_loop(std::size_t count, const auto& fn) {
  for (std::size_t j = 0; j < count; ++j) fn(j);
}

void parallel_loop(std::size_t count, const auto& fn) {
  detail::parallel_for_each_index(count, fn);
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.size());
  if (logits.empty()) return p;
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - top);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<std::size_t> rank_descending(std::span<const double> activations) {
  std::vector<std::size_t> order(activations.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return activations[x] > activations[y]; });
  return order;
}

CalibratedOutput softmax_predict(std::span<const double> a, double threshold) {
  if (a.empty()) throw Error(ErrorCode::kDimensionMismatch, "empty activation vector");
  const auto k = a.size();
  CalibratedOutput out;
  out.probabilities = softmax(a);
  out.probabilities.push_back(0.0);
  out.revised_activations.assign(a.begin(), a.end());
  out.unknown_activation = -std::numeric_limits<double>::infinity();
  out.modulation.assign(k, 1.0);
  out.predicted = argmax(std::span<const double>(out.probabilities.data(), k));
  if (out.probabilities[out.predicted] < threshold) out.predicted = k;
  out.rejected = out.predicted == k;
  return out;
}

std::vector<double> pooled_non_match(const ActivationSet& train, std::size_t cls) {
  const auto k = train.num_classes();
  std::vector<double> pooled;
  for (std::size_t i : rows_of_class(train, cls)) {
    const auto r = train.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      if (c != cls) pooled.push_back(r[c]);
    }
  }
  return pooled;
}

MetaMaxCalibrator build_metamax_models(const ActivationSet& train, std::size_t q,
                                       std::optional<std::size_t> beta, bool apply_translation) {
  return build_metamax(train, q, beta, apply_translation,
                       [](std::size_t n, const auto& fn) { parallel_loop(n, fn); });
}

CalibratedOutput metamax_predict(const MetaMaxCalibrator& cal, std::span<const double> a) {
  const auto k = cal.num_classes();
  check_dimension(a, k);
  const auto order = rank_descending(a);
  const std::size_t top = order.front();
  std::vector<double> m(k, 1.0);
  const auto beta = static_cast<double>(cal.beta);
  for (std::size_t rank = 1; rank <= cal.beta; ++rank) {
    const std::size_t idx = order[rank - 1];
    if (idx == top) continue;
    const double weight = (beta - static_cast<double>(rank)) / beta;
    m[idx] = 1.0 - weight * cal.class_models[idx].survival(a[idx], cal.apply_translation);
  }
  return finish(a, std::move(m));
}

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kEuclidean: return "euclidean";
    case DistanceKind::kCosine: return "cosine";
    case DistanceKind::kEuclideanCosine: return "euclidean_cosine";
  }
  return "euclidean";
}

DistanceKind parse_distance_kind(std::string_view name) {
  if (name == "euclidean") return DistanceKind::kEuclidean;
  if (name == "cosine") return DistanceKind::kCosine;
  if (name == "euclidean_cosine" || name == "eucos") return DistanceKind::kEuclideanCosine;
  throw Error(ErrorCode::kInvalidArgument, "unknown distance kind '" + std::string(name) + "'");
}

double distance(DistanceKind kind, std::span<const double> a, std::span<const double> mav,
                double scale) {
  double sq = 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - mav[i];
    sq += d * d;
    dot += a[i] * mav[i];
    na += a[i] * a[i];
    nm += mav[i] * mav[i];
  }
  const double euclidean = std::sqrt(sq);
  // A zero vector has no direction; treat it as orthogonal to everything.
  const double cosine = (na > 0.0 && nm > 0.0) ? 1.0 - dot / std::sqrt(na * nm) : 1.0;
  switch (kind) {
    case DistanceKind::kEuclidean: return euclidean;
    case DistanceKind::kCosine: return cosine;
    case DistanceKind::kEuclideanCosine: return 0.5 * (euclidean / scale + cosine);
  }
  return euclidean;
}

ClassDistances class_distances(const ActivationSet& train, std::size_t cls, DistanceKind kind) {
  const auto k = train.num_classes();
  const auto idx = rows_of_class(train, cls);
  ClassDistances cd;
  cd.mav.assign(k, 0.0);
  if (idx.empty()) return cd;
  for (std::size_t i : idx) {
    const auto r = train.row(i);
    for (std::size_t c = 0; c < k; ++c) cd.mav[c] += r[c];
  }
  for (double& v : cd.mav) v /= static_cast<double>(idx.size());

  std::vector<double> euclidean;
  euclidean.reserve(idx.size());
  for (std::size_t i : idx) {
    const auto r = train.row_as_double(i);
    euclidean.push_back(distance(DistanceKind::kEuclidean, r, cd.mav));
  }
  const double mean_eu =
      std::accumulate(euclidean.begin(), euclidean.end(), 0.0) / static_cast<double>(idx.size());
  cd.scale = mean_eu > 0.0 ? mean_eu : 1.0;

  if (kind == DistanceKind::kEuclidean) {
    cd.distances = std::move(euclidean);
    return cd;
  }
  cd.distances.reserve(idx.size());
  for (std::size_t i : idx) {
    cd.distances.push_back(distance(kind, train.row_as_double(i), cd.mav, cd.scale));
  }
  return cd;
}

OpenMaxCalibrator build_openmax_models(const ActivationSet& train, std::size_t eta,
                                       DistanceKind kind, std::optional<std::size_t> alpha) {
  return build_openmax(train, eta, kind, alpha,
                       [](std::size_t n, const auto& fn) { parallel_loop(n, fn); });
}

CalibratedOutput openmax_predict(const OpenMaxCalibrator& cal, std::span<const double> a) {
  const auto k = cal.num_classes();
  check_dimension(a, k);
  const auto order = rank_descending(a);
  std::vector<double> w(k, 1.0);
  const auto alpha = static_cast<double>(cal.alpha);
  for (std::size_t rank = 1; rank <= cal.alpha; ++rank) {
    const std::size_t idx = order[rank - 1];
    const double weight = (alpha - static_cast<double>(rank) + 1.0) / alpha;
    const double d = distance(cal.distance_kind, a, cal.mavs[idx], cal.distance_scales[idx]);
    w[idx] = 1.0 - weight * cal.class_models[idx].cdf(d);
  }
  return finish(a, std::move(w));
}

namespace serial {

MetaMaxCalibrator build_metamax_models(const ActivationSet& train, std::size_t q,
                                       std::optional<std::size_t> beta, bool apply_translation) {
  return build_metamax(train, q, beta, apply_translation,
                       [](std::size_t n, const auto& fn) { sequential_loop(n, fn); });
}

OpenMaxCalibrator build_openmax_models(const ActivationSet& train, std::size_t eta,
                                       DistanceKind kind, std::optional<std::size_t> alpha) {
  return build_openmax(train, eta, kind, alpha,
                       [](std::size_t n, const auto& fn) { sequential_loop(n, fn); });
}

}  // namespace serial

}  // namespace osr
