#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "osr/activation_set.hpp"
#include "osr/weibull.hpp"

namespace osr {

/// K+1 class probabilities (index K is "unknown") and the accept/reject
/// decision derived from them.
struct CalibratedOutput {
  std::vector<double> probabilities;
  std::size_t predicted = 0;
  bool rejected = false;
  std::vector<double> revised_activations;
  double unknown_activation = 0.0;
  /// Per-class multiplicative weights applied to the raw activations.
  std::vector<double> modulation;

  [[nodiscard]] std::size_t num_classes() const noexcept { return revised_activations.size(); }
};

/// Numerically stable softmax (max subtracted before exponentiation).
[[nodiscard]] std::vector<double> softmax(std::span<const double> logits);

/// Class indices sorted by activation, largest first; ties by ascending index.
[[nodiscard]] std::vector<std::size_t> rank_descending(std::span<const double> activations);

// --- SoftMax baseline -------------------------------------------------------

struct SoftmaxCalibrator {
  std::size_t num_classes = 0;
  double threshold = 0.0;
};

/// Maximum-softmax-probability baseline. probabilities[K] is always 0; the
/// input is rejected (predicted = K) when the top probability is below
/// `threshold`.
[[nodiscard]] CalibratedOutput softmax_predict(std::span<const double> a, double threshold);

// --- MetaMax ----------------------------------------------------------------

struct MetaMaxCalibrator {
  std::vector<WeibullModel> class_models;
  std::size_t q = 20;
  std::size_t beta = 0;
  bool apply_translation = true;
  /// Correctly classified training rows used per class.
  std::vector<std::size_t> training_counts;

  [[nodiscard]] std::size_t num_classes() const noexcept { return class_models.size(); }
};

/// Non-match scores of every class-`cls` row: column `cls` removed,
/// remaining entries concatenated row by row.
[[nodiscard]] std::vector<double> pooled_non_match(const ActivationSet& train, std::size_t cls);

/// Fits one Weibull model per class on the q largest pooled non-match scores
/// of that class's correctly classified rows. `beta` defaults to K.
/// Per-class fits run in parallel.
[[nodiscard]] MetaMaxCalibrator build_metamax_models(const ActivationSet& train, std::size_t q,
                                                     std::optional<std::size_t> beta = {},
                                                     bool apply_translation = true);

/// Revises the activation vector with the per-class non-match models. Rank 1
/// (the argmax) is never modulated; rank i > 1 among the first beta gets
///   m = 1 - ((beta - i) / beta) * S(a)
/// where S is the survival function of that class's model. The mass removed
/// becomes the unknown logit.
[[nodiscard]] CalibratedOutput metamax_predict(const MetaMaxCalibrator& cal,
                                               std::span<const double> a);

// --- OpenMax ----------------------------------------------------------------

enum class DistanceKind { kEuclidean, kCosine, kEuclideanCosine };

[[nodiscard]] std::string_view to_string(DistanceKind kind);
[[nodiscard]] DistanceKind parse_distance_kind(std::string_view name);

/// `scale` normalizes the euclidean part of kEuclideanCosine and is ignored
/// otherwise.
[[nodiscard]] double distance(DistanceKind kind, std::span<const double> a,
                              std::span<const double> mav, double scale = 1.0);

struct OpenMaxCalibrator {
  std::vector<std::vector<double>> mavs;
  std::vector<WeibullModel> class_models;
  /// Mean euclidean distance of each class's rows to its MAV.
  std::vector<double> distance_scales;
  std::size_t alpha = 0;
  std::size_t eta = 20;
  DistanceKind distance_kind = DistanceKind::kEuclidean;
  std::vector<std::size_t> training_counts;

  [[nodiscard]] std::size_t num_classes() const noexcept { return mavs.size(); }
};

struct ClassDistances {
  std::vector<double> mav;
  std::vector<double> distances;
  double scale = 1.0;
};

/// MAV of the class-`cls` rows and each row's distance to it.
[[nodiscard]] ClassDistances class_distances(const ActivationSet& train, std::size_t cls,
                                             DistanceKind kind);

/// One MAV and one distance-tail Weibull model per class, from correctly
/// classified rows. `alpha` defaults to K.
[[nodiscard]] OpenMaxCalibrator build_openmax_models(const ActivationSet& train, std::size_t eta,
                                                     DistanceKind kind = DistanceKind::kEuclidean,
                                                     std::optional<std::size_t> alpha = {});

/// Revises the top-alpha activations with
///   w = 1 - ((alpha - i + 1) / alpha) * F(distance(a, MAV))
/// and routes the removed mass to the unknown logit.
[[nodiscard]] CalibratedOutput openmax_predict(const OpenMaxCalibrator& cal,
                                               std::span<const double> a);

namespace serial {

// Single-threaded references for the per-class builders.
[[nodiscard]] MetaMaxCalibrator build_metamax_models(const ActivationSet& train, std::size_t q,
                                                     std::optional<std::size_t> beta = {},
                                                     bool apply_translation = true);
[[nodiscard]] OpenMaxCalibrator build_openmax_models(const ActivationSet& train, std::size_t eta,
                                                     DistanceKind kind = DistanceKind::kEuclidean,
                                                     std::optional<std::size_t> alpha = {});

}  // namespace serial

}  // namespace osr
