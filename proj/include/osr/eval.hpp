#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "osr/activation_set.hpp"
#include "osr/calibrators.hpp"

namespace osr {

/// One-vs-rest ROC curve. Points run from (0, 0) at threshold +inf to (1, 1).
struct RocCurve {
  std::vector<double> thresholds;
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.0;
  /// Class the curve scores; num_classes means "unknown".
  std::size_t class_index = 0;
};

/// Mann-Whitney AUROC: P(score_pos > score_neg) + 0.5 P(tie), O(N log N).
/// Throws kSingleClass when every sample has the same label.
[[nodiscard]] double auroc(std::span<const double> scores, const std::vector<bool>& positives);

/// Threshold sweep over distinct scores; tied scores move together.
[[nodiscard]] RocCurve roc_curve(std::span<const double> scores,
                                 const std::vector<bool>& positives);

/// Which number ranks a sample as "unknown" for the detection AUROC.
enum class UnknownScore {
  kUnknownProbability,  ///< probabilities[K]
  kOneMinusMaxKnown,    ///< 1 - max_j<K probabilities[j], for the SoftMax baseline
};

struct EvaluationReport {
  std::size_t num_classes = 0;
  /// Absent when the test set has no unknowns (or only unknowns).
  std::optional<double> auroc_unknown;
  double macro_f1 = 0.0;
  std::vector<double> per_class_f1;  // K+1, unknown last
  /// Classes with neither predictions nor truths; their F1 is reported as 0.
  std::vector<bool> f1_undefined;
  /// K+1 one-vs-rest curves; absent where the class is missing or universal.
  std::vector<std::optional<RocCurve>> roc_curves;
  /// confusion[true][predicted], (K+1) x (K+1), unknown last.
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t n_known = 0;
  std::size_t n_unknown = 0;
};

/// Scores a batch of calibrated outputs against labels in [0, K) or -1.
[[nodiscard]] EvaluationReport evaluate(std::span<const CalibratedOutput> outputs,
                                        std::span<const std::int32_t> true_labels,
                                        UnknownScore unknown_score = UnknownScore::kUnknownProbability);

struct ActivationDistancePairs {
  double correlation = 0.0;
  std::vector<double> activations;
  std::vector<double> distances;
};

/// Pearson correlation, over rows labelled `target_class`, between the
/// activation in column `probe_class` and the euclidean distance of the row
/// to the class mean.
[[nodiscard]] ActivationDistancePairs activation_distance_correlation(const ActivationSet& train,
                                                                      std::size_t target_class,
                                                                      std::size_t probe_class);

}  // namespace osr
