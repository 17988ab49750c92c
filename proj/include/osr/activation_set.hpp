#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace osr {

inline constexpr std::int32_t kUnknownLabel = -1;

/// N x K activations (row-major float32, the on-disk precision) with one
/// integer label per row. Labels are class ids or kUnknownLabel.
class ActivationSet {
 public:
  ActivationSet() = default;
  ActivationSet(std::size_t num_classes, std::vector<float> activations,
                std::vector<std::int32_t> labels);

  [[nodiscard]] std::size_t rows() const noexcept { return labels_.size(); }
  [[nodiscard]] std::size_t num_classes() const noexcept { return num_classes_; }

  [[nodiscard]] std::span<const float> row(std::size_t i) const {
    return {activations_.data() + i * num_classes_, num_classes_};
  }
  [[nodiscard]] std::vector<double> row_as_double(std::size_t i) const;

  [[nodiscard]] const std::vector<float>& activations() const noexcept { return activations_; }
  [[nodiscard]] const std::vector<std::int32_t>& labels() const noexcept { return labels_; }

  /// Throws kLabelOutOfRange unless every label is kUnknownLabel or below
  /// `max_label_exclusive`.
  void validate_labels(std::int64_t max_label_exclusive) const;

  void set_labels(std::vector<std::int32_t> labels);

  friend bool operator==(const ActivationSet&, const ActivationSet&) = default;

 private:
  std::size_t num_classes_ = 0;
  std::vector<float> activations_;
  std::vector<std::int32_t> labels_;
};

/// Index of the largest entry; ties go to the lowest index.
template <typename T>
[[nodiscard]] std::size_t argmax(std::span<const T> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

/// Rows whose label is a known class and whose argmax equals that label.
[[nodiscard]] ActivationSet correctly_classified(const ActivationSet& set);

}  // namespace osr
