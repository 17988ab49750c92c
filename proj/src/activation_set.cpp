#include "osr/activation_set.hpp"

#include <cmath>
#include <sstream>

#include "osr/error.hpp"

namespace osr {

ActivationSet::ActivationSet(std::size_t num_classes, std::vector<float> activations,
                             std::vector<std::int32_t> labels)
    : num_classes_(num_classes), activations_(std::move(activations)), labels_(std::move(labels)) {
  if (num_classes_ < 2) {
    throw Error(ErrorCode::kInvalidArgument, "activation set needs at least 2 classes");
  }
  if (activations_.size() != labels_.size() * num_classes_) {
    std::ostringstream msg;
    msg << "activation matrix holds " << activations_.size() << " values, expected "
        << labels_.size() << " x " << num_classes_;
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
  for (float v : activations_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "non-finite activation");
  }
}

std::vector<double> ActivationSet::row_as_double(std::size_t i) const {
  const auto r = row(i);
  return {r.begin(), r.end()};
}

void ActivationSet::validate_labels(std::int64_t max_label_exclusive) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const auto l = labels_[i];
    if (l != kUnknownLabel && (l < 0 || l >= max_label_exclusive)) {
      std::ostringstream msg;
      msg << "row " << i << " has label " << l << ", outside [0, " << max_label_exclusive
          << ") and not -1";
      throw Error(ErrorCode::kLabelOutOfRange, msg.str());
    }
  }
}

void ActivationSet::set_labels(std::vector<std::int32_t> labels) {
  if (labels.size() != labels_.size()) {
    throw Error(ErrorCode::kLengthMismatch, "label vector length differs from row count");
  }
  labels_ = std::move(labels);
}

ActivationSet correctly_classified(const ActivationSet& set) {
  const auto k = set.num_classes();
  std::vector<float> acts;
  std::vector<std::int32_t> labels;
  for (std::size_t i = 0; i < set.rows(); ++i) {
    const auto label = set.labels()[i];
    if (label < 0 || static_cast<std::size_t>(label) >= k) continue;
    const auto r = set.row(i);
    if (argmax(r) != static_cast<std::size_t>(label)) continue;
    acts.insert(acts.end(), r.begin(), r.end());
    labels.push_back(label);
  }
  return ActivationSet(k, std::move(acts), std::move(labels));
}

}  // namespace osr
