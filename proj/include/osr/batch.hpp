#pragma once

#include <variant>
#include <vector>

#include "osr/activation_set.hpp"
#include "osr/calibrators.hpp"

namespace osr {

using Calibrator = std::variant<SoftmaxCalibrator, OpenMaxCalibrator, MetaMaxCalibrator>;

[[nodiscard]] std::size_t num_classes(const Calibrator& cal);

[[nodiscard]] CalibratedOutput predict(const Calibrator& cal, std::span<const double> a);

/// Scores every row of `set`. Rows are processed in parallel with OpenMP;
/// results are in row order and identical to serial::predict_batch.
[[nodiscard]] std::vector<CalibratedOutput> predict_batch(const Calibrator& cal,
                                                          const ActivationSet& set);

namespace serial {
[[nodiscard]] std::vector<CalibratedOutput> predict_batch(const Calibrator& cal,
                                                          const ActivationSet& set);
}  // namespace serial

}  // namespace osr
