#include "osr/batch.hpp"

#include <sstream>

#include "osr/error.hpp"
#include "per_class.hpp"

namespace osr {

namespace {

void check_width(const Calibrator& cal, const ActivationSet& set) {
  if (num_classes(cal) != set.num_classes()) {
    std::ostringstream msg;
    msg << "calibrator has " << num_classes(cal) << " classes, activation set has "
        << set.num_classes();
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
}

}  // namespace

std::size_t num_classes(const Calibrator& cal) {
  return std::visit(
      [](const auto& c) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, SoftmaxCalibrator>) {
          return c.num_classes;
        } else {
          return c.num_classes();
        }
      },
      cal);
}

CalibratedOutput predict(const Calibrator& cal, std::span<const double> a) {
  return std::visit(
      [a](const auto& c) -> CalibratedOutput {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SoftmaxCalibrator>) {
          if (a.size() != c.num_classes) {
            throw Error(ErrorCode::kDimensionMismatch, "activation vector length mismatch");
          }
          return softmax_predict(a, c.threshold);
        } else if constexpr (std::is_same_v<T, OpenMaxCalibrator>) {
          return openmax_predict(c, a);
        } else {
          return metamax_predict(c, a);
        }
      },
      cal);
}

std::vector<CalibratedOutput> predict_batch(const Calibrator& cal, const ActivationSet& set) {
  check_width(cal, set);
  std::vector<CalibratedOutput> out(set.rows());
  const auto n = static_cast<std::ptrdiff_t>(set.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto row = set.row_as_double(static_cast<std::size_t>(i));
    out[static_cast<std::size_t>(i)] = predict(cal, row);
  }
  return out;
}

namespace serial {

std::vector<CalibratedOutput> predict_batch(const Calibrator& cal, const ActivationSet& set) {
  check_width(cal, set);
  std::vector<CalibratedOutput> out;
  out.reserve(set.rows());
  for (std::size_t i = 0; i < set.rows(); ++i) out.push_back(predict(cal, set.row_as_double(i)));
  return out;
}

}  // namespace serial

}  // namespace osr
