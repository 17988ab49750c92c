#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "osr/batch.hpp"
#include "osr/data.hpp"

namespace osr {

inline constexpr int kCalibratorFormatVersion = 1;

/// A calibrator together with the split it was fitted under.
struct CalibratorFile {
  Calibrator calibrator;
  std::optional<OpenSplit> split;
  /// Free-form provenance (the fit configuration); not interpreted on load.
  nlohmann::json provenance = nlohmann::json::object();
};

[[nodiscard]] nlohmann::json to_json(const WeibullModel& model);
[[nodiscard]] WeibullModel weibull_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const OpenSplit& split);
[[nodiscard]] OpenSplit split_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const Calibrator& cal);
[[nodiscard]] Calibrator calibrator_from_json(const nlohmann::json& j);

/// Versioned document with a "created_at" timestamp; every other field is a
/// deterministic function of the inputs.
[[nodiscard]] nlohmann::json to_json(const CalibratorFile& file);
[[nodiscard]] CalibratorFile calibrator_file_from_json(const nlohmann::json& j);

void save_calibrator(const CalibratorFile& file, const std::filesystem::path& path);
[[nodiscard]] CalibratorFile load_calibrator(const std::filesystem::path& path);

/// UTC "YYYY-MM-DDTHH:MM:SSZ".
[[nodiscard]] std::string utc_timestamp();

}  // namespace osr
