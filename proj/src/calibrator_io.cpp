#include "osr/calibrator_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "osr/error.hpp"

namespace osr {

using nlohmann::json;

namespace {

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("calibrator file is missing '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("calibrator field '") + key + "': " + e.what());
  }
}

std::vector<WeibullModel> models_from_json(const json& arr) {
  std::vector<WeibullModel> models;
  for (const auto& m : arr) models.push_back(weibull_from_json(m));
  return models;
}

json models_to_json(const std::vector<WeibullModel>& models) {
  json arr = json::array();
  for (const auto& m : models) arr.push_back(to_json(m));
  return arr;
}

}  // namespace

json to_json(const WeibullModel& model) {
  return {{"rho", model.rho},
          {"kappa", model.kappa},
          {"lambda", model.lambda},
          {"tail_size", model.tail_size}};
}

WeibullModel weibull_from_json(const json& j) {
  WeibullModel m;
  m.rho = require<double>(j, "rho");
  m.kappa = require<double>(j, "kappa");
  m.lambda = require<double>(j, "lambda");
  m.tail_size = require<std::size_t>(j, "tail_size");
  if (!m.valid()) throw Error(ErrorCode::kInvalidArgument, "invalid Weibull model in calibrator file");
  return m;
}

json to_json(const OpenSplit& split) {
  return {{"num_total_classes", split.num_total_classes},
          {"seed", split.seed},
          {"known_classes", split.known_classes},
          {"unknown_classes", split.unknown_classes}};
}

OpenSplit split_from_json(const json& j) {
  OpenSplit s;
  s.num_total_classes = require<std::size_t>(j, "num_total_classes");
  s.seed = require<std::uint64_t>(j, "seed");
  s.known_classes = require<std::vector<std::int32_t>>(j, "known_classes");
  s.unknown_classes = require<std::vector<std::int32_t>>(j, "unknown_classes");
  return s;
}

json to_json(const Calibrator& cal) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SoftmaxCalibrator>) {
          return {{"method", "softmax"}, {"num_classes", c.num_classes}, {"threshold", c.threshold}};
        } else if constexpr (std::is_same_v<T, OpenMaxCalibrator>) {
          return {{"method", "openmax"},
                  {"num_classes", c.num_classes()},
                  {"alpha", c.alpha},
                  {"eta", c.eta},
                  {"distance", std::string(to_string(c.distance_kind))},
                  {"mavs", c.mavs},
                  {"distance_scales", c.distance_scales},
                  {"models", models_to_json(c.class_models)},
                  {"training_counts", c.training_counts}};
        } else {
          return {{"method", "metamax"},
                  {"num_classes", c.num_classes()},
                  {"q", c.q},
                  {"beta", c.beta},
                  {"apply_translation", c.apply_translation},
                  {"models", models_to_json(c.class_models)},
                  {"training_counts", c.training_counts}};
        }
      },
      cal);
}

Calibrator calibrator_from_json(const json& j) {
  const auto method = require<std::string>(j, "method");
  const auto k = require<std::size_t>(j, "num_classes");
  if (method == "softmax") {
    return SoftmaxCalibrator{k, require<double>(j, "threshold")};
  }
  if (method == "openmax") {
    OpenMaxCalibrator c;
    c.alpha = require<std::size_t>(j, "alpha");
    c.eta = require<std::size_t>(j, "eta");
    c.distance_kind = parse_distance_kind(require<std::string>(j, "distance"));
    c.mavs = require<std::vector<std::vector<double>>>(j, "mavs");
    c.distance_scales = require<std::vector<double>>(j, "distance_scales");
    c.class_models = models_from_json(require<json>(j, "models"));
    c.training_counts = require<std::vector<std::size_t>>(j, "training_counts");
    if (c.mavs.size() != k || c.class_models.size() != k || c.distance_scales.size() != k ||
        c.alpha > k) {
      throw Error(ErrorCode::kDimensionMismatch, "openmax calibrator arrays disagree with num_classes");
    }
    for (const auto& mav : c.mavs) {
      if (mav.size() != k) throw Error(ErrorCode::kDimensionMismatch, "MAV length differs from K");
    }
    return c;
  }
  if (method == "metamax") {
    MetaMaxCalibrator c;
    c.q = require<std::size_t>(j, "q");
    c.beta = require<std::size_t>(j, "beta");
    c.apply_translation = require<bool>(j, "apply_translation");
    c.class_models = models_from_json(require<json>(j, "models"));
    c.training_counts = require<std::vector<std::size_t>>(j, "training_counts");
    if (c.class_models.size() != k || c.beta > k) {
      throw Error(ErrorCode::kDimensionMismatch, "metamax calibrator arrays disagree with num_classes");
    }
    return c;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown calibrator method '" + method + "'");
}

json to_json(const CalibratorFile& file) {
  json j;
  j["format"] = "osr-calibrator";
  j["version"] = kCalibratorFormatVersion;
  j["calibrator"] = to_json(file.calibrator);
  j["split"] = file.split ? to_json(*file.split) : json(nullptr);
  j["provenance"] = file.provenance;
  j["created_at"] = utc_timestamp();
  return j;
}

CalibratorFile calibrator_file_from_json(const json& j) {
  if (j.value("format", std::string{}) != "osr-calibrator") {
    throw Error(ErrorCode::kInvalidArgument, "not a calibrator file");
  }
  if (j.value("version", 0) != kCalibratorFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "unsupported calibrator file version");
  }
  CalibratorFile file;
  file.calibrator = calibrator_from_json(require<json>(j, "calibrator"));
  if (j.contains("split") && !j.at("split").is_null()) file.split = split_from_json(j.at("split"));
  file.provenance = j.value("provenance", json::object());
  return file;
}

void save_calibrator(const CalibratorFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << to_json(file).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

CalibratorFile load_calibrator(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
  return calibrator_file_from_json(j);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace osr
