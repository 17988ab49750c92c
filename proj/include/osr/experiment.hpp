#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "osr/batch.hpp"
#include "osr/calibrator_io.hpp"
#include "osr/data.hpp"
#include "osr/eval.hpp"

namespace osr {

enum class Method { kSoftmax, kOpenMax, kMetaMax };

[[nodiscard]] std::string_view to_string(Method m);
[[nodiscard]] Method parse_method(std::string_view name);

struct MethodParams {
  std::size_t q = 20;
  /// Defaults to K.
  std::optional<std::size_t> beta;
  /// Defaults to K.
  std::optional<std::size_t> alpha;
  std::size_t eta = 20;
  double threshold = 0.0;
  DistanceKind distance = DistanceKind::kEuclidean;
  bool apply_translation = true;
};

struct ExperimentConfig {
  /// OSAV paths with original labels. "{seed}" is replaced per seed.
  std::string train_path;
  std::string test_path;
  std::size_t num_total_classes = 10;
  std::size_t num_known = 6;
  std::vector<std::uint64_t> seeds{0};
  Method method = Method::kMetaMax;
  MethodParams params;
  std::filesystem::path output_dir = ".";

  [[nodiscard]] nlohmann::json to_json() const;
};

[[nodiscard]] std::string path_for_seed(const std::string& pattern, std::uint64_t seed);

/// Builds the chosen calibrator from a split-relabelled training set.
/// The correct-classification filter is applied by the builders.
[[nodiscard]] Calibrator build_calibrator(const ActivationSet& train, Method method,
                                          const MethodParams& params);

/// Scores a split-relabelled test set. SoftMax uses 1 - max probability as
/// its unknown score; the other methods use probabilities[K].
[[nodiscard]] EvaluationReport evaluate_calibrator(const Calibrator& cal, const ActivationSet& test);

/// Fits under make_open_split(config, seed) and writes a calibrator file.
CalibratorFile cmd_fit(const ExperimentConfig& config, std::uint64_t seed,
                       const std::filesystem::path& out);

struct SeedMetrics {
  std::uint64_t seed = 0;
  std::optional<double> auroc;
  double macro_f1 = 0.0;
};

struct ProtocolSummary {
  std::vector<SeedMetrics> per_seed;
  std::optional<double> mean_auroc;
  std::optional<double> std_auroc;
  double mean_f1 = 0.0;
  double std_f1 = 0.0;
};

[[nodiscard]] ProtocolSummary summarize(std::vector<SeedMetrics> per_seed);

/// For each seed: loads (or fits) the calibrator, scores the test set and
/// writes seed_<s>/{metrics.json,confusion.csv,roc_*.csv}; metrics.json with
/// per-seed entries plus mean and sample std is written last.
/// `calibrator_pattern` may contain "{seed}"; when empty, the calibrator is
/// fitted from config.train_path.
ProtocolSummary cmd_eval(const ExperimentConfig& config, const std::string& calibrator_pattern = {});

struct SweepRow {
  std::size_t q = 0;
  bool ok = false;
  double f1 = 0.0;
  double auroc = 0.0;
  std::string message;
};

/// Refits and re-evaluates MetaMax for every q (averaged over seeds) and
/// writes sweep_q.csv with columns q,f1,auroc,status. An infeasible q marks
/// only its own row as failed.
std::vector<SweepRow> cmd_sweep_q(const ExperimentConfig& config,
                                  const std::vector<std::size_t>& q_values);

/// Writes scatter.csv (activation,distance) for the target class of the
/// split-relabelled training set of the first seed.
ActivationDistancePairs cmd_scatter(const ExperimentConfig& config, std::size_t target_class,
                                    std::size_t probe_class);

/// Writes train.osav and test.osav (original labels) plus split.json.
SyntheticData cmd_synth(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path);
void write_confusion_csv(const EvaluationReport& report, const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const EvaluationReport& report);

}  // namespace osr
