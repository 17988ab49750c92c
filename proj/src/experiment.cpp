#include "osr/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "osr/error.hpp"

namespace osr {

using nlohmann::json;

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

void write_json(const json& j, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

ActivationSet load_split_set(const std::string& pattern, std::uint64_t seed,
                             const OpenSplit& split) {
  const auto path = path_for_seed(pattern, seed);
  if (path.empty()) throw Error(ErrorCode::kInvalidArgument, "no activation file given");
  return apply_split(read_activations(path), split);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kSoftmax: return "softmax";
    case Method::kOpenMax: return "openmax";
    case Method::kMetaMax: return "metamax";
  }
  return "metamax";
}

Method parse_method(std::string_view name) {
  if (name == "softmax") return Method::kSoftmax;
  if (name == "openmax") return Method::kOpenMax;
  if (name == "metamax") return Method::kMetaMax;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

json ExperimentConfig::to_json() const {
  json p = {{"q", params.q},
            {"beta", params.beta ? json(*params.beta) : json(nullptr)},
            {"alpha", params.alpha ? json(*params.alpha) : json(nullptr)},
            {"eta", params.eta},
            {"threshold", params.threshold},
            {"distance", std::string(osr::to_string(params.distance))},
            {"apply_translation", params.apply_translation}};
  return {{"train_path", train_path},
          {"test_path", test_path},
          {"num_total_classes", num_total_classes},
          {"num_known", num_known},
          {"seeds", seeds},
          {"method", std::string(osr::to_string(method))},
          {"params", p}};
}

std::string path_for_seed(const std::string& pattern, std::uint64_t seed) {
  static constexpr std::string_view kToken = "{seed}";
  std::string out = pattern;
  for (auto pos = out.find(kToken); pos != std::string::npos; pos = out.find(kToken, pos)) {
    const auto s = std::to_string(seed);
    out.replace(pos, kToken.size(), s);
    pos += s.size();
  }
  return out;
}

Calibrator build_calibrator(const ActivationSet& train, Method method, const MethodParams& params) {
  switch (method) {
    case Method::kSoftmax:
      if (!(params.threshold >= 0.0 && params.threshold <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "softmax threshold must lie in [0, 1]");
      }
      return SoftmaxCalibrator{train.num_classes(), params.threshold};
    case Method::kOpenMax:
      return build_openmax_models(train, params.eta, params.distance, params.alpha);
    case Method::kMetaMax:
      return build_metamax_models(train, params.q, params.beta, params.apply_translation);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

EvaluationReport evaluate_calibrator(const Calibrator& cal, const ActivationSet& test) {
  const auto outputs = predict_batch(cal, test);
  const auto rule = std::holds_alternative<SoftmaxCalibrator>(cal)
                        ? UnknownScore::kOneMinusMaxKnown
                        : UnknownScore::kUnknownProbability;
  return evaluate(outputs, test.labels(), rule);
}

CalibratorFile cmd_fit(const ExperimentConfig& config, std::uint64_t seed,
                       const std::filesystem::path& out) {
  const auto split = make_open_split(config.num_total_classes, config.num_known, seed);
  const auto train = load_split_set(config.train_path, seed, split);
  if (train.num_classes() != split.num_known()) {
    std::ostringstream msg;
    msg << "training activations have " << train.num_classes() << " columns but the split has "
        << split.num_known() << " known classes";
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
  CalibratorFile file;
  file.calibrator = build_calibrator(train, config.method, config.params);
  file.split = split;
  file.provenance = config.to_json();
  file.provenance["seed"] = seed;
  if (!out.empty()) {
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    save_calibrator(file, out);
  }
  return file;
}

ProtocolSummary summarize(std::vector<SeedMetrics> per_seed) {
  ProtocolSummary s;
  s.per_seed = std::move(per_seed);
  std::vector<double> aurocs;
  std::vector<double> f1s;
  for (const auto& m : s.per_seed) {
    if (m.auroc) aurocs.push_back(*m.auroc);
    f1s.push_back(m.macro_f1);
  }
  if (!f1s.empty()) {
    s.mean_f1 = mean_of(f1s);
    s.std_f1 = sample_std(f1s);
  }
  if (!aurocs.empty() && aurocs.size() == s.per_seed.size()) {
    s.mean_auroc = mean_of(aurocs);
    s.std_auroc = sample_std(aurocs);
  }
  return s;
}

ProtocolSummary cmd_eval(const ExperimentConfig& config, const std::string& calibrator_pattern) {
  std::vector<SeedMetrics> per_seed;
  json seeds_json = json::array();
  for (const auto seed : config.seeds) {
    CalibratorFile file;
    if (calibrator_pattern.empty()) {
      file = cmd_fit(config, seed, {});
    } else {
      file = load_calibrator(path_for_seed(calibrator_pattern, seed));
      if (!file.split) {
        file.split = make_open_split(config.num_total_classes, config.num_known, seed);
      }
    }
    const auto test = load_split_set(config.test_path, seed, *file.split);
    if (test.num_classes() != num_classes(file.calibrator)) {
      std::ostringstream msg;
      msg << "calibrator has " << num_classes(file.calibrator) << " classes, test set has "
          << test.num_classes() << " columns";
      throw Error(ErrorCode::kDimensionMismatch, msg.str());
    }
    const auto report = evaluate_calibrator(file.calibrator, test);

    const auto dir = config.output_dir / ("seed_" + std::to_string(seed));
    std::filesystem::create_directories(dir);
    for (const auto& curve : report.roc_curves) {
      if (!curve) continue;
      const auto name = curve->class_index == report.num_classes
                            ? std::string("roc_unknown.csv")
                            : "roc_class_" + std::to_string(curve->class_index) + ".csv";
      write_roc_csv(*curve, dir / name);
    }
    write_confusion_csv(report, dir / "confusion.csv");
    json seed_json = to_json(report);
    seed_json["seed"] = seed;
    write_json(seed_json, dir / "metrics.json");

    per_seed.push_back({seed, report.auroc_unknown, report.macro_f1});
    seeds_json.push_back({{"seed", seed},
                          {"auroc_unknown", optional_number(report.auroc_unknown)},
                          {"macro_f1", report.macro_f1}});
  }

  auto summary = summarize(std::move(per_seed));
  json index = {{"method", std::string(to_string(config.method))},
                {"config", config.to_json()},
                {"per_seed", seeds_json},
                {"mean", {{"auroc_unknown", optional_number(summary.mean_auroc)},
                          {"macro_f1", summary.mean_f1}}},
                {"std", {{"auroc_unknown", optional_number(summary.std_auroc)},
                         {"macro_f1", summary.std_f1}}}};
  write_json(index, config.output_dir / "metrics.json");
  return summary;
}

std::vector<SweepRow> cmd_sweep_q(const ExperimentConfig& config,
                                  const std::vector<std::size_t>& q_values) {
  if (config.method != Method::kMetaMax) {
    throw Error(ErrorCode::kInvalidArgument, "sweep-q applies to the metamax method only");
  }
  std::vector<SweepRow> rows;
  for (const auto q : q_values) {
    SweepRow row;
    row.q = q;
    try {
      std::vector<SeedMetrics> per_seed;
      auto cfg = config;
      cfg.params.q = q;
      for (const auto seed : config.seeds) {
        const auto file = cmd_fit(cfg, seed, {});
        const auto test = load_split_set(config.test_path, seed, *file.split);
        const auto report = evaluate_calibrator(file.calibrator, test);
        per_seed.push_back({seed, report.auroc_unknown, report.macro_f1});
      }
      const auto summary = summarize(std::move(per_seed));
      if (!summary.mean_auroc) throw Error(ErrorCode::kSingleClass, "test set has no unknowns");
      row.ok = true;
      row.f1 = summary.mean_f1;
      row.auroc = *summary.mean_auroc;
      row.message = "ok";
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIo) throw;
      row.ok = false;
      row.message = std::string("failed: ") + std::string(to_string(e.code())) + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }

  auto out = open_for_write(config.output_dir / "sweep_q.csv");
  out << "q,f1,auroc,status\n";
  for (const auto& r : rows) {
    out << r.q << ',';
    if (r.ok) {
      out << r.f1 << ',' << r.auroc << ",ok\n";
    } else {
      std::string msg = r.message;
      for (auto& ch : msg) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      out << ",," << msg << '\n';
    }
  }
  return rows;
}

ActivationDistancePairs cmd_scatter(const ExperimentConfig& config, std::size_t target_class,
                                    std::size_t probe_class) {
  const auto seed = config.seeds.empty() ? std::uint64_t{0} : config.seeds.front();
  const auto split = make_open_split(config.num_total_classes, config.num_known, seed);
  const auto train = load_split_set(config.train_path, seed, split);
  auto pairs = activation_distance_correlation(train, target_class, probe_class);
  auto out = open_for_write(config.output_dir / "scatter.csv");
  out << "activation,distance\n";
  for (std::size_t i = 0; i < pairs.activations.size(); ++i) {
    out << pairs.activations[i] << ',' << pairs.distances[i] << '\n';
  }
  return pairs;
}

SyntheticData cmd_synth(const SyntheticSpec& spec, const std::filesystem::path& out_dir) {
  auto data = generate_synthetic(spec);
  std::filesystem::create_directories(out_dir);
  write_activations(data.train, out_dir / "train.osav");
  write_activations(data.test, out_dir / "test.osav");
  json spec_json = {{"num_known", spec.num_known},
                    {"dim", spec.dim},
                    {"samples_per_class", spec.samples_per_class},
                    {"class_separation", spec.class_separation},
                    {"noise_sigma", spec.noise_sigma},
                    {"unknown_count", spec.unknown_count},
                    {"unknown_offset", spec.unknown_offset},
                    {"seed", spec.seed}};
  write_json({{"synthetic", spec_json}, {"split", to_json(data.split)}}, out_dir / "split.json");
  return data;
}

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "threshold,fpr,tpr\n";
  for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
    out << curve.thresholds[i] << ',' << curve.fpr[i] << ',' << curve.tpr[i] << '\n';
  }
}

void write_confusion_csv(const EvaluationReport& report, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  const auto k = report.num_classes;
  const auto name = [k](std::size_t c) { return c == k ? std::string("unknown") : std::to_string(c); };
  out << "true\\predicted";
  for (std::size_t c = 0; c <= k; ++c) out << ',' << name(c);
  out << '\n';
  for (std::size_t t = 0; t <= k; ++t) {
    out << name(t);
    for (std::size_t p = 0; p <= k; ++p) out << ',' << report.confusion[t][p];
    out << '\n';
  }
}

json to_json(const EvaluationReport& report) {
  json curves = json::array();
  for (const auto& c : report.roc_curves) curves.push_back(c ? json(c->auc) : json(nullptr));
  return {{"num_classes", report.num_classes},
          {"auroc_unknown", optional_number(report.auroc_unknown)},
          {"macro_f1", report.macro_f1},
          {"per_class_f1", report.per_class_f1},
          {"f1_undefined", report.f1_undefined},
          {"per_class_auroc", curves},
          {"confusion", report.confusion},
          {"n_known", report.n_known},
          {"n_unknown", report.n_unknown}};
}

}  // namespace osr
