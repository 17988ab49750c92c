// osr: open-set recognition calibration driver.
//
//   osr synth    write synthetic train/test activations
//   osr split    draw an open-set split, optionally relabel an OSAV file
//   osr fit      build a calibrator and save it as JSON
//   osr eval     score test activations, write metrics / ROC / confusion
//   osr sweep-q  MetaMax tail-size sensitivity table
//   osr scatter  activation vs distance-to-MAV pairs and their correlation
//
// Every option can also come from a flat JSON object passed with --config;
// keys are the long option names with '-' replaced by '_'. Command-line
// values win over the file, which wins over the defaults.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "osr/error.hpp"
#include "osr/experiment.hpp"

namespace {

using nlohmann::json;

class ConfigBindings {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    auto* opt = app->add_option("--" + name, var, help);
    if constexpr (!std::is_same_v<T, std::vector<std::uint64_t>> &&
                  !std::is_same_v<T, std::vector<std::size_t>>) {
      opt->capture_default_str();
    } else {
      opt->delimiter(',');
    }
    bindings_.push_back({app, key_for(name), opt, [&var](const json& j) { var = j.get<T>(); }});
    return opt;
  }

  void add_custom(CLI::App* app, const std::string& key, CLI::Option* opt,
                  std::function<void(const json&)> set) {
    bindings_.push_back({app, key, opt, std::move(set)});
  }

  // Fills options of the active subcommand that were not given on the
  // command line.
  void apply(const CLI::App* active, const std::string& config_path) const {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw osr::Error(osr::ErrorCode::kIo, "cannot open config " + config_path);
    json cfg;
    try {
      in >> cfg;
    } catch (const json::parse_error& e) {
      throw osr::Error(osr::ErrorCode::kInvalidArgument, config_path + ": " + e.what());
    }
    if (!cfg.is_object()) {
      throw osr::Error(osr::ErrorCode::kInvalidArgument, "config must be a JSON object");
    }
    for (const auto& b : bindings_) {
      if (b.owner != active || b.opt->count() > 0) continue;
      if (!cfg.contains(b.key)) continue;
      try {
        b.set(cfg.at(b.key));
      } catch (const json::exception& e) {
        throw osr::Error(osr::ErrorCode::kInvalidArgument,
                         "config key '" + b.key + "': " + e.what());
      }
    }
  }

 private:
  struct Binding {
    const CLI::App* owner;
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> set;
  };

  static std::string key_for(std::string name) {
    for (auto& c : name) {
      if (c == '-') c = '_';
    }
    return name;
  }

  std::vector<Binding> bindings_;
};

struct CommonArgs {
  std::string config;
  std::vector<std::uint64_t> seeds{0};
  std::string out;
};

struct ProtocolArgs {
  std::string train;
  std::string test;
  std::size_t total = 10;
  std::size_t known = 6;
  std::string method = "metamax";
  std::size_t q = 20;
  long beta = -1;
  long alpha = -1;
  std::size_t eta = 20;
  double threshold = 0.0;
  std::string distance = "euclidean";
  bool no_translation = false;

  osr::ExperimentConfig to_config(const CommonArgs& common) const {
    osr::ExperimentConfig cfg;
    cfg.train_path = train;
    cfg.test_path = test;
    cfg.num_total_classes = total;
    cfg.num_known = known;
    cfg.seeds = common.seeds;
    if (cfg.seeds.empty()) throw osr::Error(osr::ErrorCode::kInvalidArgument, "no seeds given");
    cfg.method = osr::parse_method(method);
    cfg.params.q = q;
    if (beta >= 0) cfg.params.beta = static_cast<std::size_t>(beta);
    if (alpha >= 0) cfg.params.alpha = static_cast<std::size_t>(alpha);
    cfg.params.eta = eta;
    cfg.params.threshold = threshold;
    cfg.params.distance = osr::parse_distance_kind(distance);
    cfg.params.apply_translation = !no_translation;
    cfg.output_dir = common.out.empty() ? std::filesystem::path(".") : std::filesystem::path(common.out);
    return cfg;
  }
};

void add_common(CLI::App* cmd, ConfigBindings& b, CommonArgs& common, const std::string& out_help) {
  cmd->add_option("--config", common.config, "JSON config file");
  auto* seed = b.add(cmd, "seed", common.seeds, "seed(s), comma separated");
  b.add_custom(cmd, "seeds", seed, [&common](const json& j) {
    common.seeds = j.get<std::vector<std::uint64_t>>();
  });
  b.add(cmd, "out", common.out, out_help);
}

void add_split_flags(CLI::App* cmd, ConfigBindings& b, ProtocolArgs& p) {
  b.add(cmd, "total", p.total, "number of original classes");
  b.add(cmd, "known", p.known, "number of known classes");
}

void add_method_flags(CLI::App* cmd, ConfigBindings& b, ProtocolArgs& p) {
  b.add(cmd, "method", p.method, "softmax | openmax | metamax")
      ->check(CLI::IsMember({"softmax", "openmax", "metamax"}));
  b.add(cmd, "q", p.q, "MetaMax tail size");
  b.add(cmd, "beta", p.beta, "MetaMax ranks revised (-1 = K)");
  b.add(cmd, "alpha", p.alpha, "OpenMax ranks revised (-1 = K)");
  b.add(cmd, "eta", p.eta, "OpenMax distance tail size");
  b.add(cmd, "threshold", p.threshold, "SoftMax rejection threshold");
  b.add(cmd, "distance", p.distance, "euclidean | cosine | euclidean_cosine");
  auto* flag = cmd->add_flag("--no-translation", p.no_translation,
                             "evaluate MetaMax survival without the fitted translation");
  b.add_custom(cmd, "apply_translation", flag,
               [&p](const json& j) { p.no_translation = !j.get<bool>(); });
  b.add_custom(cmd, "no_translation", flag, [&p](const json& j) { p.no_translation = j.get<bool>(); });
}

void print_summary(const osr::ProtocolSummary& s) {
  std::cout << "seed,auroc_unknown,macro_f1\n";
  for (const auto& m : s.per_seed) {
    std::cout << m.seed << ',' << (m.auroc ? std::to_string(*m.auroc) : "NA") << ','
              << m.macro_f1 << '\n';
  }
  std::cout << "mean," << (s.mean_auroc ? std::to_string(*s.mean_auroc) : "NA") << ','
            << s.mean_f1 << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-set recognition calibration (SoftMax, OpenMax, MetaMax)"};
  app.require_subcommand(1);
  ConfigBindings bindings;
  CommonArgs common;
  ProtocolArgs proto;

  // synth
  auto* synth = app.add_subcommand("synth", "write synthetic train/test OSAV files");
  osr::SyntheticSpec spec;
  add_common(synth, bindings, common, "output directory");
  bindings.add(synth, "known", spec.num_known, "known classes (= activation width)");
  bindings.add(synth, "unknown", spec.unknown_count, "unknown clusters");
  bindings.add(synth, "samples", spec.samples_per_class, "rows per class / cluster");
  bindings.add(synth, "separation", spec.class_separation, "class centre activation");
  bindings.add(synth, "sigma", spec.noise_sigma, "gaussian noise sigma");
  bindings.add(synth, "offset", spec.unknown_offset, "unknown centre displacement");

  // split
  auto* split = app.add_subcommand("split", "draw an open-set split");
  std::string split_input;
  add_common(split, bindings, common, "output file (split JSON, or relabelled OSAV with --input)");
  add_split_flags(split, bindings, proto);
  bindings.add(split, "input", split_input, "OSAV file to relabel");

  // fit
  auto* fit = app.add_subcommand("fit", "build a calibrator");
  add_common(fit, bindings, common, "calibrator JSON path ({seed} expands per seed)");
  add_split_flags(fit, bindings, proto);
  add_method_flags(fit, bindings, proto);
  bindings.add(fit, "train", proto.train, "training OSAV ({seed} expands per seed)");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a calibrator on test activations");
  std::string calibrator;
  add_common(eval, bindings, common, "output directory");
  add_split_flags(eval, bindings, proto);
  add_method_flags(eval, bindings, proto);
  bindings.add(eval, "train", proto.train, "training OSAV, used when no calibrator is given");
  bindings.add(eval, "test", proto.test, "test OSAV ({seed} expands per seed)");
  bindings.add(eval, "calibrator", calibrator, "calibrator JSON ({seed} expands per seed)");

  // sweep-q
  auto* sweep = app.add_subcommand("sweep-q", "MetaMax q sensitivity");
  std::vector<std::size_t> q_list{2, 5, 10, 20, 30};
  add_common(sweep, bindings, common, "output directory");
  add_split_flags(sweep, bindings, proto);
  add_method_flags(sweep, bindings, proto);
  bindings.add(sweep, "train", proto.train, "training OSAV");
  bindings.add(sweep, "test", proto.test, "test OSAV");
  bindings.add(sweep, "q-list", q_list, "tail sizes, comma separated");

  // scatter
  auto* scatter = app.add_subcommand("scatter", "activation vs distance-to-MAV correlation");
  std::size_t target = 0;
  std::size_t probe = 1;
  add_common(scatter, bindings, common, "output directory");
  add_split_flags(scatter, bindings, proto);
  bindings.add(scatter, "train", proto.train, "training OSAV");
  bindings.add(scatter, "target", target, "class whose rows are analysed");
  bindings.add(scatter, "probe", probe, "activation column on the x axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (const auto* sub : app.get_subcommands()) bindings.apply(sub, common.config);

    if (synth->parsed()) {
      spec.dim = spec.num_known;
      spec.seed = common.seeds.empty() ? 0 : common.seeds.front();
      const auto dir = common.out.empty() ? std::filesystem::path("synth") : std::filesystem::path(common.out);
      const auto data = osr::cmd_synth(spec, dir);
      std::cout << "wrote " << (dir / "train.osav").string() << " (" << data.train.rows()
                << " rows) and " << (dir / "test.osav").string() << " (" << data.test.rows()
                << " rows)\n";
    } else if (split->parsed()) {
      const auto seed = common.seeds.empty() ? std::uint64_t{0} : common.seeds.front();
      const auto s = osr::make_open_split(proto.total, proto.known, seed);
      if (!split_input.empty()) {
        if (common.out.empty()) {
          throw osr::Error(osr::ErrorCode::kInvalidArgument, "--input needs --out");
        }
        osr::write_activations(osr::apply_split(osr::read_activations(split_input), s), common.out);
      } else if (!common.out.empty()) {
        std::ofstream(common.out) << osr::to_json(s).dump(2) << '\n';
      }
      std::cout << osr::to_json(s).dump(2) << '\n';
    } else if (fit->parsed()) {
      const auto cfg = proto.to_config(common);
      const std::string out = common.out.empty() ? "calibrator.json" : common.out;
      for (const auto seed : cfg.seeds) {
        const auto path = osr::path_for_seed(out, seed);
        const auto file = osr::cmd_fit(cfg, seed, path);
        std::cout << "seed " << seed << ": " << osr::to_string(cfg.method) << " calibrator with "
                  << osr::num_classes(file.calibrator) << " classes -> " << path << '\n';
        if (out.find("{seed}") == std::string::npos) break;
      }
    } else if (eval->parsed()) {
      print_summary(osr::cmd_eval(proto.to_config(common), calibrator));
    } else if (sweep->parsed()) {
      const auto rows = osr::cmd_sweep_q(proto.to_config(common), q_list);
      std::cout << "q,f1,auroc,status\n";
      for (const auto& r : rows) {
        std::cout << r.q << ',' << (r.ok ? std::to_string(r.f1) : "") << ','
                  << (r.ok ? std::to_string(r.auroc) : "") << ',' << r.message << '\n';
      }
    } else if (scatter->parsed()) {
      const auto pairs = osr::cmd_scatter(proto.to_config(common), target, probe);
      std::cout << "correlation " << pairs.correlation << " over " << pairs.activations.size()
                << " rows\n";
    }
  } catch (const osr::Error& e) {
    std::cerr << "error [" << osr::to_string(e.code()) << "]: " << e.what() << '\n';
    return osr::exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error [Io]: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error [InvalidArgument]: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
