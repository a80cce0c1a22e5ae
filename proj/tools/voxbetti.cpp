// voxbetti: Betti-curve features from 3D volumes and tree-ensemble
// classification on top of them. Run `voxbetti --help` for the subcommands.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "voxbetti/error.hpp"
#include "voxbetti/parallel.hpp"
#include "voxbetti/pipeline.hpp"

using namespace voxbetti;

namespace {

std::vector<double> parse_tau_list(const std::string& text) {
  std::vector<double> taus;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      taus.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Config, "bad tau value '" + item + "'");
    }
  }
  return taus;
}

void apply_slab(PipelineConfig& config, const std::string& slab) {
  if (slab == "auto") {
    config.slab = SlabMode::Auto;
  } else if (slab == "off") {
    config.slab = SlabMode::Off;
  } else {
    const auto colon = slab.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(slab);
      config.slab = SlabMode::Explicit;
      config.slab_lo = std::stoul(slab.substr(0, colon));
      config.slab_hi = std::stoul(slab.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Config, "--slab takes auto, off or LO:HI");
    }
  }
}

Dims3 parse_size(const std::string& text) {
  std::vector<std::size_t> parts;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, 'x')) parts.push_back(std::stoul(item));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, "--size takes N or AxBxC");
  }
  if (parts.size() == 1) return {parts[0], parts[0], parts[0]};
  if (parts.size() == 3) return {parts[0], parts[1], parts[2]};
  throw Error(ErrorCode::Config, "--size takes N or AxBxC");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubical persistent homology features and tree-ensemble classification"};
  app.require_subcommand(1);

  PipelineConfig config;
  std::string slab = "auto";
  std::string model = "forest";
  std::string model_config;
  std::string taus;

  auto add_features = [&](CLI::App* cmd) {
    cmd->add_option("--features", config.features, "Feature CSV (default <out>/features.csv)");
    cmd->add_option("-o,--out", config.output_dir, "Output directory")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--t-lo", config.t_lo, "Lowest threshold")->capture_default_str();
    cmd->add_option("--t-hi", config.t_hi, "Highest threshold")->capture_default_str();
  };
  auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("-j,--workers", config.workers,
                    std::string("Worker threads (0: ") + kWorkersEnv + " or all cores)")
        ->capture_default_str();
  };

  auto* extract = app.add_subcommand("extract", "Betti-curve feature CSV from a manifest");
  extract->add_option("-m,--manifest", config.manifest, "CSV with path,label")->required();
  add_features(extract);
  add_grid(extract);
  add_workers(extract);
  extract->add_option("-n,--thresholds", config.thresholds, "Thresholds per curve")
      ->capture_default_str();
  extract->add_option("--slab", slab, "auto, off or LO:HI (inclusive slice window)")
      ->capture_default_str();
  extract->add_flag("--invert", config.invert, "Superlevel filtration (negate intensities)");

  auto* train = app.add_subcommand("train-eval", "Train and evaluate on the five feature sets");
  add_features(train);
  add_workers(train);
  train->add_option("--model", model, "forest or boosted")->capture_default_str();
  train->add_option("--model-config", model_config, "key=value hyperparameter file");
  train->add_option("--tau", taus, "Comma-separated tau sweep");
  train->add_option("--seed", config.seed, "Split seed")->capture_default_str();
  train->add_option("--folds", config.folds, "Stratified k-fold instead of the 80:20 split");

  auto* curves = app.add_subcommand("curves", "Per-class median curves with a central band");
  add_features(curves);
  add_grid(curves);
  curves->add_option("--band", config.band, "Band width as a fraction")->capture_default_str();

  auto* pca = app.add_subcommand("pca", "Two-component PCA of each Betti block");
  add_features(pca);

  std::string kind = "two-class-mix";
  std::size_t count = 40;
  std::string size = "32";
  PhantomOptions phantom;
  auto* synth = app.add_subcommand("synth", "Seeded synthetic phantoms plus a manifest");
  synth->add_option("--kind", kind, "blob, shell, ring or two-class-mix")->capture_default_str();
  synth->add_option("--count", count, "Number of volumes")->capture_default_str();
  synth->add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  synth->add_option("--size", size, "Edge length N or AxBxC")->capture_default_str();
  synth->add_option("--noise", phantom.noise, "Gaussian noise sigma")->capture_default_str();
  synth->add_option("-o,--out", config.output_dir, "Output directory")->capture_default_str();

  std::size_t oracle_count = 200;
  std::size_t max_side = 5;
  auto* oracle = app.add_subcommand("oracle-check", "Engine vs dense rank oracle on small volumes");
  oracle->add_option("--count", oracle_count, "Random volumes")->capture_default_str();
  oracle->add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  oracle->add_option("--max-side", max_side, "Largest edge length (<= 10)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    apply_slab(config, slab);
    config.model = parse_model_kind(model);
    if (!model_config.empty()) config.learn = read_learn_config(model_config);
    if (!taus.empty()) config.taus = parse_tau_list(taus);

    if (*extract) {
      const auto result = cmd_extract(config, std::cerr);
      return result.failures.empty() ? kExitOk : kExitPartial;
    }
    if (*train) {
      const auto rows = cmd_train_eval(config, std::cerr);
      write_summary_text(std::cout, rows);
      return kExitOk;
    }
    if (*curves) {
      cmd_curves(config, std::cerr);
      return kExitOk;
    }
    if (*pca) {
      return cmd_pca(config, std::cerr).empty() ? kExitOk : kExitPartial;
    }
    if (*synth) {
      phantom.dims = parse_size(size);
      cmd_synth(parse_phantom_kind(kind), count, config.seed, phantom, config.output_dir,
                std::cerr);
      return kExitOk;
    }
    if (*oracle) {
      return cmd_oracle_check(oracle_count, config.seed, max_side, std::cerr).ok()
                 ? kExitOk
                 : kExitInvariant;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}
