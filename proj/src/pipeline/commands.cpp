#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "voxbetti/error.hpp"
#include "voxbetti/parallel.hpp"
#include "voxbetti/pca.hpp"
#include "voxbetti/pipeline.hpp"

namespace voxbetti {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

// Writes through a temporary so an interrupted run never leaves a torn file.
void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    auto out = open_out(tmp);
    out << text;
    if (!out.flush()) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// "B1+B2" -> "b1_b2", for file names.
std::string file_tag(std::string_view name) {
  std::string out;
  for (char c : name) out += c == '+' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string extraction_fingerprint(const PipelineConfig& c) {
  std::ostringstream os;
  os << "thresholds=" << c.thresholds << ";lo=" << shortest(c.t_lo) << ";hi=" << shortest(c.t_hi)
     << ";slab=" << static_cast<int>(c.slab) << ':' << c.slab_lo << ':' << c.slab_hi
     << ";invert=" << c.invert;
  return os.str();
}

std::map<std::string, std::string> read_cache(const std::filesystem::path& path) {
  std::map<std::string, std::string> cache;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab != std::string::npos) cache.emplace(line.substr(0, tab), line.substr(tab + 1));
  }
  return cache;
}

}  // namespace

ExtractResult cmd_extract(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  const auto manifest = read_manifest(config.manifest);
  const auto csv_path = config.features_path();
  if (csv_path.has_parent_path()) ensure_dir(csv_path.parent_path());
  auto cache_path = csv_path;
  cache_path += ".cache";
  const auto cache = read_cache(cache_path);
  const auto fingerprint = extraction_fingerprint(config);

  const std::size_t n = manifest.entries.size();
  std::vector<std::string> keys(n), rows(n), errors(n);
  std::vector<char> reused(n, 0);
  std::mutex log_mutex;
  std::size_t done = 0;

  parallel_for_index(n, resolve_workers(config.workers), [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    const auto start = Clock::now();
    try {
      const auto bytes = read_file_bytes(entry.path);
      std::string key_material(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      key_material += fingerprint;
      key_material += label_name(entry.label);
      keys[i] = content_hash(key_material);
      if (auto it = cache.find(keys[i]); it != cache.end()) {
        rows[i] = it->second;
        reused[i] = 1;
      } else {
        rows[i] = feature_csv_row(featurize_entry(entry, config));
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
    std::lock_guard lock(log_mutex);
    ++done;
    log << "[extract] " << done << '/' << n << ' ' << entry.path.filename().string() << ' ';
    if (!errors[i].empty()) {
      log << "FAILED: " << errors[i] << '\n';
    } else {
      log << (reused[i] ? "cached" : fixed(seconds_since(start), 2) + " s") << '\n';
    }
  });

  ExtractResult result;
  std::string csv = feature_csv_header(config.thresholds) + "\n";
  std::string cache_text;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      result.failures.emplace_back(manifest.entries[i].path, errors[i]);
      continue;
    }
    csv += rows[i] + "\n";
    cache_text += keys[i] + "\t" + rows[i] + "\n";
    ++result.written;
    result.reused += static_cast<std::size_t>(reused[i]);
  }
  write_atomically(csv_path, csv);
  write_atomically(cache_path, cache_text);
  log << "[extract] wrote " << result.written << " rows to " << csv_path.string() << " ("
      << result.reused << " cached, " << result.failures.size() << " failed)\n";
  return result;
}

namespace {

Model fit_model(ModelKind kind, const LearnConfig& learn, const FeatureMatrix& x,
                std::span<const int> y) {
  if (kind == ModelKind::Forest) return train_forest(x, y, learn.forest);
  return train_boosted(x, y, learn.boosted);
}

double accuracy_of(const Model& m, const FeatureMatrix& x, std::span<const int> y) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) hits += model_predict(m, x.row(i)).label == y[i];
  return static_cast<double>(hits) / static_cast<double>(x.rows());
}

std::vector<int> pick(std::span<const int> y, std::span<const std::size_t> idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(y[i]);
  return out;
}

struct Predictions {
  std::vector<int> truth;
  std::vector<int> label;
  std::vector<double> score;

  void add(const Model& m, const FeatureMatrix& x, std::span<const int> y) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto p = model_predict(m, x.row(i));
      truth.push_back(y[i]);
      label.push_back(p.label);
      score.push_back(p.score);
    }
  }
};

struct SelectionRun {
  Model model;
  SelectedFeatureSet selected;
  std::vector<SweepPoint> sweep;
  std::vector<double> importance;
};

// Importances from a preliminary forest on the training rows only, tau from
// a sweep on an inner stratified split of those rows, then a refit on all
// training rows restricted to S_tau.
SelectionRun run_selected(const PipelineConfig& config, const FeatureMatrix& x_train,
                          std::span<const int> y_train) {
  SelectionRun run;
  run.importance = train_forest(x_train, y_train, config.learn.forest).importance();
  const auto inner = split_80_20(y_train, config.seed);
  const auto y_in = pick(y_train, inner.train);
  const auto y_val = pick(y_train, inner.test);
  const FitAndScore fit = [&](const FeatureMatrix& a, std::span<const int> ya, const FeatureMatrix& b,
                              std::span<const int> yb) {
    return accuracy_of(fit_model(config.model, config.learn, a, ya), b, yb);
  };
  run.sweep = sweep_tau(x_train.select_rows(inner.train), y_in, x_train.select_rows(inner.test),
                        y_val, run.importance, config.taus, fit);
  const auto best = best_sweep_point(run.sweep);
  run.selected = select_features(run.importance, best.tau, "forest");
  run.model = fit_model(config.model, config.learn, x_train.select_columns(run.selected.indices),
                        y_train);
  return run;
}

void write_sweep(const std::filesystem::path& path, const std::vector<SweepPoint>& sweep,
                 double chosen) {
  auto out = open_out(path);
  out << "tau,selected,validation_accuracy,chosen\n";
  for (const auto& p : sweep) {
    out << shortest(p.tau) << ',' << p.selected << ',' << shortest(p.validation_accuracy) << ','
        << (p.tau == chosen ? 1 : 0) << '\n';
  }
}

void write_selected(const std::filesystem::path& path, const SelectedFeatureSet& s,
                    const FeatureSet& set, std::span<const double> importance,
                    std::size_t thresholds) {
  auto out = open_out(path);
  out << "feature,importance\n";
  for (auto j : s.indices) {
    const auto col = set.columns[j];
    out << feature_column_name(static_cast<int>(col / thresholds), col % thresholds, thresholds)
        << ',' << shortest(importance[j]) << '\n';
  }
}

}  // namespace

std::vector<SummaryRow> cmd_train_eval(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  PipelineConfig cfg = config;
  cfg.learn.forest.workers = config.workers;
  const auto table = load_feature_table(config.features_path());
  ensure_dir(config.output_dir);
  const std::string kind = model_kind_name(config.model);

  std::vector<TrainTestSplit> splits;
  std::string protocol;
  if (config.folds >= 2) {
    splits = stratified_k_fold(table.y, config.folds, config.seed);
    protocol = "stratified " + std::to_string(config.folds) + "-fold, pooled";
  } else {
    splits.push_back(split_80_20(table.y, config.seed));
    protocol = "stratified 80:20";
  }
  log << "[train-eval] " << table.x.rows() << " samples, " << protocol << ", model " << kind
      << '\n';

  std::vector<SummaryRow> rows;
  for (const auto& set : standard_feature_sets(table.thresholds)) {
    const auto x_set = table.x.select_columns(set.columns);
    Predictions raw, selected;
    double tau_sum = 0.0, features_sum = 0.0;
    for (std::size_t f = 0; f < splits.size(); ++f) {
      const auto& split = splits[f];
      const auto x_train = x_set.select_rows(split.train);
      const auto x_test = x_set.select_rows(split.test);
      const auto y_train = pick(table.y, split.train);
      const auto y_test = pick(table.y, split.test);

      const auto raw_model = fit_model(cfg.model, cfg.learn, x_train, y_train);
      raw.add(raw_model, x_test, y_test);

      const auto run = run_selected(cfg, x_train, y_train);
      selected.add(run.model, x_test.select_columns(run.selected.indices), y_test);
      tau_sum += run.selected.tau;
      features_sum += static_cast<double>(run.selected.indices.size());

      if (splits.size() == 1) {
        const auto tag = kind + "_" + file_tag(set.name);
        save_model(config.output_dir / ("model_" + tag + "_raw.cbt"), raw_model);
        save_model(config.output_dir / ("model_" + tag + "_selected.cbt"), run.model);
        write_sweep(config.output_dir / ("sweep_" + tag + ".csv"), run.sweep, run.selected.tau);
        write_selected(config.output_dir / ("selected_" + tag + ".csv"), run.selected, set,
                       run.importance, table.thresholds);
      }
    }

    const double folds = static_cast<double>(splits.size());
    for (int pass = 0; pass < 2; ++pass) {
      const bool is_selected = pass == 1;
      const auto& pred = is_selected ? selected : raw;
      SummaryRow row;
      row.model = kind;
      row.feature_set = set.name;
      row.selected = is_selected;
      row.features = is_selected
                         ? static_cast<std::size_t>(std::llround(features_sum / folds))
                         : set.columns.size();
      row.tau = is_selected ? tau_sum / folds : 0.0;
      row.report = compute_metrics(pred.truth, pred.label, pred.score);
      row.report.protocol = protocol;
      row.report.split_seed = config.seed;
      row.report.feature_set = set.name + ", " + std::to_string(row.features) + " features";
      write_report_files(config.output_dir,
                         "report_" + kind + "_" + file_tag(set.name) +
                             (is_selected ? "_selected" : "_raw"),
                         row.report);
      log << "[train-eval] " << kind << ' ' << set.name << (is_selected ? " selected" : " raw")
          << ": accuracy " << fixed(row.report.accuracy, 4) << " with " << row.features
          << " features\n";
      rows.push_back(std::move(row));
    }
  }

  {
    auto text = open_out(config.output_dir / ("summary_" + kind + ".txt"));
    text << "Protocol: " << protocol << ", seed " << config.seed
         << ". Importances and tau chosen on training rows only.\n\n";
    write_summary_text(text, rows);
    auto csv = open_out(config.output_dir / ("summary_" + kind + ".csv"));
    write_summary_csv(csv, rows);
  }
  return rows;
}

void cmd_curves(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  const auto rows = read_feature_csv(config.features_path());
  if (rows.empty()) throw Error(ErrorCode::InsufficientData, "feature CSV has no rows");
  const auto summary = summarize_curves(rows, config.band);
  const auto grid = ThresholdGrid::uniform(rows.front().thresholds(), config.t_lo, config.t_hi);
  ensure_dir(config.output_dir);
  const auto path = config.output_dir / "curves.csv";
  auto out = open_out(path);
  out << "dim,t_index,t_value,class,lower,median,upper\n";
  for (std::size_t k = 0; k < 3; ++k) {
    for (const auto& [label, bands] : summary.classes) {
      const auto& b = bands[k];
      for (std::size_t i = 0; i < grid.size(); ++i) {
        out << k << ',' << i << ',' << shortest(grid[i]) << ',' << label_name(label) << ','
            << shortest(b.lower[i]) << ',' << shortest(b.median[i]) << ','
            << shortest(b.upper[i]) << '\n';
      }
    }
  }
  log << "[curves] wrote " << path.string() << '\n';
}

std::vector<std::string> cmd_pca(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  const auto table = load_feature_table(config.features_path());
  ensure_dir(config.output_dir);
  std::vector<std::string> failed;
  const auto sets = standard_feature_sets(table.thresholds);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& set = sets[k];
    const auto path = config.output_dir / ("pca_" + file_tag(set.name) + ".csv");
    try {
      const auto pca = pca_project(table.x.select_columns(set.columns), 2);
      auto out = open_out(path);
      out << "sample,class,pc1=" << fixed(pca.explained_ratio[0], 6)
          << ",pc2=" << fixed(pca.explained_ratio[1], 6) << '\n';
      for (std::size_t r = 0; r < pca.projected.rows(); ++r) {
        out << r << ',' << label_name(static_cast<Label>(table.y[r])) << ','
            << shortest(pca.projected(r, 0)) << ',' << shortest(pca.projected(r, 1)) << '\n';
      }
      log << "[pca] " << set.name << ": explained " << fixed(pca.explained_ratio[0], 4) << ", "
          << fixed(pca.explained_ratio[1], 4) << " -> " << path.string() << '\n';
    } catch (const Error& e) {
      log << "[pca] " << set.name << " skipped: " << e.what() << '\n';
      failed.push_back(set.name);
    }
  }
  return failed;
}

DatasetManifest cmd_synth(PhantomKind kind, std::size_t count, std::uint64_t seed,
                          const PhantomOptions& opt, const std::filesystem::path& out_dir,
                          std::ostream& log) {
  if (count == 0) throw Error(ErrorCode::Config, "count must be positive");
  const auto phantoms = generate_phantoms(kind, count, seed, opt);
  auto manifest = write_phantoms(out_dir, phantoms);
  log << "[synth] " << count << ' ' << phantom_kind_name(kind) << " phantoms ("
      << manifest.count(Label::LGG) << " LGG, " << manifest.count(Label::HGG) << " HGG) in "
      << out_dir.string() << '\n';
  return manifest;
}

OracleCheckResult cmd_oracle_check(std::size_t count, std::uint64_t seed, std::size_t max_side,
                                   std::ostream& log) {
  if (max_side == 0 || max_side > 10) {
    throw Error(ErrorCode::Config, "max side must lie in [1, 10] to keep the oracle dense");
  }
  const auto grid = ThresholdGrid::uniform();
  Rng rng(seed);
  OracleCheckResult result;
  for (std::size_t v = 0; v < count; ++v) {
    const Dims3 dims{1 + uniform_below(rng, max_side), 1 + uniform_below(rng, max_side),
                     1 + uniform_below(rng, max_side)};
    const auto volume = random_integer_volume(dims, rng);
    const auto complex = build_filtration(volume);
    const auto diagrams = compute_persistence(complex);
    const auto features = featurize_diagrams(diagrams, grid);
    ++result.volumes;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      const auto oracle = betti_rank_oracle_full(complex, t);
      const std::size_t b3 = diagrams[3].betti_at(t);
      ++result.comparisons;
      bool same = b3 == oracle[3];
      for (std::size_t k = 0; k < 3; ++k) same = same && features.curves[k][i] == oracle[k];
      if (!same) {
        ++result.betti_mismatches;
        log << "[oracle-check] mismatch: volume " << v << " (" << dims[0] << 'x' << dims[1] << 'x'
            << dims[2] << ") t=" << t << '\n';
      }
      // Euler audit on the engine's own numbers.
      const long long chi = static_cast<long long>(features.curves[0][i]) -
                            static_cast<long long>(features.curves[1][i]) +
                            static_cast<long long>(features.curves[2][i]) -
                            static_cast<long long>(b3);
      if (chi != euler_characteristic(complex, t)) ++result.euler_mismatches;
    }
  }
  log << "[oracle-check] " << result.volumes << " volumes, " << result.comparisons
      << " thresholds: " << result.betti_mismatches << " Betti mismatches, "
      << result.euler_mismatches << " Euler mismatches\n";
  return result;
}

}  // namespace voxbetti
