#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "voxbetti/error.hpp"
#include "voxbetti/model_io.hpp"

namespace voxbetti {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::Config,
              "invalid value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value);
}

bool parse_class_weight(std::string_view key, std::string_view value) {
  if (value == "none") return false;
  if (value == "balanced") return true;
  bad_value(key, value);
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

using Setter = std::function<void(LearnConfig&, std::string_view key, std::string_view value)>;

// One entry per prefixed key.
const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"forest.n_estimators",
       [](LearnConfig& c, auto k, auto v) {
         c.forest.n_estimators = parse_number<std::size_t>(k, v);
       }},
      {"forest.criterion",
       [](LearnConfig& c, auto, auto v) { c.forest.tree.criterion = parse_criterion(std::string(v)); }},
      {"forest.min_samples_split",
       [](LearnConfig& c, auto k, auto v) {
         c.forest.tree.min_samples_split = parse_number<std::size_t>(k, v);
       }},
      {"forest.max_depth",
       [](LearnConfig& c, auto k, auto v) {
         c.forest.tree.max_depth = v == "none" ? 0 : parse_number<std::size_t>(k, v);
       }},
      {"forest.max_features",
       [](LearnConfig& c, auto k, auto v) {
         c.forest.sqrt_features = v == "sqrt";
         c.forest.tree.max_features =
             v == "sqrt" || v == "all" ? 0 : parse_number<std::size_t>(k, v);
       }},
      {"forest.bootstrap",
       [](LearnConfig& c, auto k, auto v) { c.forest.bootstrap = parse_bool(k, v); }},
      {"forest.class_weight",
       [](LearnConfig& c, auto k, auto v) {
         c.forest.balanced_class_weight = parse_class_weight(k, v);
       }},
      {"forest.random_state",
       [](LearnConfig& c, auto k, auto v) {
         c.forest.random_state = parse_number<std::uint64_t>(k, v);
       }},
      {"boosted.n_estimators",
       [](LearnConfig& c, auto k, auto v) {
         c.boosted.n_estimators = parse_number<std::size_t>(k, v);
       }},
      {"boosted.max_depth",
       [](LearnConfig& c, auto k, auto v) { c.boosted.max_depth = parse_number<std::size_t>(k, v); }},
      {"boosted.learning_rate",
       [](LearnConfig& c, auto k, auto v) { c.boosted.learning_rate = parse_number<double>(k, v); }},
      {"boosted.colsample_bytree",
       [](LearnConfig& c, auto k, auto v) {
         c.boosted.colsample_bytree = parse_number<double>(k, v);
       }},
      {"boosted.colsample_bylevel",
       [](LearnConfig& c, auto k, auto v) {
         c.boosted.colsample_bylevel = parse_number<double>(k, v);
       }},
      {"boosted.reg_lambda",
       [](LearnConfig& c, auto k, auto v) { c.boosted.reg_lambda = parse_number<double>(k, v); }},
      {"boosted.gamma",
       [](LearnConfig& c, auto k, auto v) { c.boosted.gamma = parse_number<double>(k, v); }},
      {"boosted.min_child_weight",
       [](LearnConfig& c, auto k, auto v) {
         c.boosted.min_child_weight = parse_number<double>(k, v);
       }},
      {"boosted.class_weight",
       [](LearnConfig& c, auto k, auto v) {
         c.boosted.balanced_class_weight = parse_class_weight(k, v);
       }},
      {"boosted.eval_metric",
       [](LearnConfig&, auto k, auto v) {
         // Binary log-loss is the only objective; both spellings name it.
         if (v != "logloss" && v != "mlogloss") bad_value(k, v);
       }},
      {"boosted.random_state",
       [](LearnConfig& c, auto k, auto v) {
         c.boosted.random_state = parse_number<std::uint64_t>(k, v);
       }},
  };
  return table;
}

}  // namespace

LearnConfig parse_learn_config(std::istream& in, LearnConfig config) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + " is not key=value");
    }
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));

    const auto& table = setters();
    if (auto it = table.find(key); it != table.end()) {
      it->second(config, key, value);
      continue;
    }
    bool matched = false;
    for (const char* prefix : {"forest.", "boosted."}) {
      if (auto it = table.find(std::string(prefix) + std::string(key)); it != table.end()) {
        it->second(config, key, value);
        matched = true;
      }
    }
    if (!matched) throw Error(ErrorCode::Config, "unknown key '" + std::string(key) + "'");
  }
  return config;
}

LearnConfig read_learn_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_learn_config(in);
}

void write_learn_config(std::ostream& out, const LearnConfig& c) {
  const auto& f = c.forest;
  const auto& b = c.boosted;
  out << "forest.n_estimators=" << f.n_estimators << '\n'
      << "forest.criterion=" << criterion_name(f.tree.criterion) << '\n'
      << "forest.min_samples_split=" << f.tree.min_samples_split << '\n'
      << "forest.max_depth=";
  if (f.tree.max_depth == 0) {
    out << "none";
  } else {
    out << f.tree.max_depth;
  }
  out << "\nforest.max_features=";
  if (f.tree.max_features != 0) {
    out << f.tree.max_features;
  } else {
    out << (f.sqrt_features ? "sqrt" : "all");
  }
  out << "\nforest.bootstrap=" << (f.bootstrap ? "true" : "false") << '\n'
      << "forest.class_weight=" << (f.balanced_class_weight ? "balanced" : "none") << '\n'
      << "forest.random_state=" << f.random_state << '\n'
      << "boosted.n_estimators=" << b.n_estimators << '\n'
      << "boosted.max_depth=" << b.max_depth << '\n'
      << "boosted.learning_rate=" << shortest(b.learning_rate) << '\n'
      << "boosted.colsample_bytree=" << shortest(b.colsample_bytree) << '\n'
      << "boosted.colsample_bylevel=" << shortest(b.colsample_bylevel) << '\n'
      << "boosted.reg_lambda=" << shortest(b.reg_lambda) << '\n'
      << "boosted.gamma=" << shortest(b.gamma) << '\n'
      << "boosted.min_child_weight=" << shortest(b.min_child_weight) << '\n'
      << "boosted.class_weight=" << (b.balanced_class_weight ? "balanced" : "none") << '\n'
      << "boosted.eval_metric=logloss\n"
      << "boosted.random_state=" << b.random_state << '\n';
}

}  // namespace voxbetti
