#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "voxbetti/learn.hpp"

namespace voxbetti {

// Container: the 4 bytes "CBT1", a little-endian u64 payload length, then the
// payload (a kind byte followed by the model's fields in declaration order).

std::vector<std::byte> serialize_model(const Model& m);
/// ErrorCode::Format on a bad magic, unknown kind or trailing bytes;
/// ErrorCode::Truncation when the payload is short.
Model deserialize_model(std::span<const std::byte> bytes);

void save_model(const std::filesystem::path& path, const Model& m);
Model load_model(const std::filesystem::path& path);

/// Hyperparameters for both ensembles, kept together so one file configures
/// a whole run.
struct LearnConfig {
  ForestParams forest;
  BoostedParams boosted;
};

/// Flat `key=value` lines; `#` starts a comment. Keys are the usual hyperparameter
/// names (n_estimators, max_depth, learning_rate, colsample_bytree,
/// colsample_bylevel, min_samples_split, criterion, random_state, ...). A
/// `forest.` or `boosted.` prefix targets one model; a bare key sets every
/// model that has the parameter. Unknown keys are ErrorCode::Config.
LearnConfig parse_learn_config(std::istream& in, LearnConfig base = {});
LearnConfig read_learn_config(const std::filesystem::path& path);
/// Writes every key with its prefix; parse_learn_config reads it back exactly.
void write_learn_config(std::ostream& out, const LearnConfig& config);

}  // namespace voxbetti
