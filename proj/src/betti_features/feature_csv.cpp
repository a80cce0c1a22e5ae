#include <charconv>
#include <fstream>
#include <sstream>

#include "voxbetti/betti.hpp"
#include "voxbetti/error.hpp"

namespace voxbetti {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string feature_column_name(int dim, std::size_t index, std::size_t thresholds) {
  std::size_t width = 3;
  for (std::size_t limit = 1000; thresholds > limit; limit *= 10) ++width;
  std::string digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "b" + std::to_string(dim) + "_" + digits;
}

std::string feature_csv_header(std::size_t thresholds) {
  std::string header = "label";
  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < thresholds; ++i) {
      header += ',';
      header += feature_column_name(k, i, thresholds);
    }
  }
  return header;
}

std::string feature_csv_row(const BettiFeatureVector& row) {
  std::string line = row.label ? std::string(label_name(*row.label)) : std::string();
  for (const auto& curve : row.curves) {
    for (auto x : curve) {
      line += ',';
      line += std::to_string(x);
    }
  }
  return line;
}

void write_feature_csv(std::ostream& out, std::span<const BettiFeatureVector> rows) {
  const std::size_t n = rows.empty() ? kDefaultThresholds : rows.front().thresholds();
  out << feature_csv_header(n) << '\n';
  for (const auto& row : rows) {
    if (row.thresholds() != n) throw Error(ErrorCode::Shape, "rows with differing curve lengths");
    out << feature_csv_row(row) << '\n';
  }
}

void write_feature_csv(const std::filesystem::path& path, std::span<const BettiFeatureVector> rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_feature_csv(out, rows);
}

std::vector<BettiFeatureVector> read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Format, "feature CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.empty() || header.front() != "label" || (header.size() - 1) % 3 != 0 ||
      header.size() < 4) {
    throw Error(ErrorCode::Format, "feature CSV header must be label followed by 3N curve columns");
  }
  const std::size_t n = (header.size() - 1) / 3;
  if (line != feature_csv_header(n)) {
    throw Error(ErrorCode::Format, "unexpected feature CSV column names");
  }

  std::vector<BettiFeatureVector> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::Format, "feature CSV line " + std::to_string(line_no) + " has " +
                                         std::to_string(fields.size()) + " fields");
    }
    BettiFeatureVector row;
    if (!fields[0].empty()) row.label = parse_label(fields[0]);
    for (std::size_t k = 0; k < 3; ++k) {
      row.curves[k].resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto field = fields[1 + k * n + i];
        std::uint32_t value = 0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
          throw Error(ErrorCode::Format,
                      "non-integer feature on line " + std::to_string(line_no));
        }
        row.curves[k][i] = value;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BettiFeatureVector> read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_feature_csv(in);
}

}  // namespace voxbetti
