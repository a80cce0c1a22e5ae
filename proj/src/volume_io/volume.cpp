#include "voxbetti/volume.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "voxbetti/error.hpp"

namespace voxbetti {

namespace {

static_assert(std::endian::native == std::endian::little,
              "raw and NIfTI decoding assume a little-endian host");

template <typename T>
void decode_samples(std::span<const std::byte> bytes, std::vector<double>& out) {
  const std::size_t n = bytes.size() / sizeof(T);
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    T value;
    std::memcpy(&value, bytes.data() + i * sizeof(T), sizeof(T));
    out[i] = static_cast<double>(value);
  }
}

template <typename T>
void encode_samples(std::span<const double> data, std::vector<std::byte>& out) {
  out.resize(data.size() * sizeof(T));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const T value = static_cast<T>(data[i]);
    std::memcpy(out.data() + i * sizeof(T), &value, sizeof(T));
  }
}

}  // namespace

std::size_t scalar_width(ScalarKind kind) noexcept {
  switch (kind) {
    case ScalarKind::UInt8: return 1;
    case ScalarKind::Int16: return 2;
    case ScalarKind::Int32: return 4;
    case ScalarKind::Float32: return 4;
    case ScalarKind::Float64: return 8;
  }
  return 0;
}

const char* scalar_name(ScalarKind kind) noexcept {
  switch (kind) {
    case ScalarKind::UInt8: return "uint8";
    case ScalarKind::Int16: return "int16";
    case ScalarKind::Int32: return "int32";
    case ScalarKind::Float32: return "float32";
    case ScalarKind::Float64: return "float64";
  }
  return "?";
}

ScalarKind parse_scalar_kind(std::string_view name) {
  for (auto kind : {ScalarKind::UInt8, ScalarKind::Int16, ScalarKind::Int32, ScalarKind::Float32,
                    ScalarKind::Float64}) {
    if (name == scalar_name(kind)) return kind;
  }
  throw Error(ErrorCode::Config, "unknown scalar kind '" + std::string(name) + "'");
}

Volume3D::Volume3D(Dims3 dims, std::vector<double> data, int slice_axis)
    : dims_(dims), data_(std::move(data)) {
  if (dims_[0] == 0 || dims_[1] == 0 || dims_[2] == 0) {
    throw Error(ErrorCode::Shape, "volume dims must be positive");
  }
  if (data_.size() != dims_[0] * dims_[1] * dims_[2]) {
    throw Error(ErrorCode::Shape, "data length " + std::to_string(data_.size()) +
                                      " does not match dims product");
  }
  for (double x : data_) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidData, "volume contains NaN or Inf");
  }
  if (slice_axis > 2) throw Error(ErrorCode::OutOfRange, "slice axis must be 0, 1 or 2");
  slice_axis_ = slice_axis < 0 ? default_slice_axis(dims_) : slice_axis;
}

Volume3D Volume3D::with_slice_axis(int axis) const {
  return Volume3D(dims_, data_, axis);
}

int default_slice_axis(const Dims3& d) noexcept {
  if (d[0] != d[1] && d[1] == d[2]) return 0;
  if (d[1] != d[0] && d[0] == d[2]) return 1;
  if (d[2] != d[0] && d[0] == d[1]) return 2;
  return 0;
}

Volume3D parse_raw(std::span<const std::byte> bytes, Dims3 dims, ScalarKind kind) {
  const std::size_t expected = dims[0] * dims[1] * dims[2] * scalar_width(kind);
  if (bytes.size() != expected) {
    throw Error(ErrorCode::Truncation, "raw payload has " + std::to_string(bytes.size()) +
                                          " bytes, expected " + std::to_string(expected));
  }
  std::vector<double> data;
  switch (kind) {
    case ScalarKind::UInt8: decode_samples<std::uint8_t>(bytes, data); break;
    case ScalarKind::Int16: decode_samples<std::int16_t>(bytes, data); break;
    case ScalarKind::Int32: decode_samples<std::int32_t>(bytes, data); break;
    case ScalarKind::Float32: decode_samples<float>(bytes, data); break;
    case ScalarKind::Float64: decode_samples<double>(bytes, data); break;
  }
  return Volume3D(dims, std::move(data));
}

std::vector<std::byte> serialize_raw(const Volume3D& v, ScalarKind kind) {
  std::vector<std::byte> out;
  switch (kind) {
    case ScalarKind::UInt8: encode_samples<std::uint8_t>(v.data(), out); break;
    case ScalarKind::Int16: encode_samples<std::int16_t>(v.data(), out); break;
    case ScalarKind::Int32: encode_samples<std::int32_t>(v.data(), out); break;
    case ScalarKind::Float32: encode_samples<float>(v.data(), out); break;
    case ScalarKind::Float64: encode_samples<double>(v.data(), out); break;
  }
  return out;
}

Volume3D normalize(const Volume3D& v) {
  if (v.size() == 0) throw Error(ErrorCode::InvalidData, "cannot normalize an empty volume");
  const auto [lo_it, hi_it] = std::minmax_element(v.data().begin(), v.data().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(v.size(), 0.0);
  if (hi > lo) {
    const double range = hi - lo;
    const auto in = v.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
      out[i] = (in[i] - lo) / range * 255.0;
    }
  }
  return Volume3D(v.dims(), std::move(out), v.slice_axis());
}

Volume3D invert(const Volume3D& v) {
  std::vector<double> out(v.data().begin(), v.data().end());
  for (double& x : out) x = -x;
  return Volume3D(v.dims(), std::move(out), v.slice_axis());
}

Volume3D extract_slab(const Volume3D& v, std::size_t lo, std::size_t hi) {
  const int axis = v.slice_axis();
  const Dims3& d = v.dims();
  if (lo > hi) {
    throw Error(ErrorCode::OutOfRange,
                "empty slab window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (hi >= d[axis]) {
    throw Error(ErrorCode::OutOfRange, "slab end " + std::to_string(hi) +
                                           " beyond axis extent " + std::to_string(d[axis]));
  }
  Dims3 out_dims = d;
  out_dims[axis] = hi - lo + 1;
  std::vector<double> out;
  out.reserve(out_dims[0] * out_dims[1] * out_dims[2]);
  std::array<std::size_t, 3> begin{0, 0, 0};
  std::array<std::size_t, 3> end = d;
  begin[axis] = lo;
  end[axis] = hi + 1;
  for (std::size_t i = begin[0]; i < end[0]; ++i)
    for (std::size_t j = begin[1]; j < end[1]; ++j)
      for (std::size_t k = begin[2]; k < end[2]; ++k) out.push_back(v.at(i, j, k));
  return Volume3D(out_dims, std::move(out), axis);
}

Volume3D extract_default_slab(const Volume3D& v) {
  if (v.dims()[v.slice_axis()] > kDefaultSlabHi) {
    return extract_slab(v, kDefaultSlabLo, kDefaultSlabHi);
  }
  return v;
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  std::vector<std::byte> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in) throw Error(ErrorCode::Io, "failed reading " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace voxbetti
