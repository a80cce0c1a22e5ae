#include "voxbetti/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "voxbetti/error.hpp"

namespace voxbetti {

namespace {

constexpr std::size_t kOffDim = 40;
constexpr std::size_t kOffDatatype = 70;
constexpr std::size_t kOffBitpix = 72;
constexpr std::size_t kOffPixdim = 76;
constexpr std::size_t kOffVoxOffset = 108;
constexpr std::size_t kOffSclSlope = 112;
constexpr std::size_t kOffSclInter = 116;
constexpr std::size_t kOffMagic = 344;

class HeaderReader {
public:
  HeaderReader(std::span<const std::byte> bytes, bool swap) : bytes_(bytes), swap_(swap) {}

  template <typename T>
  T get(std::size_t offset) const {
    std::array<std::byte, sizeof(T)> raw;
    std::memcpy(raw.data(), bytes_.data() + offset, sizeof(T));
    if (swap_) std::reverse(raw.begin(), raw.end());
    T value;
    std::memcpy(&value, raw.data(), sizeof(T));
    return value;
  }

private:
  std::span<const std::byte> bytes_;
  bool swap_;
};

template <typename T>
T read_sample(const std::byte* p, bool swap) {
  std::array<std::byte, sizeof(T)> raw;
  std::memcpy(raw.data(), p, sizeof(T));
  if (swap) std::reverse(raw.begin(), raw.end());
  T value;
  std::memcpy(&value, raw.data(), sizeof(T));
  return value;
}

template <typename T>
void put(std::vector<std::byte>& out, std::size_t offset, T value) {
  std::memcpy(out.data() + offset, &value, sizeof(T));
}

Volume3D decode_nifti(std::span<const std::byte> bytes) {
  if (bytes.size() < kNiftiHeaderSize) {
    throw Error(ErrorCode::Format, "file shorter than the 348-byte NIfTI-1 header");
  }
  std::int32_t sizeof_hdr;
  std::memcpy(&sizeof_hdr, bytes.data(), 4);
  if (sizeof_hdr == 540 || sizeof_hdr == 0x1C020000) {
    throw Error(ErrorCode::Format, "NIfTI-2 files are not supported");
  }

  const char* magic = reinterpret_cast<const char*>(bytes.data() + kOffMagic);
  const bool single_file = std::memcmp(magic, "n+1\0", 4) == 0;
  const bool pair_file = std::memcmp(magic, "ni1\0", 4) == 0;
  if (!single_file && !pair_file) throw Error(ErrorCode::Format, "bad NIfTI-1 magic");

  // dim[0] lies in 1..7 when the header matches host byte order.
  std::int16_t dim0_native;
  std::memcpy(&dim0_native, bytes.data() + kOffDim, 2);
  const bool swap = dim0_native < 1 || dim0_native > 7;
  const HeaderReader hdr(bytes, swap);

  std::array<std::int16_t, 8> dim{};
  for (std::size_t i = 0; i < 8; ++i) dim[i] = hdr.get<std::int16_t>(kOffDim + 2 * i);
  if (dim[0] < 1 || dim[0] > 7) throw Error(ErrorCode::Format, "invalid dim[0]");
  if (dim[0] == 4) {
    if (dim[4] != 1) throw Error(ErrorCode::Format, "multi-frame NIfTI volumes are not supported");
  } else if (dim[0] != 3) {
    throw Error(ErrorCode::Format, "expected a 3D volume, got dim[0]=" + std::to_string(dim[0]));
  }
  for (int a = 1; a <= 3; ++a) {
    if (dim[a] < 1) throw Error(ErrorCode::Format, "non-positive dimension in header");
  }

  const auto datatype = hdr.get<std::int16_t>(kOffDatatype);
  std::size_t width = 0;
  switch (static_cast<NiftiDatatype>(datatype)) {
    case NiftiDatatype::UInt8: width = 1; break;
    case NiftiDatatype::Int16: width = 2; break;
    case NiftiDatatype::Int32: width = 4; break;
    case NiftiDatatype::Float32: width = 4; break;
    case NiftiDatatype::Float64: width = 8; break;
    default:
      throw Error(ErrorCode::UnsupportedDatatype,
                  "NIfTI datatype code " + std::to_string(datatype));
  }

  const auto vox_offset = hdr.get<float>(kOffVoxOffset);
  std::size_t data_begin = kNiftiHeaderSize;
  const bool explicit_offset =
      std::isfinite(vox_offset) && vox_offset >= static_cast<float>(kNiftiHeaderSize);
  if (explicit_offset) data_begin = static_cast<std::size_t>(vox_offset);

  const std::size_t nx = dim[1], ny = dim[2], nz = dim[3];
  const std::size_t count = nx * ny * nz;
  if (!explicit_offset && single_file &&
      bytes.size() >= kNiftiHeaderSize + 4 + count * width) {
    // Missing vox_offset on an "n+1" file: skip the 4-byte extension flag.
    data_begin = kNiftiHeaderSize + 4;
  }
  if (data_begin > bytes.size() || bytes.size() - data_begin < count * width) {
    throw Error(ErrorCode::Truncation, "payload holds fewer voxels than the header declares (" +
                                           std::to_string(count) + " expected)");
  }

  const float slope = hdr.get<float>(kOffSclSlope);
  const float inter = hdr.get<float>(kOffSclInter);
  const bool scale = slope != 0.0f && std::isfinite(slope);
  const double scl_slope = scale ? slope : 1.0;
  const double scl_inter = scale && std::isfinite(inter) ? inter : 0.0;

  const std::byte* payload = bytes.data() + data_begin;
  std::vector<double> data(count);
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t x = 0; x < nx; ++x) {
        const std::size_t file_index = x + nx * (y + ny * z);
        const std::byte* p = payload + file_index * width;
        double value = 0.0;
        switch (static_cast<NiftiDatatype>(datatype)) {
          case NiftiDatatype::UInt8: value = read_sample<std::uint8_t>(p, swap); break;
          case NiftiDatatype::Int16: value = read_sample<std::int16_t>(p, swap); break;
          case NiftiDatatype::Int32: value = read_sample<std::int32_t>(p, swap); break;
          case NiftiDatatype::Float32: value = read_sample<float>(p, swap); break;
          case NiftiDatatype::Float64: value = read_sample<double>(p, swap); break;
        }
        if (scale) value = value * scl_slope + scl_inter;
        data[(x * ny + y) * nz + z] = value;
      }
    }
  }
  return Volume3D({nx, ny, nz}, std::move(data));
}

}  // namespace

bool is_gzip(std::span<const std::byte> bytes) noexcept {
  return bytes.size() >= 2 && bytes[0] == std::byte{0x1F} && bytes[1] == std::byte{0x8B};
}

std::vector<std::byte> gzip_decompress(std::span<const std::byte> bytes) {
  z_stream strm{};
  if (inflateInit2(&strm, 15 + 16) != Z_OK) throw Error(ErrorCode::Format, "inflateInit2 failed");
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<std::byte*>(bytes.data()));
  strm.avail_in = static_cast<uInt>(bytes.size());
  std::vector<std::byte> out;
  std::array<std::byte, 1 << 16> chunk;
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    strm.next_out = reinterpret_cast<Bytef*>(chunk.data());
    strm.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw Error(rc == Z_BUF_ERROR ? ErrorCode::Truncation : ErrorCode::Format,
                  "corrupt gzip stream");
    }
    out.insert(out.end(), chunk.begin(), chunk.begin() + (chunk.size() - strm.avail_out));
    if (rc == Z_OK && strm.avail_in == 0 && strm.avail_out != 0) {
      inflateEnd(&strm);
      throw Error(ErrorCode::Truncation, "gzip stream ends early");
    }
  }
  inflateEnd(&strm);
  return out;
}

std::vector<std::byte> gzip_compress(std::span<const std::byte> bytes) {
  z_stream strm{};
  if (deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) !=
      Z_OK) {
    throw Error(ErrorCode::Format, "deflateInit2 failed");
  }
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<std::byte*>(bytes.data()));
  strm.avail_in = static_cast<uInt>(bytes.size());
  std::vector<std::byte> out(deflateBound(&strm, static_cast<uLong>(bytes.size())));
  strm.next_out = reinterpret_cast<Bytef*>(out.data());
  strm.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&strm, Z_FINISH);
  deflateEnd(&strm);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::Format, "gzip compression failed");
  out.resize(out.size() - strm.avail_out);
  return out;
}

Volume3D parse_nifti(std::span<const std::byte> bytes) {
  if (is_gzip(bytes)) {
    const auto plain = gzip_decompress(bytes);
    return decode_nifti(plain);
  }
  return decode_nifti(bytes);
}

std::vector<std::byte> encode_nifti(const Volume3D& v, NiftiDatatype datatype) {
  std::size_t width = 0;
  switch (datatype) {
    case NiftiDatatype::UInt8: width = 1; break;
    case NiftiDatatype::Int16: width = 2; break;
    case NiftiDatatype::Int32: width = 4; break;
    case NiftiDatatype::Float32: width = 4; break;
    case NiftiDatatype::Float64: width = 8; break;
  }
  const auto& d = v.dims();
  const std::size_t data_begin = kNiftiHeaderSize + 4;
  std::vector<std::byte> out(data_begin + v.size() * width, std::byte{0});
  put<std::int32_t>(out, 0, static_cast<std::int32_t>(kNiftiHeaderSize));
  const std::array<std::int16_t, 8> dim{3, static_cast<std::int16_t>(d[0]),
                                        static_cast<std::int16_t>(d[1]),
                                        static_cast<std::int16_t>(d[2]), 1, 1, 1, 1};
  for (std::size_t i = 0; i < 8; ++i) put<std::int16_t>(out, kOffDim + 2 * i, dim[i]);
  put<std::int16_t>(out, kOffDatatype, static_cast<std::int16_t>(datatype));
  put<std::int16_t>(out, kOffBitpix, static_cast<std::int16_t>(8 * width));
  for (std::size_t i = 0; i < 4; ++i) put<float>(out, kOffPixdim + 4 * i, 1.0f);
  put<float>(out, kOffVoxOffset, static_cast<float>(data_begin));
  put<float>(out, kOffSclSlope, 0.0f);
  put<float>(out, kOffSclInter, 0.0f);
  std::memcpy(out.data() + kOffMagic, "n+1\0", 4);

  std::byte* payload = out.data() + data_begin;
  for (std::size_t x = 0; x < d[0]; ++x) {
    for (std::size_t y = 0; y < d[1]; ++y) {
      for (std::size_t z = 0; z < d[2]; ++z) {
        const double value = v.at(x, y, z);
        std::byte* p = payload + (x + d[0] * (y + d[1] * z)) * width;
        switch (datatype) {
          case NiftiDatatype::UInt8: { auto s = static_cast<std::uint8_t>(value); std::memcpy(p, &s, 1); break; }
          case NiftiDatatype::Int16: { auto s = static_cast<std::int16_t>(value); std::memcpy(p, &s, 2); break; }
          case NiftiDatatype::Int32: { auto s = static_cast<std::int32_t>(value); std::memcpy(p, &s, 4); break; }
          case NiftiDatatype::Float32: { auto s = static_cast<float>(value); std::memcpy(p, &s, 4); break; }
          case NiftiDatatype::Float64: std::memcpy(p, &value, 8); break;
        }
      }
    }
  }
  return out;
}

}  // namespace voxbetti
