#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rai/error.hpp"
#include "rai/raster.hpp"

namespace rai {

// Deliberately narrow GeoTIFF reader: classic TIFF (both byte orders), first
// IFD, single band, no predictor, Compression none or Deflate, stripped or
// tiled layout, sample types u8 / i16 / u16 / i32 / u32 / f32 / f64,
// georeferencing via ModelPixelScale + ModelTiepoint. Everything else is
// rejected with the offending tag named, never guessed at.
namespace tiff {

enum : std::uint16_t {
  kImageWidth = 256,
  kImageLength = 257,
  kBitsPerSample = 258,
  kCompression = 259,
  kPhotometric = 262,
  kStripOffsets = 273,
  kSamplesPerPixel = 277,
  kRowsPerStrip = 278,
  kStripByteCounts = 279,
  kPlanarConfig = 284,
  kPredictor = 317,
  kTileWidth = 322,
  kTileLength = 323,
  kTileOffsets = 324,
  kTileByteCounts = 325,
  kSampleFormat = 339,
  kModelPixelScale = 33550,
  kModelTiepoint = 33922,
  kGdalNodata = 42113,
};

struct Field {
  std::uint16_t type = 0;
  std::uint32_t count = 0;
  std::uint64_t value_offset = 0;  // position of the value bytes in the file
  std::uint32_t inline_value = 0;  // raw 4 value bytes, already byte-swapped
};

class Reader {
 public:
  Reader(std::string path, std::vector<std::uint8_t> bytes)
      : path_(std::move(path)), bytes_(std::move(bytes)) {}

  RasterGrid parse() {
    parse_header();
    parse_ifd();
    check_supported();
    const std::vector<double> values = decode_pixels();
    const auto [origin, cell] = georeference();
    return RasterGrid(origin, cell, static_cast<int>(height_), static_cast<int>(width_),
                      nodata_, values, path_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw InputError(path_ + ": " + msg); }

  void need(std::uint64_t offset, std::uint64_t n, const char* what) const {
    if (offset + n > bytes_.size() || offset + n < offset) {
      fail(std::string("truncated file reading ") + what);
    }
  }

  std::uint16_t u16(std::uint64_t at) const {
    const std::uint8_t a = bytes_[at], b = bytes_[at + 1];
    return big_endian_ ? static_cast<std::uint16_t>(a << 8 | b)
                       : static_cast<std::uint16_t>(b << 8 | a);
  }

  std::uint32_t u32(std::uint64_t at) const {
    std::uint32_t v = 0;
    if (big_endian_) {
      for (int i = 0; i < 4; ++i) v = v << 8 | bytes_[at + i];
    } else {
      for (int i = 3; i >= 0; --i) v = v << 8 | bytes_[at + i];
    }
    return v;
  }

  std::uint64_t u64(std::uint64_t at) const {
    std::uint64_t v = 0;
    if (big_endian_) {
      for (int i = 0; i < 8; ++i) v = v << 8 | bytes_[at + i];
    } else {
      for (int i = 7; i >= 0; --i) v = v << 8 | bytes_[at + i];
    }
    return v;
  }

  double f64(std::uint64_t at) const {
    const std::uint64_t bits = u64(at);
    double out;
    std::memcpy(&out, &bits, sizeof(out));
    return out;
  }

  static std::uint32_t type_size(std::uint16_t type) {
    switch (type) {
      case 1: case 2: case 6: case 7: return 1;   // BYTE, ASCII, SBYTE, UNDEFINED
      case 3: case 8: return 2;                   // SHORT, SSHORT
      case 4: case 9: case 11: return 4;          // LONG, SLONG, FLOAT
      case 5: case 10: case 12: return 8;         // RATIONAL, SRATIONAL, DOUBLE
      default: return 0;
    }
  }

  void parse_header() {
    need(0, 8, "TIFF header");
    if (bytes_[0] == 'I' && bytes_[1] == 'I') {
      big_endian_ = false;
    } else if (bytes_[0] == 'M' && bytes_[1] == 'M') {
      big_endian_ = true;
    } else {
      fail("not a TIFF file (bad byte-order mark)");
    }
    const std::uint16_t magic = u16(2);
    if (magic == 43) fail("BigTIFF is not supported");
    if (magic != 42) fail("not a TIFF file (bad magic number)");
    ifd_offset_ = u32(4);
  }

  void parse_ifd() {
    need(ifd_offset_, 2, "IFD entry count");
    const std::uint16_t n = u16(ifd_offset_);
    need(ifd_offset_ + 2, static_cast<std::uint64_t>(n) * 12 + 4, "IFD entries");
    for (std::uint16_t i = 0; i < n; ++i) {
      const std::uint64_t at = ifd_offset_ + 2 + static_cast<std::uint64_t>(i) * 12;
      Field f;
      const std::uint16_t tag = u16(at);
      f.type = u16(at + 2);
      f.count = u32(at + 4);
      const std::uint64_t value_bytes =
          static_cast<std::uint64_t>(type_size(f.type)) * f.count;
      f.value_offset = (value_bytes > 4) ? u32(at + 8) : at + 8;
      f.inline_value = u32(at + 8);
      fields_[tag] = f;
    }
  }

  const Field* find(std::uint16_t tag) const {
    const auto it = fields_.find(tag);
    return it == fields_.end() ? nullptr : &it->second;
  }

  // Unsigned integral field (SHORT or LONG), scalar or element of an array.
  std::uint32_t uint_at(const Field& f, std::uint32_t index, const char* tag_name) const {
    if (index >= f.count) fail(std::string(tag_name) + ": index out of range");
    const std::uint32_t sz = type_size(f.type);
    if (f.type != 3 && f.type != 4) {
      fail(std::string(tag_name) + ": expected SHORT or LONG type, got type " +
           std::to_string(f.type));
    }
    const std::uint64_t at = f.value_offset + static_cast<std::uint64_t>(index) * sz;
    need(at, sz, tag_name);
    return (f.type == 3) ? u16(at) : u32(at);
  }

  std::uint32_t uint_scalar(std::uint16_t tag, const char* tag_name,
                            std::uint32_t fallback, bool* present = nullptr) const {
    const Field* f = find(tag);
    if (present) *present = (f != nullptr);
    if (!f) return fallback;
    return uint_at(*f, 0, tag_name);
  }

  std::vector<double> doubles(const Field& f, const char* tag_name) const {
    if (f.type != 12) {
      fail(std::string(tag_name) + ": expected DOUBLE type, got type " +
           std::to_string(f.type));
    }
    need(f.value_offset, static_cast<std::uint64_t>(f.count) * 8, tag_name);
    std::vector<double> out(f.count);
    for (std::uint32_t i = 0; i < f.count; ++i) out[i] = f64(f.value_offset + 8ull * i);
    return out;
  }

  std::string ascii(const Field& f, const char* tag_name) const {
    need(f.value_offset, f.count, tag_name);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + f.value_offset), f.count);
    while (!s.empty() && (s.back() == '\0' || s.back() == ' ')) s.pop_back();
    return s;
  }

  void check_supported() {
    width_ = uint_scalar(kImageWidth, "ImageWidth", 0);
    height_ = uint_scalar(kImageLength, "ImageLength", 0);
    if (width_ == 0 || height_ == 0) fail("missing or zero ImageWidth/ImageLength");

    const std::uint32_t spp = uint_scalar(kSamplesPerPixel, "SamplesPerPixel", 1);
    if (spp != 1) {
      fail("SamplesPerPixel=" + std::to_string(spp) + " unsupported (single band only)");
    }
    const std::uint32_t photometric = uint_scalar(kPhotometric, "PhotometricInterpretation", 1);
    if (photometric > 1) {
      fail("PhotometricInterpretation=" + std::to_string(photometric) +
           " unsupported (grayscale only)");
    }
    compression_ = uint_scalar(kCompression, "Compression", 1);
    if (compression_ != 1 && compression_ != 8 && compression_ != 32946) {
      fail("Compression=" + std::to_string(compression_) +
           " unsupported (none or Deflate only)");
    }
    const std::uint32_t predictor = uint_scalar(kPredictor, "Predictor", 1);
    if (predictor != 1) {
      fail("Predictor=" + std::to_string(predictor) + " unsupported");
    }
    const std::uint32_t planar = uint_scalar(kPlanarConfig, "PlanarConfiguration", 1);
    if (planar != 1) {
      fail("PlanarConfiguration=" + std::to_string(planar) + " unsupported");
    }

    bits_ = uint_scalar(kBitsPerSample, "BitsPerSample", 1);
    sample_format_ = uint_scalar(kSampleFormat, "SampleFormat", 1);
    const bool ok = (bits_ == 8 && sample_format_ == 1) ||
                    (bits_ == 16 && (sample_format_ == 1 || sample_format_ == 2)) ||
                    (bits_ == 32 && (sample_format_ <= 3)) ||
                    (bits_ == 64 && sample_format_ == 3);
    if (!ok) {
      fail("BitsPerSample=" + std::to_string(bits_) + " with SampleFormat=" +
           std::to_string(sample_format_) + " unsupported");
    }

    tiled_ = find(kTileOffsets) != nullptr;
    if (!tiled_ && !find(kStripOffsets)) fail("missing StripOffsets/TileOffsets");

    if (const Field* nd = find(kGdalNodata)) {
      const std::string s = ascii(*nd, "GDAL_NODATA");
      if (!s.empty()) {
        try {
          nodata_ = std::stod(s);
        } catch (const std::exception&) {
          fail("GDAL_NODATA: cannot parse '" + s + "'");
        }
      }
    }
  }

  double sample_to_double(const std::uint8_t* at) const {
    // `at` points at a sample already positioned in the decoded buffer, still
    // in file byte order.
    auto load16 = [&]() -> std::uint16_t {
      return big_endian_ ? static_cast<std::uint16_t>(at[0] << 8 | at[1])
                         : static_cast<std::uint16_t>(at[1] << 8 | at[0]);
    };
    auto load32 = [&]() -> std::uint32_t {
      std::uint32_t v = 0;
      if (big_endian_) {
        for (int i = 0; i < 4; ++i) v = v << 8 | at[i];
      } else {
        for (int i = 3; i >= 0; --i) v = v << 8 | at[i];
      }
      return v;
    };
    auto load64 = [&]() -> std::uint64_t {
      std::uint64_t v = 0;
      if (big_endian_) {
        for (int i = 0; i < 8; ++i) v = v << 8 | at[i];
      } else {
        for (int i = 7; i >= 0; --i) v = v << 8 | at[i];
      }
      return v;
    };
    switch (bits_) {
      case 8:
        return static_cast<double>(*at);
      case 16:
        return sample_format_ == 2 ? static_cast<double>(static_cast<std::int16_t>(load16()))
                                   : static_cast<double>(load16());
      case 32:
        if (sample_format_ == 3) {
          const std::uint32_t b = load32();
          float f;
          std::memcpy(&f, &b, sizeof(f));
          return static_cast<double>(f);
        }
        return sample_format_ == 2 ? static_cast<double>(static_cast<std::int32_t>(load32()))
                                   : static_cast<double>(load32());
      case 64: {
        const std::uint64_t b = load64();
        double d;
        std::memcpy(&d, &b, sizeof(d));
        return d;
      }
      default:
        fail("unreachable sample size");
    }
  }

  std::vector<std::uint8_t> decode_block(std::uint64_t offset, std::uint64_t length,
                                         std::uint64_t expected) const {
    need(offset, length, "pixel data");
    if (compression_ == 1) {
      if (length < expected) fail("pixel block shorter than expected");
      return std::vector<std::uint8_t>(bytes_.begin() + offset,
                                       bytes_.begin() + offset + expected);
    }
    std::vector<std::uint8_t> out(expected);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) fail("zlib init failed");
    zs.next_in = const_cast<Bytef*>(bytes_.data() + offset);
    zs.avail_in = static_cast<uInt>(length);
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(expected);
    const int rc = inflate(&zs, Z_FINISH);
    const std::uint64_t produced = expected - zs.avail_out;
    inflateEnd(&zs);
    if ((rc != Z_STREAM_END && rc != Z_OK) || produced != expected) {
      fail("corrupt Deflate stream in pixel data");
    }
    return out;
  }

  std::vector<double> decode_pixels() const {
    const std::uint32_t bps = bits_ / 8;
    std::vector<double> values(static_cast<std::size_t>(width_) * height_);
    if (!tiled_) {
      const Field* offsets = find(kStripOffsets);
      const Field* counts = find(kStripByteCounts);
      if (!counts) fail("missing StripByteCounts");
      std::uint32_t rps = uint_scalar(kRowsPerStrip, "RowsPerStrip", height_);
      if (rps == 0 || rps == 0xFFFFFFFFu) rps = height_;
      const std::uint32_t n_strips = (height_ + rps - 1) / rps;
      if (offsets->count < n_strips || counts->count < n_strips) {
        fail("StripOffsets/StripByteCounts shorter than strip count");
      }
      for (std::uint32_t s = 0; s < n_strips; ++s) {
        const std::uint32_t row0 = s * rps;
        const std::uint32_t rows_here = std::min(rps, height_ - row0);
        const std::uint64_t expected = static_cast<std::uint64_t>(rows_here) * width_ * bps;
        const auto block = decode_block(uint_at(*offsets, s, "StripOffsets"),
                                        uint_at(*counts, s, "StripByteCounts"), expected);
        for (std::uint32_t r = 0; r < rows_here; ++r) {
          for (std::uint32_t c = 0; c < width_; ++c) {
            values[static_cast<std::size_t>(row0 + r) * width_ + c] =
                sample_to_double(block.data() + (static_cast<std::size_t>(r) * width_ + c) * bps);
          }
        }
      }
      return values;
    }

    const Field* offsets = find(kTileOffsets);
    const Field* counts = find(kTileByteCounts);
    if (!counts) fail("missing TileByteCounts");
    const std::uint32_t tw = uint_scalar(kTileWidth, "TileWidth", 0);
    const std::uint32_t th = uint_scalar(kTileLength, "TileLength", 0);
    if (tw == 0 || th == 0) fail("missing TileWidth/TileLength");
    const std::uint32_t tiles_x = (width_ + tw - 1) / tw;
    const std::uint32_t tiles_y = (height_ + th - 1) / th;
    if (offsets->count < tiles_x * tiles_y || counts->count < tiles_x * tiles_y) {
      fail("TileOffsets/TileByteCounts shorter than tile count");
    }
    for (std::uint32_t ty = 0; ty < tiles_y; ++ty) {
      for (std::uint32_t tx = 0; tx < tiles_x; ++tx) {
        const std::uint32_t t = ty * tiles_x + tx;
        const std::uint64_t expected = static_cast<std::uint64_t>(tw) * th * bps;
        const auto block = decode_block(uint_at(*offsets, t, "TileOffsets"),
                                        uint_at(*counts, t, "TileByteCounts"), expected);
        const std::uint32_t rows_here = std::min(th, height_ - ty * th);
        const std::uint32_t cols_here = std::min(tw, width_ - tx * tw);
        for (std::uint32_t r = 0; r < rows_here; ++r) {
          for (std::uint32_t c = 0; c < cols_here; ++c) {
            values[static_cast<std::size_t>(ty * th + r) * width_ + tx * tw + c] =
                sample_to_double(block.data() + (static_cast<std::size_t>(r) * tw + c) * bps);
          }
        }
      }
    }
    return values;
  }

  std::pair<GeoPoint, double> georeference() const {
    const Field* scale_f = find(kModelPixelScale);
    const Field* tie_f = find(kModelTiepoint);
    if (!scale_f || !tie_f) {
      fail("missing georeferencing (ModelPixelScale and ModelTiepoint required)");
    }
    const std::vector<double> scale = doubles(*scale_f, "ModelPixelScale");
    const std::vector<double> tie = doubles(*tie_f, "ModelTiepoint");
    if (scale.size() < 2) fail("ModelPixelScale needs at least 2 values");
    if (tie.size() < 6) fail("ModelTiepoint needs at least 6 values");
    const double sx = scale[0];
    const double sy = scale[1];
    if (!(sx > 0.0) || !(sy > 0.0)) fail("ModelPixelScale must be positive");
    if (std::abs(sx - sy) > 1e-9 * std::max(sx, sy)) {
      fail("non-square pixels unsupported (ModelPixelScale " + std::to_string(sx) + " x " +
           std::to_string(sy) + ")");
    }
    // Tiepoint maps raster (i, j) to model (x, y); shift back to pixel (0, 0).
    const GeoPoint origin{tie[3] - tie[0] * sx, tie[4] + tie[1] * sy};
    return {origin, sx};
  }

  std::string path_;
  std::vector<std::uint8_t> bytes_;
  bool big_endian_ = false;
  std::uint64_t ifd_offset_ = 0;
  std::map<std::uint16_t, Field> fields_;
  std::uint32_t width_ = 0;
  std::uint32_t height_ = 0;
  std::uint32_t bits_ = 0;
  std::uint32_t sample_format_ = 1;
  std::uint32_t compression_ = 1;
  bool tiled_ = false;
  std::optional<double> nodata_;
};

}  // namespace tiff

inline bool looks_like_tiff(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[4] = {};
  in.read(magic, 4);
  if (!in) return false;
  return (magic[0] == 'I' && magic[1] == 'I' && magic[2] == 42 && magic[3] == 0) ||
         (magic[0] == 'M' && magic[1] == 'M' && magic[2] == 0 && magic[3] == 42) ||
         (magic[0] == 'I' && magic[1] == 'I' && magic[2] == 43 && magic[3] == 0) ||
         (magic[0] == 'M' && magic[1] == 'M' && magic[2] == 0 && magic[3] == 43);
}

inline RasterGrid load_geotiff(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw InputError(path + ": read failed");
  return tiff::Reader(path, std::move(bytes)).parse();
}

}  // namespace rai
