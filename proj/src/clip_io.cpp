#include "pulse_tn/clip_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace pulse_tn {
namespace {

constexpr std::uint8_t kMagic[4] = {'R', 'P', 'G', 'C'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[offset + b]) << (8 * b);
  return v;
}

std::uint32_t checked_dim(std::size_t v, const char* name) {
  if (v > 0xFFFFFFFFu) throw ClipFormatError(ClipError::size_overflow, std::string(name) + " exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::string_view to_string(ClipError e) {
  switch (e) {
    case ClipError::io: return "io";
    case ClipError::bad_magic: return "bad_magic";
    case ClipError::unsupported_version: return "unsupported_version";
    case ClipError::unsupported_dtype: return "unsupported_dtype";
    case ClipError::bad_dimensions: return "bad_dimensions";
    case ClipError::size_overflow: return "size_overflow";
    case ClipError::truncated: return "truncated";
    case ClipError::trailing_data: return "trailing_data";
    case ClipError::bad_fps: return "bad_fps";
    case ClipError::non_finite_value: return "non_finite_value";
  }
  return "unknown";
}

ClipFormatError::ClipFormatError(ClipError code, const std::string& detail)
    : std::runtime_error("clip format error (" + std::string(to_string(code)) + "): " + detail),
      code_(code) {}

std::vector<std::uint8_t> encode_clip(const FrameClip& clip, ClipDtype dtype) {
  const ClipShape& s = clip.shape();
  const auto fps = static_cast<float>(clip.fps());
  std::vector<std::uint8_t> out;
  const std::size_t sample_size = dtype == ClipDtype::f32 ? 4 : 1;
  out.reserve(kClipHeaderSize + s.size() * sample_size);
  for (std::uint8_t b : kMagic) out.push_back(b);
  put_u32(out, kClipVersion);
  put_u32(out, checked_dim(s.frames, "T"));
  put_u32(out, checked_dim(s.height, "H"));
  put_u32(out, checked_dim(s.width, "W"));
  put_u32(out, checked_dim(s.channels, "C"));
  put_u32(out, static_cast<std::uint32_t>(dtype));
  put_u32(out, std::bit_cast<std::uint32_t>(fps));
  for (double v : clip.data()) {
    if (dtype == ClipDtype::f32) {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    } else {
      out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    }
  }
  return out;
}

FrameClip decode_clip(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kClipHeaderSize) {
    throw ClipFormatError(ClipError::truncated, "header needs " + std::to_string(kClipHeaderSize) +
                                                    " bytes, got " + std::to_string(bytes.size()));
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw ClipFormatError(ClipError::bad_magic, "expected \"RPGC\"");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kClipVersion) {
    throw ClipFormatError(ClipError::unsupported_version, "version " + std::to_string(version));
  }
  ClipShape shape{get_u32(bytes, 8), get_u32(bytes, 12), get_u32(bytes, 16), get_u32(bytes, 20)};
  const std::uint32_t dtype_code = get_u32(bytes, 24);
  if (dtype_code > 1) throw ClipFormatError(ClipError::unsupported_dtype, "dtype code " + std::to_string(dtype_code));
  const auto dtype = static_cast<ClipDtype>(dtype_code);
  const float fps = std::bit_cast<float>(get_u32(bytes, 28));

  if (shape.frames < 2 || shape.height < 1 || shape.width < 1 ||
      (shape.channels != 1 && shape.channels != 3)) {
    throw ClipFormatError(ClipError::bad_dimensions,
                          "T=" + std::to_string(shape.frames) + " H=" + std::to_string(shape.height) +
                              " W=" + std::to_string(shape.width) + " C=" + std::to_string(shape.channels));
  }
  if (!std::isfinite(fps) || !(fps > 0.0f)) throw ClipFormatError(ClipError::bad_fps, "fps must be finite and > 0");

  std::uint64_t count = shape.frames;
  std::uint64_t payload = 0;
  const std::uint64_t sample_size = dtype == ClipDtype::f32 ? 4 : 1;
  if (__builtin_mul_overflow(count, std::uint64_t{shape.height}, &count) ||
      __builtin_mul_overflow(count, std::uint64_t{shape.width}, &count) ||
      __builtin_mul_overflow(count, std::uint64_t{shape.channels}, &count) ||
      __builtin_mul_overflow(count, sample_size, &payload) ||
      payload > std::uint64_t{SIZE_MAX} - kClipHeaderSize) {
    throw ClipFormatError(ClipError::size_overflow, "payload size overflows");
  }
  const std::uint64_t available = bytes.size() - kClipHeaderSize;
  if (available < payload) {
    throw ClipFormatError(ClipError::truncated, "payload needs " + std::to_string(payload) +
                                                    " bytes, got " + std::to_string(available));
  }
  if (available > payload) {
    throw ClipFormatError(ClipError::trailing_data,
                          std::to_string(available - payload) + " bytes after payload");
  }

  std::vector<double> data(static_cast<std::size_t>(count));
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (dtype == ClipDtype::f32) {
      const float v = std::bit_cast<float>(get_u32(bytes, kClipHeaderSize + 4 * k));
      if (!std::isfinite(v)) throw ClipFormatError(ClipError::non_finite_value, "sample " + std::to_string(k));
      data[k] = v;
    } else {
      data[k] = static_cast<double>(bytes[kClipHeaderSize + k]) / 255.0;
    }
  }
  return FrameClip(shape, static_cast<double>(fps), std::move(data));
}

void write_clip(const FrameClip& clip, const std::filesystem::path& path, ClipDtype dtype) {
  const auto bytes = encode_clip(clip, dtype);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ClipFormatError(ClipError::io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ClipFormatError(ClipError::io, "write failed: " + path.string());
}

FrameClip read_clip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ClipFormatError(ClipError::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw ClipFormatError(ClipError::io, "read failed: " + path.string());
  return decode_clip(bytes);
}

}  // namespace pulse_tn
