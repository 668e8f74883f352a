#pragma once

// RPGC clip files. Little-endian throughout:
//
//   offset  size  field
//        0     4  magic "RPGC"
//        4     4  u32 version (= 1)
//        8    16  u32 T, H, W, C
//       24     4  u32 dtype (0 = f32, 1 = u8)
//       28     4  f32 fps
//       32     *  payload, T*H*W*C samples, frame-major then row, column, channel
//
// u8 samples are mapped to [0, 1] by dividing by 255 on read.

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pulse_tn/core.hpp"

namespace pulse_tn {

enum class ClipDtype : std::uint32_t { f32 = 0, u8 = 1 };

enum class ClipError {
  io,
  bad_magic,
  unsupported_version,
  unsupported_dtype,
  bad_dimensions,
  size_overflow,
  truncated,
  trailing_data,
  bad_fps,
  non_finite_value,
};

std::string_view to_string(ClipError e);

class ClipFormatError : public std::runtime_error {
 public:
  ClipFormatError(ClipError code, const std::string& detail);
  ClipError code() const { return code_; }

 private:
  ClipError code_;
};

inline constexpr std::size_t kClipHeaderSize = 32;
inline constexpr std::uint32_t kClipVersion = 1;

std::vector<std::uint8_t> encode_clip(const FrameClip& clip, ClipDtype dtype = ClipDtype::f32);
FrameClip decode_clip(std::span<const std::uint8_t> bytes);

void write_clip(const FrameClip& clip, const std::filesystem::path& path,
                ClipDtype dtype = ClipDtype::f32);
FrameClip read_clip(const std::filesystem::path& path);

}  // namespace pulse_tn
