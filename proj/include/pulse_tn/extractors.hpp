#pragma once

#include <optional>
#include <string_view>

#include "pulse_tn/core.hpp"
#include "pulse_tn/diff.hpp"
#include "pulse_tn/tn.hpp"

namespace pulse_tn {

enum class ExtractorKind { green_raw, tn_pooled, diff_pooled };

inline constexpr ExtractorKind kAllExtractors[] = {ExtractorKind::green_raw, ExtractorKind::tn_pooled,
                                                   ExtractorKind::diff_pooled};

std::string_view to_string(ExtractorKind kind);
std::optional<ExtractorKind> parse_extractor_kind(std::string_view name);

struct ExtractorConfig {
  TnConfig tn;
  double diff_guard = kDiffGuard;
  /// Pulse-carrying channel; unset selects green (1) for RGB and 0 for mono clips.
  std::optional<std::size_t> channel;
};

/// Channel index the extractors pool.
std::size_t pulse_channel(std::size_t channels, const ExtractorConfig& cfg = {});

Waveform extract_green(const FrameClip& clip, const ExtractorConfig& cfg = {});

/// TN first, then the spatial mean; per-pixel normalization keeps bright static
/// pixels from swamping the pulse.
Waveform extract_tn_pooled(const FrameClip& clip, const ExtractorConfig& cfg = {});

/// Normalized frame differences, pooled. Length T - 1.
Waveform extract_diff_pooled(const FrameClip& clip, const ExtractorConfig& cfg = {});

Waveform run_extractor(ExtractorKind kind, const FrameClip& clip, const ExtractorConfig& cfg = {});

}  // namespace pulse_tn
