#include "pulse_tn/extractors.hpp"

#include <stdexcept>
#include <string>

namespace pulse_tn {

std::string_view to_string(ExtractorKind kind) {
  switch (kind) {
    case ExtractorKind::green_raw: return "green_raw";
    case ExtractorKind::tn_pooled: return "tn_pooled";
    case ExtractorKind::diff_pooled: return "diff_pooled";
  }
  return "unknown";
}

std::optional<ExtractorKind> parse_extractor_kind(std::string_view name) {
  for (ExtractorKind k : kAllExtractors) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::size_t pulse_channel(std::size_t channels, const ExtractorConfig& cfg) {
  if (cfg.channel) {
    if (*cfg.channel >= channels) {
      throw std::invalid_argument("channel " + std::to_string(*cfg.channel) + " out of range for " +
                                  std::to_string(channels) + "-channel clip");
    }
    return *cfg.channel;
  }
  return channels >= 2 ? 1 : 0;
}

Waveform extract_green(const FrameClip& clip, const ExtractorConfig& cfg) {
  return pool_spatial(clip, pulse_channel(clip.channels(), cfg));
}

Waveform extract_tn_pooled(const FrameClip& clip, const ExtractorConfig& cfg) {
  return pool_spatial(tn(clip, cfg.tn), pulse_channel(clip.channels(), cfg));
}

Waveform extract_diff_pooled(const FrameClip& clip, const ExtractorConfig& cfg) {
  return pool_spatial(diff_normalized(clip, cfg.diff_guard), pulse_channel(clip.channels(), cfg));
}

Waveform run_extractor(ExtractorKind kind, const FrameClip& clip, const ExtractorConfig& cfg) {
  switch (kind) {
    case ExtractorKind::green_raw: return extract_green(clip, cfg);
    case ExtractorKind::tn_pooled: return extract_tn_pooled(clip, cfg);
    case ExtractorKind::diff_pooled: return extract_diff_pooled(clip, cfg);
  }
  throw std::logic_error("run_extractor: unhandled kind");
}

}  // namespace pulse_tn
