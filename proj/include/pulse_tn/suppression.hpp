#pragma once

// Noise-suppression measurements on simulated clips, where the ideal and
// noisy renderings of the same scene realization are both available.

#include <optional>
#include <string_view>

#include "pulse_tn/extractors.hpp"
#include "pulse_tn/heart_rate.hpp"
#include "pulse_tn/srm.hpp"

namespace pulse_tn {

enum class FeatureKind { raw, tn, frame_diff, diff_normalized };

std::string_view to_string(FeatureKind kind);

/// Feature transform underlying each extractor.
FeatureKind feature_of(ExtractorKind kind);

struct SuppressionResult {
  double noise_rms = 0.0;  ///< RMS of F(noisy) - F(ideal)
  double pulse_rms = 0.0;  ///< RMS of F(ideal) - F(static scene without pulse)

  double ratio() const { return noise_rms / pulse_rms; }
};

/// Measures how much of the optical noise survives a feature transform,
/// relative to the pulse content of the same transform.
SuppressionResult feature_residual(FeatureKind kind, const SceneSpec& scene, const Waveform& pulse,
                                   const NoiseSpec& noise, std::size_t height, std::size_t width,
                                   const TnConfig& tn_cfg = {});

/// Pearson correlation between the bandpassed extractor output and the true
/// pulse, over their common prefix. Empty when either side is constant.
std::optional<double> pulse_correlation(ExtractorKind kind, const FrameClip& clip,
                                        const Waveform& true_pulse, const ExtractorConfig& cfg = {},
                                        const BandpassSpec& band = {});

}  // namespace pulse_tn
