#include "pulse_tn/suppression.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "pulse_tn/metrics.hpp"

namespace pulse_tn {
namespace {

std::vector<double> feature_data(FeatureKind kind, const FrameClip& clip, const TnConfig& tn_cfg) {
  auto copy = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
  switch (kind) {
    case FeatureKind::raw: return copy(clip.data());
    case FeatureKind::tn: return copy(tn(clip, tn_cfg).data());
    case FeatureKind::frame_diff: return copy(frame_diff(clip).data());
    case FeatureKind::diff_normalized: return copy(diff_normalized(clip).data());
  }
  throw std::logic_error("feature_data: unhandled kind");
}

double rms_of_difference(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return rms(d);
}

}  // namespace

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::raw: return "raw";
    case FeatureKind::tn: return "tn";
    case FeatureKind::frame_diff: return "frame_diff";
    case FeatureKind::diff_normalized: return "diff_normalized";
  }
  return "unknown";
}

FeatureKind feature_of(ExtractorKind kind) {
  switch (kind) {
    case ExtractorKind::green_raw: return FeatureKind::raw;
    case ExtractorKind::tn_pooled: return FeatureKind::tn;
    case ExtractorKind::diff_pooled: return FeatureKind::diff_normalized;
  }
  throw std::logic_error("feature_of: unhandled kind");
}

SuppressionResult feature_residual(FeatureKind kind, const SceneSpec& scene, const Waveform& pulse,
                                   const NoiseSpec& noise, std::size_t height, std::size_t width,
                                   const TnConfig& tn_cfg) {
  const Waveform flat(std::vector<double>(pulse.size(), 0.0), pulse.fps());
  const auto noisy = feature_data(kind, render_noisy(scene, pulse, noise, height, width), tn_cfg);
  const auto ideal = feature_data(kind, render_ideal(scene, pulse, height, width), tn_cfg);
  const auto still = feature_data(kind, render_ideal(scene, flat, height, width), tn_cfg);
  return SuppressionResult{rms_of_difference(noisy, ideal), rms_of_difference(ideal, still)};
}

std::optional<double> pulse_correlation(ExtractorKind kind, const FrameClip& clip,
                                        const Waveform& true_pulse, const ExtractorConfig& cfg,
                                        const BandpassSpec& band) {
  const Waveform filtered = bandpass(run_extractor(kind, clip, cfg), band);
  const std::size_t n = std::min(filtered.size(), true_pulse.size());
  std::vector<double> x(filtered.samples().begin(), filtered.samples().begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> y(true_pulse.samples().begin(), true_pulse.samples().begin() + static_cast<std::ptrdiff_t>(n));
  return pearson_correlation(x, y);
}

}  // namespace pulse_tn
