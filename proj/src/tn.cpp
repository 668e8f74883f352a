#include "pulse_tn/tn.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pulse_tn {

void TnConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("TnConfig: epsilon must be finite and > 0");
  }
}

TrendFit fit_trend(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("fit_trend: needs at least 2 samples");
  const double count = static_cast<double>(n);

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= count;

  // Centered sums; sum_t (t - t_mean)^2 = n (n^2 - 1) / 12.
  const double t_mean = (count - 1.0) / 2.0;
  double cross = 0.0;
  for (std::size_t t = 0; t < n; ++t) cross += (static_cast<double>(t) - t_mean) * (values[t] - mean);
  const double spread = count * (count * count - 1.0) / 12.0;

  TrendFit fit;
  fit.slope = cross / spread;
  fit.intercept = mean - fit.slope * t_mean;
  return fit;
}

TrendFit fit_trend(const PixelTrace& trace) { return fit_trend(trace.values()); }

namespace detail {

void detrend_in_place(std::span<double> values) {
  const TrendFit fit = fit_trend(values);
  for (std::size_t t = 0; t < values.size(); ++t) {
    values[t] -= fit.slope * static_cast<double>(t) + fit.intercept;
  }
}

void rms_normalize_in_place(std::span<double> values, double epsilon) {
  double mean_square = 0.0;
  for (double v : values) mean_square += v * v;
  mean_square /= static_cast<double>(values.size());
  const double scale = std::sqrt(mean_square + epsilon);
  for (double& v : values) v /= scale;
}

}  // namespace detail

PixelTrace detrend_trace(const PixelTrace& trace) {
  std::vector<double> out(trace.values().begin(), trace.values().end());
  detail::detrend_in_place(out);
  return PixelTrace(std::move(out), trace.fps());
}

PixelTrace rms_normalize(const PixelTrace& trace, const TnConfig& cfg) {
  cfg.validate();
  std::vector<double> out(trace.values().begin(), trace.values().end());
  detail::rms_normalize_in_place(out, cfg.epsilon);
  return PixelTrace(std::move(out), trace.fps());
}

FrameClip tn(const FrameClip& clip, const TnConfig& cfg) {
  cfg.validate();
  const ClipShape& shape = clip.shape();
  if (shape.frames < 3) throw std::invalid_argument("tn: needs at least 3 frames");

  const std::size_t stride = shape.frame_size();
  const auto in = clip.data();
  std::vector<double> out(in.size());
  std::vector<double> trace(shape.frames);
  for (std::size_t k = 0; k < stride; ++k) {
    for (std::size_t t = 0; t < shape.frames; ++t) trace[t] = in[t * stride + k];
    detail::detrend_in_place(trace);
    detail::rms_normalize_in_place(trace, cfg.epsilon);
    for (std::size_t t = 0; t < shape.frames; ++t) out[t * stride + k] = trace[t];
  }
  return FrameClip(shape, clip.fps(), std::move(out));
}

}  // namespace pulse_tn
