#pragma once

// Temporal normalization: every (i, j, c) pixel series is detrended with an
// ordinary least-squares line over t = 0..T-1 and then divided by its temporal
// root mean square,
//
//   out(t) = r(t) / sqrt(mean_t r(t)^2 + epsilon),   r(t) = P(t) - (slope t + intercept).
//
// Any per-pixel gain, offset or linear drift of the input cancels exactly
// (up to the epsilon regularizer).

#include <span>

#include "pulse_tn/core.hpp"

namespace pulse_tn {

struct TrendFit {
  double slope = 0.0;      ///< intensity per frame
  double intercept = 0.0;  ///< intensity at t = 0
};

struct TnConfig {
  double epsilon = 1e-8;

  void validate() const;
};

TrendFit fit_trend(std::span<const double> values);
TrendFit fit_trend(const PixelTrace& trace);

PixelTrace detrend_trace(const PixelTrace& trace);
PixelTrace rms_normalize(const PixelTrace& trace, const TnConfig& cfg = {});

/// Detrend then normalize every trace of `clip`. Requires T >= 3: two samples
/// are always fit exactly by their trend line.
FrameClip tn(const FrameClip& clip, const TnConfig& cfg = {});

namespace detail {
// In-place kernels shared by the trace and clip entry points.
void detrend_in_place(std::span<double> values);
void rms_normalize_in_place(std::span<double> values, double epsilon);
}  // namespace detail

}  // namespace pulse_tn
