#pragma once

// Synthetic clips from the Shafer reflectance model:
//
//   ideal:  C(t) = I * (v_s + v_d * (1 + v_p(t)))
//   noisy:  C(t) = (I + dI(t)) * (v_s + dv_s(t) + v_d * (1 + v_p(t)))
//
// I, v_s and v_d are per channel; v_d additionally carries a seeded per-pixel
// multiplicative jitter so spatial pooling is not degenerate.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "pulse_tn/core.hpp"

namespace pulse_tn {

struct SceneSpec {
  std::vector<double> illumination;  ///< I, per channel, > 0
  std::vector<double> specular;      ///< v_s, per channel, >= 0
  std::vector<double> diffuse;       ///< v_d, per channel, >= 0
  double pixel_jitter = 0.05;        ///< half-width of the uniform relative v_d perturbation
  std::uint64_t seed = 0;            ///< drives the jitter realization

  /// I = 1, v_s = 0.2, v_d = 0.5 on every channel, 5% jitter.
  static SceneSpec defaults(std::size_t channels = 3);

  std::size_t channels() const { return illumination.size(); }
  void validate() const;
};

enum class PulseShape { sinusoid, sinusoid_with_harmonic };

struct PulseSpec {
  double hr_bpm = 72.0;
  double amplitude = 0.005;
  PulseShape shape = PulseShape::sinusoid;
  double harmonic_ratio = 0.3;
};

/// Unit step of height `gain` switched on at `t0_s` seconds.
struct StepNoise {
  double t0_s = 0.0;
  double gain = 0.0;
};
/// Ramp from 0 at the first frame to `total` at the last frame.
struct LinearNoise {
  double total = 0.0;
};
/// amplitude * sin(2 pi freq t).
struct SinusoidNoise {
  double freq_hz = 0.0;
  double amplitude = 0.0;
};

using NoiseComponent = std::variant<StepNoise, LinearNoise, SinusoidNoise>;

/// Sum of additive components; empty means no perturbation.
struct NoiseProfile {
  std::vector<NoiseComponent> components;

  bool empty() const { return components.empty(); }
  double value(std::size_t frame, std::size_t frames, double fps) const;
};

/// dI(t) and dv_s(t). Both are applied identically to every channel and pixel.
struct NoiseSpec {
  NoiseProfile illumination;
  NoiseProfile specular;

  bool empty() const { return illumination.empty() && specular.empty(); }
};

Waveform synth_pulse(const PulseSpec& pulse, double fps, std::size_t frames);

/// Per-pixel diffuse coefficient v_d[i][j][c] including jitter, row-major (i, j, c).
std::vector<double> jittered_diffuse(const SceneSpec& scene, std::size_t height, std::size_t width);

FrameClip render_ideal(const SceneSpec& scene, const Waveform& pulse, std::size_t height,
                       std::size_t width);

FrameClip render_noisy(const SceneSpec& scene, const Waveform& pulse, const NoiseSpec& noise,
                       std::size_t height, std::size_t width);

/// Closed-form noisy minus ideal:
///   I * dv_s + dI * (v_s + dv_s + v_d * (1 + v_p)).
FrameClip analytic_noise_residual(const SceneSpec& scene, const Waveform& pulse,
                                  const NoiseSpec& noise, std::size_t height, std::size_t width);

}  // namespace pulse_tn
