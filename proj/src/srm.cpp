#include "pulse_tn/srm.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace pulse_tn {
namespace {

struct NoiseEvaluator {
  std::size_t frame;
  std::size_t frames;
  double fps;

  double operator()(const StepNoise& n) const {
    return static_cast<double>(frame) / fps >= n.t0_s ? n.gain : 0.0;
  }
  double operator()(const LinearNoise& n) const {
    return n.total * static_cast<double>(frame) / static_cast<double>(frames - 1);
  }
  double operator()(const SinusoidNoise& n) const {
    return n.amplitude *
           std::sin(2.0 * std::numbers::pi * n.freq_hz * static_cast<double>(frame) / fps);
  }
};

void check_render_inputs(const SceneSpec& scene, std::size_t height, std::size_t width) {
  scene.validate();
  if (height < 1 || width < 1) throw std::invalid_argument("render: frame size must be at least 1x1");
}

ClipShape shape_for(const SceneSpec& scene, const Waveform& pulse, std::size_t height,
                    std::size_t width) {
  return ClipShape{pulse.size(), height, width, scene.channels()};
}

std::vector<double> profile_series(const NoiseProfile& profile, std::size_t frames, double fps) {
  std::vector<double> out(frames, 0.0);
  if (profile.empty()) return out;
  for (std::size_t t = 0; t < frames; ++t) out[t] = profile.value(t, frames, fps);
  return out;
}

}  // namespace

SceneSpec SceneSpec::defaults(std::size_t channels) {
  SceneSpec s;
  s.illumination.assign(channels, 1.0);
  s.specular.assign(channels, 0.2);
  s.diffuse.assign(channels, 0.5);
  return s;
}

void SceneSpec::validate() const {
  const std::size_t c = illumination.size();
  if (c != 1 && c != 3) throw std::invalid_argument("SceneSpec: channel count must be 1 or 3");
  if (specular.size() != c || diffuse.size() != c) {
    throw std::invalid_argument("SceneSpec: per-channel vectors differ in length");
  }
  for (std::size_t k = 0; k < c; ++k) {
    if (!std::isfinite(illumination[k]) || illumination[k] <= 0.0) {
      throw std::invalid_argument("SceneSpec: illumination must be finite and > 0");
    }
    if (!std::isfinite(specular[k]) || specular[k] < 0.0 || !std::isfinite(diffuse[k]) ||
        diffuse[k] < 0.0) {
      throw std::invalid_argument("SceneSpec: reflectances must be finite and >= 0");
    }
  }
  if (!std::isfinite(pixel_jitter) || pixel_jitter < 0.0) {
    throw std::invalid_argument("SceneSpec: pixel_jitter must be finite and >= 0");
  }
}

double NoiseProfile::value(std::size_t frame, std::size_t frames, double fps) const {
  double sum = 0.0;
  const NoiseEvaluator eval{frame, frames, fps};
  for (const auto& component : components) sum += std::visit(eval, component);
  return sum;
}

Waveform synth_pulse(const PulseSpec& pulse, double fps, std::size_t frames) {
  if (!(pulse.hr_bpm >= 30.0 && pulse.hr_bpm <= 180.0)) {
    throw std::invalid_argument("synth_pulse: hr_bpm must lie in [30, 180], got " +
                                std::to_string(pulse.hr_bpm));
  }
  if (!(pulse.amplitude >= 0.0) || !std::isfinite(pulse.amplitude)) {
    throw std::invalid_argument("synth_pulse: amplitude must be finite and >= 0");
  }
  if (!(pulse.harmonic_ratio >= 0.0 && pulse.harmonic_ratio <= 1.0)) {
    throw std::invalid_argument("synth_pulse: harmonic_ratio must lie in [0, 1]");
  }
  if (frames < 2) throw std::invalid_argument("synth_pulse: needs at least 2 frames");
  if (!(fps > 0.0)) throw std::invalid_argument("synth_pulse: fps must be > 0");

  const double omega = 2.0 * std::numbers::pi * pulse.hr_bpm / 60.0 / fps;
  const bool harmonic = pulse.shape == PulseShape::sinusoid_with_harmonic;
  std::vector<double> v(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double phase = omega * static_cast<double>(t);
    double s = std::sin(phase);
    if (harmonic) s += pulse.harmonic_ratio * std::sin(2.0 * phase);
    v[t] = pulse.amplitude * s;
  }
  return Waveform(std::move(v), fps);
}

std::vector<double> jittered_diffuse(const SceneSpec& scene, std::size_t height, std::size_t width) {
  scene.validate();
  const std::size_t channels = scene.channels();
  std::vector<double> out(height * width * channels);
  // mt19937_64 output is fixed by the standard; the conversion to [0,1) is done
  // by hand because std::uniform_real_distribution is implementation-defined.
  std::mt19937_64 rng(scene.seed);
  for (std::size_t p = 0; p < height * width; ++p) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double factor = 1.0 + scene.pixel_jitter * (2.0 * u - 1.0);
    for (std::size_t c = 0; c < channels; ++c) out[p * channels + c] = scene.diffuse[c] * factor;
  }
  return out;
}

FrameClip render_ideal(const SceneSpec& scene, const Waveform& pulse, std::size_t height,
                       std::size_t width) {
  return render_noisy(scene, pulse, NoiseSpec{}, height, width);
}

FrameClip render_noisy(const SceneSpec& scene, const Waveform& pulse, const NoiseSpec& noise,
                       std::size_t height, std::size_t width) {
  check_render_inputs(scene, height, width);
  const ClipShape shape = shape_for(scene, pulse, height, width);
  const auto vd = jittered_diffuse(scene, height, width);
  const auto d_illum = profile_series(noise.illumination, shape.frames, pulse.fps());
  const auto d_spec = profile_series(noise.specular, shape.frames, pulse.fps());
  const auto vp = pulse.samples();
  const std::size_t channels = shape.channels;

  std::vector<double> data(shape.size());
  for (std::size_t t = 0; t < shape.frames; ++t) {
    const std::size_t base = t * shape.frame_size();
    for (std::size_t p = 0; p < height * width; ++p) {
      for (std::size_t c = 0; c < channels; ++c) {
        const std::size_t k = p * channels + c;
        const double illum = scene.illumination[c] + d_illum[t];
        data[base + k] = illum * (scene.specular[c] + d_spec[t] + vd[k] * (1.0 + vp[t]));
      }
    }
  }
  return FrameClip(shape, pulse.fps(), std::move(data));
}

FrameClip analytic_noise_residual(const SceneSpec& scene, const Waveform& pulse,
                                  const NoiseSpec& noise, std::size_t height, std::size_t width) {
  check_render_inputs(scene, height, width);
  const ClipShape shape = shape_for(scene, pulse, height, width);
  const auto vd = jittered_diffuse(scene, height, width);
  const auto d_illum = profile_series(noise.illumination, shape.frames, pulse.fps());
  const auto d_spec = profile_series(noise.specular, shape.frames, pulse.fps());
  const auto vp = pulse.samples();
  const std::size_t channels = shape.channels;

  std::vector<double> data(shape.size());
  for (std::size_t t = 0; t < shape.frames; ++t) {
    const std::size_t base = t * shape.frame_size();
    for (std::size_t p = 0; p < height * width; ++p) {
      for (std::size_t c = 0; c < channels; ++c) {
        const std::size_t k = p * channels + c;
        data[base + k] = scene.illumination[c] * d_spec[t] +
                         d_illum[t] * (scene.specular[c] + d_spec[t] + vd[k] * (1.0 + vp[t]));
      }
    }
  }
  return FrameClip(shape, pulse.fps(), std::move(data));
}

}  // namespace pulse_tn
