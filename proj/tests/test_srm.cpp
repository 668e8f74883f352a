#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pulse_tn/srm.hpp"

using namespace pulse_tn;

namespace {

SceneSpec flat_scene(std::size_t channels = 3) {
  SceneSpec s = SceneSpec::defaults(channels);
  s.pixel_jitter = 0.0;
  return s;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(SynthPulse, MatchesDefinition) {
  PulseSpec p;
  p.hr_bpm = 60.0;
  p.amplitude = 0.005;
  const Waveform w = synth_pulse(p, 30.0, 60);
  ASSERT_EQ(w.size(), 60u);
  for (std::size_t t = 0; t < 60; ++t) {
    EXPECT_NEAR(w.samples()[t], 0.005 * std::sin(2.0 * std::numbers::pi * t / 30.0), 1e-15);
  }
}

TEST(SynthPulse, ZeroAmplitude) {
  PulseSpec p;
  p.amplitude = 0.0;
  const Waveform w = synth_pulse(p, 30.0, 100);
  EXPECT_EQ(max_abs(w.samples()), 0.0);
}

TEST(SynthPulse, DominantBinAtHeartRate) {
  PulseSpec p;
  p.hr_bpm = 72.0;
  p.shape = PulseShape::sinusoid_with_harmonic;
  p.harmonic_ratio = 0.3;
  // 300 frames at 30 fps: bin width 0.1 Hz, 1.2 Hz is bin 12.
  const Waveform w = synth_pulse(p, 30.0, 300);
  std::size_t best = 0;
  double best_mag = -1;
  for (std::size_t k = 0; k <= 150; ++k) {
    const double m = oracle::dft_magnitude(w.samples(), k);
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  EXPECT_EQ(best, 12u);
  // Harmonic at 2.4 Hz carries harmonic_ratio of the fundamental.
  EXPECT_NEAR(oracle::dft_magnitude(w.samples(), 24) / best_mag, 0.3, 1e-9);
}

TEST(SynthPulse, ZeroMeanOverWholePeriods) {
  PulseSpec p;
  p.hr_bpm = 90.0;  // 1.5 Hz, 20 frames per beat at 30 fps
  p.shape = PulseShape::sinusoid_with_harmonic;
  const Waveform w = synth_pulse(p, 30.0, 200);
  double sum = 0.0;
  for (double v : w.samples()) sum += v;
  EXPECT_NEAR(sum / 200.0, 0.0, 1e-15);
}

TEST(SynthPulse, RejectsRateOutsideBand) {
  PulseSpec p;
  p.hr_bpm = 29.0;
  EXPECT_THROW(synth_pulse(p, 30.0, 100), std::invalid_argument);
  p.hr_bpm = 181.0;
  EXPECT_THROW(synth_pulse(p, 30.0, 100), std::invalid_argument);
  p.hr_bpm = 72.0;
  EXPECT_THROW(synth_pulse(p, 30.0, 1), std::invalid_argument);
}

TEST(RenderIdeal, ConstantWithoutPulse) {
  const Waveform flat(std::vector<double>(10, 0.0), 30.0);
  const FrameClip c = render_ideal(flat_scene(), flat, 2, 3);
  for (double v : c.data()) EXPECT_DOUBLE_EQ(v, 0.7);
}

TEST(RenderIdeal, HandEvaluation) {
  const Waveform pulse({0.0, 0.01, -0.01}, 30.0);
  const FrameClip c = render_ideal(flat_scene(1), pulse, 1, 1);
  EXPECT_NEAR(c.at(1, 0, 0, 0), 0.705, 1e-15);
  EXPECT_NEAR(c.at(2, 0, 0, 0), 0.695, 1e-15);
}

TEST(RenderIdeal, LinearInIllumination) {
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = 9;
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 40);
  const FrameClip a = render_ideal(s, pulse, 4, 4);
  for (double& i : s.illumination) i *= 2.0;
  const FrameClip b = render_ideal(s, pulse, 4, 4);
  for (std::size_t k = 0; k < a.data().size(); ++k) EXPECT_DOUBLE_EQ(b.data()[k], 2.0 * a.data()[k]);
}

TEST(RenderIdeal, JitterStaysWithinBounds) {
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = 1234;
  const auto vd = jittered_diffuse(s, 16, 16);
  double lo = 1e9, hi = -1e9;
  for (double v : vd) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GE(lo, 0.5 * 0.95);
  EXPECT_LE(hi, 0.5 * 1.05);
  EXPECT_GT(hi - lo, 0.03);  // jitter actually varies across pixels
}

TEST(RenderNoisy, NoNoiseMatchesIdeal) {
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = 3;
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 50);
  const FrameClip a = render_ideal(s, pulse, 3, 3);
  const FrameClip b = render_noisy(s, pulse, NoiseSpec{}, 3, 3);
  for (std::size_t k = 0; k < a.data().size(); ++k) EXPECT_EQ(a.data()[k], b.data()[k]);
}

TEST(RenderNoisy, StepGainScalesAfterOnset) {
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = 5;
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 90);
  NoiseSpec n;
  n.illumination.components.emplace_back(StepNoise{1.0, 0.04});
  const FrameClip ideal = render_ideal(s, pulse, 2, 2);
  const FrameClip noisy = render_noisy(s, pulse, n, 2, 2);
  const std::size_t fs = ideal.shape().frame_size();
  for (std::size_t t = 0; t < 90; ++t) {
    const double factor = t >= 30 ? 1.04 : 1.0;
    for (std::size_t k = 0; k < fs; ++k) {
      EXPECT_NEAR(noisy.data()[t * fs + k], factor * ideal.data()[t * fs + k], 1e-15);
    }
  }
}

TEST(RenderNoisy, ConstantSpecularOffset) {
  SceneSpec s = SceneSpec::defaults(3);
  s.illumination = {1.0, 0.8, 0.6};
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 30);
  NoiseSpec n;
  n.specular.components.emplace_back(StepNoise{0.0, 0.02});
  const FrameClip ideal = render_ideal(s, pulse, 2, 2);
  const FrameClip noisy = render_noisy(s, pulse, n, 2, 2);
  for (std::size_t t = 0; t < 30; ++t)
    for (std::size_t c = 0; c < 3; ++c)
      EXPECT_NEAR(noisy.at(t, 1, 0, c) - ideal.at(t, 1, 0, c), s.illumination[c] * 0.02, 1e-15);
}

TEST(NoiseProfile, ComponentsAdd) {
  NoiseProfile p;
  p.components = {LinearNoise{0.1}, SinusoidNoise{0.25, 0.05}, StepNoise{0.5, 0.01}};
  // frame 30 of 61 at 30 fps: t = 1 s.
  const double expected = 0.1 * 30.0 / 60.0 + 0.05 * std::sin(2.0 * std::numbers::pi * 0.25) + 0.01;
  EXPECT_NEAR(p.value(30, 61, 30.0), expected, 1e-15);
  EXPECT_NEAR(p.value(0, 61, 30.0), 0.0, 1e-15);
  EXPECT_NEAR(p.value(60, 61, 30.0), 0.1 + 0.05 * std::sin(2.0 * std::numbers::pi * 0.5) + 0.01, 1e-15);
}

TEST(AnalyticResidual, ZeroWithoutNoise) {
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 20);
  const FrameClip r = analytic_noise_residual(SceneSpec::defaults(3), pulse, NoiseSpec{}, 2, 2);
  EXPECT_EQ(max_abs(r.data()), 0.0);
}

TEST(AnalyticResidual, EqualsNoisyMinusIdeal) {
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = 77;
  s.illumination = {0.9, 1.0, 1.1};
  PulseSpec p;
  p.shape = PulseShape::sinusoid_with_harmonic;
  const Waveform pulse = synth_pulse(p, 30.0, 120);
  NoiseSpec n;
  n.illumination.components = {LinearNoise{0.08}, SinusoidNoise{0.4, 0.02}};
  n.specular.components = {StepNoise{2.0, -0.01}, SinusoidNoise{0.7, 0.005}};
  const FrameClip diff = subtract(render_noisy(s, pulse, n, 4, 4), render_ideal(s, pulse, 4, 4));
  const FrameClip analytic = analytic_noise_residual(s, pulse, n, 4, 4);
  for (std::size_t k = 0; k < diff.data().size(); ++k) {
    EXPECT_NEAR(diff.data()[k], analytic.data()[k], 1e-12);
  }
}

TEST(AnalyticResidual, SmallNoiseApproximationBound) {
  // |dC - (I dv_s + dI (v_s + v_d))| <= |dI| (|dv_s| + v_d * amplitude), per pixel.
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = 21;
  PulseSpec p;
  const Waveform pulse = synth_pulse(p, 30.0, 300);
  NoiseSpec n;
  n.illumination.components = {LinearNoise{0.01}, SinusoidNoise{0.3, 0.004}};
  n.specular.components = {SinusoidNoise{0.2, 0.003}};
  const FrameClip r = analytic_noise_residual(s, pulse, n, 3, 3);
  const auto vd = jittered_diffuse(s, 3, 3);
  const ClipShape& sh = r.shape();
  for (std::size_t t = 0; t < sh.frames; ++t) {
    const double di = n.illumination.value(t, sh.frames, 30.0);
    const double dvs = n.specular.value(t, sh.frames, 30.0);
    for (std::size_t k = 0; k < sh.frame_size(); ++k) {
      const std::size_t c = k % 3;
      const double approx = s.illumination[c] * dvs + di * (s.specular[c] + vd[k]);
      const double bound = std::abs(di) * (std::abs(dvs) + vd[k] * p.amplitude);
      EXPECT_LE(std::abs(r.data()[t * sh.frame_size() + k] - approx), bound + 1e-15);
    }
  }
}

TEST(AnalyticResidual, MagnitudeOrdering) {
  // Noise and pulse terms of comparable size, both far below the illumination.
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = 2;
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 300);
  NoiseSpec n;
  n.illumination.components = {LinearNoise{0.01}};
  n.specular.components = {SinusoidNoise{0.3, 0.005}};
  const double noise = max_abs(analytic_noise_residual(s, pulse, n, 4, 4).data());
  const auto vd = jittered_diffuse(s, 4, 4);
  double pulse_term = 0.0;
  for (double v : vd)
    for (double vp : pulse.samples()) pulse_term = std::max(pulse_term, std::abs(1.0 * v * vp));
  const double ratio = noise / pulse_term;
  EXPECT_GE(ratio, 0.1);
  EXPECT_LE(ratio, 10.0);
  EXPECT_LT(noise / 1.0, 0.05);
  EXPECT_LT(pulse_term / 1.0, 0.05);
}

TEST(Render, DeterministicPerSeed) {
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = 42;
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 30);
  NoiseSpec n;
  n.illumination.components = {LinearNoise{0.1}};
  const FrameClip a = render_noisy(s, pulse, n, 5, 5);
  const FrameClip b = render_noisy(s, pulse, n, 5, 5);
  EXPECT_TRUE(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
  s.seed = 43;
  const FrameClip c = render_noisy(s, pulse, n, 5, 5);
  EXPECT_FALSE(std::equal(a.data().begin(), a.data().end(), c.data().begin()));
}

TEST(SceneSpec, Validation) {
  SceneSpec s = SceneSpec::defaults(3);
  s.illumination[1] = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = SceneSpec::defaults(3);
  s.diffuse.pop_back();
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = SceneSpec::defaults(2);
  EXPECT_THROW(s.validate(), std::invalid_argument);
}
