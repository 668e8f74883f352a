#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pulse_tn/diff.hpp"
#include "pulse_tn/suppression.hpp"
#include "pulse_tn/tn.hpp"

using namespace pulse_tn;

namespace {

SceneSpec seeded_scene(std::uint64_t seed) {
  SceneSpec s = SceneSpec::defaults(3);
  s.seed = seed;
  return s;
}

}  // namespace

TEST(FrameDiff, ConstantClipIsZero) {
  const FrameClip c({5, 2, 2, 3}, 30.0, std::vector<double>(60, 0.4));
  const DiffClip d = frame_diff(c);
  EXPECT_EQ(d.frames(), 4u);
  for (double v : d.data()) EXPECT_EQ(v, 0.0);
}

TEST(FrameDiff, AffineClipGivesSlope) {
  const ClipShape s{6, 1, 2, 1};
  std::vector<double> v(s.size());
  for (std::size_t t = 0; t < 6; ++t) {
    v[t * 2] = 0.1 + 0.02 * t;
    v[t * 2 + 1] = 0.5 - 0.01 * t;
  }
  const DiffClip d = frame_diff(FrameClip(s, 30.0, v));
  for (std::size_t t = 0; t < 5; ++t) {
    EXPECT_NEAR(d.at(t, 0, 0, 0), 0.02, 1e-15);
    EXPECT_NEAR(d.at(t, 0, 1, 0), -0.01, 1e-15);
  }
}

TEST(FrameDiff, IdealClipFollowsPulseDerivative) {
  const SceneSpec s = seeded_scene(6);
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 60);
  const DiffClip d = frame_diff(render_ideal(s, pulse, 3, 3));
  const auto vd = jittered_diffuse(s, 3, 3);
  const auto vp = pulse.samples();
  for (std::size_t t = 0; t + 1 < 60; ++t)
    for (std::size_t k = 0; k < vd.size(); ++k)
      EXPECT_NEAR(d.data()[t * vd.size() + k], 1.0 * vd[k] * (vp[t + 1] - vp[t]), 1e-15);
}

TEST(FrameDiff, LinearAndInvertsCumulativeSum) {
  std::mt19937_64 rng(2);
  const ClipShape s{12, 2, 3, 3};
  const auto x = oracle::uniform(rng, s.size(), -1, 1);
  const auto y = oracle::uniform(rng, s.size(), -1, 1);
  std::vector<double> z(s.size());
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = 2.5 * x[k] - 0.5 * y[k];
  const DiffClip dx = frame_diff(FrameClip(s, 30.0, x));
  const DiffClip dy = frame_diff(FrameClip(s, 30.0, y));
  const DiffClip dz = frame_diff(FrameClip(s, 30.0, z));
  for (std::size_t k = 0; k < dz.data().size(); ++k)
    EXPECT_NEAR(dz.data()[k], 2.5 * dx.data()[k] - 0.5 * dy.data()[k], 1e-12);

  // Integers keep the cumulative sum exact.
  std::vector<double> summand(s.size()), cumsum(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) summand[k] = static_cast<double>(static_cast<int>(rng() % 200) - 100);
  const std::size_t fs = s.frame_size();
  for (std::size_t k = 0; k < fs; ++k) cumsum[k] = summand[k];
  for (std::size_t t = 1; t < s.frames; ++t)
    for (std::size_t k = 0; k < fs; ++k) cumsum[t * fs + k] = cumsum[(t - 1) * fs + k] + summand[t * fs + k];
  const DiffClip back = frame_diff(FrameClip(s, 30.0, cumsum));
  for (std::size_t t = 0; t + 1 < s.frames; ++t)
    for (std::size_t k = 0; k < fs; ++k) EXPECT_EQ(back.data()[t * fs + k], summand[(t + 1) * fs + k]);
}

TEST(DiffNormalized, ConstantClipIsZero) {
  const FrameClip c({4, 1, 1, 1}, 30.0, {0.3, 0.3, 0.3, 0.3});
  const DiffClip d = diff_normalized(c);
  for (double v : d.data()) EXPECT_EQ(v, 0.0);
}

TEST(DiffNormalized, HandValue) {
  const FrameClip c({2, 1, 1, 1}, 30.0, {0.4, 0.6});
  EXPECT_NEAR(diff_normalized(c).data()[0], 0.2, 1e-8);
  EXPECT_NEAR(diff_normalized(c, 0.0).data()[0], 0.2, 1e-15);
}

TEST(DiffNormalized, ZeroFramesGuarded) {
  const FrameClip c({3, 1, 1, 1}, 30.0, {0.0, 0.0, 0.0});
  const DiffClip d = diff_normalized(c);
  for (double v : d.data()) EXPECT_EQ(v, 0.0);
}

TEST(DiffNormalized, GainCancels) {
  std::mt19937_64 rng(3);
  const ClipShape s{20, 2, 2, 3};
  const auto x = oracle::uniform(rng, s.size(), 0.2, 0.9);
  std::vector<double> y(x);
  for (double& v : y) v *= 1.7;
  const DiffClip a = diff_normalized(FrameClip(s, 30.0, x));
  const DiffClip b = diff_normalized(FrameClip(s, 30.0, y));
  for (std::size_t k = 0; k < a.data().size(); ++k) EXPECT_NEAR(a.data()[k], b.data()[k], 1e-6);
}

TEST(DiffNoiseResidual, ZeroWithoutNoise) {
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 40);
  const DiffClip r = diff_noise_residual(seeded_scene(1), pulse, NoiseSpec{}, 2, 2);
  for (double v : r.data()) EXPECT_EQ(v, 0.0);
}

TEST(DiffNoiseResidual, LinearDriftGivesConstantRate) {
  // dI(t) = r t, v_p = 0: residual = r (v_s + v_d) every frame.
  SceneSpec s = seeded_scene(4);
  const std::size_t frames = 101;
  const Waveform flat(std::vector<double>(frames, 0.0), 30.0);
  NoiseSpec n;
  n.illumination.components = {LinearNoise{0.1}};
  const double rate = 0.1 / (frames - 1);
  const DiffClip r = diff_noise_residual(s, flat, n, 2, 2);
  const auto vd = jittered_diffuse(s, 2, 2);
  for (std::size_t t = 0; t + 1 < frames; ++t)
    for (std::size_t k = 0; k < vd.size(); ++k)
      EXPECT_NEAR(r.data()[t * vd.size() + k], rate * (0.2 + vd[k]), 1e-14);
}

TEST(DiffNoiseResidual, StepGivesSingleSpike) {
  SceneSpec s = seeded_scene(4);
  const Waveform flat(std::vector<double>(60, 0.0), 30.0);
  NoiseSpec n;
  n.illumination.components = {StepNoise{1.0, 0.05}};  // onset at frame 30
  const DiffClip r = diff_noise_residual(s, flat, n, 2, 2);
  const std::size_t fs = r.shape().frame_size();
  for (std::size_t t = 0; t + 1 < 60; ++t) {
    for (std::size_t k = 0; k < fs; ++k) {
      if (t == 29) {
        EXPECT_GT(std::abs(r.data()[t * fs + k]), 0.01);
      } else {
        EXPECT_NEAR(r.data()[t * fs + k], 0.0, 1e-15);
      }
    }
  }
}

TEST(DiffNoiseResidual, PulseTermOrderOfMagnitude) {
  // Slow illumination change modulating the pulse derivative: the residual is
  // dominated by the drift derivative plus dI * v_d * dv_p.
  SceneSpec s = seeded_scene(8);
  const Waveform pulse = synth_pulse(PulseSpec{}, 30.0, 300);
  NoiseSpec n;
  n.illumination.components = {StepNoise{0.0, 0.05}};  // constant dI from the first frame
  const DiffClip r = diff_noise_residual(s, pulse, n, 2, 2);
  const auto vd = jittered_diffuse(s, 2, 2);
  const auto vp = pulse.samples();
  double num = 0, den = 0;
  for (std::size_t t = 0; t + 1 < 300; ++t)
    for (std::size_t k = 0; k < vd.size(); ++k) {
      const double predicted = 0.05 * vd[k] * (vp[t + 1] - vp[t]);
      num += r.data()[t * vd.size() + k] * r.data()[t * vd.size() + k];
      den += predicted * predicted;
    }
  EXPECT_NEAR(std::sqrt(num / den), 1.0, 1e-9);
}

TEST(Suppression, TnBeatsFrameDiffUnderLinearDrift) {
  // Regime: one 15 s processing clip at 30 fps, pulse amplitude 0.005,
  // linear illumination drift of 5-20% end to end. TN cancels the drift itself
  // and only sees its modulation of the pulse amplitude; frame differences see
  // the full per-frame drift rate.
  PulseSpec p;
  p.amplitude = 0.005;
  const Waveform pulse = synth_pulse(p, 30.0, 450);
  for (double drift : {0.05, 0.1, 0.2}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      NoiseSpec n;
      n.illumination.components = {LinearNoise{drift}};
      const SceneSpec s = seeded_scene(seed);
      const auto tn_r = feature_residual(FeatureKind::tn, s, pulse, n, 4, 4);
      const auto diff_r = feature_residual(FeatureKind::frame_diff, s, pulse, n, 4, 4);
      EXPECT_LT(tn_r.ratio(), diff_r.ratio());
      EXPECT_LE(tn_r.ratio(), 0.1 * diff_r.ratio()) << "drift " << drift << " seed " << seed;
    }
  }
}
