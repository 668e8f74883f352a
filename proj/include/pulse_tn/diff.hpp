#pragma once

#include "pulse_tn/core.hpp"
#include "pulse_tn/srm.hpp"

namespace pulse_tn {

inline constexpr double kDiffGuard = 1e-8;

/// out[t] = clip[t+1] - clip[t].
DiffClip frame_diff(const FrameClip& clip);

/// out[t] = (clip[t+1] - clip[t]) / (clip[t+1] + clip[t] + guard).
DiffClip diff_normalized(const FrameClip& clip, double guard = kDiffGuard);

/// frame_diff(render_noisy) - frame_diff(render_ideal) for the same scene realization.
DiffClip diff_noise_residual(const SceneSpec& scene, const Waveform& pulse, const NoiseSpec& noise,
                             std::size_t height, std::size_t width);

}  // namespace pulse_tn
