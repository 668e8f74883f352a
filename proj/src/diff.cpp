#include "pulse_tn/diff.hpp"

#include <vector>

namespace pulse_tn {
namespace {

template <typename Op>
DiffClip adjacent_frames(const FrameClip& clip, Op op) {
  const ClipShape& s = clip.shape();
  ClipShape out_shape = s;
  out_shape.frames = s.frames - 1;
  const std::size_t stride = s.frame_size();
  const auto in = clip.data();
  std::vector<double> out(out_shape.size());
  for (std::size_t t = 0; t + 1 < s.frames; ++t) {
    const std::size_t base = t * stride;
    for (std::size_t k = 0; k < stride; ++k) out[base + k] = op(in[base + stride + k], in[base + k]);
  }
  return DiffClip(out_shape, clip.fps(), std::move(out));
}

}  // namespace

DiffClip frame_diff(const FrameClip& clip) {
  return adjacent_frames(clip, [](double next, double cur) { return next - cur; });
}

DiffClip diff_normalized(const FrameClip& clip, double guard) {
  return adjacent_frames(clip, [guard](double next, double cur) {
    return (next - cur) / (next + cur + guard);
  });
}

DiffClip diff_noise_residual(const SceneSpec& scene, const Waveform& pulse, const NoiseSpec& noise,
                             std::size_t height, std::size_t width) {
  return subtract(frame_diff(render_noisy(scene, pulse, noise, height, width)),
                  frame_diff(render_ideal(scene, pulse, height, width)));
}

}  // namespace pulse_tn
