#include "pulse_tn/core.hpp"

#include <cmath>

namespace pulse_tn {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
}

void validate_tensor(const ClipShape& shape, double fps, std::size_t data_size,
                     std::size_t min_frames, const char* what) {
  const std::string name(what);
  if (shape.frames < min_frames) {
    throw std::invalid_argument(name + ": needs at least " + std::to_string(min_frames) +
                                " frames, got " + std::to_string(shape.frames));
  }
  if (shape.height < 1 || shape.width < 1) throw std::invalid_argument(name + ": empty frame");
  if (shape.channels != 1 && shape.channels != 3) {
    throw std::invalid_argument(name + ": channels must be 1 or 3, got " +
                                std::to_string(shape.channels));
  }
  if (!(fps > 0.0) || !std::isfinite(fps)) throw std::invalid_argument(name + ": fps must be > 0");
  if (data_size != shape.size()) {
    throw std::invalid_argument(name + ": data size " + std::to_string(data_size) +
                                " does not match shape " + std::to_string(shape.size()));
  }
}

void validate_series(std::span<const double> values, double fps, const char* what) {
  if (values.size() < 2) throw std::invalid_argument(std::string(what) + ": needs at least 2 samples");
  if (!(fps > 0.0) || !std::isfinite(fps)) throw std::invalid_argument(std::string(what) + ": fps must be > 0");
  require_finite(values, what);
}

template <typename Clip>
Waveform pool_channel(const Clip& clip, std::size_t channel) {
  const ClipShape& s = clip.shape();
  if (channel >= s.channels) {
    throw std::invalid_argument("pool_spatial: channel " + std::to_string(channel) +
                                " out of range for " + std::to_string(s.channels) + " channels");
  }
  const double pixels = static_cast<double>(s.height * s.width);
  const auto data = clip.data();
  std::vector<double> out(s.frames);
  for (std::size_t t = 0; t < s.frames; ++t) {
    double sum = 0.0;
    const std::size_t base = t * s.frame_size() + channel;
    for (std::size_t p = 0; p < s.height * s.width; ++p) sum += data[base + p * s.channels];
    out[t] = sum / pixels;
  }
  return Waveform(std::move(out), clip.fps());
}

std::vector<double> subtract_data(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

template <typename Clip>
void require_compatible(const Clip& a, const Clip& b) {
  if (!(a.shape() == b.shape()) || a.fps() != b.fps()) {
    throw std::invalid_argument("subtract: clips differ in shape or frame rate");
  }
}

}  // namespace

FrameClip::FrameClip(ClipShape shape, double fps, std::vector<double> data)
    : shape_(shape), fps_(fps), data_(std::move(data)) {
  validate_tensor(shape_, fps_, data_.size(), 2, "FrameClip");
  require_finite(data_, "FrameClip");
}

DiffClip::DiffClip(ClipShape shape, double fps, std::vector<double> data)
    : shape_(shape), fps_(fps), data_(std::move(data)) {
  validate_tensor(shape_, fps_, data_.size(), 1, "DiffClip");
  require_finite(data_, "DiffClip");
}

PixelTrace::PixelTrace(std::vector<double> values, double fps)
    : values_(std::move(values)), fps_(fps) {
  validate_series(values_, fps_, "PixelTrace");
}

Waveform::Waveform(std::vector<double> samples, double fps)
    : samples_(std::move(samples)), fps_(fps) {
  validate_series(samples_, fps_, "Waveform");
}

std::vector<Waveform> segment_clip(const Waveform& w, double seconds) {
  const double exact = seconds * w.fps();
  if (!std::isfinite(exact) || exact < 2.0) {
    throw std::invalid_argument("segment_clip: segment must span at least 2 samples");
  }
  // Tolerate representation error in seconds * fps (e.g. 15 * 29.97).
  const auto seg_len = static_cast<std::size_t>(std::floor(exact + 1e-9));
  const std::size_t count = w.size() / seg_len;
  std::vector<Waveform> out;
  out.reserve(count);
  const auto samples = w.samples();
  for (std::size_t k = 0; k < count; ++k) {
    auto first = samples.begin() + static_cast<std::ptrdiff_t>(k * seg_len);
    out.emplace_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(seg_len)), w.fps());
  }
  return out;
}

Waveform pool_spatial(const FrameClip& clip, std::size_t channel) { return pool_channel(clip, channel); }
Waveform pool_spatial(const DiffClip& clip, std::size_t channel) { return pool_channel(clip, channel); }

PixelTrace pixel_trace(const FrameClip& clip, std::size_t i, std::size_t j, std::size_t c) {
  const ClipShape& s = clip.shape();
  if (i >= s.height || j >= s.width || c >= s.channels) {
    throw std::invalid_argument("pixel_trace: index out of range");
  }
  std::vector<double> values(s.frames);
  for (std::size_t t = 0; t < s.frames; ++t) values[t] = clip.at(t, i, j, c);
  return PixelTrace(std::move(values), clip.fps());
}

FrameClip subtract(const FrameClip& a, const FrameClip& b) {
  require_compatible(a, b);
  return FrameClip(a.shape(), a.fps(), subtract_data(a.data(), b.data()));
}

DiffClip subtract(const DiffClip& a, const DiffClip& b) {
  require_compatible(a, b);
  return DiffClip(a.shape(), a.fps(), subtract_data(a.data(), b.data()));
}

double rms(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace pulse_tn
