#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pulse_tn {

/// Raised when a computation is well-formed but the signal carries no usable
/// content (e.g. no in-band spectral power).
class DegenerateSignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimensions of a T x H x W x C tensor stored row-major, frame-major.
struct ClipShape {
  std::size_t frames = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;

  std::size_t frame_size() const { return height * width * channels; }
  std::size_t size() const { return frames * frame_size(); }
  std::size_t index(std::size_t t, std::size_t i, std::size_t j, std::size_t c) const {
    return ((t * height + i) * width + j) * channels + c;
  }
  bool operator==(const ClipShape&) const = default;
};

/// A video tensor with its frame rate. Values are dimensionless intensities;
/// raw clips live in [0,1], feature clips are unbounded.
///
/// Invariants: T >= 2, H >= 1, W >= 1, C in {1, 3}, every value finite, fps > 0.
class FrameClip {
 public:
  FrameClip(ClipShape shape, double fps, std::vector<double> data);

  const ClipShape& shape() const { return shape_; }
  std::size_t frames() const { return shape_.frames; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t channels() const { return shape_.channels; }
  double fps() const { return fps_; }
  std::span<const double> data() const { return data_; }
  double at(std::size_t t, std::size_t i, std::size_t j, std::size_t c) const {
    return data_[shape_.index(t, i, j, c)];
  }

 private:
  ClipShape shape_;
  double fps_;
  std::vector<double> data_;
};

/// Frame-to-frame feature tensor of shape (T-1) x H x W x C.
/// Same invariants as FrameClip except that a single frame is allowed.
class DiffClip {
 public:
  DiffClip(ClipShape shape, double fps, std::vector<double> data);

  const ClipShape& shape() const { return shape_; }
  std::size_t frames() const { return shape_.frames; }
  std::size_t channels() const { return shape_.channels; }
  double fps() const { return fps_; }
  std::span<const double> data() const { return data_; }
  double at(std::size_t t, std::size_t i, std::size_t j, std::size_t c) const {
    return data_[shape_.index(t, i, j, c)];
  }

 private:
  ClipShape shape_;
  double fps_;
  std::vector<double> data_;
};

/// One (i, j, c) pixel series of a clip.
class PixelTrace {
 public:
  PixelTrace(std::vector<double> values, double fps);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double fps() const { return fps_; }

 private:
  std::vector<double> values_;
  double fps_;
};

/// A pooled pulse signal (or any 1-D physiological series).
class Waveform {
 public:
  Waveform(std::vector<double> samples, double fps);

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double fps() const { return fps_; }
  double duration_s() const { return static_cast<double>(samples_.size()) / fps_; }

 private:
  std::vector<double> samples_;
  double fps_;
};

struct HrEstimate {
  double bpm = 0.0;
};

/// Splits `w` into floor(T / (seconds * fps)) consecutive, non-overlapping
/// segments. The trailing remainder is dropped. Throws std::invalid_argument
/// when one segment would hold fewer than 2 samples.
std::vector<Waveform> segment_clip(const Waveform& w, double seconds);

/// Spatial mean of one channel, frame by frame.
Waveform pool_spatial(const FrameClip& clip, std::size_t channel);
Waveform pool_spatial(const DiffClip& clip, std::size_t channel);

/// Extracts the (i, j, c) series.
PixelTrace pixel_trace(const FrameClip& clip, std::size_t i, std::size_t j, std::size_t c);

/// Element-wise a - b; shapes and rates must agree.
FrameClip subtract(const FrameClip& a, const FrameClip& b);
DiffClip subtract(const DiffClip& a, const DiffClip& b);

/// Root mean square over every element.
double rms(std::span<const double> values);

}  // namespace pulse_tn
