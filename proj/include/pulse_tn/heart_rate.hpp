#pragma once

// Heart-rate post-processing: Butterworth bandpass, Welch power spectrum,
// in-band peak picking and per-video averaging over fixed-length segments.

#include <complex>
#include <cstddef>
#include <vector>

#include "pulse_tn/core.hpp"

namespace pulse_tn {

struct BandpassSpec {
  double low_hz = 0.5;
  double high_hz = 3.0;
  int order = 4;  ///< total filter order; even, realized as order/2 second-order sections
  bool zero_phase = true;

  void validate(double fps) const;
};

/// Second-order section, a0 normalized to 1:
///   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  std::complex<double> response(double omega) const;
};

/// Digital Butterworth bandpass via bilinear transform with frequency prewarping.
/// Unit gain at the (warped) geometric band center.
std::vector<Biquad> design_butterworth_bandpass(const BandpassSpec& spec, double fps);

/// |H(e^{j 2 pi f / fps})| of a cascade.
double cascade_magnitude(const std::vector<Biquad>& sections, double freq_hz, double fps);

/// Filters `w`. With zero_phase the cascade runs forward then backward over an
/// odd-reflected extension, starting from steady-state section states.
Waveform bandpass(const Waveform& w, const BandpassSpec& spec = {});

struct WelchConfig {
  std::size_t window_len = 256;
  double overlap = 0.5;
  std::size_t nfft = 3300;

  void validate() const;
};

/// One-sided power spectral density. sum(power) * bin_width equals the
/// (window-compensated) mean square of the input.
struct PowerSpectrum {
  std::vector<double> freqs;
  std::vector<double> power;

  double bin_width() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
  double total_power() const;
};

PowerSpectrum welch_psd(const Waveform& w, const WelchConfig& cfg = {});

inline constexpr double kMinBandPower = 1e-12;

/// 60 x the frequency of maximum power inside [low_hz, high_hz]; ties resolve
/// to the lower frequency. Throws std::invalid_argument when no bin falls in the
/// band and DegenerateSignalError when the in-band power is below min_band_power.
HrEstimate hr_from_psd(const PowerSpectrum& spectrum, double low_hz = 0.5, double high_hz = 3.0,
                       double min_band_power = kMinBandPower);

struct HrPipelineConfig {
  double segment_s = 15.0;
  BandpassSpec band;
  WelchConfig welch;
};

struct VideoHr {
  double bpm = 0.0;
  std::vector<double> segment_bpm;       ///< accepted segments, in order
  std::size_t dropped_segments = 0;      ///< degenerate segments left out of the mean
  std::vector<PowerSpectrum> spectra;    ///< PSD of each accepted segment
};

/// Runs bandpass -> Welch -> peak on every full segment and averages the
/// per-segment rates. Segments shorter than the Welch window are analysed as a
/// single window of their own length. Degenerate segments are dropped; if none
/// survive, DegenerateSignalError is thrown.
VideoHr video_hr(const Waveform& w, const HrPipelineConfig& cfg = {});

/// Mean of spectra sharing one frequency grid.
PowerSpectrum average_spectra(const std::vector<PowerSpectrum>& spectra);

}  // namespace pulse_tn
