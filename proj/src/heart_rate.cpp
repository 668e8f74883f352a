#include <algorithm>
#include <stdexcept>
#include <string>

#include "pulse_tn/heart_rate.hpp"

namespace pulse_tn {

HrEstimate hr_from_psd(const PowerSpectrum& spectrum, double low_hz, double high_hz,
                       double min_band_power) {
  if (spectrum.freqs.size() != spectrum.power.size()) {
    throw std::invalid_argument("hr_from_psd: freqs and power differ in length");
  }
  constexpr double slack = 1e-9;  // bin frequencies are computed, band edges are exact
  std::size_t best = spectrum.freqs.size();
  double band_power = 0.0;
  for (std::size_t k = 0; k < spectrum.freqs.size(); ++k) {
    const double f = spectrum.freqs[k];
    if (f < low_hz - slack || f > high_hz + slack) continue;
    band_power += spectrum.power[k];
    if (best == spectrum.freqs.size() || spectrum.power[k] > spectrum.power[best]) best = k;
  }
  if (best == spectrum.freqs.size()) {
    throw std::invalid_argument("hr_from_psd: no spectral bin inside [" + std::to_string(low_hz) +
                                ", " + std::to_string(high_hz) + "] Hz");
  }
  if (band_power * spectrum.bin_width() < min_band_power) {
    throw DegenerateSignalError("hr_from_psd: in-band power below " + std::to_string(min_band_power));
  }
  return HrEstimate{60.0 * spectrum.freqs[best]};
}

VideoHr video_hr(const Waveform& w, const HrPipelineConfig& cfg) {
  const auto segments = segment_clip(w, cfg.segment_s);
  if (segments.empty()) {
    throw std::invalid_argument("video_hr: waveform of " + std::to_string(w.duration_s()) +
                                " s holds no full " + std::to_string(cfg.segment_s) + " s segment");
  }
  VideoHr out;
  for (const Waveform& seg : segments) {
    const Waveform filtered = bandpass(seg, cfg.band);
    WelchConfig welch = cfg.welch;
    welch.window_len = std::min(welch.window_len, filtered.size());
    welch.nfft = std::max(welch.nfft, welch.window_len);
    PowerSpectrum psd = welch_psd(filtered, welch);
    try {
      out.segment_bpm.push_back(hr_from_psd(psd, cfg.band.low_hz, cfg.band.high_hz).bpm);
      out.spectra.push_back(std::move(psd));
    } catch (const DegenerateSignalError&) {
      ++out.dropped_segments;
    }
  }
  if (out.segment_bpm.empty()) {
    throw DegenerateSignalError("video_hr: every segment is degenerate (no in-band power)");
  }
  double sum = 0.0;
  for (double b : out.segment_bpm) sum += b;
  out.bpm = sum / static_cast<double>(out.segment_bpm.size());
  return out;
}

PowerSpectrum average_spectra(const std::vector<PowerSpectrum>& spectra) {
  if (spectra.empty()) throw std::invalid_argument("average_spectra: no spectra");
  PowerSpectrum out = spectra.front();
  for (std::size_t s = 1; s < spectra.size(); ++s) {
    if (spectra[s].freqs != out.freqs) throw std::invalid_argument("average_spectra: frequency grids differ");
    for (std::size_t k = 0; k < out.power.size(); ++k) out.power[k] += spectra[s].power[k];
  }
  for (double& p : out.power) p /= static_cast<double>(spectra.size());
  return out;
}

}  // namespace pulse_tn
