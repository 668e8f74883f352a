#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pulse_tn/heart_rate.hpp"

namespace pulse_tn {
namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    if (in_ == nullptr || out_ == nullptr) {
      release();
      throw std::bad_alloc();
    }
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
    if (plan_ == nullptr) {
      release();
      throw std::runtime_error("welch_psd: FFT planning failed for n = " + std::to_string(n));
    }
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    release();
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }
  void execute() { fftw_execute(plan_); }
  double power(std::size_t k) const { return out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1]; }

 private:
  void release() {
    if (plan_ != nullptr) fftw_destroy_plan(plan_);
    if (in_ != nullptr) fftw_free(in_);
    if (out_ != nullptr) fftw_free(out_);
    plan_ = nullptr;
    in_ = nullptr;
    out_ = nullptr;
  }

  std::size_t n_;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

// Periodic Hann.
std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

}  // namespace

void WelchConfig::validate() const {
  if (window_len < 2) throw std::invalid_argument("welch_psd: window_len must be >= 2");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("welch_psd: overlap must lie in [0, 1)");
  if (nfft < window_len) throw std::invalid_argument("welch_psd: nfft must be >= window_len");
}

double PowerSpectrum::total_power() const {
  double sum = 0.0;
  for (double p : power) sum += p;
  return sum * bin_width();
}

PowerSpectrum welch_psd(const Waveform& w, const WelchConfig& cfg) {
  cfg.validate();
  const std::size_t n = w.size();
  const std::size_t len = cfg.window_len;
  if (n < len) {
    throw std::invalid_argument("welch_psd: signal of " + std::to_string(n) +
                                " samples is shorter than the window (" + std::to_string(len) + ")");
  }
  const auto step_back = static_cast<std::size_t>(std::floor(static_cast<double>(len) * cfg.overlap));
  const std::size_t hop = len - step_back;
  const std::size_t nfft = cfg.nfft;
  const std::size_t bins = nfft / 2 + 1;
  const double fps = w.fps();

  const auto window = hann(len);
  double window_power = 0.0;
  for (double v : window) window_power += v * v;

  RealFft fft(nfft);
  double* buf = fft.input();
  std::vector<double> acc(bins, 0.0);
  std::size_t segments = 0;
  const auto x = w.samples();
  for (std::size_t start = 0; start + len <= n; start += hop) {
    double mean = 0.0;
    for (std::size_t i = 0; i < len; ++i) mean += x[start + i];
    mean /= static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) buf[i] = (x[start + i] - mean) * window[i];
    for (std::size_t i = len; i < nfft; ++i) buf[i] = 0.0;
    fft.execute();
    for (std::size_t k = 0; k < bins; ++k) acc[k] += fft.power(k);
    ++segments;
  }

  PowerSpectrum out;
  out.freqs.resize(bins);
  out.power.resize(bins);
  const double norm = 1.0 / (fps * window_power * static_cast<double>(segments));
  for (std::size_t k = 0; k < bins; ++k) {
    out.freqs[k] = static_cast<double>(k) * fps / static_cast<double>(nfft);
    // One-sided: fold the negative frequencies, except DC and (even nfft) Nyquist.
    const bool unpaired = k == 0 || (nfft % 2 == 0 && k == nfft / 2);
    out.power[k] = acc[k] * norm * (unpaired ? 1.0 : 2.0);
  }
  return out;
}

}  // namespace pulse_tn
