#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's numerical kernels.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracle {

/// OLS line through (t, y), t = 0..n-1, from the raw (uncentered) normal
/// equations solved by Cramer's rule in extended precision.
struct Line {
  double slope;
  double intercept;
};

inline Line normal_equations(std::span<const double> y) {
  long double st = 0, stt = 0, sy = 0, sty = 0;
  const long double n = static_cast<long double>(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    const long double tt = static_cast<long double>(t);
    st += tt;
    stt += tt * tt;
    sy += y[t];
    sty += tt * y[t];
  }
  const long double det = n * stt - st * st;
  return Line{static_cast<double>((n * sty - st * sy) / det),
              static_cast<double>((stt * sy - st * sty) / det)};
}

/// One-sided Welch PSD by direct DFT summation (periodic Hann, mean removed,
/// density scaling). O(segments * bins * window).
inline std::vector<double> welch_direct(std::span<const double> x, double fps, std::size_t len,
                                        double overlap, std::size_t nfft) {
  const std::size_t hop = len - static_cast<std::size_t>(std::floor(len * overlap));
  std::vector<long double> w(len);
  long double wp = 0;
  for (std::size_t i = 0; i < len; ++i) {
    w[i] = 0.5L - 0.5L * std::cos(2.0L * std::numbers::pi_v<long double> * i / len);
    wp += w[i] * w[i];
  }
  const std::size_t bins = nfft / 2 + 1;
  std::vector<long double> acc(bins, 0);
  std::size_t segs = 0;
  for (std::size_t s = 0; s + len <= x.size(); s += hop) {
    long double mean = 0;
    for (std::size_t i = 0; i < len; ++i) mean += x[s + i];
    mean /= len;
    for (std::size_t k = 0; k < bins; ++k) {
      long double re = 0, im = 0;
      for (std::size_t i = 0; i < len; ++i) {
        const long double v = (x[s + i] - mean) * w[i];
        const long double ang = -2.0L * std::numbers::pi_v<long double> * k * i / nfft;
        re += v * std::cos(ang);
        im += v * std::sin(ang);
      }
      acc[k] += re * re + im * im;
    }
    ++segs;
  }
  std::vector<double> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const bool unpaired = k == 0 || (nfft % 2 == 0 && k == nfft / 2);
    out[k] = static_cast<double>(acc[k] / (fps * wp * segs) * (unpaired ? 1 : 2));
  }
  return out;
}

/// |H| of an analog Butterworth bandpass of total order `order` evaluated at the
/// bilinear-warped frequency of `f` (the digital design's exact magnitude).
inline double butterworth_bandpass_magnitude(double f, double low, double high, int order, double fps) {
  auto warp = [fps](double hz) { return 2.0 * fps * std::tan(std::numbers::pi * hz / fps); };
  const double w = warp(f), w1 = warp(low), w2 = warp(high);
  const double x = (w * w - w1 * w2) / (w * (w2 - w1));
  return 1.0 / std::sqrt(1.0 + std::pow(x * x, order / 2));
}

/// Magnitude of the DFT of `x` at bin k (length-n transform).
inline double dft_magnitude(std::span<const double> x, std::size_t k) {
  std::complex<double> acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * k * i / x.size());
  }
  return std::abs(acc);
}

inline std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace oracle
