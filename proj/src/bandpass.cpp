#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pulse_tn/heart_rate.hpp"

namespace pulse_tn {
namespace {

using cplx = std::complex<double>;

struct SectionState {
  double z1 = 0.0;
  double z2 = 0.0;
};

// Transposed direct form II, one pass over `x` in place.
void run_cascade(const std::vector<Biquad>& sections, std::vector<SectionState> states,
                 std::vector<double>& x) {
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const Biquad& q = sections[s];
    SectionState st = states[s];
    for (double& v : x) {
      const double in = v;
      const double out = q.b0 * in + st.z1;
      st.z1 = q.b1 * in - q.a1 * out + st.z2;
      st.z2 = q.b2 * in - q.a2 * out;
      v = out;
    }
  }
}

// States that make each section settled for a constant input of 1 at the cascade input.
std::vector<SectionState> steady_state(const std::vector<Biquad>& sections) {
  std::vector<SectionState> zi(sections.size());
  double scale = 1.0;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const Biquad& q = sections[s];
    const double dc = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
    zi[s].z2 = scale * (q.b2 - q.a2 * dc);
    zi[s].z1 = scale * (q.b1 - q.a1 * dc) + zi[s].z2;
    scale *= dc;
  }
  return zi;
}

std::vector<SectionState> scaled(std::vector<SectionState> zi, double x0) {
  for (auto& s : zi) {
    s.z1 *= x0;
    s.z2 *= x0;
  }
  return zi;
}

Biquad section_from_poles(cplx p, cplx q) {
  Biquad b;
  b.b0 = 1.0;
  b.b1 = 0.0;
  b.b2 = -1.0;  // one zero at z = 1 and one at z = -1
  b.a1 = -(p + q).real();
  b.a2 = (p * q).real();
  return b;
}

}  // namespace

void BandpassSpec::validate(double fps) const {
  if (!(low_hz > 0.0) || !(low_hz < high_hz)) {
    throw std::invalid_argument("bandpass: need 0 < low_hz < high_hz");
  }
  if (!(high_hz < fps / 2.0)) {
    throw std::invalid_argument("bandpass: fps " + std::to_string(fps) +
                                " too low for a passband reaching " + std::to_string(high_hz) + " Hz");
  }
  if (order < 2 || order % 2 != 0) throw std::invalid_argument("bandpass: order must be even and >= 2");
}

cplx Biquad::response(double omega) const {
  const cplx z1 = std::polar(1.0, -omega);
  const cplx z2 = z1 * z1;
  return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
}

std::vector<Biquad> design_butterworth_bandpass(const BandpassSpec& spec, double fps) {
  spec.validate(fps);
  const int proto_order = spec.order / 2;
  const double k = 2.0 * fps;
  const double w_low = k * std::tan(std::numbers::pi * spec.low_hz / fps);
  const double w_high = k * std::tan(std::numbers::pi * spec.high_hz / fps);
  const double w_center_sq = w_low * w_high;
  const double bandwidth = w_high - w_low;

  // Lowpass prototype poles -> analog bandpass poles -> z-plane.
  std::vector<cplx> upper;
  std::vector<double> real_poles;
  for (int m = 0; m < proto_order; ++m) {
    const double angle = std::numbers::pi * (2.0 * m + proto_order + 1) / (2.0 * proto_order);
    const cplx proto = std::polar(1.0, angle);
    const cplx scaled_pole = proto * bandwidth;
    const cplx root = std::sqrt(scaled_pole * scaled_pole - 4.0 * w_center_sq);
    for (const cplx s : {(scaled_pole + root) / 2.0, (scaled_pole - root) / 2.0}) {
      const cplx z = (k + s) / (k - s);
      if (std::abs(z.imag()) <= 1e-12 * std::abs(z)) {
        real_poles.push_back(z.real());
      } else if (z.imag() > 0.0) {
        upper.push_back(z);
      }
    }
  }
  std::sort(real_poles.begin(), real_poles.end());

  std::vector<Biquad> sections;
  for (const cplx p : upper) sections.push_back(section_from_poles(p, std::conj(p)));
  for (std::size_t r = 0; r + 1 < real_poles.size(); r += 2) {
    sections.push_back(section_from_poles(real_poles[r], real_poles[r + 1]));
  }
  if (sections.size() != static_cast<std::size_t>(proto_order)) {
    throw std::logic_error("design_butterworth_bandpass: unpaired pole");
  }

  const double omega_center = 2.0 * std::atan(std::sqrt(w_center_sq) / k);
  for (Biquad& q : sections) {
    const double g = 1.0 / std::abs(q.response(omega_center));
    q.b0 *= g;
    q.b1 *= g;
    q.b2 *= g;
  }
  return sections;
}

double cascade_magnitude(const std::vector<Biquad>& sections, double freq_hz, double fps) {
  const double omega = 2.0 * std::numbers::pi * freq_hz / fps;
  double mag = 1.0;
  for (const Biquad& q : sections) mag *= std::abs(q.response(omega));
  return mag;
}

Waveform bandpass(const Waveform& w, const BandpassSpec& spec) {
  const auto sections = design_butterworth_bandpass(spec, w.fps());
  const std::size_t n = w.size();
  if (n < static_cast<std::size_t>(3 * spec.order)) {
    throw std::invalid_argument("bandpass: needs at least " + std::to_string(3 * spec.order) +
                                " samples, got " + std::to_string(n));
  }
  const auto zi = steady_state(sections);
  const auto x = w.samples();

  if (!spec.zero_phase) {
    std::vector<double> y(x.begin(), x.end());
    run_cascade(sections, scaled(zi, y.front()), y);
    return Waveform(std::move(y), w.fps());
  }

  const std::size_t pad = std::min<std::size_t>(3 * (2 * sections.size() + 1), n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);

  run_cascade(sections, scaled(zi, ext.front()), ext);
  std::reverse(ext.begin(), ext.end());
  run_cascade(sections, scaled(zi, ext.front()), ext);
  std::reverse(ext.begin(), ext.end());

  std::vector<double> y(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                        ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
  return Waveform(std::move(y), w.fps());
}

}  // namespace pulse_tn
