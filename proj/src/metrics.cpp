#include "pulse_tn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pulse_tn {

std::optional<double> pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson_correlation: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MetricsReport compute_metrics(std::vector<HrPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("compute_metrics: no prediction/label pairs");
  MetricsReport report;
  std::vector<double> pred, label;
  pred.reserve(pairs.size());
  label.reserve(pairs.size());
  double abs_sum = 0.0, sq_sum = 0.0;
  for (const HrPair& p : pairs) {
    const double err = p.predicted_bpm - p.label_bpm;
    abs_sum += std::abs(err);
    sq_sum += err * err;
    pred.push_back(p.predicted_bpm);
    label.push_back(p.label_bpm);
  }
  const double n = static_cast<double>(pairs.size());
  report.mae = abs_sum / n;
  report.rmse = std::sqrt(sq_sum / n);
  report.pearson = pearson_correlation(pred, label);
  report.pairs = std::move(pairs);
  return report;
}

}  // namespace pulse_tn
