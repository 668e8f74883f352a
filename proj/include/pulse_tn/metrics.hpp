#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pulse_tn {

struct HrPair {
  double predicted_bpm = 0.0;
  double label_bpm = 0.0;
  std::string video_id;
};

struct MetricsReport {
  std::vector<HrPair> pairs;
  double mae = 0.0;
  double rmse = 0.0;
  /// Empty when either vector has zero variance or fewer than two pairs exist.
  std::optional<double> pearson;

  bool pearson_defined() const { return pearson.has_value(); }
};

/// MAE, RMSE and Pearson correlation of predictions against labels.
/// Throws std::invalid_argument on an empty pair list.
MetricsReport compute_metrics(std::vector<HrPair> pairs);

/// Pearson correlation of two equally long series; empty on zero variance.
std::optional<double> pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pulse_tn
