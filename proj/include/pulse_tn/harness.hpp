#pragma once

// Command implementations behind the pulse_tn CLI. Each command is a plain
// function so tests can drive it in-process.
//
// A manifest is a directory of *.rpgc clips plus labels.csv; the video id of a
// clip is its file stem. cmd_simulate also writes a "<stem>.sim.json" sidecar
// describing the simulation so that comparisons can re-render the ideal clip.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pulse_tn/clip_io.hpp"
#include "pulse_tn/extractors.hpp"
#include "pulse_tn/heart_rate.hpp"
#include "pulse_tn/metrics.hpp"
#include "pulse_tn/srm.hpp"

namespace pulse_tn {

/// Bad flags or an unusable manifest; the CLI maps it to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Worker count for `jobs` independent tasks: hardware concurrency, capped by
/// PULSE_TN_THREADS when set, never more than `jobs`, never less than 1.
std::size_t worker_count(std::size_t jobs);

// ---------------------------------------------------------------- simulate

struct SimulationSpec {
  PulseSpec pulse;
  SceneSpec scene = SceneSpec::defaults(3);
  std::string noise = "none";
  double fps = 30.0;
  std::size_t frames = 600;
  std::size_t height = 8;
  std::size_t width = 8;

  Waveform pulse_waveform() const;
  FrameClip render() const;        ///< noisy clip (ideal when noise is "none")
  FrameClip render_ideal() const;
};

nlohmann::json to_json(const SimulationSpec& spec);
SimulationSpec simulation_from_json(const nlohmann::json& j);

struct SimulateOptions {
  SimulationSpec spec;
  std::filesystem::path out;
  std::optional<std::filesystem::path> labels;  ///< default: labels.csv next to `out`
  ClipDtype dtype = ClipDtype::f32;
};

struct SimulateResult {
  std::string video_id;
  std::filesystem::path clip_path;
  std::filesystem::path labels_path;
  std::filesystem::path sidecar_path;
};

SimulateResult cmd_simulate(const SimulateOptions& opts);

std::filesystem::path sidecar_path_for(const std::filesystem::path& clip_path);

// --------------------------------------------------------------- transform

struct TransformOptions {
  std::filesystem::path in;
  std::filesystem::path out;
  std::string method = "tn";  ///< tn | diff | diffnorm
  TnConfig tn;
};

void cmd_transform(const TransformOptions& opts);

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  std::filesystem::path in;
  ExtractorKind extractor = ExtractorKind::tn_pooled;
  ExtractorConfig extractor_cfg;
  HrPipelineConfig pipeline;
  std::optional<std::filesystem::path> dump_waveform;  ///< CSV t_s,value
  std::optional<std::filesystem::path> dump_psd;       ///< CSV freq_hz,power (segment average)
};

VideoHr cmd_estimate(const EstimateOptions& opts);

// ---------------------------------------------------------------- evaluate

enum class RowStatus { ok, missing_label, unreadable, degenerate };

std::string_view to_string(RowStatus s);

struct VideoRow {
  std::string video_id;
  RowStatus status = RowStatus::ok;
  std::optional<double> hr_pred;
  std::optional<double> hr_label;
  std::size_t segments_used = 0;
  std::size_t segments_dropped = 0;
  std::string error;

  bool scored() const { return hr_pred && hr_label; }
};

struct EvaluateOptions {
  std::filesystem::path manifest;
  ExtractorKind extractor = ExtractorKind::tn_pooled;
  ExtractorConfig extractor_cfg;
  HrPipelineConfig pipeline;
  bool skip_bad = false;
  std::optional<std::filesystem::path> out;
};

struct EvaluationReport {
  ExtractorKind extractor = ExtractorKind::tn_pooled;
  std::vector<VideoRow> rows;            ///< sorted by video_id
  std::optional<MetricsReport> metrics;  ///< over scored rows; empty when none are scored

  std::size_t failures() const;          ///< unreadable or degenerate rows
};

/// Runs one extractor over every clip of a manifest. Throws UsageError when
/// the directory holds no clips or lacks labels.csv.
EvaluationReport evaluate_manifest(const EvaluateOptions& opts);

nlohmann::json report_to_json(const EvaluationReport& report, const EvaluateOptions& opts);

/// Evaluates and writes the report (when `out` is set). Returns the process
/// exit code: 0, or 1 when a clip failed and skip_bad is off.
int cmd_evaluate(const EvaluateOptions& opts);

// ----------------------------------------------------------------- compare

struct CompareOptions {
  std::filesystem::path manifest;
  std::vector<ExtractorKind> extractors{std::begin(kAllExtractors), std::end(kAllExtractors)};
  ExtractorConfig extractor_cfg;
  HrPipelineConfig pipeline;
  bool skip_bad = false;
  std::optional<std::filesystem::path> out;
};

/// Side-by-side metrics per extractor. For clips with a simulation sidecar the
/// mean feature noise-residual ratio is added per extractor.
nlohmann::json compare_manifest(const CompareOptions& opts);

int cmd_compare(const CompareOptions& opts);

}  // namespace pulse_tn
