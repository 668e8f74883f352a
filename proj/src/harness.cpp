#include "pulse_tn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "pulse_tn/diff.hpp"
#include "pulse_tn/labels.hpp"
#include "pulse_tn/noise_grammar.hpp"
#include "pulse_tn/suppression.hpp"
#include "pulse_tn/tn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pulse_tn {
namespace {

// Runs task(k) for k in [0, jobs) on a bounded pool. Tasks must not throw.
template <typename Task>
void parallel_for(std::size_t jobs, Task task) {
  const std::size_t workers = worker_count(jobs);
  if (workers <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < jobs; k = next++) task(k);
    });
  }
}

NoiseSpec parse_noise_or_usage(const std::string& text) {
  try {
    return parse_noise_spec(text);
  } catch (const NoiseSpecError& e) {
    throw UsageError(std::string("--noise: ") + e.what());
  }
}

std::string_view shape_name(PulseShape s) {
  return s == PulseShape::sinusoid ? "sinusoid" : "sinusoid_with_harmonic";
}

PulseShape parse_shape(const std::string& s) {
  if (s == "sinusoid") return PulseShape::sinusoid;
  if (s == "sinusoid_with_harmonic") return PulseShape::sinusoid_with_harmonic;
  throw UsageError("unknown pulse shape '" + s + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw UsageError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

FrameClip as_frame_clip(const DiffClip& d) {
  if (d.frames() < 2) throw UsageError("transform: differential output needs an input of at least 3 frames");
  return FrameClip(d.shape(), d.fps(), std::vector<double>(d.data().begin(), d.data().end()));
}

json config_json(ExtractorKind extractor, const ExtractorConfig& ecfg, const HrPipelineConfig& p,
                 const fs::path& manifest, bool skip_bad) {
  return json{
      {"manifest", manifest.generic_string()},
      {"extractor", std::string(to_string(extractor))},
      {"epsilon", ecfg.tn.epsilon},
      {"segment_s", p.segment_s},
      {"band", {{"low_hz", p.band.low_hz}, {"high_hz", p.band.high_hz}, {"order", p.band.order},
                {"zero_phase", p.band.zero_phase}}},
      {"welch", {{"window_len", p.welch.window_len}, {"overlap", p.welch.overlap}, {"nfft", p.welch.nfft}}},
      {"skip_bad", skip_bad},
  };
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<fs::path> manifest_clips(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError("manifest " + dir.string() + " is not a directory");
  std::vector<fs::path> clips;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rpgc") clips.push_back(entry.path());
  }
  std::sort(clips.begin(), clips.end(),
            [](const fs::path& a, const fs::path& b) { return a.stem().string() < b.stem().string(); });
  if (clips.empty()) throw UsageError("manifest " + dir.string() + " contains no .rpgc clips");
  return clips;
}

LabelMap manifest_labels(const fs::path& dir, const HrPipelineConfig& pipeline) {
  const fs::path path = dir / "labels.csv";
  if (!fs::exists(path)) throw UsageError("manifest " + dir.string() + " has no labels.csv");
  try {
    return read_labels(path, pipeline);
  } catch (const LabelFormatError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PULSE_TN_THREADS")) {
    std::size_t cap = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec == std::errc() && ptr == s.data() + s.size() && cap > 0) n = std::min(n, cap);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

// ---------------------------------------------------------------- simulate

Waveform SimulationSpec::pulse_waveform() const { return synth_pulse(pulse, fps, frames); }

FrameClip SimulationSpec::render() const {
  return render_noisy(scene, pulse_waveform(), parse_noise_or_usage(noise), height, width);
}

FrameClip SimulationSpec::render_ideal() const {
  return pulse_tn::render_ideal(scene, pulse_waveform(), height, width);
}

json to_json(const SimulationSpec& s) {
  return json{
      {"hr_bpm", s.pulse.hr_bpm},
      {"amplitude", s.pulse.amplitude},
      {"shape", std::string(shape_name(s.pulse.shape))},
      {"harmonic_ratio", s.pulse.harmonic_ratio},
      {"noise", s.noise},
      {"fps", s.fps},
      {"frames", s.frames},
      {"height", s.height},
      {"width", s.width},
      {"scene", {{"illumination", s.scene.illumination}, {"specular", s.scene.specular},
                 {"diffuse", s.scene.diffuse}, {"pixel_jitter", s.scene.pixel_jitter},
                 {"seed", s.scene.seed}}},
  };
}

SimulationSpec simulation_from_json(const json& j) {
  SimulationSpec s;
  s.pulse.hr_bpm = j.at("hr_bpm").get<double>();
  s.pulse.amplitude = j.at("amplitude").get<double>();
  s.pulse.shape = parse_shape(j.at("shape").get<std::string>());
  s.pulse.harmonic_ratio = j.at("harmonic_ratio").get<double>();
  s.noise = j.at("noise").get<std::string>();
  s.fps = j.at("fps").get<double>();
  s.frames = j.at("frames").get<std::size_t>();
  s.height = j.at("height").get<std::size_t>();
  s.width = j.at("width").get<std::size_t>();
  const json& scene = j.at("scene");
  s.scene.illumination = scene.at("illumination").get<std::vector<double>>();
  s.scene.specular = scene.at("specular").get<std::vector<double>>();
  s.scene.diffuse = scene.at("diffuse").get<std::vector<double>>();
  s.scene.pixel_jitter = scene.at("pixel_jitter").get<double>();
  s.scene.seed = scene.at("seed").get<std::uint64_t>();
  return s;
}

fs::path sidecar_path_for(const fs::path& clip_path) {
  fs::path p = clip_path;
  p.replace_extension(".sim.json");
  return p;
}

SimulateResult cmd_simulate(const SimulateOptions& opts) {
  if (opts.out.empty()) throw UsageError("simulate: --out is required");
  const FrameClip clip = [&] {
    try {
      return opts.spec.render();
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("simulate: ") + e.what());
    }
  }();

  SimulateResult r;
  r.video_id = opts.out.stem().string();
  r.clip_path = opts.out;
  r.sidecar_path = sidecar_path_for(opts.out);
  r.labels_path = opts.labels ? *opts.labels : opts.out.parent_path() / "labels.csv";

  write_clip(clip, r.clip_path, opts.dtype);
  write_text(r.sidecar_path, to_json(opts.spec).dump(2) + "\n");
  append_label(r.labels_path, r.video_id, opts.spec.pulse.hr_bpm);
  return r;
}

// --------------------------------------------------------------- transform

void cmd_transform(const TransformOptions& opts) {
  if (opts.method != "tn" && opts.method != "diff" && opts.method != "diffnorm") {
    throw UsageError("transform: unknown --method '" + opts.method + "' (expected tn, diff or diffnorm)");
  }
  const FrameClip clip = read_clip(opts.in);
  if (opts.method == "tn") {
    write_clip(tn(clip, opts.tn), opts.out);
  } else if (opts.method == "diff") {
    write_clip(as_frame_clip(frame_diff(clip)), opts.out);
  } else {
    write_clip(as_frame_clip(diff_normalized(clip)), opts.out);
  }
}

// ---------------------------------------------------------------- estimate

VideoHr cmd_estimate(const EstimateOptions& opts) {
  const FrameClip clip = read_clip(opts.in);
  const Waveform wave = run_extractor(opts.extractor, clip, opts.extractor_cfg);
  if (opts.dump_waveform) {
    std::string text = "t_s,value\n";
    const auto s = wave.samples();
    for (std::size_t k = 0; k < s.size(); ++k) {
      text += format_number(static_cast<double>(k) / wave.fps()) + "," + format_number(s[k]) + "\n";
    }
    write_text(*opts.dump_waveform, text);
  }
  VideoHr hr = video_hr(wave, opts.pipeline);
  if (opts.dump_psd) {
    const PowerSpectrum psd = average_spectra(hr.spectra);
    std::string text = "freq_hz,power\n";
    for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
      text += format_number(psd.freqs[k]) + "," + format_number(psd.power[k]) + "\n";
    }
    write_text(*opts.dump_psd, text);
  }
  return hr;
}

// ---------------------------------------------------------------- evaluate

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::missing_label: return "missing_label";
    case RowStatus::unreadable: return "unreadable";
    case RowStatus::degenerate: return "degenerate";
  }
  return "unknown";
}

std::size_t EvaluationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const VideoRow& r) {
    return r.status == RowStatus::unreadable || r.status == RowStatus::degenerate;
  }));
}

EvaluationReport evaluate_manifest(const EvaluateOptions& opts) {
  const auto clips = manifest_clips(opts.manifest);
  const LabelMap labels = manifest_labels(opts.manifest, opts.pipeline);

  EvaluationReport report;
  report.extractor = opts.extractor;
  report.rows.resize(clips.size());
  parallel_for(clips.size(), [&](std::size_t k) {
    VideoRow& row = report.rows[k];
    row.video_id = clips[k].stem().string();
    if (auto it = labels.find(row.video_id); it != labels.end()) row.hr_label = it->second;
    try {
      const FrameClip clip = read_clip(clips[k]);
      const VideoHr hr = video_hr(run_extractor(opts.extractor, clip, opts.extractor_cfg), opts.pipeline);
      row.hr_pred = hr.bpm;
      row.segments_used = hr.segment_bpm.size();
      row.segments_dropped = hr.dropped_segments;
      row.status = row.hr_label ? RowStatus::ok : RowStatus::missing_label;
    } catch (const DegenerateSignalError& e) {
      row.status = RowStatus::degenerate;
      row.error = e.what();
    } catch (const std::exception& e) {
      row.status = RowStatus::unreadable;
      row.error = e.what();
    }
  });

  std::vector<HrPair> pairs;
  for (const VideoRow& row : report.rows) {
    if (row.scored()) pairs.push_back(HrPair{*row.hr_pred, *row.hr_label, row.video_id});
  }
  if (!pairs.empty()) report.metrics = compute_metrics(std::move(pairs));
  return report;
}

json report_to_json(const EvaluationReport& report, const EvaluateOptions& opts) {
  json rows = json::array();
  for (const VideoRow& r : report.rows) {
    json row{
        {"id", r.video_id},
        {"status", std::string(to_string(r.status))},
        {"hr_pred", optional_number(r.hr_pred)},
        {"hr_label", optional_number(r.hr_label)},
        {"abs_err", r.scored() ? json(std::abs(*r.hr_pred - *r.hr_label)) : json(nullptr)},
        {"segments_used", r.segments_used},
        {"segments_dropped", r.segments_dropped},
    };
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  json doc{
      {"config", config_json(opts.extractor, opts.extractor_cfg, opts.pipeline, opts.manifest, opts.skip_bad)},
      {"per_video", std::move(rows)},
      {"n_videos", report.rows.size()},
      {"n_scored", report.metrics ? report.metrics->pairs.size() : 0},
      {"mae", nullptr},
      {"rmse", nullptr},
      {"pearson", nullptr},
      {"pearson_defined", false},
  };
  if (report.metrics) {
    doc["mae"] = report.metrics->mae;
    doc["rmse"] = report.metrics->rmse;
    doc["pearson"] = optional_number(report.metrics->pearson);
    doc["pearson_defined"] = report.metrics->pearson_defined();
  }
  return doc;
}

int cmd_evaluate(const EvaluateOptions& opts) {
  const EvaluationReport report = evaluate_manifest(opts);
  const std::string text = report_to_json(report, opts).dump(2) + "\n";
  if (opts.out) {
    write_text(*opts.out, text);
  } else {
    std::cout << text;
  }
  return report.failures() > 0 && !opts.skip_bad ? 1 : 0;
}

// ----------------------------------------------------------------- compare

namespace {

struct CompareRun {
  json doc;
  std::size_t failures = 0;
};

CompareRun run_compare(const CompareOptions& opts) {
  if (opts.extractors.empty()) throw UsageError("compare: no extractors given");
  const auto clips = manifest_clips(opts.manifest);

  std::vector<std::optional<SimulationSpec>> sims(clips.size());
  for (std::size_t k = 0; k < clips.size(); ++k) {
    const fs::path side = sidecar_path_for(clips[k]);
    if (!fs::exists(side)) continue;
    std::ifstream in(side);
    try {
      sims[k] = simulation_from_json(json::parse(in));
    } catch (const std::exception&) {
      sims[k].reset();
    }
  }

  CompareRun run;
  json per_extractor = json::array();
  for (ExtractorKind kind : opts.extractors) {
    EvaluateOptions eo;
    eo.manifest = opts.manifest;
    eo.extractor = kind;
    eo.extractor_cfg = opts.extractor_cfg;
    eo.pipeline = opts.pipeline;
    eo.skip_bad = opts.skip_bad;
    const EvaluationReport report = evaluate_manifest(eo);
    run.failures += report.failures();

    const FeatureKind feature = feature_of(kind);
    std::vector<std::optional<double>> ratios(clips.size());
    parallel_for(clips.size(), [&](std::size_t k) {
      if (!sims[k]) return;
      try {
        const SimulationSpec& s = *sims[k];
        const SuppressionResult r =
            feature_residual(feature, s.scene, s.pulse_waveform(), parse_noise_spec(s.noise), s.height,
                             s.width, opts.extractor_cfg.tn);
        if (r.pulse_rms > 0.0) ratios[k] = r.ratio();
      } catch (const std::exception&) {
        ratios[k].reset();
      }
    });
    double ratio_sum = 0.0;
    std::size_t simulated = 0;
    for (const auto& r : ratios) {
      if (r) {
        ratio_sum += *r;
        ++simulated;
      }
    }

    json entry{
        {"extractor", std::string(to_string(kind))},
        {"feature", std::string(to_string(feature))},
        {"n_videos", report.rows.size()},
        {"n_scored", report.metrics ? report.metrics->pairs.size() : 0},
        {"failures", report.failures()},
        {"mae", report.metrics ? json(report.metrics->mae) : json(nullptr)},
        {"rmse", report.metrics ? json(report.metrics->rmse) : json(nullptr)},
        {"pearson", report.metrics ? optional_number(report.metrics->pearson) : json(nullptr)},
        {"pearson_defined", report.metrics && report.metrics->pearson_defined()},
        {"n_simulated", simulated},
        {"noise_residual_ratio",
         simulated > 0 ? json(ratio_sum / static_cast<double>(simulated)) : json(nullptr)},
    };
    per_extractor.push_back(std::move(entry));
  }

  json config = config_json(opts.extractors.front(), opts.extractor_cfg, opts.pipeline, opts.manifest,
                            opts.skip_bad);
  config.erase("extractor");
  json names = json::array();
  for (ExtractorKind kind : opts.extractors) names.push_back(std::string(to_string(kind)));
  config["extractors"] = std::move(names);
  run.doc = json{{"config", std::move(config)}, {"extractors", std::move(per_extractor)}};
  return run;
}

}  // namespace

json compare_manifest(const CompareOptions& opts) { return run_compare(opts).doc; }

int cmd_compare(const CompareOptions& opts) {
  const CompareRun run = run_compare(opts);
  const std::string text = run.doc.dump(2) + "\n";
  if (opts.out) {
    write_text(*opts.out, text);
  } else {
    std::cout << text;
  }
  return run.failures > 0 && !opts.skip_bad ? 1 : 0;
}

}  // namespace pulse_tn
