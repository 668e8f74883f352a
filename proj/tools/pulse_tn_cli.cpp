// pulse_tn: simulate, transform and evaluate rPPG clips.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pulse_tn/harness.hpp"
#include "pulse_tn/noise_grammar.hpp"

namespace fs = std::filesystem;
using namespace pulse_tn;

namespace {

struct PipelineFlags {
  HrPipelineConfig pipeline;
  double epsilon = TnConfig{}.epsilon;
  int channel = -1;

  void add_to(CLI::App* app) {
    app->add_option("--segment-s", pipeline.segment_s, "Segment length in seconds")->capture_default_str();
    app->add_option("--low-hz", pipeline.band.low_hz, "Passband lower edge")->capture_default_str();
    app->add_option("--high-hz", pipeline.band.high_hz, "Passband upper edge")->capture_default_str();
    app->add_option("--order", pipeline.band.order, "Butterworth order (even)")->capture_default_str();
    app->add_option("--window", pipeline.welch.window_len, "Welch window length")->capture_default_str();
    app->add_option("--overlap", pipeline.welch.overlap, "Welch overlap fraction")->capture_default_str();
    app->add_option("--nfft", pipeline.welch.nfft, "Zero-padded FFT length")->capture_default_str();
    app->add_option("--epsilon", epsilon, "TN regularizer")->capture_default_str();
    app->add_option("--channel", channel, "Pulse channel (default: green, or 0 for mono)");
  }

  ExtractorConfig extractor_config() const {
    ExtractorConfig cfg;
    cfg.tn.epsilon = epsilon;
    if (channel >= 0) cfg.channel = static_cast<std::size_t>(channel);
    return cfg;
  }
};

ExtractorKind extractor_or_usage(const std::string& name) {
  if (auto k = parse_extractor_kind(name)) return *k;
  throw UsageError("unknown extractor '" + name + "' (expected green_raw, tn_pooled or diff_pooled)");
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
  const auto x = text.find('x');
  std::size_t h = 0, w = 0;
  if (x != std::string::npos) {
    std::istringstream hs(text.substr(0, x)), ws(text.substr(x + 1));
    if ((hs >> h) && hs.eof() && (ws >> w) && ws.eof() && h > 0 && w > 0) return {h, w};
  }
  throw UsageError("--size expects HxW, got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal-normalization rPPG toolkit"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Render a synthetic clip and append its label");
  SimulateOptions sim_opts;
  std::string sim_size = "8x8";
  std::string sim_shape = "sinusoid";
  bool sim_u8 = false;
  std::string sim_labels;
  int sim_channels = 3;
  sim->add_option("--hr", sim_opts.spec.pulse.hr_bpm, "Heart rate (BPM)")->capture_default_str();
  sim->add_option("--fps", sim_opts.spec.fps, "Frame rate")->capture_default_str();
  sim->add_option("--frames", sim_opts.spec.frames, "Number of frames")->capture_default_str();
  sim->add_option("--size", sim_size, "Frame size HxW")->capture_default_str();
  sim->add_option("--noise", sim_opts.spec.noise, "Noise spec, e.g. linear:0.1+vs/sin:0.3:0.01")
      ->capture_default_str();
  sim->add_option("--seed", sim_opts.spec.scene.seed, "Jitter seed")->capture_default_str();
  sim->add_option("--amplitude", sim_opts.spec.pulse.amplitude, "Pulse amplitude")->capture_default_str();
  sim->add_option("--shape", sim_shape, "sinusoid | sinusoid_with_harmonic")->capture_default_str();
  sim->add_option("--harmonic-ratio", sim_opts.spec.pulse.harmonic_ratio)->capture_default_str();
  sim->add_option("--jitter", sim_opts.spec.scene.pixel_jitter, "Per-pixel v_d jitter")->capture_default_str();
  sim->add_option("--channels", sim_channels, "1 or 3")->capture_default_str();
  sim->add_option("--labels", sim_labels, "Label CSV to append to (default: labels.csv beside --out)");
  sim->add_flag("--u8", sim_u8, "Store 8-bit samples instead of float32");
  sim->add_option("--out", sim_opts.out, "Output clip path")->required();

  // transform
  auto* xf = app.add_subcommand("transform", "Write a feature clip (tn, diff or diffnorm)");
  TransformOptions xf_opts;
  xf->add_option("--in", xf_opts.in)->required();
  xf->add_option("--out", xf_opts.out)->required();
  xf->add_option("--method", xf_opts.method, "tn | diff | diffnorm")->capture_default_str();
  xf->add_option("--epsilon", xf_opts.tn.epsilon, "TN regularizer")->capture_default_str();

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the heart rate of one clip");
  EstimateOptions est_opts;
  PipelineFlags est_flags;
  std::string est_extractor = "tn_pooled";
  std::string dump_wave, dump_psd;
  est->add_option("--in", est_opts.in)->required();
  est->add_option("--extractor", est_extractor, "green_raw | tn_pooled | diff_pooled")->capture_default_str();
  est->add_option("--dump-waveform", dump_wave, "CSV of the extracted waveform");
  est->add_option("--dump-psd", dump_psd, "CSV of the segment-averaged PSD");
  est_flags.add_to(est);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score one extractor over a manifest directory");
  EvaluateOptions ev_opts;
  PipelineFlags ev_flags;
  std::string ev_extractor = "tn_pooled";
  std::string ev_out;
  ev->add_option("--manifest", ev_opts.manifest, "Directory of .rpgc clips + labels.csv")->required();
  ev->add_option("--extractor", ev_extractor)->capture_default_str();
  ev->add_option("--out", ev_out, "Report path (default: stdout)");
  ev->add_flag("--skip-bad", ev_opts.skip_bad, "Exit 0 even when clips fail");
  ev_flags.add_to(ev);

  // compare
  auto* cmp = app.add_subcommand("compare", "Side-by-side metrics for several extractors");
  CompareOptions cmp_opts;
  PipelineFlags cmp_flags;
  std::vector<std::string> cmp_extractors{"green_raw", "tn_pooled", "diff_pooled"};
  std::string cmp_out;
  cmp->add_option("--manifest", cmp_opts.manifest)->required();
  cmp->add_option("--extractors", cmp_extractors)->delimiter(',')->capture_default_str();
  cmp->add_option("--out", cmp_out, "Report path (default: stdout)");
  cmp->add_flag("--skip-bad", cmp_opts.skip_bad);
  cmp_flags.add_to(cmp);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const auto [h, w] = parse_size(sim_size);
      sim_opts.spec.height = h;
      sim_opts.spec.width = w;
      if (sim_channels != 1 && sim_channels != 3) throw UsageError("--channels must be 1 or 3");
      const auto seed = sim_opts.spec.scene.seed;
      const double jitter = sim_opts.spec.scene.pixel_jitter;
      sim_opts.spec.scene = SceneSpec::defaults(static_cast<std::size_t>(sim_channels));
      sim_opts.spec.scene.seed = seed;
      sim_opts.spec.scene.pixel_jitter = jitter;
      if (sim_shape == "sinusoid") {
        sim_opts.spec.pulse.shape = PulseShape::sinusoid;
      } else if (sim_shape == "sinusoid_with_harmonic") {
        sim_opts.spec.pulse.shape = PulseShape::sinusoid_with_harmonic;
      } else {
        throw UsageError("--shape must be sinusoid or sinusoid_with_harmonic");
      }
      if (!sim_labels.empty()) sim_opts.labels = sim_labels;
      if (sim_u8) sim_opts.dtype = ClipDtype::u8;
      const SimulateResult r = cmd_simulate(sim_opts);
      std::cout << "wrote " << r.clip_path.string() << " (" << sim_opts.spec.frames << "x" << h << "x" << w
                << "x" << sim_channels << "), label " << sim_opts.spec.pulse.hr_bpm << " BPM -> "
                << r.labels_path.string() << "\n";
      return 0;
    }
    if (*xf) {
      cmd_transform(xf_opts);
      return 0;
    }
    if (*est) {
      est_opts.extractor = extractor_or_usage(est_extractor);
      est_opts.extractor_cfg = est_flags.extractor_config();
      est_opts.pipeline = est_flags.pipeline;
      if (!dump_wave.empty()) est_opts.dump_waveform = dump_wave;
      if (!dump_psd.empty()) est_opts.dump_psd = dump_psd;
      const VideoHr hr = cmd_estimate(est_opts);
      std::printf("hr_bpm %.4f\nsegments %zu\ndropped %zu\n", hr.bpm, hr.segment_bpm.size(),
                  hr.dropped_segments);
      return 0;
    }
    if (*ev) {
      ev_opts.extractor = extractor_or_usage(ev_extractor);
      ev_opts.extractor_cfg = ev_flags.extractor_config();
      ev_opts.pipeline = ev_flags.pipeline;
      if (!ev_out.empty()) ev_opts.out = ev_out;
      return cmd_evaluate(ev_opts);
    }
    if (*cmp) {
      cmp_opts.extractors.clear();
      for (const auto& name : cmp_extractors) cmp_opts.extractors.push_back(extractor_or_usage(name));
      cmp_opts.extractor_cfg = cmp_flags.extractor_config();
      cmp_opts.pipeline = cmp_flags.pipeline;
      if (!cmp_out.empty()) cmp_opts.out = cmp_out;
      return cmd_compare(cmp_opts);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NoiseSpecError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
