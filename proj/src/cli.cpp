#include "mhfseg/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "mhfseg/error.hpp"
#include "mhfseg/evaluate.hpp"
#include "mhfseg/labels.hpp"
#include "mhfseg/mhf.hpp"
#include "mhfseg/segmenter.hpp"
#include "mhfseg/signal_io.hpp"
#include "mhfseg/spectral.hpp"

namespace mhfseg::cli {

namespace {

struct GlobalOptions {
  double frame_ms = 16.0;
  double overlap = 0.5;
  std::string analysis = "fft";
  std::string taper = "hamming";
  std::size_t lpc_order = 10;
  std::string measure = "l2";
  std::string stage1 = "mean";
  std::string stage2 = "min";
  std::size_t context = 4;
  bool exclude_center = false;
  bool energy_include_center = false;
  double threshold = 0.5;
  std::string levels;
  double energy_threshold = 2.5;
  double min_sep_ms = 32.0;
  std::uint64_t seed = 0;
};

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NotFound:
    case ErrorKind::IoError:
    case ErrorKind::UnsupportedFormat:
    case ErrorKind::SignalTooShort:
    case ErrorKind::TooFewFrames:
    case ErrorKind::ZeroSignal:
      return kIoFailure;
    default:
      return kUsage;
  }
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "--levels: bad threshold '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "--levels: empty list");
  return out;
}

struct Pipeline {
  FrameParams frames;
  AnalysisKind analysis = AnalysisKind::FftMagnitude;
  MhfConfig mhf;
  SegmenterConfig seg;
  std::size_t lpc_order = 10;
};

Pipeline make_pipeline(const GlobalOptions& g, int sample_rate_hz, bool threshold_given, bool levels_given) {
  Pipeline p;
  p.frames = FrameParams::from_ms(g.frame_ms, g.overlap, sample_rate_hz,
                                  g.taper == "rectangular" ? Taper::Rectangular : Taper::Hamming);
  p.analysis = g.analysis == "lpc" ? AnalysisKind::Lpc : AnalysisKind::FftMagnitude;
  p.lpc_order = g.lpc_order;
  p.mhf.context = g.context;
  p.mhf.stage1 = *parse_stage1(g.stage1);
  p.mhf.stage2 = *parse_stage2(g.stage2);
  p.mhf.measure = *parse_measure(g.measure);
  p.mhf.exclude_center = g.exclude_center;
  p.mhf.energy_exclude_center = !g.energy_include_center;
  p.seg.energy_threshold = g.energy_threshold;
  p.seg.spectral_threshold = g.threshold;
  if (levels_given) {
    p.seg.level_thresholds = parse_levels(g.levels);
  } else if (threshold_given) {
    p.seg.level_thresholds.clear();
  }
  const double sep = g.min_sep_ms * sample_rate_hz / 1000.0 / static_cast<double>(p.frames.hop);
  p.seg.min_separation = static_cast<std::size_t>(std::max(1LL, std::llround(sep)));
  p.mhf.validate();
  p.seg.validate();
  return p;
}

struct FileResult {
  int code = kOk;
  std::string diagnostic;
};

FileResult segment_file(const std::filesystem::path& input, const GlobalOptions& g, bool threshold_given,
                        bool levels_given, bool marks_as_boundaries, std::ostream* label_stream,
                        const std::filesystem::path& label_path, const std::string& trace_path) {
  try {
    const AudioBuffer audio = load_wav(input);
    const Pipeline p = make_pipeline(g, audio.sample_rate_hz, threshold_given, levels_given);
    const Segmentation seg = segment(audio, p.frames, p.analysis, p.mhf, p.seg, p.lpc_order);
    const auto records = segmentation_labels(seg, marks_as_boundaries);
    if (label_stream != nullptr) {
      write_labels(*label_stream, records);
    } else {
      write_labels(label_path, records);
    }
    if (!trace_path.empty()) {
      std::ofstream os(trace_path, std::ios::trunc);
      if (!os) throw Error(ErrorKind::IoError, "cannot open " + trace_path + " for writing");
      write_trace(os, seg);
    }
    return {};
  } catch (const Error& e) {
    return {exit_code_for(e), input.string() + ": " + e.what()};
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Speech segmentation with multilevel hybrid (mean/min) filters", "mhfseg"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--frame-ms", g.frame_ms, "Frame length in milliseconds")->capture_default_str();
  app.add_option("--overlap", g.overlap, "Frame overlap fraction")->capture_default_str();
  app.add_option("--analysis", g.analysis, "Spectral parameters")
      ->check(CLI::IsMember({"fft", "lpc"}))
      ->capture_default_str();
  app.add_option("--taper", g.taper, "Analysis window")
      ->check(CLI::IsMember({"hamming", "rectangular"}))
      ->capture_default_str();
  app.add_option("--lpc-order", g.lpc_order, "LPC order")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--measure", g.measure, "Error measure between context averages")
      ->check(CLI::IsMember({"l1", "l2", "linf", "cosine", "canberra", "tanimoto"}))
      ->capture_default_str();
  app.add_option("--stage1", g.stage1, "First-stage filter")
      ->check(CLI::IsMember({"mean", "median"}))
      ->capture_default_str();
  app.add_option("--stage2", g.stage2, "Second-stage filter")
      ->check(CLI::IsMember({"min", "max", "median", "mean"}))
      ->capture_default_str();
  app.add_option("--context", g.context, "Context half-width K (window of 2K+1 frames)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--exclude-center", g.exclude_center, "Leave the frame under test out of the spectral contexts");
  app.add_flag("--energy-include-center", g.energy_include_center,
               "Keep the frame under test in the energy-detector contexts");
  auto* threshold_opt = app.add_option("--threshold", g.threshold, "Single peak-picking threshold")
                            ->capture_default_str();
  auto* levels_opt = app.add_option("--levels", g.levels, "Descending threshold ladder, e.g. 0.7,0.5,0.3");
  app.add_option("--energy-threshold", g.energy_threshold, "Energy-mark threshold (> 2)")->capture_default_str();
  app.add_option("--min-sep-ms", g.min_sep_ms, "Minimum spacing between boundaries")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();

  // segment
  auto* seg_cmd = app.add_subcommand("segment", "Segment WAV files into label files");
  std::vector<std::string> seg_inputs;
  std::string seg_output, seg_out_dir, seg_trace;
  bool marks_as_boundaries = false;
  seg_cmd->add_option("inputs", seg_inputs, "Input WAV files")->required();
  seg_cmd->add_option("-o,--output", seg_output, "Label file (single input; default stdout)");
  seg_cmd->add_option("--out-dir", seg_out_dir, "Directory for <stem>.labels.txt (multiple inputs)");
  seg_cmd->add_option("--trace", seg_trace, "Per-frame trace table (single input)");
  seg_cmd->add_flag("--marks-as-boundaries", marks_as_boundaries, "Also cut every level at the energy marks");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Render a synth spec to WAV plus truth labels");
  std::string synth_spec, synth_output, synth_truth;
  synth_cmd->add_option("spec", synth_spec, "Synth spec file")->required();
  synth_cmd->add_option("-o,--output", synth_output, "Output WAV")->required();
  synth_cmd->add_option("--truth", synth_truth, "Truth label file (default <output stem>.truth.txt)");

  // noise
  auto* noise_cmd = app.add_subcommand("noise", "Add Gaussian or impulsive noise to a WAV file");
  std::string noise_input, noise_output;
  double snr_db = 0.0, impulse_prob = 0.0, impulse_amp = 1.0;
  noise_cmd->add_option("input", noise_input, "Input WAV")->required();
  noise_cmd->add_option("-o,--output", noise_output, "Output WAV")->required();
  auto* snr_opt = noise_cmd->add_option("--snr-db", snr_db, "Gaussian noise at this SNR");
  auto* imp_opt = noise_cmd->add_option("--impulse-prob", impulse_prob, "Impulse probability per sample")
                      ->check(CLI::Range(0.0, 1.0));
  noise_cmd->add_option("--impulse-amp", impulse_amp, "Impulse amplitude")->capture_default_str();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Compare hypothesis boundaries against a reference");
  std::string ref_path, hyp_path, ref_label, hyp_label;
  double tol_ms = 16.0;
  int eval_rate = 8000;
  bool tsv_only = false;
  eval_cmd->add_option("--ref", ref_path, "Reference label file")->required();
  eval_cmd->add_option("--hyp", hyp_path, "Hypothesis label file")->required();
  eval_cmd->add_option("--tol-ms", tol_ms, "Match tolerance")->capture_default_str();
  eval_cmd->add_option("--ref-label", ref_label, "Only use reference records with this label");
  eval_cmd->add_option("--hyp-label", hyp_label, "Only use hypothesis records with this label (default L<threshold>)");
  eval_cmd->add_option("--sample-rate", eval_rate, "Sample rate used to express offsets in frames")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_flag("--tsv", tsv_only, "Print only the machine-readable row");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Window-usage percentages from a trace file");
  std::string stats_trace, stats_column = "v_normalized";
  double min_value = 0.1;
  stats_cmd->add_option("--trace", stats_trace, "Trace file written by segment --trace")->required();
  stats_cmd->add_option("--min-value", min_value, "Ignore frames below this value")->capture_default_str();
  stats_cmd->add_option("--column", stats_column, "Column screened by --min-value")
      ->check(CLI::IsMember({"v", "v_normalized"}))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const bool threshold_given = threshold_opt->count() > 0;
  const bool levels_given = levels_opt->count() > 0;
  if (threshold_given && levels_given) {
    err << "error: --threshold and --levels are mutually exclusive\n";
    return kUsage;
  }

  try {
    if (seg_cmd->parsed()) {
      if (seg_inputs.size() > 1 && (!seg_output.empty() || !seg_trace.empty())) {
        err << "error: -o/--output and --trace take a single input\n";
        return kUsage;
      }
      if (seg_inputs.size() == 1) {
        const auto r = [&] {
          if (!seg_output.empty()) {
            return segment_file(seg_inputs[0], g, threshold_given, levels_given, marks_as_boundaries, nullptr,
                                seg_output, seg_trace);
          }
          if (!seg_out_dir.empty()) {
            const auto p = std::filesystem::path(seg_out_dir) /
                           (std::filesystem::path(seg_inputs[0]).stem().string() + ".labels.txt");
            return segment_file(seg_inputs[0], g, threshold_given, levels_given, marks_as_boundaries, nullptr, p,
                                seg_trace);
          }
          return segment_file(seg_inputs[0], g, threshold_given, levels_given, marks_as_boundaries, &out, {},
                              seg_trace);
        }();
        if (r.code != kOk) err << "error: " << r.diagnostic << '\n';
        return r.code;
      }
      std::sort(seg_inputs.begin(), seg_inputs.end());
      std::vector<std::future<FileResult>> jobs;
      for (const auto& in : seg_inputs) {
        const std::filesystem::path src(in);
        const auto dir = seg_out_dir.empty() ? src.parent_path() : std::filesystem::path(seg_out_dir);
        const auto dst = dir / (src.stem().string() + ".labels.txt");
        jobs.push_back(std::async(std::launch::async, segment_file, src, std::cref(g), threshold_given, levels_given,
                                  marks_as_boundaries, nullptr, dst, std::string{}));
      }
      int code = kOk;
      for (auto& job : jobs) {
        const auto r = job.get();
        if (r.code != kOk) {
          err << "error: " << r.diagnostic << '\n';
          code = std::max(code, r.code);
        }
      }
      return code;
    }

    if (synth_cmd->parsed()) {
      const auto spec = load_synth_spec(synth_spec);
      const auto frames = FrameParams::from_ms(g.frame_ms, g.overlap, spec.sample_rate_hz);
      const auto result = synthesize(spec, frames.hop);
      save_wav(result.audio, synth_output);
      std::filesystem::path truth = synth_truth;
      if (truth.empty()) {
        const std::filesystem::path o(synth_output);
        truth = o.parent_path() / (o.stem().string() + ".truth.txt");
      }
      write_labels(truth, truth_labels(spec, result));
      return kOk;
    }

    if (noise_cmd->parsed()) {
      const bool gaussian = snr_opt->count() > 0;
      const bool impulse = imp_opt->count() > 0;
      if (gaussian == impulse) {
        err << "error: give exactly one of --snr-db and --impulse-prob\n";
        return kUsage;
      }
      const auto audio = load_wav(noise_input);
      std::size_t clipped = 0;
      AudioBuffer noisy;
      if (gaussian) {
        auto r = add_gaussian_noise(audio, snr_db, g.seed);
        clipped = r.clipped;
        noisy = std::move(r.audio);
      } else {
        noisy = add_impulse_noise(audio, impulse_prob, impulse_amp, g.seed);
      }
      clipped += save_wav(noisy, noise_output);
      if (clipped > 0) err << "warning: " << clipped << " samples clipped\n";
      return kOk;
    }

    if (eval_cmd->parsed()) {
      const auto frames = FrameParams::from_ms(g.frame_ms, g.overlap, eval_rate);
      const double frame_s = static_cast<double>(frames.hop) / eval_rate;
      const auto ref_records = read_labels(ref_path);
      const auto hyp_records = read_labels(hyp_path);

      std::optional<std::string> hyp_filter;
      if (!hyp_label.empty()) {
        hyp_filter = hyp_label;
      } else {
        const auto tag = level_label(g.threshold);
        if (std::any_of(hyp_records.begin(), hyp_records.end(), [&](const auto& r) { return r.label == tag; })) {
          hyp_filter = tag;
        }
      }
      std::optional<std::string> ref_filter;
      if (!ref_label.empty()) ref_filter = ref_label;

      auto to_frames = [&](std::vector<double> times) {
        for (double& t : times) t /= frame_s;
        return times;
      };
      const auto ref = to_frames(boundary_times(ref_records, ref_filter));
      const auto hyp = to_frames(boundary_times(hyp_records, hyp_filter));
      const auto rep = match_boundaries(ref, hyp, tol_ms / 1000.0 / frame_s);

      if (!tsv_only) {
        fmt::print(out, "reference boundaries:  {}\n", ref.size());
        fmt::print(out, "hypothesis boundaries: {}{}\n", hyp.size(),
                   hyp_filter ? " (label " + *hyp_filter + ")" : std::string{});
        fmt::print(out, "hits: {}  misses: {}  false alarms: {}\n", rep.hits, rep.misses, rep.false_alarms);
        fmt::print(out, "precision: {:.4f}  recall: {:.4f}  f1: {:.4f}\n", rep.precision, rep.recall, rep.f1);
        fmt::print(out, "mean |offset|: {:.3f} frames ({:.2f} ms)\n\n", rep.mean_absolute_offset_frames,
                   rep.mean_absolute_offset_frames * frame_s * 1000.0);
      }
      out << "hits\tmisses\tfalse_alarms\tprecision\trecall\tf1\tmean_abs_offset_frames\n";
      fmt::print(out, "{}\t{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\n", rep.hits, rep.misses, rep.false_alarms,
                 rep.precision, rep.recall, rep.f1, rep.mean_absolute_offset_frames);
      return kOk;
    }

    if (stats_cmd->parsed()) {
      const auto rows = read_trace(stats_trace);
      std::vector<double> values;
      std::vector<std::size_t> index;
      for (const auto& r : rows) {
        values.push_back(stats_column == "v" ? r.value : r.normalized);
        index.push_back(r.argmin_index);
      }
      const auto usage = window_usage(values, index, g.context, min_value);
      out << "window\tpercent\tcount\n";
      for (std::size_t i = 0; i < usage.counts.size(); ++i) {
        fmt::print(out, "{}\t{:.2f}\t{}\n", i + 1, usage.percent[i], usage.counts[i]);
      }
      fmt::print(out, "# frames counted: {}\n", usage.frames_counted);
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace mhfseg::cli
