#include "mhfseg/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mhfseg/error.hpp"

namespace mhfseg {

namespace {

// Local maxima with value >= floor. A run of equal values counts as one peak,
// reported at its first frame; values beyond either end act as -infinity.
std::vector<std::size_t> local_maxima(std::span<const double> values, double floor) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> peaks;
  const std::size_t n = values.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    const double left = i == 0 ? kNegInf : values[i - 1];
    const double right = j + 1 < n ? values[j + 1] : kNegInf;
    if (values[i] > left && values[i] > right && values[i] >= floor) peaks.push_back(i);
    i = j + 1;
  }
  return peaks;
}

// Greedy suppression: strongest candidate first (earlier frame on ties); a
// candidate survives if it is at least min_sep frames from every survivor.
std::vector<std::size_t> thin(std::vector<std::size_t> candidates, std::span<const double> values,
                              std::size_t min_sep) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t c : candidates) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return (c > k ? c - k : k - c) >= min_sep;
    });
    if (clear) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

std::vector<double> SegmenterConfig::effective_levels() const {
  if (level_thresholds.empty()) return {spectral_threshold};
  return level_thresholds;
}

void SegmenterConfig::validate() const {
  if (!(energy_threshold > kEnergyBaseline)) {
    throw Error(ErrorKind::InvalidArgument, "energy threshold must exceed the stationary baseline 2");
  }
  if (min_separation == 0) throw Error(ErrorKind::InvalidArgument, "min separation must be >= 1 frame");
  const auto levels = effective_levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0 && levels[i] <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "threshold " + std::to_string(levels[i]) + " outside (0, 1]");
    }
    if (i > 0 && !(levels[i] < levels[i - 1])) {
      throw Error(ErrorKind::NonDescendingThresholds, "level thresholds must be strictly descending");
    }
  }
}

std::vector<std::size_t> energy_marks(std::span<const double> energy, double energy_threshold,
                                      std::size_t min_sep) {
  return thin(local_maxima(energy, energy_threshold), energy, min_sep);
}

std::vector<double> local_normalize(std::span<const double> values, std::span<const std::size_t> marks) {
  std::vector<double> out(values.begin(), values.end());
  std::vector<std::size_t> cuts{0};
  for (std::size_t m : marks) {
    if (m > cuts.back() && m < values.size()) cuts.push_back(m);
  }
  cuts.push_back(values.size());
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const auto first = out.begin() + static_cast<std::ptrdiff_t>(cuts[s]);
    const auto last = out.begin() + static_cast<std::ptrdiff_t>(cuts[s + 1]);
    if (first == last) continue;
    const double peak = *std::max_element(first, last);
    if (peak > kNormalizeEpsilon) {
      std::for_each(first, last, [peak](double& v) { v = std::clamp(v / peak, 0.0, 1.0); });
    }
  }
  return out;
}

std::vector<std::size_t> pick_peaks(std::span<const double> values, double threshold, std::size_t min_sep) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "threshold must lie in (0, 1]");
  }
  return thin(local_maxima(values, threshold), values, min_sep);
}

std::vector<Level> multilevel(std::span<const double> values, std::span<const double> thresholds,
                              std::size_t min_sep) {
  if (thresholds.empty()) throw Error(ErrorKind::EmptyInput, "no thresholds given");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "threshold " + std::to_string(thresholds[i]) + " outside (0, 1]");
    }
    if (i > 0 && !(thresholds[i] < thresholds[i - 1])) {
      throw Error(ErrorKind::NonDescendingThresholds, "level thresholds must be strictly descending");
    }
  }
  const auto lowest = thin(local_maxima(values, thresholds.back()), values, min_sep);
  std::vector<Level> levels;
  for (double th : thresholds) {
    Level level{th, {}};
    std::copy_if(lowest.begin(), lowest.end(), std::back_inserter(level.boundaries),
                 [&](std::size_t t) { return values[t] >= th; });
    levels.push_back(std::move(level));
  }
  return levels;
}

Segmentation segment(const AudioBuffer& buf, const FrameParams& frame_params, AnalysisKind analysis,
                     const MhfConfig& mhf_config, const SegmenterConfig& seg_config, std::size_t lpc_order) {
  mhf_config.validate();
  seg_config.validate();

  Segmentation seg;
  seg.frame_params = frame_params;
  seg.sample_rate_hz = buf.sample_rate_hz;
  seg.num_samples = buf.samples.size();

  const auto seq = analyze(buf, frame_params, analysis, lpc_order);
  seg.trace = variation_function(seq, mhf_config);
  if (analysis != AnalysisKind::FftMagnitude) {
    const auto spectra = analyze(buf, frame_params, AnalysisKind::FftMagnitude);
    seg.trace.energy = energy_trace(spectra.vectors, mhf_config);
  }

  seg.energy_marks = energy_marks(seg.trace.energy, seg_config.energy_threshold, seg_config.min_separation);
  seg.normalized = local_normalize(seg.trace.values, seg.energy_marks);
  const auto levels = seg_config.effective_levels();
  seg.levels = multilevel(seg.normalized, levels, seg_config.min_separation);
  return seg;
}

}  // namespace mhfseg
