#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mhfseg/mhf.hpp"
#include "mhfseg/signal_io.hpp"
#include "mhfseg/spectral.hpp"

namespace mhfseg {

struct SegmenterConfig {
  double energy_threshold = 2.5;  // c + 1/c at an amplitude ratio c = 2
  double spectral_threshold = 0.5;
  // Threshold ladder, strictly descending. When empty, the single level
  // spectral_threshold is used.
  std::vector<double> level_thresholds{0.7, 0.5, 0.3};
  std::size_t min_separation = 4;  // frames

  std::vector<double> effective_levels() const;
  /// Throws InvalidArgument / NonDescendingThresholds.
  void validate() const;
};

struct Level {
  double threshold = 0.0;
  std::vector<std::size_t> boundaries;
};

struct Segmentation {
  std::vector<Level> levels;
  std::vector<std::size_t> energy_marks;
  FrameParams frame_params;
  int sample_rate_hz = 8000;
  std::size_t num_samples = 0;
  VariationTrace trace;
  std::vector<double> normalized;  // locally normalized spectral trace

  double boundary_time_s(std::size_t frame) const noexcept {
    return frame_params.frame_center_s(frame, sample_rate_hz);
  }
};

inline constexpr double kNormalizeEpsilon = 1e-9;

/// Strict local maxima of the energy trace at or above energy_threshold,
/// thinned to min_sep frames (larger value wins, earlier frame on ties).
std::vector<std::size_t> energy_marks(std::span<const double> energy, double energy_threshold,
                                      std::size_t min_sep);

/// Divides each run delimited by {0} u marks u {T} by its maximum when that
/// maximum exceeds kNormalizeEpsilon; runs with a smaller maximum are left as-is.
std::vector<double> local_normalize(std::span<const double> values, std::span<const std::size_t> marks);

/// Local maxima (a plateau counts once, at its first frame) with value >=
/// threshold, thinned to min_sep frames.
std::vector<std::size_t> pick_peaks(std::span<const double> values, double threshold, std::size_t min_sep);

/// One boundary set per threshold. Thinning runs once on the candidates of
/// the lowest threshold; higher levels are filtered from that set, so every
/// level is a subset of the levels below it.
std::vector<Level> multilevel(std::span<const double> values, std::span<const double> thresholds,
                              std::size_t min_sep);

/// analyze -> variation_function -> energy_marks -> local_normalize -> multilevel.
/// The energy trace always comes from FFT magnitudes, also when the spectral
/// trace uses LPC vectors.
Segmentation segment(const AudioBuffer& buf, const FrameParams& frame_params, AnalysisKind analysis,
                     const MhfConfig& mhf_config, const SegmenterConfig& seg_config,
                     std::size_t lpc_order = 10);

}  // namespace mhfseg
