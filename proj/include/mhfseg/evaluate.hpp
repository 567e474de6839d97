#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mhfseg {

struct MatchReport {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t false_alarms = 0;
  double precision = 1.0;  // hits / (hits + false_alarms), 1 when nothing was hypothesized
  double recall = 1.0;     // hits / (hits + misses), 1 when there is no reference
  double f1 = 1.0;
  double mean_absolute_offset_frames = 0.0;  // over hits
};

/// Greedy one-to-one matching in order of increasing |ref - hyp|; a pair
/// matches when the offset is within tolerance. Positions are in frames and
/// may be fractional.
MatchReport match_boundaries(std::span<const double> reference, std::span<const double> hypothesis,
                             double tolerance_frames);
MatchReport match_boundaries(std::span<const std::size_t> reference, std::span<const std::size_t> hypothesis,
                             std::size_t tolerance_frames);

struct PeakWidth {
  std::size_t frame = 0;
  std::size_t width = 0;
};

/// For every positive local maximum (plateaus count once, at their first
/// frame), the number of contiguous frames around it that stay at or above
/// rel_height times the peak value.
std::vector<PeakWidth> peak_widths(std::span<const double> values, double rel_height);

double mean_peak_width(std::span<const PeakWidth> widths) noexcept;

}  // namespace mhfseg
