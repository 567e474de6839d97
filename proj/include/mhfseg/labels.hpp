#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mhfseg/mhf.hpp"
#include "mhfseg/segmenter.hpp"
#include "mhfseg/signal_io.hpp"

namespace mhfseg {

/// One line of a label file: "start<TAB>end<TAB>label", seconds with six
/// decimals. Point events have start == end.
struct LabelRecord {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;
};

std::string level_label(double threshold);

void write_labels(std::ostream& os, const std::vector<LabelRecord>& records);
void write_labels(const std::filesystem::path& path, const std::vector<LabelRecord>& records);
std::vector<LabelRecord> read_labels(std::istream& is);
std::vector<LabelRecord> read_labels(const std::filesystem::path& path);

/// One record per segment per level (label "L<threshold>") plus a point
/// record "mark" per energy mark; sorted by start time. With
/// marks_as_boundaries the marks also split every level.
std::vector<LabelRecord> segmentation_labels(const Segmentation& seg, bool marks_as_boundaries = false);

/// Section records of a synthesized signal, labelled by section kind.
std::vector<LabelRecord> truth_labels(const SynthSpec& spec, const SynthResult& synth);

/// Boundary times encoded in a label file: starts of segment records other
/// than the first, and point records. Filtered by label when given.
std::vector<double> boundary_times(const std::vector<LabelRecord>& records,
                                   const std::optional<std::string>& label = std::nullopt);

struct TraceRow {
  std::size_t frame = 0;
  double time_s = 0.0;
  double value = 0.0;
  std::size_t argmin_index = 0;
  double energy = 0.0;
  double normalized = 0.0;
};

/// Per-frame trace table with a one-line header:
/// frame, time_s, v, argmin_index, energy, v_normalized (tab separated).
void write_trace(std::ostream& os, const Segmentation& seg);
std::vector<TraceRow> read_trace(std::istream& is);
std::vector<TraceRow> read_trace(const std::filesystem::path& path);

}  // namespace mhfseg
