#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mhfseg/measures.hpp"
#include "mhfseg/spectral.hpp"

namespace mhfseg {

// Multilevel hybrid filter: a linear first stage that averages nested context
// windows on each side of the frame under test, 2K-1 cross-context
// differences, and a nonlinear second stage that reduces them to one
// transition level per frame.

enum class Stage1Kind { Mean, Median };
enum class Stage2Kind { Min, Max, Median, Mean };

std::string_view to_string(Stage1Kind kind) noexcept;
std::string_view to_string(Stage2Kind kind) noexcept;
std::optional<Stage1Kind> parse_stage1(std::string_view name) noexcept;
std::optional<Stage2Kind> parse_stage2(std::string_view name) noexcept;

struct MhfConfig {
  std::size_t context = 4;  // K; the analysis window spans 2K + 1 frames
  Stage1Kind stage1 = Stage1Kind::Mean;
  Stage2Kind stage2 = Stage2Kind::Min;
  MeasureKind measure = MeasureKind::L2;
  // Spectral path: contexts are {t-i..t} and {t..t+i} unless this is set, in
  // which case they become {t-i..t-1} and {t+1..t+i}.
  bool exclude_center = false;
  // Energy path: contexts exclude frame t by default so that a frame
  // straddling an energy step sees a pure context on each side.
  bool energy_exclude_center = true;

  std::size_t num_differences() const noexcept { return 2 * context - 1; }
  /// Throws InvalidArgument if context == 0 or measure is pinv-energy.
  void validate() const;
};

/// left[i-1] = Phi_l,i and right[i-1] = Phi_r,i for i = 1..K.
struct ContextAverages {
  std::vector<std::vector<double>> left;
  std::vector<std::vector<double>> right;
};

/// Stage-1 filtered context windows around frame t.
/// Throws IndexOutOfValidRange unless K <= t <= T-1-K.
ContextAverages context_averages(const FrameMatrix& rows, std::size_t t, std::size_t context,
                                 Stage1Kind stage1, bool exclude_center = false);

/// D_i = error(Phi_r,K, Phi_l,i) for i = 1..K, then
/// D_{K+i} = error(Phi_l,K, Phi_r,i) for i = 1..K-1.
std::vector<double> difference_vector(const ContextAverages& ctx, MeasureKind measure);

struct Stage2Result {
  double value = 0.0;
  std::size_t index = 0;  // 1-based position for min/max (lowest on ties), 0 otherwise
};

Stage2Result stage2(std::span<const double> diffs, Stage2Kind kind);

inline constexpr double kEnergyBaseline = 2.0;

struct VariationTrace {
  std::vector<double> values;              // transition level v(t); 0 outside the valid range
  std::vector<std::size_t> argmin_index;   // stage-2 index; 0 outside the valid range
  std::vector<double> energy;              // pinv-energy MHF output; 2.0 on edge/silent frames
  std::size_t context = 4;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t first_valid() const noexcept { return context; }
  /// Last frame with full context; only meaningful when size() >= 2K + 1.
  std::size_t last_valid() const noexcept { return values.size() - 1 - context; }
};

/// Runs the filter over every frame with full context. Throws TooFewFrames
/// when the sequence has fewer than 2K + 1 frames.
VariationTrace variation_function(const SpectralSequence& seq, const MhfConfig& config);
VariationTrace variation_function(const FrameMatrix& rows, const MhfConfig& config);

/// Only the pinv-energy trace of variation_function.
std::vector<double> energy_trace(const FrameMatrix& rows, const MhfConfig& config);

struct WindowUsage {
  std::vector<double> percent;       // percent[i-1] is the share of window i
  std::vector<std::size_t> counts;
  std::size_t frames_counted = 0;

  bool empty() const noexcept { return frames_counted == 0; }
};

/// Histogram of stage-2 indices over frames with values[t] >= min_value.
/// Percentages sum to 100; all zero when no frame qualifies.
WindowUsage window_usage(const VariationTrace& trace, double min_value);
WindowUsage window_usage(std::span<const double> values, std::span<const std::size_t> index,
                         std::size_t context, double min_value);

}  // namespace mhfseg
