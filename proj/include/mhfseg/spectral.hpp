#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mhfseg/signal_io.hpp"

namespace mhfseg {

/// Dense row-major matrix; row t holds the vector of frame t.
class FrameMatrix {
 public:
  FrameMatrix() = default;
  FrameMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<double> row(std::size_t t) noexcept { return {data_.data() + t * cols_, cols_}; }
  std::span<const double> row(std::size_t t) const noexcept { return {data_.data() + t * cols_, cols_}; }

  double& operator()(std::size_t t, std::size_t m) noexcept { return data_[t * cols_ + m]; }
  double operator()(std::size_t t, std::size_t m) const noexcept { return data_[t * cols_ + m]; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Taper { Rectangular, Hamming };

struct FrameParams {
  std::size_t frame_len = 128;  // 16 ms at 8 kHz
  std::size_t hop = 64;         // 50% overlap
  Taper taper = Taper::Hamming;

  /// Throws InvalidArgument unless 0 < hop <= frame_len.
  void validate() const;

  /// Time in seconds of the centre of frame t.
  double frame_center_s(std::size_t t, int sample_rate_hz) const noexcept {
    return (static_cast<double>(t * hop) + static_cast<double>(frame_len) / 2.0) / sample_rate_hz;
  }

  /// Frame length and hop from milliseconds and an overlap fraction in [0, 1).
  static FrameParams from_ms(double frame_ms, double overlap, int sample_rate_hz,
                             Taper taper = Taper::Hamming);
};

enum class AnalysisKind { FftMagnitude, Lpc };

std::string_view to_string(AnalysisKind kind) noexcept;
std::string_view to_string(Taper taper) noexcept;

struct SpectralSequence {
  FrameMatrix vectors;
  AnalysisKind kind = AnalysisKind::FftMagnitude;
  FrameParams frame_params;
  std::vector<bool> silent;  // per frame; frame energy below the silence floor

  std::size_t num_frames() const noexcept { return vectors.rows(); }
  std::size_t dim() const noexcept { return vectors.cols(); }
};

/// floor((num_samples - frame_len) / hop) + 1, or 0 if the signal is shorter
/// than one frame.
std::size_t frame_count(std::size_t num_samples, const FrameParams& params) noexcept;

std::vector<double> taper_window(Taper taper, std::size_t length);

/// Slices the signal into overlapping tapered frames; the trailing partial
/// frame is dropped.
FrameMatrix frame_signal(const AudioBuffer& buf, const FrameParams& params);

/// |DFT_L(frame)[m]| for m = 0..L/2. L must be a power of two.
std::vector<double> magnitude_spectrum(std::span<const double> frame);

/// r[k] = sum_n frame[n] frame[n+k], k = 0..order.
std::vector<double> autocorrelation(std::span<const double> frame, std::size_t order);

inline constexpr double kSilenceFloor = 1e-12;

struct LpcResult {
  std::vector<double> coefficients;  // a[1..order], predictor 1 - sum a_k z^-k
  bool silent = false;
};

/// Levinson-Durbin on the frame autocorrelation. A frame with r[0] below
/// kSilenceFloor yields the zero vector with `silent` set. Throws
/// NumericalBreakdown if a reflection coefficient reaches 1 + 1e-9.
LpcResult lpc_coefficients(std::span<const double> frame, std::size_t order = 10);

/// Per-frame parameter vectors. LPC frames that break down numerically are
/// replaced by the zero vector and flagged silent.
SpectralSequence analyze(const AudioBuffer& buf, const FrameParams& params, AnalysisKind kind,
                         std::size_t lpc_order = 10);

}  // namespace mhfseg
