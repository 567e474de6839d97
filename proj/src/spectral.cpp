#include "mhfseg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>

#include "mhfseg/error.hpp"

namespace mhfseg {

namespace {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  void magnitudes(std::span<const double> frame, std::span<double> out) {
    std::copy(frame.begin(), frame.end(), in_);
    fftw_execute(plan_);
    for (std::size_t m = 0; m < n_ / 2 + 1; ++m) out[m] = std::hypot(out_[m][0], out_[m][1]);
  }

 private:
  std::size_t n_;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

void require_power_of_two(std::size_t n) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw Error(ErrorKind::NonPowerOfTwoLength, "frame length " + std::to_string(n) + " is not a power of two");
  }
}

void levinson_into(std::span<const double> r, std::size_t order, LpcResult& res) {
  res.coefficients.assign(order, 0.0);
  res.silent = false;
  if (!(r[0] >= kSilenceFloor)) {
    res.silent = true;
    return;
  }
  auto& a = res.coefficients;
  std::vector<double> prev(order, 0.0);
  double err = r[0];
  for (std::size_t i = 0; i < order; ++i) {
    double acc = r[i + 1];
    for (std::size_t j = 0; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / err;
    if (!std::isfinite(k) || std::abs(k) >= 1.0 + 1e-9) {
      throw Error(ErrorKind::NumericalBreakdown,
                  "reflection coefficient " + std::to_string(k) + " at order " + std::to_string(i + 1));
    }
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i), prev.begin());
    a[i] = k;
    for (std::size_t j = 0; j < i; ++j) a[j] = prev[j] - k * prev[i - 1 - j];
    err *= 1.0 - k * k;
    if (err <= 0.0) {
      // Perfectly predictable frame; higher orders stay zero.
      break;
    }
  }
}

}  // namespace

std::string_view to_string(AnalysisKind kind) noexcept {
  return kind == AnalysisKind::Lpc ? "lpc" : "fft";
}

std::string_view to_string(Taper taper) noexcept {
  return taper == Taper::Hamming ? "hamming" : "rectangular";
}

void FrameParams::validate() const {
  if (frame_len == 0) throw Error(ErrorKind::InvalidArgument, "frame length must be > 0");
  if (hop == 0 || hop > frame_len) {
    throw Error(ErrorKind::InvalidArgument, "hop must satisfy 0 < hop <= frame length");
  }
}

FrameParams FrameParams::from_ms(double frame_ms, double overlap, int sample_rate_hz, Taper taper) {
  if (!(frame_ms > 0.0)) throw Error(ErrorKind::InvalidArgument, "frame-ms must be > 0");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw Error(ErrorKind::InvalidArgument, "overlap must lie in [0, 1)");
  FrameParams p;
  p.frame_len = static_cast<std::size_t>(std::llround(frame_ms * sample_rate_hz / 1000.0));
  p.hop = static_cast<std::size_t>(std::llround(static_cast<double>(p.frame_len) * (1.0 - overlap)));
  p.taper = taper;
  p.validate();
  return p;
}

std::size_t frame_count(std::size_t num_samples, const FrameParams& params) noexcept {
  if (params.hop == 0 || num_samples < params.frame_len) return 0;
  return (num_samples - params.frame_len) / params.hop + 1;
}

std::vector<double> taper_window(Taper taper, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (taper == Taper::Hamming && length > 1) {
    for (std::size_t n = 0; n < length; ++n) {
      w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(length - 1));
    }
  }
  return w;
}

FrameMatrix frame_signal(const AudioBuffer& buf, const FrameParams& params) {
  params.validate();
  const std::size_t count = frame_count(buf.samples.size(), params);
  if (count == 0) {
    throw Error(ErrorKind::SignalTooShort, std::to_string(buf.samples.size()) + " samples < frame length " +
                                               std::to_string(params.frame_len));
  }
  const auto w = taper_window(params.taper, params.frame_len);
  FrameMatrix frames(count, params.frame_len);
  for (std::size_t t = 0; t < count; ++t) {
    auto row = frames.row(t);
    const double* src = buf.samples.data() + t * params.hop;
    for (std::size_t n = 0; n < params.frame_len; ++n) row[n] = src[n] * w[n];
  }
  return frames;
}

std::vector<double> magnitude_spectrum(std::span<const double> frame) {
  require_power_of_two(frame.size());
  std::vector<double> out(frame.size() / 2 + 1);
  RealFft fft(frame.size());
  fft.magnitudes(frame, out);
  return out;
}

std::vector<double> autocorrelation(std::span<const double> frame, std::size_t order) {
  if (order >= frame.size()) {
    throw Error(ErrorKind::OrderTooLarge,
                "order " + std::to_string(order) + " >= frame length " + std::to_string(frame.size()));
  }
  std::vector<double> r(order + 1, 0.0);
  for (std::size_t k = 0; k <= order; ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n + k < frame.size(); ++n) acc += frame[n] * frame[n + k];
    r[k] = acc;
  }
  return r;
}

LpcResult lpc_coefficients(std::span<const double> frame, std::size_t order) {
  if (order == 0) throw Error(ErrorKind::InvalidArgument, "lpc order must be > 0");
  const auto r = autocorrelation(frame, order);
  LpcResult res;
  levinson_into(r, order, res);
  return res;
}

SpectralSequence analyze(const AudioBuffer& buf, const FrameParams& params, AnalysisKind kind,
                         std::size_t lpc_order) {
  const FrameMatrix frames = frame_signal(buf, params);
  SpectralSequence seq;
  seq.kind = kind;
  seq.frame_params = params;
  seq.silent.assign(frames.rows(), false);

  if (kind == AnalysisKind::FftMagnitude) {
    require_power_of_two(params.frame_len);
    seq.vectors = FrameMatrix(frames.rows(), params.frame_len / 2 + 1);
    RealFft fft(params.frame_len);
    for (std::size_t t = 0; t < frames.rows(); ++t) {
      const auto f = frames.row(t);
      double energy = 0.0;
      for (double x : f) energy += x * x;
      seq.silent[t] = energy < kSilenceFloor;
      fft.magnitudes(f, seq.vectors.row(t));
    }
    return seq;
  }

  if (lpc_order == 0) throw Error(ErrorKind::InvalidArgument, "lpc order must be > 0");
  if (lpc_order >= params.frame_len) {
    throw Error(ErrorKind::OrderTooLarge, "order " + std::to_string(lpc_order) + " >= frame length " +
                                              std::to_string(params.frame_len));
  }
  seq.vectors = FrameMatrix(frames.rows(), lpc_order);
  LpcResult res;
  for (std::size_t t = 0; t < frames.rows(); ++t) {
    const auto r = autocorrelation(frames.row(t), lpc_order);
    try {
      levinson_into(r, lpc_order, res);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NumericalBreakdown) throw;
      res.coefficients.assign(lpc_order, 0.0);
      res.silent = true;
    }
    seq.silent[t] = res.silent;
    std::copy(res.coefficients.begin(), res.coefficients.end(), seq.vectors.row(t).begin());
  }
  return seq;
}

}  // namespace mhfseg
