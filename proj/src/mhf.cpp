#include "mhfseg/mhf.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mhfseg/error.hpp"

namespace mhfseg {

std::string_view to_string(Stage1Kind kind) noexcept {
  return kind == Stage1Kind::Median ? "median" : "mean";
}

std::string_view to_string(Stage2Kind kind) noexcept {
  switch (kind) {
    case Stage2Kind::Min: return "min";
    case Stage2Kind::Max: return "max";
    case Stage2Kind::Median: return "median";
    case Stage2Kind::Mean: return "mean";
  }
  return "unknown";
}

std::optional<Stage1Kind> parse_stage1(std::string_view name) noexcept {
  if (name == "mean") return Stage1Kind::Mean;
  if (name == "median") return Stage1Kind::Median;
  return std::nullopt;
}

std::optional<Stage2Kind> parse_stage2(std::string_view name) noexcept {
  for (auto k : {Stage2Kind::Min, Stage2Kind::Max, Stage2Kind::Median, Stage2Kind::Mean}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void MhfConfig::validate() const {
  if (context == 0) throw Error(ErrorKind::InvalidArgument, "context half-width K must be >= 1");
  if (measure == MeasureKind::PinvEnergy) {
    throw Error(ErrorKind::InvalidArgument, "pinv-energy is reserved for the energy trace");
  }
}

namespace {

double median_of(std::span<double> xs) {
  const std::size_t n = xs.size();
  const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(xs.begin(), mid);
  return 0.5 * (lower + upper);
}

// Writes Phi_i (i = 1..K) for one side into out.row(i-1). `step` is -1 for the
// left context and +1 for the right one.
void fill_side(const FrameMatrix& rows, std::size_t t, std::size_t K, int step, Stage1Kind stage1,
               bool exclude_center, FrameMatrix& out, std::vector<double>& scratch) {
  const std::size_t M = rows.cols();
  auto frame_at = [&](std::size_t j) {  // j-th frame of the side, j = 0 is the nearest
    const std::size_t offset = exclude_center ? j + 1 : j;
    return rows.row(step < 0 ? t - offset : t + offset);
  };

  if (stage1 == Stage1Kind::Mean) {
    // Running mean: exact when every averaged row is identical.
    std::vector<double> mean(frame_at(0).begin(), frame_at(0).end());
    std::size_t count = 1;
    for (std::size_t i = 1; i <= K; ++i) {
      if (!exclude_center || i > 1) {
        const auto r = frame_at(count);
        ++count;
        const double inv = 1.0 / static_cast<double>(count);
        for (std::size_t m = 0; m < M; ++m) mean[m] += (r[m] - mean[m]) * inv;
      }
      std::copy(mean.begin(), mean.end(), out.row(i - 1).begin());
    }
    return;
  }

  for (std::size_t i = 1; i <= K; ++i) {
    const std::size_t count = exclude_center ? i : i + 1;
    scratch.resize(count);
    auto dst = out.row(i - 1);
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t j = 0; j < count; ++j) scratch[j] = frame_at(j)[m];
      dst[m] = median_of(scratch);
    }
  }
}

struct ContextBuffers {
  FrameMatrix left;
  FrameMatrix right;
  std::vector<double> scratch;
};

void fill_contexts(const FrameMatrix& rows, std::size_t t, std::size_t K, Stage1Kind stage1,
                   bool exclude_center, ContextBuffers& buf) {
  if (buf.left.rows() != K || buf.left.cols() != rows.cols()) {
    buf.left = FrameMatrix(K, rows.cols());
    buf.right = FrameMatrix(K, rows.cols());
  }
  fill_side(rows, t, K, -1, stage1, exclude_center, buf.left, buf.scratch);
  fill_side(rows, t, K, +1, stage1, exclude_center, buf.right, buf.scratch);
}

// Generic over the error function so the energy path can report a zero vector
// without throwing.
template <typename ErrorFn>
bool differences(const FrameMatrix& left, const FrameMatrix& right, std::span<double> D, ErrorFn&& err) {
  const std::size_t K = left.rows();
  for (std::size_t i = 0; i < K; ++i) {
    if (!err(right.row(K - 1), left.row(i), D[i])) return false;
  }
  for (std::size_t i = 0; i + 1 < K; ++i) {
    if (!err(left.row(K - 1), right.row(i), D[K + i])) return false;
  }
  return true;
}

void check_valid(std::size_t T, std::size_t t, std::size_t K) {
  if (T < 2 * K + 1 || t < K || t + K >= T) {
    throw Error(ErrorKind::IndexOutOfValidRange, "frame " + std::to_string(t) + " lacks " + std::to_string(K) +
                                                     " frames of context in a sequence of " +
                                                     std::to_string(T));
  }
}

void check_frames(std::size_t T, std::size_t K) {
  if (T < 2 * K + 1) {
    throw Error(ErrorKind::TooFewFrames,
                std::to_string(T) + " frames < 2K+1 = " + std::to_string(2 * K + 1));
  }
}

void run_energy(const FrameMatrix& rows, const MhfConfig& config, std::vector<double>& energy,
                ContextBuffers& buf) {
  const std::size_t T = rows.rows();
  const std::size_t K = config.context;
  energy.assign(T, kEnergyBaseline);
  std::vector<double> D(config.num_differences());
  auto pinv = [](std::span<const double> u, std::span<const double> v, double& out) {
    const auto e = try_pinv_energy(u, v);
    if (!e) return false;
    out = *e;
    return true;
  };
  for (std::size_t t = K; t + K < T; ++t) {
    fill_contexts(rows, t, K, config.stage1, config.energy_exclude_center, buf);
    if (differences(buf.left, buf.right, D, pinv)) energy[t] = stage2(D, config.stage2).value;
  }
}

}  // namespace

ContextAverages context_averages(const FrameMatrix& rows, std::size_t t, std::size_t context,
                                 Stage1Kind stage1, bool exclude_center) {
  if (context == 0) throw Error(ErrorKind::InvalidArgument, "context half-width K must be >= 1");
  check_valid(rows.rows(), t, context);
  ContextBuffers buf;
  fill_contexts(rows, t, context, stage1, exclude_center, buf);
  ContextAverages ctx;
  for (std::size_t i = 0; i < context; ++i) {
    ctx.left.emplace_back(buf.left.row(i).begin(), buf.left.row(i).end());
    ctx.right.emplace_back(buf.right.row(i).begin(), buf.right.row(i).end());
  }
  return ctx;
}

std::vector<double> difference_vector(const ContextAverages& ctx, MeasureKind measure) {
  const std::size_t K = ctx.left.size();
  if (K == 0 || ctx.right.size() != K) {
    throw Error(ErrorKind::LengthMismatch, "left and right contexts must both hold K >= 1 averages");
  }
  std::vector<double> D(2 * K - 1);
  for (std::size_t i = 0; i < K; ++i) D[i] = dist(ctx.right[K - 1], ctx.left[i], measure);
  for (std::size_t i = 0; i + 1 < K; ++i) D[K + i] = dist(ctx.left[K - 1], ctx.right[i], measure);
  return D;
}

Stage2Result stage2(std::span<const double> diffs, Stage2Kind kind) {
  if (diffs.empty()) throw Error(ErrorKind::EmptyInput, "difference vector is empty");
  switch (kind) {
    case Stage2Kind::Min: {
      const auto it = std::min_element(diffs.begin(), diffs.end());
      return {*it, static_cast<std::size_t>(it - diffs.begin()) + 1};
    }
    case Stage2Kind::Max: {
      const auto it = std::max_element(diffs.begin(), diffs.end());
      return {*it, static_cast<std::size_t>(it - diffs.begin()) + 1};
    }
    case Stage2Kind::Median: {
      std::vector<double> tmp(diffs.begin(), diffs.end());
      return {median_of(tmp), 0};
    }
    case Stage2Kind::Mean:
      return {std::accumulate(diffs.begin(), diffs.end(), 0.0) / static_cast<double>(diffs.size()), 0};
  }
  return {};
}

VariationTrace variation_function(const FrameMatrix& rows, const MhfConfig& config) {
  config.validate();
  const std::size_t T = rows.rows();
  const std::size_t K = config.context;
  check_frames(T, K);
  if (rows.cols() == 0) throw Error(ErrorKind::LengthMismatch, "parameter vectors are empty");

  VariationTrace trace;
  trace.context = K;
  trace.values.assign(T, 0.0);
  trace.argmin_index.assign(T, 0);

  ContextBuffers buf;
  std::vector<double> D(config.num_differences());
  auto err = [measure = config.measure](std::span<const double> u, std::span<const double> v, double& out) {
    out = dist(u, v, measure);
    return true;
  };
  for (std::size_t t = K; t + K < T; ++t) {
    fill_contexts(rows, t, K, config.stage1, config.exclude_center, buf);
    differences(buf.left, buf.right, D, err);
    const auto r = stage2(D, config.stage2);
    trace.values[t] = r.value;
    trace.argmin_index[t] = r.index;
  }
  run_energy(rows, config, trace.energy, buf);
  return trace;
}

VariationTrace variation_function(const SpectralSequence& seq, const MhfConfig& config) {
  return variation_function(seq.vectors, config);
}

std::vector<double> energy_trace(const FrameMatrix& rows, const MhfConfig& config) {
  if (config.context == 0) throw Error(ErrorKind::InvalidArgument, "context half-width K must be >= 1");
  check_frames(rows.rows(), config.context);
  std::vector<double> energy;
  ContextBuffers buf;
  run_energy(rows, config, energy, buf);
  return energy;
}

WindowUsage window_usage(std::span<const double> values, std::span<const std::size_t> index,
                         std::size_t context, double min_value) {
  if (values.size() != index.size()) {
    throw Error(ErrorKind::LengthMismatch, "values and index traces differ in length");
  }
  const std::size_t windows = context == 0 ? 0 : 2 * context - 1;
  WindowUsage usage;
  usage.counts.assign(windows, 0);
  usage.percent.assign(windows, 0.0);
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (!(values[t] >= min_value) || index[t] == 0 || index[t] > windows) continue;
    ++usage.counts[index[t] - 1];
    ++usage.frames_counted;
  }
  if (usage.frames_counted > 0) {
    for (std::size_t i = 0; i < windows; ++i) {
      usage.percent[i] = 100.0 * static_cast<double>(usage.counts[i]) / static_cast<double>(usage.frames_counted);
    }
  }
  return usage;
}

WindowUsage window_usage(const VariationTrace& trace, double min_value) {
  return window_usage(trace.values, trace.argmin_index, trace.context, min_value);
}

}  // namespace mhfseg
