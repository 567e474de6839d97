#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace mhfseg {

/// Mono sampled signal with samples in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate_hz = 8000;

  std::size_t size() const noexcept { return samples.size(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// Reads a RIFF/WAVE file holding mono 16-bit PCM. Samples are scaled by
/// 1/32768. Unknown chunks are skipped.
AudioBuffer load_wav(const std::filesystem::path& path);

/// Writes mono 16-bit PCM. Values are clipped to [-1, 1 - 2^-15], scaled by
/// 32768 and rounded to nearest. Returns the number of clipped samples.
std::size_t save_wav(const AudioBuffer& buf, const std::filesystem::path& path);

struct NoiseResult {
  AudioBuffer audio;
  std::size_t clipped = 0;  // samples that left [-1, 1] and were clipped
};

/// Adds zero-mean white Gaussian noise whose variance makes
/// 10 log10(P_signal / P_noise) equal snr_db. Throws ZeroSignal on a silent
/// buffer.
NoiseResult add_gaussian_noise(const AudioBuffer& buf, double snr_db, std::uint64_t seed);

/// Replaces each sample, independently with the given probability, by
/// +amplitude or -amplitude (random sign).
AudioBuffer add_impulse_noise(const AudioBuffer& buf, double probability, double amplitude,
                              std::uint64_t seed);

// --- synthetic corpora ---------------------------------------------------

enum class SectionKind { Tone, TwoTone, FilteredNoise, Silence };

std::string_view to_string(SectionKind kind) noexcept;

struct SynthSection {
  SectionKind kind = SectionKind::Tone;
  double duration_ms = 0.0;
  double amplitude = 0.5;
  double frequency_hz = 0.0;   // tone, two-tone
  double frequency2_hz = 0.0;  // two-tone only
  std::vector<double> ar_coefficients;  // filtered-noise: x[n] = sum a_k x[n-k] + w[n]
};

struct SynthSpec {
  std::vector<SynthSection> sections;
  std::uint64_t seed = 0;
  int sample_rate_hz = 8000;
};

struct SynthResult {
  AudioBuffer audio;
  std::vector<std::size_t> boundary_samples;  // interior section junctions
  std::vector<std::size_t> boundary_frames;   // floor(junction / hop)
};

/// Renders the sections back to back. Tone phase runs on the global sample
/// index, so equal-frequency sections join without a phase jump.
SynthResult synthesize(const SynthSpec& spec, std::size_t hop_samples = 64);

/// Parses the key/value synth-spec text format (see README). Throws
/// InvalidSpec naming the offending field.
SynthSpec parse_synth_spec(std::string_view text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

}  // namespace mhfseg
