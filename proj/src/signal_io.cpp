#include "mhfseg/signal_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>

#include "mhfseg/error.hpp"

namespace mhfseg {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

constexpr double kMaxSample = 1.0 - 1.0 / 32768.0;

}  // namespace

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorKind::NotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorKind::UnsupportedFormat, "not a RIFF/WAVE file: " + path.string());
  }

  bool have_fmt = false;
  int sample_rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(len, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw Error(ErrorKind::UnsupportedFormat, "truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      const auto format = read_u16(f);
      const auto channels = read_u16(f + 2);
      const auto bits = read_u16(f + 14);
      if (format != 1) {
        throw Error(ErrorKind::UnsupportedFormat, "format=" + std::to_string(format));
      }
      if (channels != 1) {
        throw Error(ErrorKind::UnsupportedFormat, "channels=" + std::to_string(channels));
      }
      if (bits != 16) {
        throw Error(ErrorKind::UnsupportedFormat, "bits_per_sample=" + std::to_string(bits));
      }
      sample_rate = static_cast<int>(read_u32(f + 4));
      if (sample_rate <= 0) throw Error(ErrorKind::UnsupportedFormat, "sample_rate=0");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = avail;
    }
    pos = body + len + (len & 1);
  }
  if (!have_fmt) throw Error(ErrorKind::UnsupportedFormat, "missing fmt chunk");
  if (data == nullptr) throw Error(ErrorKind::UnsupportedFormat, "missing data chunk");

  AudioBuffer buf;
  buf.sample_rate_hz = sample_rate;
  buf.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    const auto raw = static_cast<std::int16_t>(read_u16(data + 2 * i));
    buf.samples[i] = raw / 32768.0;
  }
  return buf;
}

std::size_t save_wav(const AudioBuffer& buf, const std::filesystem::path& path) {
  if (buf.sample_rate_hz <= 0) throw Error(ErrorKind::InvalidArgument, "sample_rate_hz <= 0");
  const auto n = static_cast<std::uint32_t>(buf.samples.size());
  std::string out;
  out.reserve(44 + 2 * static_cast<std::size_t>(n));
  out += "RIFF";
  put_u32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, 2 * n);

  std::size_t clipped = 0;
  for (double s : buf.samples) {
    double c = s;
    if (!(c >= -1.0)) {
      c = -1.0;
      ++clipped;
    } else if (c > kMaxSample) {
      c = kMaxSample;
      ++clipped;
    }
    const auto q = static_cast<std::int16_t>(std::lround(c * 32768.0));
    put_u16(out, static_cast<std::uint16_t>(q));
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw Error(ErrorKind::IoError, "write failed: " + path.string());
  return clipped;
}

NoiseResult add_gaussian_noise(const AudioBuffer& buf, double snr_db, std::uint64_t seed) {
  double power = 0.0;
  for (double s : buf.samples) power += s * s;
  if (buf.samples.empty() || power <= 0.0) {
    throw Error(ErrorKind::ZeroSignal, "signal power is zero; SNR undefined");
  }
  power /= static_cast<double>(buf.samples.size());
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  NoiseResult result{buf, 0};
  for (double& s : result.audio.samples) {
    s += sigma * gauss(rng);
    if (s > 1.0) {
      s = 1.0;
      ++result.clipped;
    } else if (s < -1.0) {
      s = -1.0;
      ++result.clipped;
    }
  }
  return result;
}

AudioBuffer add_impulse_noise(const AudioBuffer& buf, double probability, double amplitude,
                              std::uint64_t seed) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "impulse probability must lie in [0, 1]");
  }
  if (!(amplitude > 0.0 && amplitude <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "impulse amplitude must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  AudioBuffer out = buf;
  for (double& s : out.samples) {
    // Both draws are taken for every sample so the impulse pattern for a
    // given seed does not depend on the probability.
    const double u = uniform(rng);
    const bool positive = uniform(rng) < 0.5;
    if (u < probability) s = positive ? amplitude : -amplitude;
  }
  return out;
}

// --- synthesis ------------------------------------------------------------

std::string_view to_string(SectionKind kind) noexcept {
  switch (kind) {
    case SectionKind::Tone: return "tone";
    case SectionKind::TwoTone: return "two-tone";
    case SectionKind::FilteredNoise: return "filtered-noise";
    case SectionKind::Silence: return "silence";
  }
  return "unknown";
}

namespace {

// sin(2 pi f n / fs) with the phase reduced exactly, so integer frequencies
// repeat bit-identically every fs / gcd(f, fs) samples.
double tone_sample(double freq_hz, std::size_t n, int fs) {
  const double cycles = std::fmod(freq_hz * static_cast<double>(n), static_cast<double>(fs));
  return std::sin(2.0 * std::numbers::pi * cycles / fs);
}

}  // namespace

SynthResult synthesize(const SynthSpec& spec, std::size_t hop_samples) {
  if (spec.sections.empty()) throw Error(ErrorKind::InvalidSpec, "sections: empty section list");
  if (spec.sample_rate_hz <= 0) throw Error(ErrorKind::InvalidSpec, "sample_rate: must be > 0");
  if (hop_samples == 0) throw Error(ErrorKind::InvalidArgument, "hop_samples must be > 0");

  std::vector<std::size_t> lengths;
  for (std::size_t i = 0; i < spec.sections.size(); ++i) {
    const auto& sec = spec.sections[i];
    const std::string where = "section " + std::to_string(i + 1);
    if (!(sec.duration_ms > 0.0)) throw Error(ErrorKind::InvalidSpec, where + ": duration_ms must be > 0");
    if (!(sec.amplitude > 0.0 && sec.amplitude <= 1.0)) {
      throw Error(ErrorKind::InvalidSpec, where + ": amplitude must lie in (0, 1]");
    }
    if ((sec.kind == SectionKind::Tone || sec.kind == SectionKind::TwoTone) && !(sec.frequency_hz > 0.0)) {
      throw Error(ErrorKind::InvalidSpec, where + ": frequency_hz must be > 0");
    }
    if (sec.kind == SectionKind::TwoTone && !(sec.frequency2_hz > 0.0)) {
      throw Error(ErrorKind::InvalidSpec, where + ": frequency2_hz must be > 0");
    }
    const auto len = static_cast<std::size_t>(std::llround(sec.duration_ms * spec.sample_rate_hz / 1000.0));
    if (len == 0) throw Error(ErrorKind::InvalidSpec, where + ": duration_ms shorter than one sample");
    lengths.push_back(len);
  }

  SynthResult result;
  result.audio.sample_rate_hz = spec.sample_rate_hz;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto& out = result.audio.samples;
  for (std::size_t i = 0; i < spec.sections.size(); ++i) {
    const auto& sec = spec.sections[i];
    const std::size_t start = out.size();
    const std::size_t len = lengths[i];
    if (i > 0) {
      result.boundary_samples.push_back(start);
      result.boundary_frames.push_back(start / hop_samples);
    }
    switch (sec.kind) {
      case SectionKind::Tone:
        for (std::size_t n = start; n < start + len; ++n) {
          out.push_back(sec.amplitude * tone_sample(sec.frequency_hz, n, spec.sample_rate_hz));
        }
        break;
      case SectionKind::TwoTone:
        for (std::size_t n = start; n < start + len; ++n) {
          const double s = tone_sample(sec.frequency_hz, n, spec.sample_rate_hz) +
                           tone_sample(sec.frequency2_hz, n, spec.sample_rate_hz);
          out.push_back(0.5 * sec.amplitude * s);
        }
        break;
      case SectionKind::FilteredNoise: {
        const auto& a = sec.ar_coefficients;
        std::vector<double> x(len, 0.0);
        double peak = 0.0;
        for (std::size_t n = 0; n < len; ++n) {
          double acc = gauss(rng);
          for (std::size_t k = 0; k < a.size() && k < n; ++k) acc += a[k] * x[n - 1 - k];
          x[n] = acc;
          peak = std::max(peak, std::abs(acc));
        }
        if (!std::isfinite(peak)) {
          throw Error(ErrorKind::InvalidSpec, "section " + std::to_string(i + 1) + ": ar: unstable filter");
        }
        const double scale = peak > 0.0 ? sec.amplitude / peak : 0.0;
        for (double v : x) out.push_back(v * scale);
        break;
      }
      case SectionKind::Silence:
        out.insert(out.end(), len, 0.0);
        break;
    }
  }
  if (out.size() < 9 * hop_samples) {
    throw Error(ErrorKind::InvalidSpec, "sections: total duration shorter than 9 frame hops");
  }
  return result;
}

}  // namespace mhfseg
