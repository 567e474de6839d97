#include <doctest.h>

#include <fstream>
#include <iterator>
#include <sstream>

#include "mhfseg/cli.hpp"
#include "mhfseg/labels.hpp"
#include "support/temp_dir.hpp"

using namespace mhfseg;
using testing_support::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const char* kTwoTone = R"(seed = 3
[section]
kind = tone
duration_ms = 300
frequency_hz = 700

[section]
kind = tone
duration_ms = 260
frequency_hz = 2300
)";

}  // namespace

TEST_CASE("synth, segment, eval round trip") {
  TempDir dir("cli_round");
  write_text(dir / "a.spec", kTwoTone);
  const auto wav = (dir / "a.wav").string();
  REQUIRE(run({"synth", (dir / "a.spec").string(), "-o", wav}).code == 0);
  const auto truth = read_labels(dir / "a.truth.txt");
  REQUIRE(truth.size() == 2);
  CHECK(truth[1].start_s == doctest::Approx(0.3));

  const auto labels = (dir / "a.labels.txt").string();
  const auto seg = run({"--threshold", "0.5", "segment", wav, "-o", labels});
  REQUIRE(seg.code == 0);
  const auto hyp = boundary_times(read_labels(labels), "L0.5");
  REQUIRE(hyp.size() == 1);
  CHECK(std::abs(hyp[0] - 0.3) <= 0.016);

  const auto ev = run({"eval", "--ref", (dir / "a.truth.txt").string(), "--hyp", labels, "--tsv"});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("hits\tmisses") == 0);
  CHECK(ev.out.find("\n1\t0\t0\t1.000000\t1.000000\t1.000000\t") != std::string::npos);

  SUBCASE("stdout output and batch mode") {
    const auto s = run({"segment", wav});
    CHECK(s.code == 0);
    CHECK(s.out.find("L0.7") != std::string::npos);

    REQUIRE(run({"synth", (dir / "a.spec").string(), "-o", (dir / "b.wav").string()}).code == 0);
    const auto out_dir = dir / "out";
    std::filesystem::create_directories(out_dir);
    CHECK(run({"segment", wav, (dir / "b.wav").string(), "--out-dir", out_dir.string()}).code == 0);
    CHECK(slurp(out_dir / "a.labels.txt") == slurp(out_dir / "b.labels.txt"));
    CHECK(run({"segment", wav, (dir / "b.wav").string(), "-o", labels}).code == cli::kUsage);
  }
}

TEST_CASE("synth is deterministic") {
  TempDir dir("cli_det");
  write_text(dir / "n.spec", "seed = 9\n[section]\nkind = filtered-noise\nduration_ms = 200\nar = 0.9, -0.5\n");
  REQUIRE(run({"synth", (dir / "n.spec").string(), "-o", (dir / "1.wav").string()}).code == 0);
  REQUIRE(run({"synth", (dir / "n.spec").string(), "-o", (dir / "2.wav").string()}).code == 0);
  CHECK(slurp(dir / "1.wav") == slurp(dir / "2.wav"));
  CHECK(slurp(dir / "1.truth.txt") == slurp(dir / "2.truth.txt"));
}

TEST_CASE("trace and stats on a steady tone") {
  TempDir dir("cli_trace");
  write_text(dir / "t.spec", "[section]\nkind = tone\nduration_ms = 500\nfrequency_hz = 500\n");
  const auto wav = (dir / "t.wav").string();
  REQUIRE(run({"synth", (dir / "t.spec").string(), "-o", wav}).code == 0);
  const auto trace = (dir / "t.trace.tsv").string();
  REQUIRE(run({"segment", wav, "-o", (dir / "t.labels").string(), "--trace", trace}).code == 0);
  const auto rows = read_trace(trace);
  REQUIRE(rows.size() == 61);
  for (const auto& r : rows) {
    CHECK(r.value == 0.0);
    CHECK(r.energy == 2.0);
  }
  const auto st = run({"stats", "--trace", trace, "--min-value", "0.0", "--column", "v"});
  REQUIRE(st.code == 0);
  CHECK(st.out.find("window\tpercent\tcount") == 0);
  CHECK(st.out.find("# frames counted: 53") != std::string::npos);
}

TEST_CASE("noise subcommand") {
  TempDir dir("cli_noise");
  write_text(dir / "a.spec", kTwoTone);
  const auto wav = (dir / "a.wav").string();
  REQUIRE(run({"synth", (dir / "a.spec").string(), "-o", wav}).code == 0);
  CHECK(run({"noise", wav, "-o", (dir / "g.wav").string(), "--snr-db", "10"}).code == 0);
  CHECK(run({"noise", wav, "-o", (dir / "i.wav").string(), "--impulse-prob", "0.01"}).code == 0);
  CHECK(slurp(dir / "g.wav").size() == slurp(dir / "a.wav").size());
  CHECK(slurp(dir / "g.wav") != slurp(dir / "a.wav"));
  CHECK(run({"noise", wav, "-o", (dir / "x.wav").string()}).code == cli::kUsage);
  CHECK(run({"noise", wav, "-o", (dir / "x.wav").string(), "--snr-db", "10", "--impulse-prob", "0.1"}).code ==
        cli::kUsage);
}

TEST_CASE("error reporting") {
  TempDir dir("cli_err");
  const auto missing = (dir / "nope.wav").string();
  const auto r = run({"segment", missing});
  CHECK(r.code == cli::kIoFailure);
  CHECK(r.err.find(missing) != std::string::npos);

  write_text(dir / "bad.spec", "[section]\nkind = tone\nduration_ms = -5\n");
  const auto bad = run({"synth", (dir / "bad.spec").string(), "-o", (dir / "x.wav").string()});
  CHECK(bad.code == cli::kUsage);
  CHECK(bad.err.find("duration_ms") != std::string::npos);

  write_text(dir / "short.spec", "[section]\nkind = tone\nduration_ms = 300\nfrequency_hz = 500\n");
  REQUIRE(run({"synth", (dir / "short.spec").string(), "-o", (dir / "s.wav").string()}).code == 0);
  CHECK(run({"--threshold", "0.5", "--levels", "0.7,0.3", "segment", (dir / "s.wav").string()}).code ==
        cli::kUsage);
  CHECK(run({"--levels", "0.3,0.7", "segment", (dir / "s.wav").string()}).code == cli::kUsage);
  CHECK(run({"--measure", "bogus", "segment", (dir / "s.wav").string()}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}
