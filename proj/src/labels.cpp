#include "mhfseg/labels.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mhfseg/error.hpp"

namespace mhfseg {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    fields.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return fields;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line_no, std::string_view what) {
  T value{};
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("line {}: bad {} '{}'", line_no, what, text));
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw Error(ErrorKind::NotFound, path.string());
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

}  // namespace

std::string level_label(double threshold) { return fmt::format("L{:g}", threshold); }

void write_labels(std::ostream& os, const std::vector<LabelRecord>& records) {
  for (const auto& r : records) fmt::print(os, "{:.6f}\t{:.6f}\t{}\n", r.start_s, r.end_s, r.label);
}

void write_labels(const std::filesystem::path& path, const std::vector<LabelRecord>& records) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  write_labels(os, records);
  if (!os) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

std::vector<LabelRecord> read_labels(std::istream& is) {
  std::vector<LabelRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 2) throw Error(ErrorKind::InvalidArgument, fmt::format("line {}: expected start<TAB>end<TAB>label", line_no));
    LabelRecord r;
    r.start_s = parse_field<double>(fields[0], line_no, "start");
    r.end_s = parse_field<double>(fields[1], line_no, "end");
    if (fields.size() > 2) r.label = std::string(fields[2]);
    if (r.end_s < r.start_s) throw Error(ErrorKind::InvalidArgument, fmt::format("line {}: end before start", line_no));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<LabelRecord> read_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_labels(in);
}

std::vector<LabelRecord> segmentation_labels(const Segmentation& seg, bool marks_as_boundaries) {
  std::vector<LabelRecord> records;
  const double total = static_cast<double>(seg.num_samples) / seg.sample_rate_hz;
  for (const auto& level : seg.levels) {
    std::vector<std::size_t> cuts = level.boundaries;
    if (marks_as_boundaries) {
      cuts.insert(cuts.end(), seg.energy_marks.begin(), seg.energy_marks.end());
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    }
    const std::string tag = level_label(level.threshold);
    double start = 0.0;
    for (std::size_t b : cuts) {
      const double t = std::min(seg.boundary_time_s(b), total);
      records.push_back({start, t, tag});
      start = t;
    }
    records.push_back({start, total, tag});
  }
  for (std::size_t m : seg.energy_marks) {
    const double t = seg.boundary_time_s(m);
    records.push_back({t, t, "mark"});
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const LabelRecord& a, const LabelRecord& b) { return a.start_s < b.start_s; });
  return records;
}

std::vector<LabelRecord> truth_labels(const SynthSpec& spec, const SynthResult& synth) {
  std::vector<LabelRecord> records;
  const double sr = synth.audio.sample_rate_hz;
  double start = 0.0;
  for (std::size_t i = 0; i < spec.sections.size(); ++i) {
    const double end = i < synth.boundary_samples.size() ? synth.boundary_samples[i] / sr
                                                         : static_cast<double>(synth.audio.size()) / sr;
    records.push_back({start, end, std::string(to_string(spec.sections[i].kind))});
    start = end;
  }
  return records;
}

std::vector<double> boundary_times(const std::vector<LabelRecord>& records, const std::optional<std::string>& label) {
  std::set<double> times;
  for (const auto& r : records) {
    if (label && r.label != *label) continue;
    if (r.end_s == r.start_s || r.start_s > 0.0) times.insert(r.start_s);
  }
  return {times.begin(), times.end()};
}

void write_trace(std::ostream& os, const Segmentation& seg) {
  os << "frame_index\ttime_s\tv\targmin_index\tenergy\tv_normalized\n";
  const auto& tr = seg.trace;
  for (std::size_t t = 0; t < tr.size(); ++t) {
    fmt::print(os, "{}\t{:.6f}\t{:.17g}\t{}\t{:.17g}\t{:.17g}\n", t, seg.boundary_time_s(t), tr.values[t],
               tr.argmin_index[t], tr.energy[t], seg.normalized[t]);
  }
}

std::vector<TraceRow> read_trace(std::istream& is) {
  std::vector<TraceRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.rfind("frame_index", 0) == 0) continue;
    const auto f = split_tabs(line);
    if (f.size() != 6) throw Error(ErrorKind::InvalidArgument, fmt::format("line {}: expected 6 columns", line_no));
    TraceRow r;
    r.frame = parse_field<std::size_t>(f[0], line_no, "frame_index");
    r.time_s = parse_field<double>(f[1], line_no, "time_s");
    r.value = parse_field<double>(f[2], line_no, "v");
    r.argmin_index = parse_field<std::size_t>(f[3], line_no, "argmin_index");
    r.energy = parse_field<double>(f[4], line_no, "energy");
    r.normalized = parse_field<double>(f[5], line_no, "v_normalized");
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> read_trace(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_trace(in);
}

}  // namespace mhfseg
