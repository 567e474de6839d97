#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

#include "mhfseg/error.hpp"
#include "mhfseg/evaluate.hpp"
#include "mhfseg/measures.hpp"
#include "mhfseg/mhf.hpp"
#include "mhfseg/segmenter.hpp"
#include "mhfseg/signal_io.hpp"
#include "mhfseg/spectral.hpp"

namespace py = pybind11;
using namespace mhfseg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

FrameMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array (frames x parameters)");
  FrameMatrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.row(0).data());
  return m;
}

py::array_t<double> from_matrix(const FrameMatrix& m) {
  py::array_t<double> out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

template <typename E, typename Parse>
E parse_or_throw(const std::string& name, Parse parse, const char* what) {
  const auto v = parse(name);
  if (!v) throw py::value_error(std::string("unknown ") + what + " '" + name + "'");
  return *v;
}

MeasureKind measure_of(const std::string& s) { return parse_or_throw<MeasureKind>(s, parse_measure, "measure"); }

AnalysisKind analysis_of(const std::string& s) {
  if (s == "fft") return AnalysisKind::FftMagnitude;
  if (s == "lpc") return AnalysisKind::Lpc;
  throw py::value_error("analysis must be 'fft' or 'lpc'");
}

Taper taper_of(const std::string& s) {
  if (s == "hamming") return Taper::Hamming;
  if (s == "rectangular") return Taper::Rectangular;
  throw py::value_error("taper must be 'hamming' or 'rectangular'");
}

MhfConfig mhf_config(std::size_t context, const std::string& stage1, const std::string& stage2,
                     const std::string& measure, bool exclude_center, bool energy_exclude_center) {
  MhfConfig c;
  c.context = context;
  c.stage1 = parse_or_throw<Stage1Kind>(stage1, parse_stage1, "stage1 filter");
  c.stage2 = parse_or_throw<Stage2Kind>(stage2, parse_stage2, "stage2 filter");
  c.measure = measure_of(measure);
  c.exclude_center = exclude_center;
  c.energy_exclude_center = energy_exclude_center;
  return c;
}

py::dict trace_dict(const VariationTrace& tr) {
  py::dict d;
  d["values"] = to_array(tr.values);
  d["argmin_index"] = to_array(tr.argmin_index);
  d["energy"] = to_array(tr.energy);
  return d;
}

py::list levels_list(const std::vector<Level>& levels) {
  py::list out;
  for (const auto& l : levels) out.append(py::make_tuple(l.threshold, l.boundaries));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Speech segmentation with multilevel hybrid (mean/min) filters";

  static py::exception<Error> error_type(m, "MhfsegError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(std::string(e.what()));
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  // signal_io
  m.def("load_wav", [](const std::filesystem::path& path) {
    const auto buf = load_wav(path);
    return py::make_tuple(to_array(buf.samples), buf.sample_rate_hz);
  }, py::arg("path"), "Read mono 16-bit PCM; returns (samples, sample_rate).");
  m.def("save_wav", [](const Array& samples, int sample_rate, const std::filesystem::path& path) {
    return save_wav(AudioBuffer{to_vector(samples), sample_rate}, path);
  }, py::arg("samples"), py::arg("sample_rate"), py::arg("path"), "Write mono 16-bit PCM; returns the clip count.");
  m.def("synthesize", [](const std::string& spec_text, std::size_t hop) {
    const auto r = synthesize(parse_synth_spec(spec_text), hop);
    py::dict d;
    d["samples"] = to_array(r.audio.samples);
    d["sample_rate"] = r.audio.sample_rate_hz;
    d["boundary_samples"] = r.boundary_samples;
    d["boundary_frames"] = r.boundary_frames;
    return d;
  }, py::arg("spec_text"), py::arg("hop") = 64, "Render a synth spec (text format) with its truth boundaries.");
  m.def("add_gaussian_noise", [](const Array& samples, double snr_db, std::uint64_t seed) {
    auto r = add_gaussian_noise(AudioBuffer{to_vector(samples), 8000}, snr_db, seed);
    return py::make_tuple(to_array(r.audio.samples), r.clipped);
  }, py::arg("samples"), py::arg("snr_db"), py::arg("seed"));
  m.def("add_impulse_noise", [](const Array& samples, double probability, double amplitude, std::uint64_t seed) {
    return to_array(add_impulse_noise(AudioBuffer{to_vector(samples), 8000}, probability, amplitude, seed).samples);
  }, py::arg("samples"), py::arg("probability"), py::arg("amplitude"), py::arg("seed"));

  // spectral
  m.def("frame_signal", [](const Array& samples, std::size_t frame_len, std::size_t hop, const std::string& taper) {
    return from_matrix(frame_signal(AudioBuffer{to_vector(samples), 8000}, FrameParams{frame_len, hop, taper_of(taper)}));
  }, py::arg("samples"), py::arg("frame_len") = 128, py::arg("hop") = 64, py::arg("taper") = "hamming");
  m.def("magnitude_spectrum", [](const Array& frame) { return to_array(magnitude_spectrum(to_vector(frame))); },
        py::arg("frame"));
  m.def("autocorrelation", [](const Array& frame, std::size_t order) {
    return to_array(autocorrelation(to_vector(frame), order));
  }, py::arg("frame"), py::arg("order"));
  m.def("lpc_coefficients", [](const Array& frame, std::size_t order) {
    const auto r = lpc_coefficients(to_vector(frame), order);
    return py::make_tuple(to_array(r.coefficients), r.silent);
  }, py::arg("frame"), py::arg("order") = 10, "Returns (a[1..order], silent).");
  m.def("analyze", [](const Array& samples, int sample_rate, const std::string& analysis, std::size_t frame_len,
                      std::size_t hop, const std::string& taper, std::size_t lpc_order) {
    const auto seq = analyze(AudioBuffer{to_vector(samples), sample_rate}, FrameParams{frame_len, hop, taper_of(taper)},
                             analysis_of(analysis), lpc_order);
    return from_matrix(seq.vectors);
  }, py::arg("samples"), py::arg("sample_rate") = 8000, py::arg("analysis") = "fft", py::arg("frame_len") = 128,
     py::arg("hop") = 64, py::arg("taper") = "hamming", py::arg("lpc_order") = 10);

  // measures
  m.def("dist", [](const Array& u, const Array& v, const std::string& measure) {
    return dist(to_vector(u), to_vector(v), measure_of(measure));
  }, py::arg("u"), py::arg("v"), py::arg("measure") = "l2");
  m.def("pinv_energy", [](const Array& u, const Array& v) { return pinv_energy(to_vector(u), to_vector(v)); },
        py::arg("u"), py::arg("v"));

  // mhf
  m.def("variation_function", [](const Array& vectors, std::size_t context, const std::string& stage1,
                                 const std::string& stage2, const std::string& measure, bool exclude_center,
                                 bool energy_exclude_center) {
    const auto cfg = mhf_config(context, stage1, stage2, measure, exclude_center, energy_exclude_center);
    return trace_dict(variation_function(to_matrix(vectors), cfg));
  }, py::arg("vectors"), py::arg("context") = 4, py::arg("stage1") = "mean", py::arg("stage2") = "min",
     py::arg("measure") = "l2", py::arg("exclude_center") = false, py::arg("energy_exclude_center") = true,
     "MHF over a (frames x parameters) array; returns dict(values, argmin_index, energy).");
  m.def("window_usage", [](const Array& values, const std::vector<std::size_t>& index, std::size_t context,
                           double min_value) {
    return to_array(window_usage(to_vector(values), index, context, min_value).percent);
  }, py::arg("values"), py::arg("argmin_index"), py::arg("context") = 4, py::arg("min_value") = 0.1);

  // segmenter
  m.def("energy_marks", [](const Array& energy, double threshold, std::size_t min_sep) {
    return energy_marks(to_vector(energy), threshold, min_sep);
  }, py::arg("energy"), py::arg("threshold") = 2.5, py::arg("min_sep") = 4);
  m.def("local_normalize", [](const Array& values, const std::vector<std::size_t>& marks) {
    return to_array(local_normalize(to_vector(values), marks));
  }, py::arg("values"), py::arg("marks"));
  m.def("pick_peaks", [](const Array& values, double threshold, std::size_t min_sep) {
    return pick_peaks(to_vector(values), threshold, min_sep);
  }, py::arg("values"), py::arg("threshold") = 0.5, py::arg("min_sep") = 4);
  m.def("multilevel", [](const Array& values, const std::vector<double>& thresholds, std::size_t min_sep) {
    return levels_list(multilevel(to_vector(values), thresholds, min_sep));
  }, py::arg("values"), py::arg("thresholds"), py::arg("min_sep") = 4);
  m.def("segment", [](const Array& samples, int sample_rate, const std::string& analysis, std::size_t frame_len,
                      std::size_t hop, const std::string& taper, std::size_t context, const std::string& stage1,
                      const std::string& stage2, const std::string& measure, std::vector<double> levels,
                      double energy_threshold, std::size_t min_sep, std::size_t lpc_order) {
    SegmenterConfig sc;
    sc.level_thresholds = std::move(levels);
    sc.energy_threshold = energy_threshold;
    sc.min_separation = min_sep;
    const auto seg = segment(AudioBuffer{to_vector(samples), sample_rate}, FrameParams{frame_len, hop, taper_of(taper)},
                             analysis_of(analysis), mhf_config(context, stage1, stage2, measure, false, true), sc,
                             lpc_order);
    py::dict d = trace_dict(seg.trace);
    d["normalized"] = to_array(seg.normalized);
    d["energy_marks"] = seg.energy_marks;
    d["levels"] = levels_list(seg.levels);
    std::vector<double> times;
    for (std::size_t t = 0; t < seg.trace.size(); ++t) times.push_back(seg.boundary_time_s(t));
    d["frame_times"] = to_array(times);
    return d;
  }, py::arg("samples"), py::arg("sample_rate") = 8000, py::arg("analysis") = "fft", py::arg("frame_len") = 128,
     py::arg("hop") = 64, py::arg("taper") = "hamming", py::arg("context") = 4, py::arg("stage1") = "mean",
     py::arg("stage2") = "min", py::arg("measure") = "l2", py::arg("levels") = std::vector<double>{0.7, 0.5, 0.3},
     py::arg("energy_threshold") = 2.5, py::arg("min_sep") = 4, py::arg("lpc_order") = 10);

  // evaluate
  m.def("match_boundaries", [](const std::vector<double>& ref, const std::vector<double>& hyp, double tol) {
    const auto r = match_boundaries(ref, hyp, tol);
    py::dict d;
    d["hits"] = r.hits;
    d["misses"] = r.misses;
    d["false_alarms"] = r.false_alarms;
    d["precision"] = r.precision;
    d["recall"] = r.recall;
    d["f1"] = r.f1;
    d["mean_absolute_offset_frames"] = r.mean_absolute_offset_frames;
    return d;
  }, py::arg("reference"), py::arg("hypothesis"), py::arg("tolerance_frames") = 2.0);
  m.def("peak_widths", [](const Array& values, double rel_height) {
    py::list out;
    for (const auto& p : peak_widths(to_vector(values), rel_height)) out.append(py::make_tuple(p.frame, p.width));
    return out;
  }, py::arg("values"), py::arg("rel_height") = 0.5);
}
