#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "hocdvs/config.hpp"
#include "hocdvs/detect.hpp"
#include "hocdvs/error.hpp"
#include "hocdvs/experiment.hpp"
#include "hocdvs/io.hpp"
#include "hocdvs/stats.hpp"
#include "hocdvs/synth.hpp"

namespace py = pybind11;
using namespace hocdvs;

namespace {

py::array_t<double> to_array(std::span<const double> x) {
    py::array_t<double> out(static_cast<py::ssize_t>(x.size()));
    std::copy(x.begin(), x.end(), out.mutable_data());
    return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> traces_array(const TraceMatrix& t) {
    py::array_t<double> out({static_cast<py::ssize_t>(t.num_traces()), static_cast<py::ssize_t>(t.fiber_points())});
    std::copy(t.amplitudes().begin(), t.amplitudes().end(), out.mutable_data());
    return out;
}

TraceMatrix matrix_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                        double meters_per_point, double trace_rate_hz) {
    if (a.ndim() != 2) throw Error(ErrorCode::BadConfig, "traces must be a 2-D array");
    return TraceMatrix(a.shape(0), a.shape(1), to_vector(a), meters_per_point, trace_rate_hz);
}

py::dict report_dict(const DetectionReport& r) {
    py::dict d;
    d["method"] = std::string(to_string(r.method));
    d["peak_index"] = r.peak_index;
    d["peak_position_m"] = r.peak_position_m;
    d["location_snr_db"] = r.location_snr_db;
    d["spatial_resolution_m"] = r.spatial_resolution_m ? py::cast(*r.spatial_resolution_m) : py::none();
    d["window"] = r.window;
    d["detected"] = r.detected;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "HOC vibration detection core";

    static py::exception<Error> py_error(m, "HocError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(py_error, e.what());
        }
    });

    // statistics
    m.def("third_cumulant_zero_lag", [](py::array_t<double, py::array::c_style | py::array::forcecast> x) {
        return third_cumulant_zero_lag(center(Sequence(to_vector(x))));
    }, py::arg("x"), "Zero-lag c3 of x after mean removal.");
    m.def("third_cumulant_lagged",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> x, std::int64_t tau1, std::int64_t tau2) {
              return third_cumulant_lagged(center(Sequence(to_vector(x))), {tau1, tau2});
          },
          py::arg("x"), py::arg("tau1"), py::arg("tau2"));
    m.def("snr_db", [](double ps, double pn) { return snr_db(ps, pn); }, py::arg("p_signal"), py::arg("p_noise"));

    // synthesis
    m.def("gen_truncated_gaussian", [](std::size_t n, std::uint64_t seed) {
        return to_array(gen_truncated_gaussian(n, seed).samples());
    }, py::arg("n"), py::arg("seed"));
    m.def("asymmetrize",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> x, double lo, double hi, std::uint64_t seed) {
              return to_array(asymmetrize(Sequence(to_vector(x)), {lo, hi}, seed).samples());
          },
          py::arg("x"), py::arg("lo"), py::arg("hi"), py::arg("seed"));
    m.def("gen_square_wave",
          [](std::size_t n, double duty, std::int64_t period, double amplitude, std::int64_t phase) {
              return to_array(gen_square_wave(n, {duty, period, amplitude, phase}).samples());
          },
          py::arg("n"), py::arg("duty"), py::arg("period_samples"), py::arg("amplitude") = 1.0,
          py::arg("phase_samples") = 0);
    m.def("config_keys", &sim_config_keys);
    m.def("bench_config", [] { return to_config_text(bench_config()); },
          "Canonical config text for the bench geometry.");
    m.def("config_digest", [](const std::string& text) { return config_digest(parse_sim_config(text)); });
    m.def("synth_traces", [](const std::string& config_text) {
        return traces_array(synth_traces(parse_sim_config(config_text)));
    }, py::arg("config_text"), "W x M trace matrix for a config in file syntax.");

    // detection
    m.def("hoc_profile",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> traces, std::size_t window) {
              return to_array(hoc_profile(detrend(matrix_from(traces, 1.0, 1.0)), window).values);
          },
          py::arg("traces"), py::arg("window") = 100, "Detrends, then per-point c3 over the window.");
    m.def("analyze",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> traces, const std::string& method,
             std::size_t window, std::size_t pulse_width, double meters_per_point) {
              AnalysisOptions opt;
              opt.method = parse_method(method);
              opt.window = window;
              opt.pulse_width_points = pulse_width;
              const Analysis a = analyze(matrix_from(traces, meters_per_point, 1.0), opt);
              return py::make_tuple(to_array(a.profile.values), report_dict(a.report));
          },
          py::arg("traces"), py::arg("method") = "hoc", py::arg("window") = 100, py::arg("pulse_width") = 10,
          py::arg("meters_per_point") = 1.0);

    // io
    m.def("write_traces",
          [](const std::string& path, py::array_t<double, py::array::c_style | py::array::forcecast> traces,
             double meters_per_point, double trace_rate_hz) {
              write_traces(path, matrix_from(traces, meters_per_point, trace_rate_hz));
          },
          py::arg("path"), py::arg("traces"), py::arg("meters_per_point") = 1.0, py::arg("trace_rate_hz") = 1e4);
    m.def("read_traces", [](const std::string& path) {
        const TraceMatrix t = read_traces(path);
        py::dict meta;
        meta["meters_per_point"] = t.meters_per_point();
        meta["trace_rate_hz"] = t.trace_rate_hz();
        meta["provenance"] = t.provenance() == Provenance::Recorded ? "recorded" : "synthetic";
        return py::make_tuple(traces_array(t), meta);
    }, py::arg("path"));

    // experiments
    m.def("run_experiment",
          [](const std::string& preset, const std::string& out_dir, std::optional<std::string> seeds,
             const std::vector<std::string>& overrides) {
              const Preset p = parse_preset(preset);
              const SeedRange range = seeds ? parse_seed_range(*seeds) : default_seeds(p);
              std::vector<std::string> paths;
              for (const auto& path : write_experiment(p, out_dir, range, parse_overrides(overrides))) {
                  paths.push_back(path.string());
              }
              return paths;
          },
          py::arg("preset"), py::arg("out_dir"), py::arg("seeds") = py::none(),
          py::arg("overrides") = std::vector<std::string>{});
}
