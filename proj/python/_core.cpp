#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmon/analytic.hpp"
#include "qmon/errors.hpp"
#include "qmon/evolve.hpp"
#include "qmon/markov.hpp"
#include "qmon/model.hpp"
#include "qmon/noisefit.hpp"
#include "qmon/sample.hpp"

namespace py = pybind11;
using namespace qmon;

namespace {

template <typename T>
py::array_t<T> to_array(const Matrix<T> &m) {
    py::array_t<T> out({m.dim(), m.dim()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array(const ProbabilityTrace &t) {
    py::array_t<double> out({t.rows(), t.dim()});
    for (std::size_t n = 0; n < t.rows(); ++n)
        for (std::size_t k = 0; k < t.dim(); ++k) out.mutable_at(n, k) = t.at(n, k);
    return out;
}

ProbabilityTrace from_array(const py::array_t<double, py::array::c_style | py::array::forcecast> &a) {
    if (a.ndim() != 2 || a.shape(0) < 1) throw InvalidArgument("expected a (n_max + 1, dim) array");
    ProbabilityTrace t(static_cast<std::size_t>(a.shape(0)) - 1, static_cast<std::size_t>(a.shape(1)));
    for (py::ssize_t n = 0; n < a.shape(0); ++n)
        for (py::ssize_t k = 0; k < a.shape(1); ++k) t.at(n, k) = a.at(n, k);
    return t;
}

TauAveragedTrace averaged(const std::vector<double> &taus,
                          const py::array_t<double, py::array::c_style | py::array::forcecast> &traces) {
    if (traces.ndim() != 3 || static_cast<std::size_t>(traces.shape(0)) != taus.size())
        throw InvalidArgument("expected a (len(taus), n_max + 1, dim) array");
    std::vector<std::pair<double, ProbabilityTrace>> rows;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        auto slice = py::array_t<double>::ensure(traces[py::int_(i)]);
        rows.emplace_back(taus[i], from_array(slice));
    }
    return tau_average(rows);
}

py::dict regime(const Model &m, double tau) {
    const auto l = build_transition_matrix(m, tau);
    const auto report = classify(l, detect_blocks(hamiltonian_in_basis(m)));
    py::dict d;
    d["kind"] = std::string(to_string(report.kind));
    d["multiplicity_of_one"] = report.multiplicity_of_one;
    d["has_minus_one"] = report.has_minus_one;
    d["blocks"] = report.blocks.blocks;
    d["details"] = report.details;
    d["eigenvalues"] = spectrum(l).eigenvalues;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "qmon core: repeated projective measurement of small quantum systems";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvalidArgument &e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<Model>(m, "Model")
        .def_static("builtin", &model_by_name, py::arg("name"))
        .def_static("from_json", &parse_model_json, py::arg("text"))
        .def_static("load", [](const std::string &path) { return load_model_file(path); }, py::arg("path"))
        .def_property_readonly("name", &Model::name)
        .def_property_readonly("kind", [](const Model &self) { return std::string(to_string(self.kind())); })
        .def_property_readonly("dim", &Model::dim)
        .def_property_readonly("labels", [](const Model &self) { return self.basis().labels(); })
        .def_property_readonly("hamiltonian", [](const Model &self) { return to_array(self.hamiltonian()); })
        .def_property_readonly("basis", [](const Model &self) { return to_array(self.basis().v()); },
                               "column k is the k-th measurement basis state")
        .def_property_readonly("initial_state", &Model::initial_state)
        .def_property_readonly("initial_probabilities", &Model::initial_probabilities)
        .def("__repr__", [](const Model &self) { return "<qmon.Model " + self.name() + ">"; });

    m.def(
        "run_exact",
        [](const Model &model, double tau, std::size_t n_max, double gamma) {
            return to_array(run_exact(model, tau, n_max, NoiseParams{gamma}));
        },
        py::arg("model"), py::arg("tau"), py::arg("n_max"), py::arg("gamma") = 0.0,
        "outcome probabilities P[n, k] for n = 0..n_max from density-matrix evolution");

    m.def(
        "closed_form",
        [](const Model &model, double tau, std::size_t n_max, double gamma) {
            auto t = analytic::closed_form_trace(model.kind(), tau, n_max);
            if (gamma > 0.0) t = noisy_closed_form(t, gamma, model.dim());
            return to_array(t);
        },
        py::arg("model"), py::arg("tau"), py::arg("n_max"), py::arg("gamma") = 0.0);

    m.def(
        "transition_matrix",
        [](const Model &model, double tau) { return to_array(build_transition_matrix(model, tau).matrix()); },
        py::arg("model"), py::arg("tau"));

    m.def("classify", &regime, py::arg("model"), py::arg("tau"));

    m.def(
        "stationary_limit",
        [](const Model &model, double tau) {
            const auto p0 = model.initial_probabilities();
            return stationary_limit(build_transition_matrix(model, tau), p0);
        },
        py::arg("model"), py::arg("tau"), "n -> infinity limit of P, or None when it does not exist");

    m.def(
        "run_shots",
        [](const Model &model, double tau, std::size_t n_max, std::size_t n_shots, std::uint64_t seed, double gamma) {
            ShotConfig cfg{n_shots, seed, n_max, tau, gamma};
            EmpiricalTrace t = [&] {
                py::gil_scoped_release release;
                return qmon::run_shots(model, cfg);
            }();
            py::array_t<double> err({t.rows(), t.dim()});
            for (std::size_t n = 0; n < t.rows(); ++n)
                for (std::size_t k = 0; k < t.dim(); ++k) err.mutable_at(n, k) = t.stderr_of(n, k);
            return py::make_tuple(to_array(t.probabilities()), err);
        },
        py::arg("model"), py::arg("tau"), py::arg("n_max"), py::arg("n_shots") = 8192, py::arg("seed") = 0,
        py::arg("gamma") = 0.0, "returns (probabilities, standard errors), each (n_max + 1, dim)");

    m.def(
        "fit_gamma",
        [](const std::vector<double> &taus, const py::array_t<double> &measured, const py::array_t<double> &noiseless,
           std::size_t first, std::optional<std::size_t> last) {
            const auto meas = averaged(taus, measured);
            const auto ref = averaged(taus, noiseless);
            const NRange range{first, last.value_or(meas.values.n_max())};
            const auto fit = qmon::fit_gamma(meas, ref, meas.values.dim(), range);
            py::dict d;
            d["gamma"] = fit.gamma;
            d["residual_sum_sq"] = fit.residual_sum_sq;
            d["n_noise"] = fit.n_noise;
            d["fitted_on"] = py::make_tuple(fit.fitted_on.first, fit.fitted_on.last);
            return d;
        },
        py::arg("taus"), py::arg("measured"), py::arg("noiseless"), py::arg("first") = 1, py::arg("last") = py::none(),
        "least-squares depolarizing strength; traces are (len(taus), n_max + 1, dim) over a [0, pi] grid");

    m.def("noise_timescale", &noise_timescale, py::arg("gamma"));

    m.def(
        "cycle_duration",
        [](std::size_t n_1q, std::size_t n_cnot, std::size_t n_meas) {
            return cycle_duration(LayerCount{n_1q, n_cnot, n_meas}, HardwareProfile{});
        },
        py::arg("n_1q_layers"), py::arg("n_cnot_layers"), py::arg("n_meas_layers") = 1,
        "microseconds per cycle on the default hardware profile");

    m.def("decay_rate", &decay_rate, py::arg("gamma"), py::arg("dt_us"), "MHz");
}
