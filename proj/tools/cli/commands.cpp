#include "cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cli/svg.hpp"
#include "qmon/analytic.hpp"
#include "qmon/evolve.hpp"
#include "qmon/markov.hpp"
#include "qmon/sample.hpp"

#ifndef QMON_VERSION
#define QMON_VERSION "0.0.0"
#endif

namespace qmon::cli {

namespace {

constexpr double kTauMatchTol = 1e-9;

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("error while writing " + path.string());
}

SweepTable read_table(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return read_csv(in);
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json blocks_json(const BlockStructure &b) {
    Json out = Json::array();
    for (const auto &block : b.blocks) out.push_back(block);
    return out;
}

Json model_json(const ModelChoice &choice, const Model &m) {
    Json j;
    j["name"] = m.name();
    j["kind"] = std::string(to_string(m.kind()));
    if (!choice.file.empty()) j["file"] = choice.file.string();
    j["labels"] = m.basis().labels();
    return j;
}

Json run_config_json(const RunConfig &cfg) {
    Json j;
    j["engine"] = std::string(to_string(cfg.engine));
    j["tau"] = {{"start", cfg.tau.start}, {"stop", cfg.tau.stop}, {"count", cfg.tau.count}};
    j["n_max"] = cfg.n_max;
    j["gamma"] = cfg.gamma;
    if (cfg.engine == Engine::sample) {
        j["n_shots"] = cfg.n_shots;
        j["seed"] = cfg.seed;
    }
    return j;
}

Json header(const char *command) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "qmon";
    j["version"] = version();
    j["command"] = command;
    return j;
}

bool is_builtin(const Model &m) { return m.kind() != ModelKind::custom; }

/// max_k |P^1_k(exact) - (L P^0)_k|; nonzero only when the initial state
/// carries coherence between coupled blocks of the measurement basis.
double first_cycle_gap(const Model &m, const TransitionMatrix &l, double tau) {
    const auto exact = run_exact(m, tau, 1);
    const auto chain = propagate(l, m.initial_probabilities(), 1);
    double gap = 0.0;
    for (std::size_t k = 0; k < m.dim(); ++k) gap = std::max(gap, std::abs(exact.at(1, k) - chain.at(1, k)));
    return gap;
}

std::vector<std::string> computational_labels(std::size_t dim) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < dim) ++bits;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dim; ++i) {
        if ((std::size_t{1} << bits) != dim) {
            out.push_back(std::to_string(i));
            continue;
        }
        std::string s;
        for (std::size_t b = bits; b-- > 0;) s += (i >> b) & 1 ? '1' : '0';
        out.push_back(s.empty() ? "0" : s);
    }
    return out;
}

std::size_t find_tau(const SweepTable &t, double tau) {
    for (std::size_t i = 0; i < t.taus.size(); ++i)
        if (std::abs(t.taus[i] - tau) <= kTauMatchTol) return i;
    throw DataError("tau " + format_double(tau) + " is not on the grid of the input file");
}

} // namespace

std::string version() { return QMON_VERSION; }

std::string_view to_string(Engine e) {
    switch (e) {
    case Engine::exact:
        return "exact";
    case Engine::markov:
        return "markov";
    case Engine::closed_form:
        return "closed_form";
    case Engine::sample:
        return "sample";
    }
    return "unknown";
}

Engine parse_engine(std::string_view name) {
    for (auto e : {Engine::exact, Engine::markov, Engine::closed_form, Engine::sample})
        if (to_string(e) == name) return e;
    throw InvalidArgument("unknown engine '" + std::string(name) + "' (expected exact, markov, closed_form or sample)");
}

std::vector<double> TauGrid::points() const {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = start;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    out.back() = stop;
    return out;
}

Model ModelChoice::load() const { return file.empty() ? model_by_name(name) : load_model_file(file); }

void RunConfig::validate() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (!(tau.start >= 0.0 && tau.stop <= two_pi && tau.start <= tau.stop)) {
        throw InvalidArgument("tau grid must satisfy 0 <= tau-start <= tau-stop <= 2 pi");
    }
    if (tau.count < 1) throw InvalidArgument("tau-count must be at least 1");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in [0, 1]");
    if (n_shots < 1) throw InvalidArgument("shots must be at least 1");
}

SweepTable simulate_table(const RunConfig &cfg, const Model &m) {
    cfg.validate();
    if (cfg.engine == Engine::closed_form && !is_builtin(m)) {
        throw InvalidArgument("engine closed_form has no formula for custom model '" + m.name() + "'");
    }
    SweepTable table;
    table.labels = m.basis().labels();
    for (double tau : cfg.tau.points()) {
        table.taus.push_back(tau);
        switch (cfg.engine) {
        case Engine::exact:
            table.traces.push_back(run_exact(m, tau, cfg.n_max, NoiseParams(cfg.gamma)));
            break;
        case Engine::markov: {
            const auto noiseless = propagate(build_transition_matrix(m, tau), m.initial_probabilities(), cfg.n_max);
            table.traces.push_back(noisy_closed_form(noiseless, cfg.gamma, m.dim()));
            break;
        }
        case Engine::closed_form:
            table.traces.push_back(
                noisy_closed_form(analytic::closed_form_trace(m.kind(), tau, cfg.n_max), cfg.gamma, m.dim()));
            break;
        case Engine::sample: {
            ShotConfig shots{cfg.n_shots, cfg.seed, cfg.n_max, tau, cfg.gamma};
            const auto emp = run_shots(m, shots);
            ProbabilityTrace err(cfg.n_max, m.dim());
            for (std::size_t n = 0; n <= cfg.n_max; ++n)
                for (std::size_t k = 0; k < m.dim(); ++k) err.at(n, k) = emp.stderr_of(n, k);
            table.traces.push_back(emp.probabilities());
            table.stderrs.push_back(std::move(err));
            break;
        }
        }
    }
    return table;
}

Json cmd_simulate(const RunConfig &cfg) {
    cfg.validate();
    const Model m = cfg.model.load();
    const auto table = simulate_table(cfg, m);

    Json summary = header("simulate");
    summary["model"] = model_json(cfg.model, m);
    summary["config"] = run_config_json(cfg);

    const auto blocks = detect_blocks(hamiltonian_in_basis(m));
    Json regimes = Json::array();
    for (double tau : table.taus) {
        Json r;
        r["tau"] = tau;
        try {
            const auto l = build_transition_matrix(m, tau);
            const auto rep = classify(l, blocks);
            r["kind"] = std::string(to_string(rep.kind));
            r["multiplicity_of_one"] = rep.multiplicity_of_one;
            r["has_minus_one"] = rep.has_minus_one;
            r["first_cycle_gap"] = first_cycle_gap(m, l, tau);
        } catch (const InvalidArgument &e) {
            // complex V^dagger H V gives a non-symmetric L; no chain analysis then
            r["kind"] = nullptr;
            r["error"] = e.what();
        }
        regimes.push_back(std::move(r));
    }
    summary["regimes"] = std::move(regimes);

    if (cfg.engine == Engine::sample) {
        double worst = 0.0;
        for (std::size_t i = 0; i < table.taus.size(); ++i) {
            const auto exact = run_exact(m, table.taus[i], cfg.n_max, NoiseParams(cfg.gamma));
            worst = std::max(worst, max_abs_difference(exact, table.traces[i]));
        }
        const double bound = 5.0 / std::sqrt(static_cast<double>(cfg.n_shots));
        summary["sample_check"] = {{"max_abs_delta_vs_exact", worst}, {"bound", bound}, {"within_bound", worst < bound}};
    }

    std::ostringstream csv;
    write_csv(csv, table);
    write_text(cfg.out_dir / "trace.csv", csv.str());
    summary["files"] = {"trace.csv", "summary.json"};
    write_text(cfg.out_dir / "summary.json", summary.dump(2) + "\n");
    return summary;
}

Json cmd_analyze(const RunConfig &cfg) {
    cfg.validate();
    const Model m = cfg.model.load();
    const auto blocks = detect_blocks(hamiltonian_in_basis(m));
    const auto p0 = m.initial_probabilities();

    Json report = header("analyze");
    report["model"] = model_json(cfg.model, m);
    report["config"] = {{"tau", {{"start", cfg.tau.start}, {"stop", cfg.tau.stop}, {"count", cfg.tau.count}}}};
    report["hamiltonian_blocks"] = blocks_json(blocks);

    Json entries = Json::array();
    for (double tau : cfg.tau.points()) {
        const auto l = build_transition_matrix(m, tau);
        const auto s = spectrum(l);
        const auto rep = classify(l, blocks);
        const auto lim = stationary_limit(l, p0);
        Json e;
        e["tau"] = tau;
        e["eigenvalues"] = s.eigenvalues;
        e["kind"] = std::string(to_string(rep.kind));
        e["multiplicity_of_one"] = rep.multiplicity_of_one;
        e["has_minus_one"] = rep.has_minus_one;
        e["blocks"] = blocks_json(blocks);
        e["details"] = rep.details;
        e["stationary"] = lim ? Json(*lim) : Json(nullptr);
        e["divergent"] = !lim.has_value();
        e["first_cycle_gap"] = first_cycle_gap(m, l, tau);
        entries.push_back(std::move(e));
    }
    report["taus"] = std::move(entries);
    report["files"] = {"analysis.json"};
    write_text(cfg.out_dir / "analysis.json", report.dump(2) + "\n");
    return report;
}

NRange parse_n_range(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) throw InvalidArgument("n-fit-range must be FIRST,LAST");
    auto parse = [](std::string_view f) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
            throw InvalidArgument("n-fit-range: '" + std::string(f) + "' is not a nonnegative integer");
        }
        return v;
    };
    NRange r{parse(text.substr(0, comma)), parse(text.substr(comma + 1))};
    if (r.first > r.last) throw InvalidArgument("n-fit-range: FIRST must not exceed LAST");
    return r;
}

Json cmd_fit_noise(const FitConfig &cfg) {
    const auto table = read_table(cfg.input);
    const Model m = cfg.model.load();
    if (table.labels != m.basis().labels()) {
        throw DataError("columns of " + cfg.input.filename().string() + " do not match the labels of model '" +
                        m.name() + "'");
    }
    const std::size_t n_max = table.n_max();
    std::vector<std::pair<double, ProbabilityTrace>> measured;
    std::vector<std::pair<double, ProbabilityTrace>> reference;
    for (std::size_t i = 0; i < table.taus.size(); ++i) {
        const double tau = table.taus[i];
        measured.emplace_back(tau, table.traces[i]);
        reference.emplace_back(tau, is_builtin(m) ? analytic::closed_form_trace(m.kind(), tau, n_max)
                                                  : run_exact(m, tau, n_max));
    }
    const NRange range = cfg.range.value_or(NRange{1, n_max});
    if (range.last > n_max) {
        throw InvalidArgument("n-fit-range ends at " + std::to_string(range.last) + " but the input stops at n = " +
                              std::to_string(n_max));
    }
    const auto fit = fit_gamma(tau_average(measured), tau_average(reference), m.dim(), range);

    Json out = header("fit-noise");
    out["input"] = cfg.input.string();
    out["model"] = model_json(cfg.model, m);
    out["gamma"] = fit.gamma;
    out["residual_sum_sq"] = fit.residual_sum_sq;
    out["n_noise"] = finite_or_null(fit.n_noise);
    out["n_noise_x3"] = finite_or_null(3.0 * fit.n_noise);
    out["fitted_on"] = {fit.fitted_on.first, fit.fitted_on.last};
    if (cfg.layers) {
        const auto hw = cfg.hw_profile ? load_hardware_profile(*cfg.hw_profile) : HardwareProfile{};
        const double dt = cycle_duration(*cfg.layers, hw);
        out["timing"] = {{"layers", {cfg.layers->n_1q_layers, cfg.layers->n_cnot_layers, cfg.layers->n_meas_layers}},
                         {"cycle_duration_us", dt},
                         {"decay_rate_mhz", decay_rate(fit.gamma, dt)}};
    }
    out["files"] = {"fit.json"};
    write_text(cfg.out_dir / "fit.json", out.dump(2) + "\n");
    return out;
}

RenderKind parse_render_kind(std::string_view name) {
    for (auto k : {RenderKind::heatmap, RenderKind::lines, RenderKind::rho_grid})
        if (to_string(k) == name) return k;
    throw InvalidArgument("unknown render kind '" + std::string(name) + "' (expected heatmap, lines or rho_grid)");
}

std::string_view to_string(RenderKind k) {
    switch (k) {
    case RenderKind::heatmap:
        return "heatmap";
    case RenderKind::lines:
        return "lines";
    case RenderKind::rho_grid:
        return "rho_grid";
    }
    return "unknown";
}

std::string render_svg(const SweepTable &t, const RenderConfig &cfg) {
    const std::size_t dim = t.dim();
    const std::size_t n_max = t.n_max();
    // two-outcome data is shown as P_0 - P_1, otherwise one panel per outcome
    const bool magnetization = dim == 2;
    auto value = [&](std::size_t ti, std::size_t n, std::size_t k) {
        return magnetization ? t.traces[ti].at(n, 0) - t.traces[ti].at(n, 1) : t.traces[ti].at(n, k);
    };
    const std::size_t panels = magnetization ? 1 : dim;
    auto title = [&](std::size_t k) {
        return magnetization ? "P_" + t.labels[0] + " - P_" + t.labels[1] : "P_" + t.labels[k];
    };

    switch (cfg.kind) {
    case RenderKind::heatmap: {
        std::vector<HeatmapPanel> out;
        for (std::size_t k = 0; k < panels; ++k) {
            HeatmapPanel p;
            p.title = title(k);
            for (std::size_t n = 0; n <= n_max; ++n) p.x.push_back(static_cast<double>(n));
            p.y = t.taus;
            for (std::size_t ti = 0; ti < t.taus.size(); ++ti) {
                std::vector<double> row;
                for (std::size_t n = 0; n <= n_max; ++n) row.push_back(value(ti, n, k));
                p.values.push_back(std::move(row));
            }
            out.push_back(std::move(p));
        }
        return render_heatmaps(out, {"n", "tau"}, version());
    }
    case RenderKind::lines: {
        std::vector<LinePanel> out;
        for (std::size_t k = 0; k < panels; ++k) {
            LinePanel p{title(k), {}};
            for (std::size_t n : cfg.n_list) {
                if (n > n_max) throw DataError("n = " + std::to_string(n) + " exceeds n_max of the input");
                LineSeries s{"n=" + std::to_string(n), {}};
                for (std::size_t ti = 0; ti < t.taus.size(); ++ti) s.points.emplace_back(t.taus[ti], value(ti, n, k));
                p.series.push_back(std::move(s));
            }
            out.push_back(std::move(p));
        }
        return render_lines(out, {"tau", "probability"}, version());
    }
    case RenderKind::rho_grid: {
        if (!cfg.model || !cfg.tau || !cfg.n) throw InvalidArgument("rho_grid needs --model (or --model-file), --tau and --n");
        const Model m = cfg.model->load();
        if (m.basis().labels() != t.labels) throw DataError("input columns do not match the labels of the model");
        const std::size_t ti = find_tau(t, *cfg.tau);
        if (*cfg.n > n_max) throw DataError("n = " + std::to_string(*cfg.n) + " exceeds n_max of the input");

        // n >= 1: the post-measurement state is diagonal in the measurement basis
        const DensityMatrix rho_comp = *cfg.n == 0 ? DensityMatrix::pure(m.initial_state())
                                                   : mixture_of_basis_states(t.traces[ti].row(*cfg.n), m.basis());
        const auto rho_meas = rho_in_basis(rho_comp, m.basis(), BasisDirection::to_measurement);
        auto magnitudes = [](const ComplexMatrix &c) {
            RealMatrix r(c.dim());
            for (std::size_t i = 0; i < c.dim(); ++i)
                for (std::size_t j = 0; j < c.dim(); ++j) r(i, j) = std::abs(c(i, j));
            return r;
        };
        const std::string where = " (tau=" + format_double(t.taus[ti]) + ", n=" + std::to_string(*cfg.n) + ")";
        std::vector<MatrixPanel> out{
            {"|rho| measurement basis" + where, magnitudes(rho_meas.matrix()), m.basis().labels()},
            {"|rho| computational basis" + where, magnitudes(rho_comp.matrix()), computational_labels(m.dim())}};
        return render_matrices(out, version());
    }
    }
    throw InvalidArgument("unknown render kind");
}

Json cmd_render(const RenderConfig &cfg) {
    const auto table = read_table(cfg.input);
    const auto svg = render_svg(table, cfg);
    const auto path = cfg.output.value_or(cfg.out_dir / (std::string(to_string(cfg.kind)) + ".svg"));
    write_text(path, svg);
    Json out = header("render");
    out["kind"] = std::string(to_string(cfg.kind));
    out["files"] = {path.string()};
    return out;
}

Json cmd_timing(const TimingConfig &cfg) {
    const auto hw = cfg.hw_profile ? load_hardware_profile(*cfg.hw_profile) : HardwareProfile{};
    const double dt = cycle_duration(cfg.layers, hw);
    Json out = header("timing");
    out["layers"] = {{"single_qubit", cfg.layers.n_1q_layers},
                     {"cnot", cfg.layers.n_cnot_layers},
                     {"measurement", cfg.layers.n_meas_layers}};
    out["durations_ns"] = {{"single_qubit", hw.dur_1q_ns}, {"cnot", hw.dur_cnot_ns}, {"readout", hw.dur_readout_ns}};
    out["cycle_duration_us"] = dt;
    if (cfg.gamma) {
        out["gamma"] = *cfg.gamma;
        out["decay_rate_mhz"] = decay_rate(*cfg.gamma, dt);
        if (*cfg.gamma > 0.0 && *cfg.gamma < 1.0) out["n_noise"] = noise_timescale(*cfg.gamma);
    }
    return out;
}

} // namespace qmon::cli
