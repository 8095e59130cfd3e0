#include <doctest.h>

#include "oracles.hpp"
#include "qmon/analytic.hpp"
#include "qmon/evolve.hpp"
#include "qmon/noisefit.hpp"
#include "qmon/sample.hpp"

using namespace qmon;
using oracle::pi;

namespace {

std::vector<double> uniform_grid(std::size_t count) {
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = pi * static_cast<double>(i) / static_cast<double>(count - 1);
    return g;
}

TauAveragedTrace averaged(ModelKind kind, std::size_t n_max, double gamma, std::size_t count = 33) {
    std::vector<std::pair<double, ProbabilityTrace>> traces;
    for (double tau : uniform_grid(count)) {
        auto t = analytic::closed_form_trace(kind, tau, n_max);
        traces.emplace_back(tau, noisy_closed_form(t, gamma, t.dim()));
    }
    return tau_average(traces);
}

} // namespace

TEST_CASE("tau_average of constant traces") {
    ProbabilityTrace c(2, 2);
    for (std::size_t n = 0; n <= 2; ++n) {
        c.at(n, 0) = 0.3;
        c.at(n, 1) = 0.7;
    }
    std::vector<std::pair<double, ProbabilityTrace>> traces;
    for (double tau : uniform_grid(5)) traces.emplace_back(tau, c);
    const auto avg = tau_average(traces);
    CHECK(max_abs_difference(avg.values, c) < 1e-15);
    CHECK(avg.tau_grid.size() == 5);
}

TEST_CASE("tau_average of the single-qubit closed form") {
    const auto avg = averaged(ModelKind::single_qubit, 4, 0.0, 65);
    // (1/pi) int_0^pi cos^2 = 1/2, and the trapezoid rule integrates it exactly
    // on a uniform grid over a full period
    CHECK_NEAR(avg.values.at(2, 0), 0.75, 1e-14);
    CHECK_NEAR(avg.values.at(0, 0), 1.0, 1e-15);
    CHECK(avg.values.max_normalization_error() < 1e-10);
}

TEST_CASE("tau_average input validation") {
    ProbabilityTrace t(1, 2);
    CHECK_THROWS_AS(tau_average({}), DataError);
    CHECK_THROWS_AS(tau_average({{0.0, t}}), DataError);
    CHECK_THROWS_AS(tau_average({{0.0, t}, {1.0, t}}), DataError);
    CHECK_THROWS_AS(tau_average({{0.0, t}, {2.0, t}, {1.0, t}, {pi, t}}), DataError);
    CHECK_THROWS_AS(tau_average({{0.0, t}, {pi, ProbabilityTrace(2, 2)}}), DataError);
}

TEST_CASE("tau_average commutes with the noisy closed form") {
    for (const auto kind : {ModelKind::singlet_triplet, ModelKind::bell}) {
        const auto noisy_then_avg = averaged(kind, 20, 0.12);
        const auto avg_then_noisy = noisy_closed_form(averaged(kind, 20, 0.0).values, 0.12, 4);
        CHECK(max_abs_difference(noisy_then_avg.values, avg_then_noisy) < 1e-12);
    }
}

TEST_CASE("fit_gamma recovers gamma on noiseless synthetic data") {
    for (const auto kind : {ModelKind::singlet_triplet, ModelKind::bell, ModelKind::single_qubit}) {
        const std::size_t dim = kind == ModelKind::single_qubit ? 2 : 4;
        const auto model = averaged(kind, 24, 0.0);
        for (double g : {0.0, 0.01, 0.033, 0.05, 0.1, 0.12, 0.2, 0.5}) {
            const auto fit = fit_gamma(averaged(kind, 24, g), model, dim, {1, 24});
            CHECK(std::abs(fit.gamma - g) < 1e-6);
            CHECK(fit.residual_sum_sq < 1e-12);
            CHECK(fit.fitted_on.first == 1);
            CHECK(fit.fitted_on.last == 24);
            if (g > 0.0) CHECK_NEAR(fit.n_noise, 1.0 / std::abs(std::log(1.0 - fit.gamma)), 1e-9);
        }
    }
}

TEST_CASE("fit_gamma residual is the objective at the fitted gamma") {
    const auto model = averaged(ModelKind::bell, 16, 0.0);
    auto measured = averaged(ModelKind::bell, 16, 0.07);
    measured.values.at(3, 0) += 0.01;
    measured.values.at(3, 1) -= 0.01;
    const auto fit = fit_gamma(measured, model, 4, {1, 16});
    CHECK(fit.residual_sum_sq == noise_objective(measured.values, model.values, 4, {1, 16}, fit.gamma));
    for (double d : {-1e-4, 1e-4}) {
        CHECK(noise_objective(measured.values, model.values, 4, {1, 16}, fit.gamma + d) >= fit.residual_sum_sq);
    }
}

TEST_CASE("fit_gamma on sampled data") {
    const auto m = two_qubit_model(TwoQubitBasis::singlet_triplet);
    ShotConfig cfg;
    cfg.n_shots = 8192;
    cfg.n_max = 24;
    cfg.gamma = 0.12;
    cfg.seed = 1;
    std::vector<std::pair<double, ProbabilityTrace>> traces;
    for (double tau : uniform_grid(33)) {
        cfg.tau = tau;
        traces.emplace_back(tau, run_shots(m, cfg).probabilities());
    }
    const auto fit = fit_gamma(tau_average(traces), averaged(ModelKind::singlet_triplet, 24, 0.0), 4, {1, 24});
    CHECK(std::abs(fit.gamma - 0.12) < 0.01);
}

TEST_CASE("fit_gamma errors") {
    const auto model = averaged(ModelKind::bell, 8, 0.0);
    CHECK_THROWS_AS(fit_gamma(model, averaged(ModelKind::bell, 9, 0.0), 4, {1, 8}), DataError);
    CHECK_THROWS_AS(fit_gamma(model, model, 4, {1, 9}), InvalidArgument);
    CHECK_THROWS_AS(fit_gamma(model, model, 4, {5, 3}), InvalidArgument);

    ProbabilityTrace flat(8, 4);
    for (std::size_t n = 0; n <= 8; ++n)
        for (std::size_t k = 0; k < 4; ++k) flat.at(n, k) = 0.25;
    const TauAveragedTrace uniform{flat, {0.0, pi}};
    CHECK_THROWS_AS(fit_gamma(uniform, uniform, 4, {1, 8}), DataError);
}

TEST_CASE("noise_timescale") {
    CHECK(noise_timescale(0.12) == doctest::Approx(7.8226).epsilon(1e-4));
    CHECK(std::lround(noise_timescale(0.12)) == 8);
    CHECK(noise_timescale(0.033) == doctest::Approx(29.800).epsilon(1e-4));
    CHECK(std::lround(noise_timescale(0.033)) == 30);
    CHECK_NEAR(noise_timescale(1.0 - std::exp(-1.0)), 1.0, 1e-14);
    CHECK_THROWS_AS(noise_timescale(0.0), InvalidArgument);
    CHECK_THROWS_AS(noise_timescale(1.0), InvalidArgument);
}

TEST_CASE("cycle_duration") {
    const HardwareProfile hw;
    CHECK_NEAR(cycle_duration({20, 4, 1}, hw), 2.712, 1e-12);
    CHECK_NEAR(cycle_duration({10, 2, 1}, hw), 1.708, 1e-12);
    CHECK_NEAR(cycle_duration({0, 0, 1}, hw), 0.704, 1e-12);
    CHECK_NEAR(cycle_duration({7, 0, 1}, hw), 0.949, 1e-12);

    // linear in each layer count
    const LayerCount base{3, 5, 2};
    for (int axis = 0; axis < 3; ++axis) {
        LayerCount one = base;
        LayerCount two = base;
        std::size_t *f1 = axis == 0 ? &one.n_1q_layers : axis == 1 ? &one.n_cnot_layers : &one.n_meas_layers;
        std::size_t *f2 = axis == 0 ? &two.n_1q_layers : axis == 1 ? &two.n_cnot_layers : &two.n_meas_layers;
        *f1 += 1;
        *f2 += 2;
        const double d0 = cycle_duration(base, hw);
        CHECK_NEAR(cycle_duration(two, hw) - cycle_duration(one, hw), cycle_duration(one, hw) - d0, 1e-12);
    }
}

TEST_CASE("decay_rate") {
    CHECK(std::round(decay_rate(0.12, 2.7) * 100) / 100 == 0.04);
    CHECK(std::round(decay_rate(0.033, 1.7) * 100) / 100 == 0.02);
    CHECK_NEAR(decay_rate(0.12, 2.7), 0.0444, 1e-4);
    CHECK_NEAR(decay_rate(0.033, 1.7), 0.0194, 1e-4);
    CHECK(decay_rate(0.0, 3.0) == 0.0);
    CHECK_THROWS_AS(decay_rate(0.1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(decay_rate(0.1, -1.0), InvalidArgument);
}

TEST_CASE("parse_layers") {
    const auto l = parse_layers("20,4,1");
    CHECK(l.n_1q_layers == 20);
    CHECK(l.n_cnot_layers == 4);
    CHECK(l.n_meas_layers == 1);
    CHECK_THROWS_AS(parse_layers("20,4"), InvalidArgument);
    CHECK_THROWS_AS(parse_layers("20,4,1,2"), InvalidArgument);
    CHECK_THROWS_AS(parse_layers("20,-4,1"), InvalidArgument);
    CHECK_THROWS_AS(parse_layers("20,4,0"), InvalidArgument);
    CHECK_THROWS_AS(parse_layers("a,4,1"), InvalidArgument);
}

TEST_CASE("hardware profile round trip") {
    HardwareProfile hw;
    hw.dur_cnot_ns = 300.0;
    hw.coherence_us["q9"] = {1.0, 2.0};
    const auto back = parse_hardware_profile_json(hardware_profile_to_json(hw));
    CHECK(back.dur_cnot_ns == 300.0);
    CHECK(back.dur_1q_ns == 35.0);
    CHECK(back.coherence_us == hw.coherence_us);
    CHECK_THROWS_AS(parse_hardware_profile_json(R"({"dur_1q_ns": 0})"), DataError);
    CHECK_THROWS_AS(parse_hardware_profile_json("[1,2"), DataError);
    CHECK_THROWS_AS(load_hardware_profile("/nonexistent.json"), DataError);
}

TEST_CASE("bundled hardware profile matches the built-in defaults") {
    const auto hw = load_hardware_profile(std::filesystem::path(QMON_DATA_DIR) / "default_hw_profile.json");
    const HardwareProfile def;
    CHECK(hw.dur_1q_ns == 35.0);
    CHECK(hw.dur_cnot_ns == 327.0);
    CHECK(hw.dur_readout_ns == 704.0);
    CHECK(hw.err_1q == 1.7e-4);
    CHECK(hw.err_cnot == 6.8e-3);
    CHECK(hw.err_readout == 0.01);
    CHECK(hw.coherence_us.at("q1") == std::pair{76.4, 98.0});
    CHECK(hw.coherence_us.at("q2") == std::pair{167.1, 130.0});
    CHECK(hw.coherence_us.at("q6") == std::pair{110.7, 145.1});
    CHECK(hw.coherence_us == def.coherence_us);
    CHECK(cycle_duration({20, 4, 1}, hw) == cycle_duration({20, 4, 1}, def));
}
