#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmon/trace.hpp"

namespace qmon {

/// Per-(n, k) average of probability traces over tau in [0, pi].
struct TauAveragedTrace {
    ProbabilityTrace values;
    std::vector<double> tau_grid;
};

/// Trapezoidal average (1/pi) * integral_0^pi P^n_k(tau) dtau. The grid must
/// be strictly increasing, start at 0 and end at pi (within 1e-9), and have at
/// least two points. All traces must share one shape.
TauAveragedTrace tau_average(const std::vector<std::pair<double, ProbabilityTrace>> &traces);

struct NRange {
    std::size_t first = 1;
    std::size_t last = 0;
};

struct NoiseFit {
    double gamma = 0.0;
    double residual_sum_sq = 0.0;
    /// 1 / |ln(1 - gamma)|; +inf for gamma == 0.
    double n_noise = 0.0;
    NRange fitted_on;
};

/// Least-squares depolarizing strength over n in `range`:
///   sum_{n,k} (measured - [(1-g)^n model + (1 - (1-g)^n) / dim])^2
/// minimized on [0, 1]. A coarse scan brackets the global minimum, then
/// golden-section search narrows it to width 1e-9 and one parabolic step
/// polishes it. Throws DataError when the model rows in range are uniform
/// (gamma has no effect and cannot be identified).
NoiseFit fit_gamma(const TauAveragedTrace &measured, const TauAveragedTrace &model_noiseless, std::size_t dim,
                   NRange range);

/// Residual sum of squares of the noisy closed form at a given gamma.
double noise_objective(const ProbabilityTrace &measured, const ProbabilityTrace &model, std::size_t dim,
                       NRange range, double gamma);

/// n_noise = 1 / |ln(1 - gamma)| (proportionality constant 1); gamma in (0, 1).
double noise_timescale(double gamma);

struct HardwareProfile {
    double dur_1q_ns = 35.0;
    double dur_cnot_ns = 327.0;
    double dur_readout_ns = 704.0;
    double err_1q = 1.7e-4;
    double err_cnot = 6.8e-3;
    double err_readout = 0.01;
    /// qubit label -> (T1, T2) in microseconds
    std::map<std::string, std::pair<double, double>> coherence_us{
        {"q1", {76.4, 98.0}}, {"q2", {167.1, 130.0}}, {"q6", {110.7, 145.1}}};

    void validate() const;
};

HardwareProfile parse_hardware_profile_json(std::string_view text);
HardwareProfile load_hardware_profile(const std::filesystem::path &path);
std::string hardware_profile_to_json(const HardwareProfile &hw);

struct LayerCount {
    std::size_t n_1q_layers = 0;
    std::size_t n_cnot_layers = 0;
    std::size_t n_meas_layers = 1;
};

/// Parses "1q,cnot,meas", e.g. "20,4,1".
LayerCount parse_layers(std::string_view text);

/// Duration of one protocol cycle in microseconds.
double cycle_duration(const LayerCount &layers, const HardwareProfile &hw);

/// gamma / dt in MHz for dt in microseconds.
double decay_rate(double gamma, double dt_us);

} // namespace qmon
