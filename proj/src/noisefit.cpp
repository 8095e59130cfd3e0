#include "qmon/noisefit.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qmon {

namespace {

constexpr double kGridTol = 1e-9;

} // namespace

TauAveragedTrace tau_average(const std::vector<std::pair<double, ProbabilityTrace>> &traces) {
    if (traces.empty()) throw DataError("tau_average: empty tau grid");
    if (traces.size() < 2) throw DataError("tau_average: need at least two tau points");
    if (std::abs(traces.front().first) > kGridTol || std::abs(traces.back().first - std::numbers::pi) > kGridTol) {
        throw DataError("tau_average: tau grid must span [0, pi]");
    }
    const std::size_t rows = traces.front().second.rows();
    const std::size_t dim = traces.front().second.dim();
    TauAveragedTrace out{ProbabilityTrace(rows - 1, dim), {}};
    out.tau_grid.reserve(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto &[tau, tr] = traces[i];
        if (tr.rows() != rows || tr.dim() != dim) throw DataError("tau_average: traces have different shapes");
        if (i > 0 && !(tau > traces[i - 1].first)) throw DataError("tau_average: tau grid must be strictly increasing");
        out.tau_grid.push_back(tau);
    }
    for (std::size_t i = 0; i + 1 < traces.size(); ++i) {
        const double w = 0.5 * (traces[i + 1].first - traces[i].first) / std::numbers::pi;
        const auto &a = traces[i].second;
        const auto &b = traces[i + 1].second;
        for (std::size_t n = 0; n < rows; ++n)
            for (std::size_t k = 0; k < dim; ++k) out.values.at(n, k) += w * (a.at(n, k) + b.at(n, k));
    }
    return out;
}

double noise_objective(const ProbabilityTrace &measured, const ProbabilityTrace &model, std::size_t dim,
                       NRange range, double gamma) {
    const double uniform = 1.0 / static_cast<double>(dim);
    double s = 0.0;
    for (std::size_t n = range.first; n <= range.last; ++n) {
        const double survive = std::pow(1.0 - gamma, static_cast<double>(n));
        for (std::size_t k = 0; k < dim; ++k) {
            const double predicted = survive * model.at(n, k) + (1.0 - survive) * uniform;
            const double r = measured.at(n, k) - predicted;
            s += r * r;
        }
    }
    return s;
}

NoiseFit fit_gamma(const TauAveragedTrace &measured, const TauAveragedTrace &model_noiseless, std::size_t dim,
                   NRange range) {
    const auto &meas = measured.values;
    const auto &model = model_noiseless.values;
    if (meas.rows() != model.rows() || meas.dim() != model.dim() || meas.dim() != dim) {
        throw DataError("fit_gamma: measured and model traces have different shapes");
    }
    if (range.first > range.last || range.last > meas.n_max()) {
        throw InvalidArgument("fit_gamma: n range must be nonempty and within 0..n_max");
    }

    const double uniform = 1.0 / static_cast<double>(dim);
    double sensitivity = 0.0;
    for (std::size_t n = std::max<std::size_t>(range.first, 1); n <= range.last; ++n)
        for (std::size_t k = 0; k < dim; ++k) sensitivity += std::pow(model.at(n, k) - uniform, 2);
    if (sensitivity < 1e-24) {
        throw DataError("fit_gamma: model is uniform over the fit range, gamma is unidentifiable");
    }

    auto f = [&](double g) { return noise_objective(meas, model, dim, range, g); };

    // coarse scan so golden-section starts inside the global basin
    constexpr int kScan = 1000;
    int best = 0;
    double best_val = f(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double v = f(static_cast<double>(i) / kScan);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = std::max(0.0, static_cast<double>(best - 1) / kScan);
    double hi = std::min(1.0, static_cast<double>(best + 1) / kScan);

    constexpr double kInvPhi = 0.6180339887498948482;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-9) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        }
    }
    double gamma = f1 <= f2 ? x1 : x2;
    double value = std::min(f1, f2);

    // parabolic step through (lo, mid, hi)
    const double mid = 0.5 * (lo + hi);
    const double fl = f(lo), fm = f(mid), fh = f(hi);
    const double denom = (mid - lo) * (fm - fh) - (mid - hi) * (fm - fl);
    if (denom != 0.0) {
        const double step = mid - 0.5 * ((mid - lo) * (mid - lo) * (fm - fh) - (mid - hi) * (mid - hi) * (fm - fl)) / denom;
        if (step >= 0.0 && step <= 1.0 && std::abs(step - mid) <= (hi - lo)) {
            const double fs = f(step);
            if (fs < value) {
                gamma = step;
                value = fs;
            }
        }
    }
    for (double cand : {lo, hi}) {
        const double fc = f(cand);
        if (fc < value) {
            gamma = cand;
            value = fc;
        }
    }

    NoiseFit fit;
    fit.gamma = gamma;
    fit.residual_sum_sq = value;
    fit.n_noise = gamma > 0.0 ? 1.0 / std::abs(std::log1p(-gamma)) : std::numeric_limits<double>::infinity();
    fit.fitted_on = range;
    return fit;
}

double noise_timescale(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("noise_timescale: gamma must lie in (0, 1)");
    return 1.0 / std::abs(std::log1p(-gamma));
}

void HardwareProfile::validate() const {
    if (!(dur_1q_ns > 0.0 && dur_cnot_ns > 0.0 && dur_readout_ns > 0.0)) {
        throw InvalidArgument("HardwareProfile: durations must be positive");
    }
}

HardwareProfile parse_hardware_profile_json(std::string_view text) {
    HardwareProfile hw;
    try {
        const auto j = nlohmann::json::parse(text);
        hw.dur_1q_ns = j.value("dur_1q_ns", hw.dur_1q_ns);
        hw.dur_cnot_ns = j.value("dur_cnot_ns", hw.dur_cnot_ns);
        hw.dur_readout_ns = j.value("dur_readout_ns", hw.dur_readout_ns);
        hw.err_1q = j.value("err_1q", hw.err_1q);
        hw.err_cnot = j.value("err_cnot", hw.err_cnot);
        hw.err_readout = j.value("err_readout", hw.err_readout);
        if (j.contains("coherence_us")) {
            hw.coherence_us.clear();
            for (const auto &[qubit, tt] : j.at("coherence_us").items()) {
                hw.coherence_us[qubit] = {tt.at("t1").get<double>(), tt.at("t2").get<double>()};
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw DataError(std::string("hardware profile: ") + e.what());
    }
    try {
        hw.validate();
    } catch (const InvalidArgument &e) {
        throw DataError(e.what());
    }
    return hw;
}

HardwareProfile load_hardware_profile(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open hardware profile " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_hardware_profile_json(ss.str());
}

std::string hardware_profile_to_json(const HardwareProfile &hw) {
    nlohmann::ordered_json j;
    j["dur_1q_ns"] = hw.dur_1q_ns;
    j["dur_cnot_ns"] = hw.dur_cnot_ns;
    j["dur_readout_ns"] = hw.dur_readout_ns;
    j["err_1q"] = hw.err_1q;
    j["err_cnot"] = hw.err_cnot;
    j["err_readout"] = hw.err_readout;
    for (const auto &[q, tt] : hw.coherence_us) j["coherence_us"][q] = {{"t1", tt.first}, {"t2", tt.second}};
    return j.dump(2);
}

LayerCount parse_layers(std::string_view text) {
    std::size_t vals[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const auto comma = text.find(',', pos);
        const auto field = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        if ((i < 2) == (comma == std::string_view::npos)) {
            throw InvalidArgument("layers must be three comma-separated counts: 1q,cnot,meas");
        }
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), vals[i]);
        if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
            throw InvalidArgument("layers: '" + std::string(field) + "' is not a nonnegative integer");
        }
        pos = comma + 1;
    }
    LayerCount lc{vals[0], vals[1], vals[2]};
    if (lc.n_meas_layers < 1) throw InvalidArgument("layers: a cycle needs at least one measurement layer");
    return lc;
}

double cycle_duration(const LayerCount &layers, const HardwareProfile &hw) {
    hw.validate();
    const double ns = static_cast<double>(layers.n_1q_layers) * hw.dur_1q_ns +
                      static_cast<double>(layers.n_cnot_layers) * hw.dur_cnot_ns +
                      static_cast<double>(layers.n_meas_layers) * hw.dur_readout_ns;
    return ns / 1000.0;
}

double decay_rate(double gamma, double dt_us) {
    if (!(dt_us > 0.0)) throw InvalidArgument("decay_rate: cycle duration must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("decay_rate: gamma must lie in [0, 1]");
    return gamma / dt_us;
}

} // namespace qmon
