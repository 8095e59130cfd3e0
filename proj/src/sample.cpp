#include "qmon/sample.hpp"

#include <cmath>

namespace qmon {

namespace {

std::size_t draw(std::span<const double> p, double u) {
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += p[k];
        if (u < acc) return k;
    }
    // u landed in the rounding gap above the cumulative sum; take the last
    // state with nonzero weight
    for (std::size_t k = p.size(); k-- > 0;)
        if (p[k] > 0.0) return k;
    return p.size() - 1;
}

std::size_t draw_noisy(std::span<const double> p, double gamma, SplitMix64 &rng) {
    if (gamma > 0.0 && rng.uniform() < gamma) {
        return std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(p.size())), p.size() - 1);
    }
    return draw(p, rng.uniform());
}

} // namespace

void ShotConfig::validate() const {
    if (n_shots < 1) throw InvalidArgument("ShotConfig: n_shots must be at least 1");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("ShotConfig: gamma must lie in [0, 1]");
}

SplitMix64 SplitMix64::for_shot(std::uint64_t seed, std::uint64_t shot) {
    SplitMix64 mix(seed);
    const std::uint64_t a = mix.next();
    SplitMix64 keyed(a ^ (shot * 0xD1B54A32D192ED03ULL));
    return SplitMix64(keyed.next());
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

EmpiricalTrace::EmpiricalTrace(std::size_t n_max, std::size_t dim, std::size_t n_shots)
    : dim_(dim), rows_(n_max + 1), n_shots_(n_shots), counts_(rows_ * dim, 0) {}

EmpiricalTrace &EmpiricalTrace::operator+=(const EmpiricalTrace &other) {
    if (other.dim_ != dim_ || other.rows_ != rows_) throw InvalidArgument("EmpiricalTrace: shape mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    n_shots_ += other.n_shots_;
    return *this;
}

double EmpiricalTrace::probability(std::size_t n, std::size_t k) const {
    return static_cast<double>(count(n, k)) / static_cast<double>(n_shots_);
}

double EmpiricalTrace::stderr_of(std::size_t n, std::size_t k) const {
    const double p = probability(n, k);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_shots_));
}

ProbabilityTrace EmpiricalTrace::probabilities() const {
    ProbabilityTrace out(rows_ - 1, dim_);
    for (std::size_t n = 0; n < rows_; ++n)
        for (std::size_t k = 0; k < dim_; ++k) out.at(n, k) = probability(n, k);
    return out;
}

ShotKernel ShotKernel::build(const Model &m, double tau, double gamma) {
    const auto u = unitary_from_hamiltonian(m.hamiltonian(), tau);
    const auto evolved = qmon::apply(u, m.initial_state());
    std::vector<double> first(m.dim());
    for (std::size_t k = 0; k < m.dim(); ++k) {
        cplx amp{};
        const auto &v = m.basis().v();
        for (std::size_t i = 0; i < m.dim(); ++i) amp += std::conj(v(i, k)) * evolved[i];
        first[k] = std::abs(amp) < 1e-13 ? 0.0 : std::norm(amp);
    }
    return ShotKernel{m.initial_probabilities(), std::move(first), build_transition_matrix(m, tau), gamma};
}

TrajectoryRecord sample_trajectory(const ShotKernel &kernel, std::size_t n_max, SplitMix64 &rng) {
    TrajectoryRecord rec;
    rec.outcomes.reserve(n_max);
    if (n_max == 0) return rec;
    const std::size_t dim = kernel.initial.size();
    std::size_t k = draw_noisy(kernel.first_cycle, kernel.gamma, rng);
    rec.outcomes.push_back(k);
    std::vector<double> row(dim);
    for (std::size_t n = 2; n <= n_max; ++n) {
        for (std::size_t j = 0; j < dim; ++j) row[j] = kernel.transitions(k, j);
        k = draw_noisy(row, kernel.gamma, rng);
        rec.outcomes.push_back(k);
    }
    return rec;
}

TrajectoryRecord sample_trajectory(const Model &m, const ShotConfig &cfg, SplitMix64 &rng) {
    cfg.validate();
    return sample_trajectory(ShotKernel::build(m, cfg.tau, cfg.gamma), cfg.n_max, rng);
}

EmpiricalTrace run_shots(const Model &m, const ShotConfig &cfg) {
    cfg.validate();
    const auto kernel = ShotKernel::build(m, cfg.tau, cfg.gamma);
    EmpiricalTrace out(cfg.n_max, m.dim(), cfg.n_shots);
    for (std::size_t shot = 0; shot < cfg.n_shots; ++shot) {
        auto rng = SplitMix64::for_shot(cfg.seed, shot);
        out.add(0, draw(kernel.initial, rng.uniform()));
        const auto rec = sample_trajectory(kernel, cfg.n_max, rng);
        for (std::size_t n = 0; n < rec.outcomes.size(); ++n) out.add(n + 1, rec.outcomes[n]);
    }
    return out;
}

std::vector<double> empirical_magnetization(const EmpiricalTrace &t) {
    if (t.dim() != 2) throw InvalidArgument("empirical_magnetization: requires a two-outcome model");
    std::vector<double> m(t.rows());
    for (std::size_t n = 0; n < t.rows(); ++n) m[n] = t.probability(n, 0) - t.probability(n, 1);
    return m;
}

} // namespace qmon
