#pragma once

#include <cstdint>
#include <vector>

#include "qmon/markov.hpp"
#include "qmon/model.hpp"

namespace qmon {

struct ShotConfig {
    std::size_t n_shots = 8192;
    std::uint64_t seed = 0;
    std::size_t n_max = 0;
    double tau = 0.0;
    double gamma = 0.0;

    void validate() const;
};

/// SplitMix64. Each shot gets its own stream keyed by (seed, shot index), so
/// shots can be generated in any order or in parallel with identical results.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}
    static SplitMix64 for_shot(std::uint64_t seed, std::uint64_t shot);

    std::uint64_t next();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

  private:
    std::uint64_t state_;
};

struct TrajectoryRecord {
    /// Outcome index recorded after cycles 1..n_max.
    std::vector<std::size_t> outcomes;
};

/// Measurement-outcome counts per (n, k); row n sums to n_shots.
class EmpiricalTrace {
  public:
    EmpiricalTrace(std::size_t n_max, std::size_t dim, std::size_t n_shots);

    std::size_t dim() const { return dim_; }
    std::size_t rows() const { return rows_; }
    std::size_t n_shots() const { return n_shots_; }

    std::uint64_t count(std::size_t n, std::size_t k) const { return counts_[n * dim_ + k]; }
    void add(std::size_t n, std::size_t k) { ++counts_[n * dim_ + k]; }
    /// Merge counts from an independent batch of shots.
    EmpiricalTrace &operator+=(const EmpiricalTrace &other);

    double probability(std::size_t n, std::size_t k) const;
    /// sqrt(p (1 - p) / n_shots)
    double stderr_of(std::size_t n, std::size_t k) const;
    ProbabilityTrace probabilities() const;

    friend bool operator==(const EmpiricalTrace &, const EmpiricalTrace &) = default;

  private:
    std::size_t dim_;
    std::size_t rows_;
    std::size_t n_shots_;
    std::vector<std::uint64_t> counts_;
};

/// Ingredients shared by all shots of one (model, tau) configuration.
struct ShotKernel {
    std::vector<double> initial;      // P^0, Born distribution of |Psi0>
    std::vector<double> first_cycle;  // |<phi_k| U |Psi0>|^2
    TransitionMatrix transitions;
    double gamma;

    static ShotKernel build(const Model &m, double tau, double gamma);
};

/// One trajectory. Cycle 1 draws from the exact Born distribution after U;
/// later cycles draw from row L(k_prev, .). In every cycle, with probability
/// gamma the outcome is instead a uniformly random basis state.
TrajectoryRecord sample_trajectory(const ShotKernel &kernel, std::size_t n_max, SplitMix64 &rng);
TrajectoryRecord sample_trajectory(const Model &m, const ShotConfig &cfg, SplitMix64 &rng);

/// Aggregates cfg.n_shots trajectories; row 0 holds draws from P^0.
EmpiricalTrace run_shots(const Model &m, const ShotConfig &cfg);

/// P_0 - P_1 per n; only defined for two-outcome models.
std::vector<double> empirical_magnetization(const EmpiricalTrace &t);

} // namespace qmon
