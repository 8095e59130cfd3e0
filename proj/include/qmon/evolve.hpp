#pragma once

#include "qmon/linalg.hpp"
#include "qmon/model.hpp"
#include "qmon/trace.hpp"

namespace qmon {

/// Validated density matrix: Hermitian and unit trace within 1e-12, and no
/// eigenvalue below -1e-10.
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix rho);

    static DensityMatrix pure(std::span<const cplx> psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const { return rho_.dim(); }
    const ComplexMatrix &matrix() const { return rho_; }

  private:
    ComplexMatrix rho_;
};

/// Depolarizing strength: probability of replacing the state by I/N.
class NoiseParams {
  public:
    constexpr NoiseParams() = default;
    explicit NoiseParams(double gamma);

    double gamma() const { return gamma_; }

  private:
    double gamma_ = 0.0;
};

/// One protocol cycle with the unitary already built:
///   rho' = (1 - gamma) sum_k pi_k U rho U^dagger pi_k + gamma I/N
DensityMatrix cycle(const DensityMatrix &rho, const ComplexMatrix &u, const MeasurementBasis &basis,
                    NoiseParams noise);
DensityMatrix cycle(const DensityMatrix &rho, const Model &m, double tau, NoiseParams noise);

/// rho_n after n cycles starting from the model's pure initial state.
DensityMatrix evolve_state(const Model &m, double tau, std::size_t n, NoiseParams noise);

/// P^n_k = Tr[rho_n pi_k] for n = 0..n_max by exact density-matrix
/// propagation. Row 0 is the Born distribution of the initial state.
ProbabilityTrace run_exact(const Model &m, double tau, std::size_t n_max, NoiseParams noise = NoiseParams{});

/// (1 - gamma)^n P^n + (1 - (1 - gamma)^n) / N applied row by row.
ProbabilityTrace noisy_closed_form(const ProbabilityTrace &noiseless, double gamma, std::size_t dim);

enum class BasisDirection { to_measurement, to_computational };

/// to_measurement: V^dagger rho V; to_computational: V rho V^dagger.
DensityMatrix rho_in_basis(const DensityMatrix &rho, const MeasurementBasis &basis, BasisDirection direction);

/// Sum_k p_k pi_k written in computational coordinates.
DensityMatrix mixture_of_basis_states(std::span<const double> p, const MeasurementBasis &basis);

} // namespace qmon
