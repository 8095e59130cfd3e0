#include "qmon/evolve.hpp"

#include <cmath>
#include <string>

namespace qmon {

namespace {

void require_probability(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("noise strength gamma must lie in [0, 1]");
}

} // namespace

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (hermiticity_defect(rho_) > 1e-12) throw InvalidArgument("DensityMatrix: not Hermitian within 1e-12");
    const cplx tr = trace(rho_);
    if (std::abs(tr - 1.0) > 1e-12) throw InvalidArgument("DensityMatrix: trace differs from 1 by more than 1e-12");
    const auto eig = eig_hermitian(rho_);
    if (eig.eigenvalues.front() < -1e-10) throw InvalidArgument("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
    ComplexMatrix rho(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        for (std::size_t j = 0; j < psi.size(); ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * cplx(1.0 / static_cast<double>(dim)));
}

NoiseParams::NoiseParams(double gamma) : gamma_(gamma) { require_probability(gamma); }

DensityMatrix cycle(const DensityMatrix &rho, const ComplexMatrix &u, const MeasurementBasis &basis,
                    NoiseParams noise) {
    const std::size_t n = rho.dim();
    if (u.dim() != n || basis.dim() != n) throw InvalidArgument("cycle: dimension mismatch");
    const auto &v = basis.v();
    // populations of U rho U^dagger in the measurement basis
    const auto w = matmul(adjoint(v), u);
    const auto in_basis = matmul(w, matmul(rho.matrix(), adjoint(w)));
    const double g = noise.gamma();
    const double floor = g / static_cast<double>(n);
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = (1.0 - g) * in_basis(k, k).real() + floor;
    return mixture_of_basis_states(p, basis);
}

DensityMatrix cycle(const DensityMatrix &rho, const Model &m, double tau, NoiseParams noise) {
    if (rho.dim() != m.dim()) throw InvalidArgument("cycle: state and model dimensions differ");
    return cycle(rho, unitary_from_hamiltonian(m.hamiltonian(), tau), m.basis(), noise);
}

DensityMatrix evolve_state(const Model &m, double tau, std::size_t n, NoiseParams noise) {
    auto rho = DensityMatrix::pure(m.initial_state());
    if (n == 0) return rho;
    const auto u = unitary_from_hamiltonian(m.hamiltonian(), tau);
    for (std::size_t i = 0; i < n; ++i) rho = cycle(rho, u, m.basis(), noise);
    return rho;
}

ProbabilityTrace run_exact(const Model &m, double tau, std::size_t n_max, NoiseParams noise) {
    ProbabilityTrace out(n_max, m.dim());
    out.set_row(0, m.initial_probabilities());
    if (n_max == 0) return out;

    const auto u = unitary_from_hamiltonian(m.hamiltonian(), tau);
    const auto &basis = m.basis();
    auto rho = DensityMatrix::pure(m.initial_state());
    for (std::size_t n = 1; n <= n_max; ++n) {
        rho = cycle(rho, u, basis, noise);
        for (std::size_t k = 0; k < m.dim(); ++k) {
            const auto phi = basis.state(k);
            out.at(n, k) = expectation(rho.matrix(), phi).real();
        }
    }
    return out;
}

ProbabilityTrace noisy_closed_form(const ProbabilityTrace &noiseless, double gamma, std::size_t dim) {
    require_probability(gamma);
    if (dim != noiseless.dim()) throw InvalidArgument("noisy_closed_form: dimension mismatch");
    ProbabilityTrace out = noiseless;
    const double uniform = 1.0 / static_cast<double>(dim);
    double survive = 1.0;
    for (std::size_t n = 0; n < out.rows(); ++n) {
        for (std::size_t k = 0; k < dim; ++k) out.at(n, k) = survive * noiseless.at(n, k) + (1.0 - survive) * uniform;
        survive *= 1.0 - gamma;
    }
    return out;
}

DensityMatrix rho_in_basis(const DensityMatrix &rho, const MeasurementBasis &basis, BasisDirection direction) {
    if (rho.dim() != basis.dim()) throw InvalidArgument("rho_in_basis: dimension mismatch");
    const auto &v = basis.v();
    if (direction == BasisDirection::to_measurement) {
        return DensityMatrix(matmul(adjoint(v), matmul(rho.matrix(), v)));
    }
    return DensityMatrix(matmul(v, matmul(rho.matrix(), adjoint(v))));
}

DensityMatrix mixture_of_basis_states(std::span<const double> p, const MeasurementBasis &basis) {
    if (p.size() != basis.dim()) throw InvalidArgument("mixture_of_basis_states: dimension mismatch");
    std::vector<cplx> diag(p.begin(), p.end());
    const auto &v = basis.v();
    auto rho = matmul(v, matmul(ComplexMatrix::diagonal(diag), adjoint(v)));
    // exact Hermitian symmetry; the products above only guarantee it to rounding
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        rho(i, i) = rho(i, i).real();
        for (std::size_t j = i + 1; j < rho.dim(); ++j) {
            const cplx avg = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = avg;
            rho(j, i) = std::conj(avg);
        }
    }
    return DensityMatrix(std::move(rho));
}

} // namespace qmon
