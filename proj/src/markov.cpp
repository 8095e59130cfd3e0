#include "qmon/markov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmon {

namespace {

constexpr double kStochasticTol = 1e-12;
constexpr double kAmplitudeFloor = 1e-13;

void require_probability_vector(std::span<const double> p, std::size_t dim) {
    if (p.size() != dim) throw InvalidArgument("probability vector has wrong length");
    double s = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw InvalidArgument("probability vector has a negative or NaN entry");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw InvalidArgument("probability vector does not sum to 1 within 1e-12");
}

} // namespace

TransitionMatrix::TransitionMatrix(RealMatrix l, double tau) : l_(std::move(l)), tau_(tau) {
    const std::size_t n = l_.dim();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        double col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = l_(i, j);
            if (x < -kStochasticTol || x > 1.0 + kStochasticTol) {
                throw InvalidArgument("TransitionMatrix: entry outside [0, 1]");
            }
            if (std::abs(x - l_(j, i)) > kStochasticTol) throw InvalidArgument("TransitionMatrix: not symmetric");
            row += x;
            col += l_(j, i);
        }
        if (std::abs(row - 1.0) > kStochasticTol || std::abs(col - 1.0) > kStochasticTol) {
            throw InvalidArgument("TransitionMatrix: not doubly stochastic within 1e-12");
        }
    }
}

std::string_view to_string(RegimeKind kind) {
    switch (kind) {
    case RegimeKind::infinite_temperature:
        return "infinite_temperature";
    case RegimeKind::partial:
        return "partial";
    case RegimeKind::oscillatory:
        return "oscillatory";
    case RegimeKind::frozen:
        return "frozen";
    }
    return "unknown";
}

TransitionMatrix build_transition_matrix(const Model &m, double tau) {
    const auto u = unitary_from_hamiltonian(m.hamiltonian(), tau);
    const auto &v = m.basis().v();
    // (V^dagger U V)_{k',k} = <phi_k'| U |phi_k>
    const auto amp = matmul(adjoint(v), matmul(u, v));
    const std::size_t n = m.dim();
    RealMatrix l(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t kp = 0; kp < n; ++kp) {
            const double a = std::abs(amp(kp, k));
            l(k, kp) = a < kAmplitudeFloor ? 0.0 : a * a;
        }
    // remove rounding-level asymmetry; genuine asymmetry (complex V^dagger H V)
    // is left in place and rejected by the TransitionMatrix constructor
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t kp = k + 1; kp < n; ++kp) {
            if (std::abs(l(k, kp) - l(kp, k)) > kStochasticTol) continue;
            const double avg = 0.5 * (l(k, kp) + l(kp, k));
            l(k, kp) = avg;
            l(kp, k) = avg;
        }
    return TransitionMatrix(std::move(l), tau);
}

ChainSpectrum spectrum(const TransitionMatrix &l) {
    auto eig = eig_self_adjoint(l.matrix(), EigenOrder::descending);
    for (double lam : eig.eigenvalues) {
        if (lam < -1.0 - 1e-12 || lam > 1.0 + 1e-12) {
            throw NumericalError("spectrum: eigenvalue " + std::to_string(lam) + " outside [-1, 1]");
        }
    }
    if (std::abs(eig.eigenvalues.front() - 1.0) > 1e-12) throw NumericalError("spectrum: top eigenvalue is not 1");
    return {std::move(eig.eigenvalues), std::move(eig.eigenvectors)};
}

RealMatrix power(const TransitionMatrix &l, const ChainSpectrum &s, std::size_t n) {
    const std::size_t dim = l.dim();
    if (n == 0) return RealMatrix::identity(dim);
    RealMatrix out(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const double w = std::pow(s.eigenvalues[j], static_cast<double>(n));
        if (w == 0.0) continue;
        for (std::size_t a = 0; a < dim; ++a) {
            const double va = w * s.eigenvectors(a, j);
            if (va == 0.0) continue;
            for (std::size_t b = 0; b < dim; ++b) out(a, b) += va * s.eigenvectors(b, j);
        }
    }
    return out;
}

RealMatrix power(const TransitionMatrix &l, std::size_t n) { return power(l, spectrum(l), n); }

ProbabilityTrace propagate(const TransitionMatrix &l, std::span<const double> p0, std::size_t n) {
    require_probability_vector(p0, l.dim());
    const auto s = spectrum(l);
    ProbabilityTrace out(n, l.dim());
    out.set_row(0, p0);
    for (std::size_t m = 1; m <= n; ++m) {
        const auto lm = power(l, s, m);
        // L is symmetric, so sum_k' (L^m)_{k,k'} P_k' is a plain product
        out.set_row(m, qmon::apply(lm, p0));
    }
    return out;
}

RegimeReport classify(const TransitionMatrix &l, const BlockStructure &h_blocks, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("classify: tolerance must be positive");
    const auto s = spectrum(l);
    RegimeReport r{};
    r.multiplicity_of_one = static_cast<std::size_t>(
        std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](double x) { return x >= 1.0 - tol; }));
    r.has_minus_one = s.eigenvalues.back() <= -1.0 + tol;

    const double dist_to_identity = max_abs(l.matrix() - RealMatrix::identity(l.dim()));
    std::ostringstream details;
    if (dist_to_identity <= tol) {
        r.kind = RegimeKind::frozen;
        details << "L equals the identity; every outcome is a fixed point";
    } else if (r.has_minus_one) {
        r.kind = RegimeKind::oscillatory;
        details << "eigenvalue -1 present; outcome probabilities oscillate and have no limit";
    } else if (r.multiplicity_of_one == 1) {
        r.kind = RegimeKind::infinite_temperature;
        details << "eigenvalue 1 is simple; probabilities relax to the uniform distribution";
    } else {
        r.kind = RegimeKind::partial;
        r.blocks = h_blocks;
        details << "eigenvalue 1 has multiplicity " << r.multiplicity_of_one << "; " << h_blocks.blocks.size()
                << " Hamiltonian block(s)";
        if (h_blocks.blocks.size() != r.multiplicity_of_one) details << " (mismatch: resonant tau?)";
    }
    r.details = details.str();
    return r;
}

std::optional<std::vector<double>> stationary_limit(const TransitionMatrix &l, std::span<const double> p0,
                                                    double tol) {
    require_probability_vector(p0, l.dim());
    const auto s = spectrum(l);
    if (s.eigenvalues.back() <= -1.0 + tol) return std::nullopt;
    const std::size_t n = l.dim();
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n && s.eigenvalues[j] >= 1.0 - tol; ++j) {
        double overlap = 0.0;
        for (std::size_t a = 0; a < n; ++a) overlap += s.eigenvectors(a, j) * p0[a];
        for (std::size_t a = 0; a < n; ++a) out[a] += overlap * s.eigenvectors(a, j);
    }
    return out;
}

} // namespace qmon
