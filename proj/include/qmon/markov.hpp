#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmon/linalg.hpp"
#include "qmon/model.hpp"
#include "qmon/trace.hpp"

namespace qmon {

/// Outcome-to-outcome jump probabilities L(tau). Symmetric and doubly
/// stochastic within 1e-12; the constructor enforces both.
class TransitionMatrix {
  public:
    TransitionMatrix(RealMatrix l, double tau);

    std::size_t dim() const { return l_.dim(); }
    const RealMatrix &matrix() const { return l_; }
    double tau() const { return tau_; }
    double operator()(std::size_t k, std::size_t kp) const { return l_(k, kp); }

  private:
    RealMatrix l_;
    double tau_;
};

/// Eigenvalues in descending order with orthonormal real eigenvectors as
/// columns.
struct ChainSpectrum {
    std::vector<double> eigenvalues;
    RealMatrix eigenvectors;
};

enum class RegimeKind { infinite_temperature, partial, oscillatory, frozen };

std::string_view to_string(RegimeKind kind);

struct RegimeReport {
    RegimeKind kind;
    std::size_t multiplicity_of_one = 1;
    bool has_minus_one = false;
    /// Filled only for partial thermalization.
    BlockStructure blocks;
    std::string details;
};

inline constexpr double kDegeneracyTol = 1e-9;

/// L_{k,k'} = |<phi_k'| U(tau) |phi_k>|^2. Amplitudes below 1e-13 in
/// magnitude are treated as exact zeros.
TransitionMatrix build_transition_matrix(const Model &m, double tau);

/// Throws NumericalError if an eigenvalue leaves [-1 - 1e-12, 1 + 1e-12] or
/// the top eigenvalue is not 1 within 1e-12.
ChainSpectrum spectrum(const TransitionMatrix &l);

/// L^n = sum_j lambda_j^n |v_j><v_j|; n = 0 gives the identity.
RealMatrix power(const TransitionMatrix &l, std::size_t n);
RealMatrix power(const TransitionMatrix &l, const ChainSpectrum &s, std::size_t n);

/// Rows P^0..P^n with P^m = L^m p0.
ProbabilityTrace propagate(const TransitionMatrix &l, std::span<const double> p0, std::size_t n);

RegimeReport classify(const TransitionMatrix &l, const BlockStructure &h_blocks, double tol = kDegeneracyTol);

/// Projection of p0 onto the eigenvalue-1 eigenspace, or nullopt when an
/// eigenvalue -1 makes the sequence oscillate forever.
std::optional<std::vector<double>> stationary_limit(const TransitionMatrix &l, std::span<const double> p0,
                                                    double tol = kDegeneracyTol);

} // namespace qmon
