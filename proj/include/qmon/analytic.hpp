#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qmon/model.hpp"
#include "qmon/trace.hpp"

// Closed-form outcome probabilities for the three built-in models. These are
// reference formulas, independent of the numerical engines.
namespace qmon::analytic {

/// <sigma_z>(n tau) = cos(tau)^n, with 0^0 = 1.
double magnetization_single_qubit(std::size_t n, double tau);

/// (P_0, P_1) = ((1 + cos^n tau) / 2, (1 - cos^n tau) / 2)
std::vector<double> probs_single_qubit(std::size_t n, double tau);

/// Singlet-triplet basis (psi0, psi1, psi2, psi3). With q = (1 + 3 cos 2tau)/4:
///   P0 = (3 cos^n tau + q^n + 2) / 6
///   P1 = (1 - q^n) / 3
///   P2 = 0
///   P3 = (-3 cos^n tau + q^n + 2) / 6
std::vector<double> probs_singlet_triplet(std::size_t n, double tau);

/// Bell basis: (1 + cos^n 2tau)/4, (1 - cos^n 2tau)/4, 1/2, 0.
std::vector<double> probs_bell(std::size_t n, double tau);

/// Dispatch on the built-in model kind; throws InvalidArgument for custom.
std::vector<double> probs(ModelKind kind, std::size_t n, double tau);
ProbabilityTrace closed_form_trace(ModelKind kind, double tau, std::size_t n_max);

enum class Parity { even, odd, generic };

struct LimitResult {
    /// Empty when the limit does not exist for the requested parity.
    std::optional<std::vector<double>> probabilities;
    bool divergent = false;
};

/// Piecewise n -> infinity values. At resonant tau the sequence alternates
/// between two values; `even`/`odd` select the branch reached along even or
/// odd n, while `generic` reports divergence there.
LimitResult limit_probs(ModelKind kind, double tau, Parity parity);

} // namespace qmon::analytic
