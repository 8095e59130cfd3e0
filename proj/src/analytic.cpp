#include "qmon/analytic.hpp"

#include <cmath>
#include <numbers>

namespace qmon::analytic {

namespace {

// x^n by squaring; ipow(0, 0) == 1
double ipow(double x, std::size_t n) {
    double r = 1.0;
    while (n > 0) {
        if (n & 1U) r *= x;
        x *= x;
        n >>= 1U;
    }
    return r;
}

constexpr double kResonanceTol = 1e-9;

// Returns the integer p with tau == p * unit (within tolerance), if any.
std::optional<long long> resonance_index(double tau, double unit) {
    const double p = std::round(tau / unit);
    if (std::abs(tau - p * unit) <= kResonanceTol) return static_cast<long long>(p);
    return std::nullopt;
}

LimitResult alternating(std::vector<double> even, std::vector<double> odd, Parity parity) {
    switch (parity) {
    case Parity::even:
        return {std::move(even), false};
    case Parity::odd:
        return {std::move(odd), false};
    case Parity::generic:
        break;
    }
    return {std::nullopt, true};
}

} // namespace

double magnetization_single_qubit(std::size_t n, double tau) { return ipow(std::cos(tau), n); }

std::vector<double> probs_single_qubit(std::size_t n, double tau) {
    const double m = magnetization_single_qubit(n, tau);
    return {0.5 * (1.0 + m), 0.5 * (1.0 - m)};
}

std::vector<double> probs_singlet_triplet(std::size_t n, double tau) {
    const double cn = ipow(std::cos(tau), n);
    const double qn = ipow((3.0 * std::cos(2.0 * tau) + 1.0) / 4.0, n);
    return {(3.0 * cn + qn + 2.0) / 6.0, (1.0 - qn) / 3.0, 0.0, (-3.0 * cn + qn + 2.0) / 6.0};
}

std::vector<double> probs_bell(std::size_t n, double tau) {
    const double c2n = ipow(std::cos(2.0 * tau), n);
    return {0.25 * (1.0 + c2n), 0.25 * (1.0 - c2n), 0.5, 0.0};
}

std::vector<double> probs(ModelKind kind, std::size_t n, double tau) {
    switch (kind) {
    case ModelKind::single_qubit:
        return probs_single_qubit(n, tau);
    case ModelKind::singlet_triplet:
        return probs_singlet_triplet(n, tau);
    case ModelKind::bell:
        return probs_bell(n, tau);
    case ModelKind::custom:
        break;
    }
    throw InvalidArgument("closed-form probabilities exist only for the built-in models");
}

ProbabilityTrace closed_form_trace(ModelKind kind, double tau, std::size_t n_max) {
    const auto first = probs(kind, 0, tau);
    ProbabilityTrace out(n_max, first.size());
    out.set_row(0, first);
    for (std::size_t n = 1; n <= n_max; ++n) out.set_row(n, probs(kind, n, tau));
    return out;
}

LimitResult limit_probs(ModelKind kind, double tau, Parity parity) {
    constexpr double pi = std::numbers::pi;
    switch (kind) {
    case ModelKind::single_qubit: {
        const auto p = resonance_index(tau, pi);
        if (!p) return {std::vector<double>{0.5, 0.5}, false};
        if (*p % 2 == 0) return {std::vector<double>{1.0, 0.0}, false};
        return alternating({1.0, 0.0}, {0.0, 1.0}, parity);
    }
    case ModelKind::singlet_triplet: {
        const auto p = resonance_index(tau, pi);
        if (!p) return {std::vector<double>{1.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0}, false};
        if (*p % 2 == 0) return {std::vector<double>{1.0, 0.0, 0.0, 0.0}, false};
        return alternating({1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, parity);
    }
    case ModelKind::bell: {
        const auto p = resonance_index(tau, pi / 2.0);
        if (!p) return {std::vector<double>{0.25, 0.25, 0.5, 0.0}, false};
        if (*p % 2 == 0) return {std::vector<double>{0.5, 0.0, 0.5, 0.0}, false};
        return alternating({0.5, 0.0, 0.5, 0.0}, {0.0, 0.5, 0.5, 0.0}, parity);
    }
    case ModelKind::custom:
        break;
    }
    throw InvalidArgument("limit_probs: no closed form for custom models");
}

} // namespace qmon::analytic
