#include <doctest.h>

#include "oracles.hpp"
#include "qmon/evolve.hpp"
#include "qmon/sample.hpp"

using namespace qmon;
using oracle::pi;

namespace {

/// Fraction of (n, k) cells within 5 binomial standard errors of `exact`.
double fraction_within_5_sigma(const EmpiricalTrace &emp, const ProbabilityTrace &exact) {
    std::size_t ok = 0;
    std::size_t total = 0;
    const double shots = static_cast<double>(emp.n_shots());
    for (std::size_t n = 0; n < exact.rows(); ++n)
        for (std::size_t k = 0; k < exact.dim(); ++k) {
            const double p = exact.at(n, k);
            const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / shots);
            const double d = std::abs(emp.probability(n, k) - p);
            // a deterministic cell (sigma = 0) must be hit exactly
            ok += sigma == 0.0 ? (d < 1e-12) : (d < 5.0 * sigma);
            ++total;
        }
    return static_cast<double>(ok) / static_cast<double>(total);
}

} // namespace

TEST_CASE("SplitMix64 reference outputs") {
    // published SplitMix64 outputs for state 1234567
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);

    SplitMix64 a = SplitMix64::for_shot(7, 3);
    SplitMix64 b = SplitMix64::for_shot(7, 3);
    SplitMix64 c = SplitMix64::for_shot(7, 4);
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());

    SplitMix64 u(99);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("ShotConfig validation") {
    ShotConfig cfg;
    cfg.n_shots = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.n_shots = 10;
    cfg.gamma = 2.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.gamma = 0.0;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("sample_trajectory special cases") {
    const auto sq = single_qubit_model();
    ShotConfig cfg;
    cfg.n_max = 12;
    SplitMix64 rng(5);

    cfg.tau = 0.0;
    const auto frozen = sample_trajectory(sq, cfg, rng);
    CHECK(frozen.outcomes == std::vector<std::size_t>(12, 0));

    cfg.tau = pi;
    const auto flip = sample_trajectory(sq, cfg, rng);
    REQUIRE(flip.outcomes.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(flip.outcomes[i] == (i % 2 == 0 ? 1u : 0u));

    const auto st = two_qubit_model(TwoQubitBasis::singlet_triplet);
    cfg.n_shots = 500;
    cfg.n_max = 20;
    cfg.tau = 0.9;
    const auto t = run_shots(st, cfg);
    for (std::size_t n = 0; n <= 20; ++n) CHECK(t.count(n, 2) == 0);
}

TEST_CASE("run_shots single qubit at tau = pi/2") {
    ShotConfig cfg;
    cfg.n_shots = 8192;
    cfg.n_max = 1;
    cfg.tau = pi / 2;
    cfg.seed = 11;
    const auto t = run_shots(single_qubit_model(), cfg);
    CHECK(std::abs(t.probability(1, 0) - 0.5) < 5 * std::sqrt(0.25 / 8192));
    CHECK(t.probability(0, 0) == 1.0);
}

TEST_CASE("run_shots is deterministic and rows sum to n_shots") {
    ShotConfig cfg;
    cfg.n_shots = 300;
    cfg.n_max = 15;
    cfg.tau = 1.1;
    cfg.gamma = 0.05;
    cfg.seed = 2024;
    const auto m = two_qubit_model(TwoQubitBasis::bell);
    const auto a = run_shots(m, cfg);
    const auto b = run_shots(m, cfg);
    CHECK(a == b);
    for (std::size_t n = 0; n < a.rows(); ++n) {
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < a.dim(); ++k) s += a.count(n, k);
        CHECK(s == 300);
    }
    cfg.seed = 2025;
    CHECK_FALSE(run_shots(m, cfg) == a);
}

TEST_CASE("full depolarization gives uniform rows") {
    ShotConfig cfg;
    cfg.n_shots = 8192;
    cfg.n_max = 10;
    cfg.tau = 0.6;
    cfg.gamma = 1.0;
    cfg.seed = 3;
    for (const auto &m : {single_qubit_model(), two_qubit_model(TwoQubitBasis::singlet_triplet)}) {
        const auto t = run_shots(m, cfg);
        const double p = 1.0 / static_cast<double>(m.dim());
        const double sigma = std::sqrt(p * (1 - p) / 8192.0);
        for (std::size_t n = 1; n <= 10; ++n)
            for (std::size_t k = 0; k < m.dim(); ++k) CHECK(std::abs(t.probability(n, k) - p) < 5 * sigma);
    }
}

TEST_CASE("empirical traces match exact noisy probabilities") {
    ShotConfig cfg;
    cfg.n_shots = 8192;
    cfg.n_max = 24;
    cfg.seed = 77;
    for (const auto &m : {single_qubit_model(), two_qubit_model(TwoQubitBasis::singlet_triplet),
                          two_qubit_model(TwoQubitBasis::bell)}) {
        for (double tau : {0.4, pi / 4, 2.3}) {
            for (double gamma : {0.0, 0.12}) {
                cfg.tau = tau;
                cfg.gamma = gamma;
                const auto emp = run_shots(m, cfg);
                const auto exact = noisy_closed_form(run_exact(m, tau, cfg.n_max), gamma, m.dim());
                CHECK(fraction_within_5_sigma(emp, exact) >= 0.99);
            }
        }
    }
}

TEST_CASE("consecutive outcomes follow the transition matrix") {
    const auto m = two_qubit_model(TwoQubitBasis::singlet_triplet);
    const double tau = 1.2;
    const auto kernel = ShotKernel::build(m, tau, 0.0);
    std::vector<std::vector<double>> pairs(4, std::vector<double>(4, 0.0));
    std::vector<double> from(4, 0.0);
    for (std::uint64_t shot = 0; shot < 4000; ++shot) {
        auto rng = SplitMix64::for_shot(9, shot);
        const auto tr = sample_trajectory(kernel, 10, rng);
        for (std::size_t i = 0; i + 1 < tr.outcomes.size(); ++i) {
            pairs[tr.outcomes[i]][tr.outcomes[i + 1]] += 1.0;
            from[tr.outcomes[i]] += 1.0;
        }
    }
    for (std::size_t a = 0; a < 4; ++a) {
        if (from[a] == 0.0) continue;
        for (std::size_t b = 0; b < 4; ++b) {
            const double p = kernel.transitions(a, b);
            const double freq = pairs[a][b] / from[a];
            const double sigma = std::sqrt(p * (1 - p) / from[a]);
            CHECK(std::abs(freq - p) <= std::max(5 * sigma, 1e-12));
        }
    }
}

TEST_CASE("EmpiricalTrace merging and errors") {
    EmpiricalTrace a(2, 2, 4);
    EmpiricalTrace b(2, 2, 4);
    a.add(1, 0);
    b.add(1, 0);
    b.add(1, 1);
    a += b;
    CHECK(a.count(1, 0) == 2);
    CHECK(a.count(1, 1) == 1);
    CHECK(a.n_shots() == 8);
    CHECK(a.probability(1, 0) == 0.25);
    CHECK_NEAR(a.stderr_of(1, 0), std::sqrt(0.25 * 0.75 / 8), 1e-15);
    CHECK_THROWS_AS(a += EmpiricalTrace(2, 3, 4), InvalidArgument);
}

TEST_CASE("empirical_magnetization") {
    EmpiricalTrace t(3, 2, 10);
    for (std::size_t n = 0; n <= 3; ++n)
        for (int s = 0; s < 10; ++s) t.add(n, 0);
    CHECK(empirical_magnetization(t) == std::vector<double>(4, 1.0));

    ShotConfig cfg;
    cfg.n_shots = 64;
    cfg.n_max = 7;
    cfg.tau = pi;
    const auto flip = empirical_magnetization(run_shots(single_qubit_model(), cfg));
    for (std::size_t n = 0; n <= 7; ++n) CHECK(flip[n] == (n % 2 == 0 ? 1.0 : -1.0));

    cfg.n_shots = 8192;
    cfg.n_max = 30;
    cfg.tau = pi / 2;
    const auto half = empirical_magnetization(run_shots(single_qubit_model(), cfg));
    for (std::size_t n = 5; n <= 30; ++n) CHECK(std::abs(half[n]) < 5.0 / std::sqrt(8192.0));

    CHECK_THROWS_AS(empirical_magnetization(EmpiricalTrace(2, 4, 1)), InvalidArgument);
}
