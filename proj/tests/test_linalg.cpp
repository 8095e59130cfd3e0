#include <doctest.h>

#include "oracles.hpp"
#include "qmon/linalg.hpp"
#include "qmon/model.hpp"

using namespace qmon;
using oracle::pi;

namespace {

const cplx I(0.0, 1.0);

} // namespace

TEST_CASE("matmul") {
    const auto sx = pauli(Axis::x);
    const auto sy = pauli(Axis::y);
    const auto sz = pauli(Axis::z);
    CHECK(matmul(ComplexMatrix::identity(2), sy) == sy);
    CHECK(matmul(sx, sx) == ComplexMatrix::identity(2));
    // hand product: [[0,1],[1,0]] [[1,0],[0,-1]] = [[0,-1],[1,0]] = -i sigma_y
    CHECK(frobenius_distance(matmul(sx, sz), -I * sy) == 0.0);
    CHECK_THROWS_AS(matmul(sx, ComplexMatrix::identity(4)), InvalidArgument);
}

TEST_CASE("adjoint") {
    const auto sy = pauli(Axis::y);
    CHECK(adjoint(sy) == sy);
    const ComplexMatrix d{{I, 0.0}, {0.0, -I}};
    CHECK(adjoint(d) == ComplexMatrix{{-I, 0.0}, {0.0, I}});
    const auto a = oracle::random_matrix(3, 5);
    CHECK(adjoint(adjoint(a)) == a);

    const auto u = unitary_from_hamiltonian(single_qubit_model().hamiltonian(), 0.7);
    CHECK(max_abs(matmul(u, adjoint(u)) - ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("kron") {
    const auto id2 = ComplexMatrix::identity(2);
    CHECK(kron(id2, id2) == ComplexMatrix::identity(4));

    const std::vector<cplx> d12{1.0, 2.0};
    const std::vector<cplx> d34{3.0, 4.0};
    const std::vector<cplx> d3468{3.0, 4.0, 6.0, 8.0};
    CHECK(kron(ComplexMatrix::diagonal(d12), ComplexMatrix::diagonal(d34)) == ComplexMatrix::diagonal(d3468));

    const auto sx = pauli(Axis::x);
    const ComplexMatrix h = 0.5 * (kron(sx, id2) + kron(id2, sx));
    // hand eigendecomposition of the 4x4 matrix: -1, 0, 0, 1
    const auto eig = eig_hermitian(h);
    const std::vector<double> expected{-1.0, 0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK_NEAR(eig.eigenvalues[i], expected[i], 1e-12);
}

TEST_CASE("kron mixed product and associativity on random instances") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const auto a = oracle::random_matrix(2, seed);
        const auto b = oracle::random_matrix(3, seed + 10);
        const auto c = oracle::random_matrix(2, seed + 20);
        const auto d = oracle::random_matrix(3, seed + 30);
        const auto lhs = matmul(kron(a, b), kron(c, d));
        const auto rhs = kron(matmul(a, c), matmul(b, d));
        CHECK(frobenius_distance(lhs, rhs) < 1e-11);
        const auto e = oracle::random_matrix(2, seed + 40);
        CHECK(frobenius_distance(kron(kron(a, b), e), kron(a, kron(b, e))) < 1e-11);
    }
}

TEST_CASE("eig_hermitian on Pauli matrices") {
    const auto ez = eig_hermitian(pauli(Axis::z));
    CHECK(ez.eigenvalues == std::vector<double>{-1.0, 1.0});

    const auto ex = eig_hermitian(pauli(Axis::x));
    CHECK_NEAR(ex.eigenvalues[0], -1.0, 1e-15);
    CHECK_NEAR(ex.eigenvalues[1], 1.0, 1e-15);
    const double r = 1.0 / std::sqrt(2.0);
    // (|0> - |1>)/sqrt2 and (|0> + |1>)/sqrt2 with real positive leading entry
    CHECK_NEAR(std::abs(ex.eigenvectors(0, 0) - r), 0.0, 1e-15);
    CHECK_NEAR(std::abs(ex.eigenvectors(1, 0) + r), 0.0, 1e-15);
    CHECK_NEAR(std::abs(ex.eigenvectors(0, 1) - r), 0.0, 1e-15);
    CHECK_NEAR(std::abs(ex.eigenvectors(1, 1) - r), 0.0, 1e-15);
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
    const ComplexMatrix a{{0.0, 1.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(eig_hermitian(a), InvalidArgument);
}

TEST_CASE("eig_hermitian degenerate cluster is canonical") {
    const auto model = two_qubit_model(TwoQubitBasis::bell);
    const auto eig = eig_hermitian(model.hamiltonian());
    // zero eigenspace is span{(|00>-|11>)/sqrt2, (|01>-|10>)/sqrt2}; pivoting on
    // e_0 first yields (1,0,0,-1)/sqrt2 and then (0,1,-1,0)/sqrt2
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<cplx> v1{r, 0.0, 0.0, -r};
    const std::vector<cplx> v2{0.0, r, -r, 0.0};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(eig.eigenvectors(i, 1) - v1[i]) < 1e-12);
        CHECK(std::abs(eig.eigenvectors(i, 2) - v2[i]) < 1e-12);
    }
    // same output for a permuted but equal input
    const auto again = eig_hermitian(ComplexMatrix(model.hamiltonian()));
    CHECK(again.eigenvectors == eig.eigenvectors);
}

TEST_CASE("eig_hermitian invariants on random Hermitian matrices") {
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u}) {
        for (unsigned seed = 0; seed < 4; ++seed) {
            const auto a = oracle::random_hermitian(n, seed * 31 + static_cast<unsigned>(n));
            const auto eig = eig_hermitian(a);
            const double scale = frobenius_norm(a);
            CHECK(unitarity_defect(eig.eigenvectors) < 1e-12);
            CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
            std::vector<cplx> lam(eig.eigenvalues.begin(), eig.eigenvalues.end());
            const auto rebuilt =
                matmul(eig.eigenvectors, matmul(ComplexMatrix::diagonal(lam), adjoint(eig.eigenvectors)));
            CHECK(frobenius_distance(rebuilt, a) < 1e-11 * scale);
            for (std::size_t k = 0; k < n; ++k) {
                const auto v = eig.eigenvectors.column(k);
                const auto av = qmon::apply(a, v);
                double err = 0.0;
                for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(av[i] - eig.eigenvalues[k] * v[i]));
                CHECK(err < 1e-12 * std::max(1.0, scale));
            }
        }
    }
}

TEST_CASE("eig of real symmetric matrices stays real and can sort descending") {
    const RealMatrix a{{2.0, 1.0, 0.0}, {1.0, 2.0, 0.0}, {0.0, 0.0, 3.0}};
    const auto eig = eig_self_adjoint(a, EigenOrder::descending);
    CHECK_NEAR(eig.eigenvalues[0], 3.0, 1e-14);
    CHECK_NEAR(eig.eigenvalues[1], 3.0, 1e-14);
    CHECK_NEAR(eig.eigenvalues[2], 1.0, 1e-14);
    CHECK(unitarity_defect(eig.eigenvectors) < 1e-12);
}

TEST_CASE("unitary_from_hamiltonian") {
    const auto h1 = single_qubit_model().hamiltonian();
    CHECK(max_abs(unitary_from_hamiltonian(h1, 0.0) - ComplexMatrix::identity(2)) < 1e-15);

    for (double tau : {0.3, 1.1, pi / 2, pi, 2.5}) {
        // Rodrigues: exp(-i tau sigma_x / 2) = cos(tau/2) I - i sin(tau/2) sigma_x
        const auto expected = std::cos(tau / 2) * ComplexMatrix::identity(2) - I * std::sin(tau / 2) * pauli(Axis::x);
        const auto u = unitary_from_hamiltonian(h1, tau);
        CHECK(max_abs(u - expected) < 1e-14);
        CHECK(max_abs(u - oracle::propagator(h1, tau)) < 1e-13);
        CHECK(unitarity_defect(u) < 1e-12);

        // commuting two-qubit terms factorize
        const auto h2 = two_qubit_model(TwoQubitBasis::bell).hamiltonian();
        CHECK(max_abs(unitary_from_hamiltonian(h2, tau) - kron(u, u)) < 1e-13);
    }
    const ComplexMatrix bad{{0.0, 1.0}, {2.0, 0.0}};
    CHECK_THROWS_AS(unitary_from_hamiltonian(bad, 1.0), InvalidArgument);
}

TEST_CASE("unitary group property") {
    for (unsigned seed = 0; seed < 5; ++seed) {
        const auto h = oracle::random_hermitian(4, seed + 100);
        const auto a = unitary_from_hamiltonian(h, 0.37);
        const auto b = unitary_from_hamiltonian(h, 1.21);
        CHECK(max_abs(matmul(a, b) - unitary_from_hamiltonian(h, 0.37 + 1.21)) < 1e-11);
        CHECK(max_abs(a - oracle::propagator(h, 0.37)) < 1e-12);
    }
}

TEST_CASE("frobenius_distance") {
    const auto a = oracle::random_matrix(3, 9);
    CHECK(frobenius_distance(a, a) == 0.0);
    CHECK_NEAR(frobenius_distance(ComplexMatrix::identity(2), ComplexMatrix(2)), std::sqrt(2.0), 1e-15);
    // (sigma_x - sigma_z) has entries -1, 1, 1, 1
    CHECK_NEAR(frobenius_distance(pauli(Axis::x), pauli(Axis::z)), 2.0, 1e-15);
    CHECK_THROWS_AS(frobenius_distance(a, ComplexMatrix::identity(2)), InvalidArgument);
}

TEST_CASE("matrix construction rejects bad shapes and non-finite entries") {
    CHECK_THROWS_AS(ComplexMatrix(0), InvalidArgument);
    CHECK_THROWS_AS(RealMatrix(2, {1.0, 2.0, 3.0}), InvalidArgument);
    CHECK_THROWS_AS(RealMatrix(1, {std::nan("")}), NumericalError);
}
