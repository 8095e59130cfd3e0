#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qmon/errors.hpp"

namespace qmon {

using cplx = std::complex<double>;

/// Dense square matrix, row-major. Small dimensions only (N <= 16 is the
/// intended range); every operation is O(N^3) or cheaper.
template <class T>
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t dim);
    Matrix(std::size_t dim, std::vector<T> entries);
    Matrix(std::initializer_list<std::initializer_list<T>> rows);

    static Matrix identity(std::size_t dim);
    static Matrix diagonal(std::span<const T> diag);

    std::size_t dim() const { return dim_; }
    T &operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const T &operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    std::span<const T> data() const { return data_; }
    std::vector<T> column(std::size_t j) const;

    Matrix &operator+=(const Matrix &other);
    Matrix &operator-=(const Matrix &other);
    Matrix &operator*=(T scalar);

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }
    friend bool operator==(const Matrix &, const Matrix &) = default;

    /// Throws NumericalError when any entry is NaN or infinite.
    void check_finite() const;

  private:
    std::size_t dim_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

extern template class Matrix<cplx>;
extern template class Matrix<double>;

enum class EigenOrder { ascending, descending };

/// Eigen-decomposition of a self-adjoint matrix. Columns of `eigenvectors`
/// are orthonormal and paired with `eigenvalues`.
template <class T>
struct SelfAdjointEig {
    std::vector<double> eigenvalues;
    Matrix<T> eigenvectors;
};

using HermitianEig = SelfAdjointEig<cplx>;
using SymmetricEig = SelfAdjointEig<double>;

template <class T>
Matrix<T> matmul(const Matrix<T> &a, const Matrix<T> &b);
template <class T>
Matrix<T> adjoint(const Matrix<T> &a);
template <class T>
Matrix<T> kron(const Matrix<T> &a, const Matrix<T> &b);
template <class T>
double frobenius_norm(const Matrix<T> &a);
template <class T>
double frobenius_distance(const Matrix<T> &a, const Matrix<T> &b);
template <class T>
double max_abs(const Matrix<T> &a);

/// ||a - a^dagger||_max
template <class T>
double hermiticity_defect(const Matrix<T> &a);
/// ||a^dagger a - I||_max
template <class T>
double unitarity_defect(const Matrix<T> &a);

template <class T>
T trace(const Matrix<T> &a);

/// Cyclic Jacobi eigensolver.
///
/// Sweeps plane rotations over every (p, q) pair until the off-diagonal
/// Frobenius mass falls below 1e-14 * ||a||_F. Eigenvalues are sorted in the
/// requested order. Within a degenerate cluster (spread below 1e-9 * max(1,
/// ||a||_max)) the eigenvectors are rebuilt by projecting the unit vectors
/// e_0, e_1, ... onto the cluster's eigenspace and orthonormalizing, so each
/// vector carries as much weight as possible on the lowest free index. Every
/// eigenvector's first component with magnitude above 1e-10 is made real and
/// positive.
///
/// Throws InvalidArgument when `a` is not self-adjoint within 1e-12.
template <class T>
SelfAdjointEig<T> eig_self_adjoint(const Matrix<T> &a, EigenOrder order = EigenOrder::ascending);

inline HermitianEig eig_hermitian(const ComplexMatrix &a) { return eig_self_adjoint(a); }

/// exp(-i h tau) with hbar = 1, built from the eigen-decomposition of `h`.
ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix &h, double tau);

ComplexMatrix to_complex(const RealMatrix &a);

/// v^dagger a v for a column-vector `v`.
cplx expectation(const ComplexMatrix &a, std::span<const cplx> v);
std::vector<cplx> apply(const ComplexMatrix &a, std::span<const cplx> v);
std::vector<double> apply(const RealMatrix &a, std::span<const double> v);

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-12;

} // namespace qmon
