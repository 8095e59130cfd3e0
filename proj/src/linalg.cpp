#include "qmon/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qmon {

namespace {

inline double conj(double x) { return x; }
inline cplx conj(cplx x) { return std::conj(x); }
inline double abs2(double x) { return x * x; }
inline double abs2(cplx x) { return std::norm(x); }

template <class T>
bool is_finite(T x) {
    if constexpr (std::is_same_v<T, cplx>) {
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    } else {
        return std::isfinite(x);
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char *op) {
    if (a != b) {
        throw InvalidArgument(std::string(op) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                              std::to_string(b) + ")");
    }
}

} // namespace

template <class T>
Matrix<T>::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, T{}) {
    if (dim == 0) throw InvalidArgument("Matrix: dimension must be at least 1");
}

template <class T>
Matrix<T>::Matrix(std::size_t dim, std::vector<T> entries) : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) throw InvalidArgument("Matrix: dimension must be at least 1");
    if (data_.size() != dim * dim) throw InvalidArgument("Matrix: entry count does not match dim*dim");
    check_finite();
}

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows) : dim_(rows.size()) {
    if (dim_ == 0) throw InvalidArgument("Matrix: dimension must be at least 1");
    data_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        if (row.size() != dim_) throw InvalidArgument("Matrix: rows must form a square matrix");
        data_.insert(data_.end(), row.begin(), row.end());
    }
    check_finite();
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = T{1};
    return m;
}

template <class T>
Matrix<T> Matrix<T>::diagonal(std::span<const T> diag) {
    Matrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

template <class T>
std::vector<T> Matrix<T>::column(std::size_t j) const {
    std::vector<T> col(dim_);
    for (std::size_t i = 0; i < dim_; ++i) col[i] = (*this)(i, j);
    return col;
}

template <class T>
Matrix<T> &Matrix<T>::operator+=(const Matrix &other) {
    require_same_dim(dim_, other.dim_, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

template <class T>
Matrix<T> &Matrix<T>::operator-=(const Matrix &other) {
    require_same_dim(dim_, other.dim_, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

template <class T>
Matrix<T> &Matrix<T>::operator*=(T scalar) {
    for (auto &x : data_) x *= scalar;
    return *this;
}

template <class T>
void Matrix<T>::check_finite() const {
    for (const auto &x : data_) {
        if (!is_finite(x)) throw NumericalError("Matrix: non-finite entry");
    }
}

template class Matrix<cplx>;
template class Matrix<double>;

template <class T>
Matrix<T> matmul(const Matrix<T> &a, const Matrix<T> &b) {
    require_same_dim(a.dim(), b.dim(), "matmul");
    const std::size_t n = a.dim();
    Matrix<T> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

template <class T>
Matrix<T> adjoint(const Matrix<T> &a) {
    const std::size_t n = a.dim();
    Matrix<T> r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(j, i) = conj(a(i, j));
    return r;
}

template <class T>
Matrix<T> kron(const Matrix<T> &a, const Matrix<T> &b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    Matrix<T> r(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
    return r;
}

template <class T>
double frobenius_norm(const Matrix<T> &a) {
    double s = 0.0;
    for (const auto &x : a.data()) s += abs2(x);
    return std::sqrt(s);
}

template <class T>
double frobenius_distance(const Matrix<T> &a, const Matrix<T> &b) {
    require_same_dim(a.dim(), b.dim(), "frobenius_distance");
    double s = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) s += abs2(da[i] - db[i]);
    return std::sqrt(s);
}

template <class T>
double max_abs(const Matrix<T> &a) {
    double m = 0.0;
    for (const auto &x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

template <class T>
double hermiticity_defect(const Matrix<T> &a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - conj(a(j, i))));
    return m;
}

template <class T>
double unitarity_defect(const Matrix<T> &a) {
    return max_abs(matmul(adjoint(a), a) - Matrix<T>::identity(a.dim()));
}

template <class T>
T trace(const Matrix<T> &a) {
    T t{};
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

namespace {

template <class T>
double off_diagonal_norm(const Matrix<T> &a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) s += abs2(a(i, j));
    return std::sqrt(s);
}

// One Jacobi rotation zeroing a(p, q). The 2x2 block is first made real by
// the phase of a(p, q), then annihilated with the classic tangent formula.
// G = [[c, s], [-s conj(ph), c conj(ph)]] acting on columns p and q.
template <class T>
void rotate(Matrix<T> &a, Matrix<T> &v, std::size_t p, std::size_t q) {
    const T apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const T phase = apq / mag;
    const double app = std::real(a(p, p));
    const double aqq = std::real(a(q, q));
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const T gpp = T(c);
    const T gpq = T(s);
    const T gqp = -s * conj(phase);
    const T gqq = c * conj(phase);

    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const T akp = a(k, p);
        const T akq = a(k, q);
        a(k, p) = akp * gpp + akq * gqp;
        a(k, q) = akp * gpq + akq * gqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const T apk = a(p, k);
        const T aqk = a(q, k);
        a(p, k) = conj(gpp) * apk + conj(gqp) * aqk;
        a(q, k) = conj(gpq) * apk + conj(gqq) * aqk;
    }
    a(p, q) = T{};
    a(q, p) = T{};
    a(p, p) = T(std::real(a(p, p)));
    a(q, q) = T(std::real(a(q, q)));

    for (std::size_t k = 0; k < n; ++k) {
        const T vkp = v(k, p);
        const T vkq = v(k, q);
        v(k, p) = vkp * gpp + vkq * gqp;
        v(k, q) = vkp * gpq + vkq * gqq;
    }
}

template <class T>
void fix_phase(std::vector<T> &vec) {
    for (const auto &x : vec) {
        const double m = std::abs(x);
        if (m > 1e-10) {
            const T ph = conj(x) / m;
            for (auto &y : vec) y *= ph;
            return;
        }
    }
}

template <class T>
T dot(const std::vector<T> &a, const std::vector<T> &b) {
    T s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += conj(a[i]) * b[i];
    return s;
}

// Canonical orthonormal basis for span(vectors). Greedy Gram-Schmidt on the
// projections of the unit vectors e_j: each step takes the e_j whose residual
// projection is largest (lowest j on ties), and the result is ordered by
// pivot index.
template <class T>
std::vector<std::vector<T>> canonical_basis(const std::vector<std::vector<T>> &vectors, std::size_t n) {
    std::vector<std::pair<std::size_t, std::vector<T>>> picked;
    std::vector<bool> used(n, false);
    while (picked.size() < vectors.size()) {
        std::size_t best = n;
        double best_norm = 0.0;
        std::vector<T> best_w;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            std::vector<T> w(n, T{});
            for (const auto &v : vectors) {
                const T coeff = conj(v[j]);
                for (std::size_t i = 0; i < n; ++i) w[i] += coeff * v[i];
            }
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto &[pivot, u] : picked) {
                    const T c = dot(u, w);
                    for (std::size_t i = 0; i < n; ++i) w[i] -= c * u[i];
                }
            }
            double nrm = 0.0;
            for (const auto &x : w) nrm += abs2(x);
            nrm = std::sqrt(nrm);
            if (nrm > best_norm + 1e-9) {
                best = j;
                best_norm = nrm;
                best_w = std::move(w);
            }
        }
        if (best == n || best_norm < 1e-3) throw NumericalError("eig: failed to canonicalize degenerate eigenspace");
        for (auto &x : best_w) x /= best_norm;
        used[best] = true;
        picked.emplace_back(best, std::move(best_w));
    }
    std::sort(picked.begin(), picked.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    std::vector<std::vector<T>> out;
    for (auto &[pivot, w] : picked) out.push_back(std::move(w));
    return out;
}

} // namespace

template <class T>
SelfAdjointEig<T> eig_self_adjoint(const Matrix<T> &input, EigenOrder order) {
    if (hermiticity_defect(input) > kHermitianTol) {
        throw InvalidArgument("eig: matrix is not self-adjoint within 1e-12");
    }
    const std::size_t n = input.dim();
    Matrix<T> a = input;
    for (std::size_t i = 0; i < n; ++i) a(i, i) = T(std::real(a(i, i)));
    Matrix<T> v = Matrix<T>::identity(n);

    const double scale = frobenius_norm(input);
    const double target = 1e-14 * scale;
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
        if (++sweep > kMaxSweeps) throw NumericalError("eig: Jacobi iteration did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        const double li = std::real(a(i, i));
        const double lj = std::real(a(j, j));
        return order == EigenOrder::ascending ? li < lj : li > lj;
    });

    SelfAdjointEig<T> out{std::vector<double>(n), Matrix<T>(n)};
    const double cluster_tol = 1e-9 * std::max(1.0, max_abs(input));
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && std::abs(std::real(a(idx[stop], idx[stop])) - std::real(a(idx[stop - 1], idx[stop - 1]))) <=
                               cluster_tol) {
            ++stop;
        }
        std::vector<std::vector<T>> vecs;
        for (std::size_t r = start; r < stop; ++r) vecs.push_back(v.column(idx[r]));
        if (vecs.size() > 1) vecs = canonical_basis(vecs, n);
        for (std::size_t r = start; r < stop; ++r) {
            auto &col = vecs[r - start];
            fix_phase(col);
            out.eigenvalues[r] = std::real(a(idx[r], idx[r]));
            for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, r) = col[i];
        }
        start = stop;
    }
    return out;
}

ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix &h, double tau) {
    const auto eig = eig_hermitian(h);
    const std::size_t n = h.dim();
    ComplexMatrix u(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx ph = std::exp(cplx(0.0, -eig.eigenvalues[k] * tau));
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = eig.eigenvectors(i, k) * ph;
            for (std::size_t j = 0; j < n; ++j) u(i, j) += vik * std::conj(eig.eigenvectors(j, k));
        }
    }
    return u;
}

ComplexMatrix to_complex(const RealMatrix &a) {
    ComplexMatrix c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = a(i, j);
    return c;
}

cplx expectation(const ComplexMatrix &a, std::span<const cplx> v) {
    require_same_dim(a.dim(), v.size(), "expectation");
    cplx s{};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        cplx row{};
        for (std::size_t j = 0; j < a.dim(); ++j) row += a(i, j) * v[j];
        s += std::conj(v[i]) * row;
    }
    return s;
}

std::vector<cplx> apply(const ComplexMatrix &a, std::span<const cplx> v) {
    require_same_dim(a.dim(), v.size(), "apply");
    std::vector<cplx> r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) r[i] += a(i, j) * v[j];
    return r;
}

std::vector<double> apply(const RealMatrix &a, std::span<const double> v) {
    require_same_dim(a.dim(), v.size(), "apply");
    std::vector<double> r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) r[i] += a(i, j) * v[j];
    return r;
}

#define QMON_INSTANTIATE(T)                                                                                            \
    template Matrix<T> matmul(const Matrix<T> &, const Matrix<T> &);                                                 \
    template Matrix<T> adjoint(const Matrix<T> &);                                                                   \
    template Matrix<T> kron(const Matrix<T> &, const Matrix<T> &);                                                   \
    template double frobenius_norm(const Matrix<T> &);                                                               \
    template double frobenius_distance(const Matrix<T> &, const Matrix<T> &);                                        \
    template double max_abs(const Matrix<T> &);                                                                      \
    template double hermiticity_defect(const Matrix<T> &);                                                           \
    template double unitarity_defect(const Matrix<T> &);                                                             \
    template T trace(const Matrix<T> &);                                                                             \
    template SelfAdjointEig<T> eig_self_adjoint(const Matrix<T> &, EigenOrder);

QMON_INSTANTIATE(cplx)
QMON_INSTANTIATE(double)

#undef QMON_INSTANTIATE

} // namespace qmon
