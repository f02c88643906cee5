// linalg.hpp — Small dense linear algebra: matrices, symmetric eigensolvers,
// complex LU solves and the matrix exponential.
//
// Two symmetric eigensolvers live here: cyclic Jacobi for tiny matrices
// (3x3 Gaussian forms, test oracles) and Householder tridiagonalization
// followed by implicit QL for the bath matrices (N up to a few thousand).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "qbath/errors.hpp"

namespace qbath::linalg {

using cplx = std::complex<double>;

// Row-major dense matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    T* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
    const T* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(T s) {
        for (auto& x : data_) x *= s;
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix product: shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            T* ci = c.row(i);
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) continue;
                const T* bk = b.row(k);
                for (std::size_t j = 0; j < b.cols_; ++j) ci[j] += aik * bk[j];
            }
        }
        return c;
    }

private:
    std::size_t rows_{0}, cols_{0};
    std::vector<T> data_;
};

using RMatrix = Matrix<double>;
using CMatrix = Matrix<cplx>;

inline CMatrix to_complex(const RMatrix& a) {
    CMatrix c(a.rows(), a.cols());
    for (std::size_t k = 0; k < a.data().size(); ++k) c.data()[k] = a.data()[k];
    return c;
}

inline double norm1(const CMatrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

inline double frobenius(const CMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

// Eigen-decomposition of a real symmetric matrix. Eigenvalues ascending;
// vectors(i, k) is component i of eigenvector k (when computed).
struct SymEigen {
    std::vector<double> values;
    RMatrix vectors;
    std::vector<double> first_row;  // vectors(0, k) for every k
};

// Cyclic Jacobi. Intended for n up to a few dozen.
inline SymEigen jacobi_eigen(RMatrix a, double tol = 1e-15, int max_sweeps = 100) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DomainError("jacobi_eigen: matrix not square");
    RMatrix v = RMatrix::identity(n);
    auto off = [&] {
        double s = 0.0, d = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) (i == j ? d : s) += a(i, j) * a(i, j);
        return std::pair{std::sqrt(s), std::sqrt(d)};
    };
    int sweep = 0;
    for (;; ++sweep) {
        const auto [o, d] = off();
        if (o <= tol * std::max(d, 1e-300) || o == 0.0) break;
        if (sweep >= max_sweeps) throw NumericalError("jacobi_eigen: no convergence");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
    SymEigen r;
    r.values.resize(n);
    r.vectors = RMatrix(n, n);
    r.first_row.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
        r.first_row[k] = r.vectors(0, k);
    }
    return r;
}

enum class VectorScope { none, first_row, full };

namespace detail {

// Implicit QL on a symmetric tridiagonal matrix (diag d, super-diagonal e of
// length n-1). Rotations are applied to the rows of `rows_t` (which holds
// eigenvectors as rows) and to `first`, the tracked first components.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double> e, RMatrix* rows_t,
                           std::vector<double>* first) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    double f = 0.0, tst1 = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 60) throw NumericalError("tridiagonal QL: no convergence");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;
                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    const std::size_t i = ii;
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (rows_t) {
                        double* ri = rows_t->row(i);
                        double* rj = rows_t->row(i + 1);
                        const std::size_t cols = rows_t->cols();
                        for (std::size_t k = 0; k < cols; ++k) {
                            const double hk = rj[k];
                            rj[k] = s * ri[k] + c * hk;
                            ri[k] = c * ri[k] - s * hk;
                        }
                    }
                    if (first) {
                        const double hk = (*first)[i + 1];
                        (*first)[i + 1] = s * (*first)[i] + c * hk;
                        (*first)[i] = c * (*first)[i] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

} // namespace detail

// Eigenvalues (ascending) of a symmetric tridiagonal matrix, optionally with
// the first component of every eigenvector.
inline SymEigen tridiagonal_eigen(std::vector<double> diag, std::vector<double> offdiag,
                                  VectorScope scope = VectorScope::none) {
    const std::size_t n = diag.size();
    std::vector<double> first;
    RMatrix rows_t;
    if (scope == VectorScope::first_row) {
        first.assign(n, 0.0);
        if (n) first[0] = 1.0;
    }
    if (scope == VectorScope::full) rows_t = RMatrix::identity(n);
    detail::tridiagonal_ql(diag, std::move(offdiag), scope == VectorScope::full ? &rows_t : nullptr,
                           scope == VectorScope::first_row ? &first : nullptr);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
    SymEigen r;
    r.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) r.values[k] = diag[order[k]];
    if (scope == VectorScope::first_row) {
        r.first_row.resize(n);
        for (std::size_t k = 0; k < n; ++k) r.first_row[k] = first[order[k]];
    } else if (scope == VectorScope::full) {
        r.vectors = RMatrix(n, n);
        r.first_row.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = rows_t(order[k], i);
        for (std::size_t k = 0; k < n; ++k) r.first_row[k] = r.vectors(0, k);
    }
    return r;
}

// Householder reduction to tridiagonal form followed by implicit QL.
// Reflectors act on indices k+1..n-1 at step k, so the first basis vector is
// left invariant: the first eigenvector components come out of the
// tridiagonal problem alone, at O(n^2) extra cost instead of O(n^3).
inline SymEigen symmetric_eigen(RMatrix a, VectorScope scope = VectorScope::full) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DomainError("symmetric_eigen: matrix not square");
    if (n == 0) return {};

    std::vector<std::vector<double>> reflectors;
    std::vector<double> p(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the reflected block
        std::vector<double> v(m);
        double scale = 0.0;
        for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(a(k + 1 + i, k)));
        if (scale == 0.0) {
            if (scope == VectorScope::full) reflectors.emplace_back();
            continue;
        }
        double sigma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = a(k + 1 + i, k) / scale;
            sigma += v[i] * v[i];
        }
        double tail = sigma - v[0] * v[0];
        if (tail == 0.0) {
            if (scope == VectorScope::full) reflectors.emplace_back();
            continue;
        }
        const double norm = std::sqrt(sigma);
        const double alpha = v[0] > 0 ? -norm : norm;
        v[0] -= alpha;
        double vnorm = std::sqrt(tail + v[0] * v[0]);
        for (auto& x : v) x /= vnorm;

        // p = 2 A v over the trailing block; w = p - (v.p) v
        double vp = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double* ai = a.row(k + 1 + i) + (k + 1);
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += ai[j] * v[j];
            p[i] = 2.0 * s;
            vp += v[i] * p[i];
        }
        for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - vp * v[i];
        for (std::size_t i = 0; i < m; ++i) {
            double* ai = a.row(k + 1 + i) + (k + 1);
            const double vi = v[i], wi = w[i];
            for (std::size_t j = 0; j < m; ++j) ai[j] -= vi * w[j] + wi * v[j];
        }
        a(k + 1, k) = a(k, k + 1) = alpha * scale;
        for (std::size_t i = 1; i < m; ++i) a(k + 1 + i, k) = a(k, k + 1 + i) = 0.0;
        if (scope == VectorScope::full) reflectors.push_back(std::move(v));
    }

    std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) off[i] = a(i + 1, i);

    if (scope != VectorScope::full) return tridiagonal_eigen(std::move(diag), std::move(off), scope);

    // Q^T = H_{n-3} ... H_0, stored row-major; rows become eigenvectors.
    RMatrix qt = RMatrix::identity(n);
    std::vector<double> vm(n);
    for (std::size_t k = 0; k < reflectors.size(); ++k) {
        const auto& v = reflectors[k];
        if (v.empty()) continue;
        const std::size_t m = v.size();
        std::fill(vm.begin(), vm.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double* qi = qt.row(k + 1 + i);
            for (std::size_t j = 0; j < n; ++j) vm[j] += v[i] * qi[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            double* qi = qt.row(k + 1 + i);
            const double f = 2.0 * v[i];
            for (std::size_t j = 0; j < n; ++j) qi[j] -= f * vm[j];
        }
    }
    detail::tridiagonal_ql(diag, std::move(off), &qt, nullptr);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
    SymEigen r;
    r.values.resize(n);
    r.vectors = RMatrix(n, n);
    r.first_row.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = diag[order[k]];
        const double* row = qt.row(order[k]);
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = row[i];
        r.first_row[k] = row[0];
    }
    return r;
}

// Solve A X = B for complex square A by LU with partial pivoting.
inline CMatrix lu_solve(CMatrix a, CMatrix b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n) throw DomainError("lu_solve: shape mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) == 0.0) throw NumericalError("lu_solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            if (f == cplx{}) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s = b(kk, j);
            for (std::size_t i = kk + 1; i < n; ++i) s -= a(kk, i) * b(i, j);
            b(kk, j) = s / a(kk, kk);
        }
    }
    return b;
}

// Matrix exponential by scaling and squaring with a diagonal (6,6) Pade
// approximant; the scaled matrix has 1-norm <= 1/2.
inline CMatrix expm(const CMatrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DomainError("expm: matrix not square");
    const double nrm = norm1(a);
    int squarings = 0;
    if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    CMatrix x = a * cplx(std::ldexp(1.0, -squarings));

    constexpr int q = 6;
    CMatrix num = CMatrix::identity(n), den = CMatrix::identity(n), power = CMatrix::identity(n);
    double c = 1.0;
    for (int k = 1; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / (k * (2.0 * q - k + 1));
        power = power * x;
        num += power * cplx(c);
        den += power * cplx((k % 2 ? -1.0 : 1.0) * c);
    }
    CMatrix r = lu_solve(den, num);
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

} // namespace qbath::linalg
