// gaussian.hpp — Multivariate complex Gaussian integrals
//
//     int d^N y exp(-1/2 y^T M y + j^T y + c0)
//         = (2 pi)^{N/2} det(M)^{-1/2} exp(1/2 j^T M^{-1} j + c0)
//
// for complex symmetric M with positive definite real part. The square root
// branch is fixed without any continuation in parameters: writing
// M = L (I + i K) L^T with Re M = L L^T and K = W diag(lambda) W^T real
// symmetric, det(M)^{1/2} = prod L_ii * prod sqrt(1 + i lambda_m), and every
// factor 1 + i lambda_m lies in the right half plane.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include "qbath/errors.hpp"
#include "qbath/linalg.hpp"

namespace qbath {

using cplx = std::complex<double>;

template <std::size_t N>
using CVec = std::array<cplx, N>;

template <std::size_t N>
using CMat = std::array<std::array<cplx, N>, N>;

template <std::size_t N>
struct QuadraticForm {
    CMat<N> M{};  // symmetric
    CVec<N> j{};
    cplx c0{};

    // -1/2 y^T M y + j^T y + c0
    cplx exponent(const CVec<N>& y) const {
        cplx s = c0;
        for (std::size_t a = 0; a < N; ++a) {
            s += j[a] * y[a];
            for (std::size_t b = 0; b < N; ++b) s -= 0.5 * y[a] * M[a][b] * y[b];
        }
        return s;
    }
};

// Factorization of a complex symmetric matrix with positive definite real
// part; provides log det^{1/2} on the correct branch and M^{-1} x.
template <std::size_t N>
class ComplexSymmetricFactor {
public:
    explicit ComplexSymmetricFactor(const CMat<N>& m) {
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b)
                if (std::abs(m[a][b] - m[b][a]) > 1e-12 * (std::abs(m[a][b]) + std::abs(m[b][a]) + 1e-300))
                    throw NumericalError("gaussian: matrix is not symmetric");
        // Cholesky of the real part.
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k <= i; ++k) {
                double s = m[i][k].real();
                for (std::size_t r = 0; r < k; ++r) s -= l_[i][r] * l_[k][r];
                if (i == k) {
                    if (!(s > 0.0))
                        throw NumericalError("gaussian: real part of M is not positive definite");
                    l_[i][i] = std::sqrt(s);
                } else {
                    l_[i][k] = s / l_[k][k];
                }
            }
        }
        // K = L^{-1} Im(M) L^{-T}
        linalg::RMatrix im(N, N);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) im(a, b) = m[a][b].imag();
        linalg::RMatrix k(N, N);
        for (std::size_t col = 0; col < N; ++col) {
            std::array<double, N> x{};
            for (std::size_t a = 0; a < N; ++a) x[a] = im(a, col);
            forward(x);
            for (std::size_t a = 0; a < N; ++a) k(a, col) = x[a];
        }
        // now k = L^{-1} Im; apply L^{-T} from the right via symmetry
        linalg::RMatrix kt(N, N);
        for (std::size_t row = 0; row < N; ++row) {
            std::array<double, N> x{};
            for (std::size_t a = 0; a < N; ++a) x[a] = k(row, a);
            forward(x);
            for (std::size_t a = 0; a < N; ++a) kt(row, a) = x[a];
        }
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = a + 1; b < N; ++b) kt(a, b) = kt(b, a) = 0.5 * (kt(a, b) + kt(b, a));
        eig_ = linalg::jacobi_eigen(kt);

        log_sqrt_det_ = 0.0;
        for (std::size_t i = 0; i < N; ++i) log_sqrt_det_ += std::log(l_[i][i]);
        for (double lam : eig_.values) log_sqrt_det_ += 0.5 * std::log(cplx(1.0, lam));
    }

    // log det(M)^{1/2}
    cplx log_sqrt_det() const noexcept { return log_sqrt_det_; }

    // M^{-1} x = L^{-T} W (I + i Lambda)^{-1} W^T L^{-1} x
    CVec<N> solve(const CVec<N>& x) const {
        std::array<double, N> re{}, im{};
        for (std::size_t a = 0; a < N; ++a) {
            re[a] = x[a].real();
            im[a] = x[a].imag();
        }
        forward(re);
        forward(im);
        CVec<N> y{};
        for (std::size_t m = 0; m < N; ++m) {
            cplx proj{};
            for (std::size_t a = 0; a < N; ++a) proj += eig_.vectors(a, m) * cplx(re[a], im[a]);
            proj /= cplx(1.0, eig_.values[m]);
            for (std::size_t a = 0; a < N; ++a) y[a] += eig_.vectors(a, m) * proj;
        }
        for (std::size_t a = 0; a < N; ++a) {
            re[a] = y[a].real();
            im[a] = y[a].imag();
        }
        backward(re);
        backward(im);
        for (std::size_t a = 0; a < N; ++a) y[a] = {re[a], im[a]};
        return y;
    }

private:
    void forward(std::array<double, N>& x) const {
        for (std::size_t i = 0; i < N; ++i) {
            double s = x[i];
            for (std::size_t r = 0; r < i; ++r) s -= l_[i][r] * x[r];
            x[i] = s / l_[i][i];
        }
    }
    void backward(std::array<double, N>& x) const {
        for (std::size_t ii = N; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t r = ii + 1; r < N; ++r) s -= l_[r][ii] * x[r];
            x[ii] = s / l_[ii][ii];
        }
    }

    std::array<std::array<double, N>, N> l_{};
    linalg::SymEigen eig_;
    cplx log_sqrt_det_{};
};

template <std::size_t N>
cplx bilinear(const CVec<N>& x, const CVec<N>& y) {
    cplx s{};
    for (std::size_t a = 0; a < N; ++a) s += x[a] * y[a];
    return s;
}

// Logarithm of the Gaussian integral (imaginary part defined modulo 2 pi).
template <std::size_t N>
cplx log_gaussian_integrate(const QuadraticForm<N>& q) {
    const ComplexSymmetricFactor<N> f(q.M);
    const CVec<N> mj = f.solve(q.j);
    return 0.5 * static_cast<double>(N) * std::log(2.0 * std::numbers::pi) - f.log_sqrt_det() +
           0.5 * bilinear(q.j, mj) + q.c0;
}

template <std::size_t N>
cplx gaussian_integrate(const QuadraticForm<N>& q) {
    return std::exp(log_gaussian_integrate(q));
}

} // namespace qbath
