// aperture.hpp — Real Gaussian-mixture aperture functions
//
//     alpha(Q) = sum_j w_j exp(-(Q - c_j)^2 / (2 sigma_j^2))
//     alpha~(a) = (1/2pi) int dQ alpha(Q) e^{-iQa}
//               = sum_j w_j sigma_j / sqrt(2pi) exp(-sigma_j^2 a^2 / 2 - i c_j a)

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "qbath/errors.hpp"

namespace qbath {

struct GaussianSlit {
    double weight{1.0};
    double center{0.0};
    double width{1.0};  // sigma
};

class Aperture {
public:
    explicit Aperture(std::vector<GaussianSlit> components) : components_(std::move(components)) {
        if (components_.empty()) throw DomainError("aperture: needs at least one component");
        for (const auto& c : components_) {
            if (!(c.width > 0.0)) throw DomainError("aperture: widths must be positive");
            if (!std::isfinite(c.weight) || !std::isfinite(c.center))
                throw DomainError("aperture: weights and centers must be finite reals");
        }
    }

    // Equal-weight slits of width sigma at -d/2 and +d/2.
    static Aperture two_slit(double d, double sigma) {
        if (!(d > 0.0)) throw DomainError("two_slit: separation must be positive");
        return Aperture({{1.0, -0.5 * d, sigma}, {1.0, 0.5 * d, sigma}});
    }

    const std::vector<GaussianSlit>& components() const noexcept { return components_; }
    std::size_t size() const noexcept { return components_.size(); }

    double component(std::size_t j, double q) const {
        const auto& c = components_[j];
        const double z = (q - c.center) / c.width;
        return c.weight * std::exp(-0.5 * z * z);
    }

    double operator()(double q) const {
        double s = 0.0;
        for (std::size_t j = 0; j < size(); ++j) s += component(j, q);
        return s;
    }

    std::complex<double> fourier_component(std::size_t j, double a) const {
        const auto& c = components_[j];
        const double amp = c.weight * c.width / std::sqrt(2.0 * std::numbers::pi) *
                           std::exp(-0.5 * c.width * c.width * a * a);
        return amp * std::polar(1.0, -c.center * a);
    }

    std::complex<double> fourier(double a) const {
        std::complex<double> s{};
        for (std::size_t j = 0; j < size(); ++j) s += fourier_component(j, a);
        return s;
    }

    // int dQ alpha_j(Q) alpha_k(Q) rho(Q) with rho the normalized Gaussian of
    // variance `var` (thermal position distribution), or rho = 1 when var is
    // infinite (free particle; the 1/L factor is dropped).
    double pair_weight(std::size_t j, std::size_t k, double var) const {
        const auto& cj = components_[j];
        const auto& ck = components_[k];
        const double pj = 1.0 / (cj.width * cj.width), pk = 1.0 / (ck.width * ck.width);
        const bool free = std::isinf(var);
        const double a = pj + pk + (free ? 0.0 : 1.0 / var);
        const double b = cj.center * pj + ck.center * pk;
        const double c = 0.5 * (cj.center * cj.center * pj + ck.center * ck.center * pk);
        double r = cj.weight * ck.weight * std::sqrt(2.0 * std::numbers::pi / a) *
                   std::exp(0.5 * b * b / a - c);
        if (!free) r /= std::sqrt(2.0 * std::numbers::pi * var);
        return r;
    }

    // Trace of the prepared state alpha rho_th alpha restricted to the
    // sub-system position distribution.
    double trace(double var) const {
        double s = 0.0;
        for (std::size_t j = 0; j < size(); ++j)
            for (std::size_t k = 0; k < size(); ++k) s += pair_weight(j, k, var);
        return s;
    }

private:
    std::vector<GaussianSlit> components_;
};

} // namespace qbath
