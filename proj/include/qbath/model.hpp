// model.hpp — Physical parameters and the analytic ohmic building blocks
//
// Units: hbar = m = 1 everywhere in the core. Frequencies in rad/time.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "qbath/errors.hpp"

namespace qbath {

// Inverse temperature with an exact T = 0 state. Zero temperature is a flag,
// not a large float, so coth(beta*w/2) -> 1 holds exactly.
class InverseTemperature {
public:
    static InverseTemperature infinite() { return InverseTemperature{}; }

    static InverseTemperature finite(double beta) {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw DomainError("inverse temperature must be positive and finite, got " +
                              std::to_string(beta));
        InverseTemperature b;
        b.value_ = beta;
        b.infinite_ = false;
        return b;
    }

    bool is_infinite() const noexcept { return infinite_; }

    // Finite value; throws for T = 0.
    double value() const {
        if (infinite_) throw DomainError("inverse temperature is infinite (T = 0)");
        return value_;
    }

    // coth(beta*w/2) for w > 0. Below beta*w = 1e-3 the Laurent expansion
    // 2/(beta*w) + beta*w/6 replaces the direct evaluation.
    double coth_half(double w) const noexcept {
        if (infinite_) return 1.0;
        const double x = value_ * w;
        if (x < 1e-3) return 2.0 / x + x / 6.0;
        return 1.0 / std::tanh(0.5 * x);
    }

    friend bool operator==(const InverseTemperature&, const InverseTemperature&) = default;

private:
    InverseTemperature() = default;
    double value_{std::numeric_limits<double>::infinity()};
    bool infinite_{true};
};

struct ModelParams {
    double omega0{1.0};    // sub-system frequency; 0 selects the free particle
    double eta{0.0};       // ohmic damping constant
    InverseTemperature beta{InverseTemperature::infinite()};
    double omega_c{1000.0};

    void validate() const {
        if (!(omega0 >= 0.0) || !std::isfinite(omega0))
            throw DomainError("omega0 must be finite and >= 0");
        if (!(eta >= 0.0) || !std::isfinite(eta))
            throw DomainError("eta must be finite and >= 0");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c))
            throw DomainError("omega_c must be finite and > 0");
    }

    bool free_particle() const noexcept { return omega0 == 0.0; }

    bool underdamped() const noexcept { return omega0 * omega0 > 0.25 * eta * eta; }

    // The closed forms assume omega_c >> omega; below 10x the largest
    // intrinsic scale results are flagged as reduced accuracy.
    bool reduced_accuracy() const noexcept {
        return omega_c < 10.0 * std::max(omega0, eta);
    }

    // Omega = sqrt(omega0^2 - eta^2/4); rejected outside the underdamped regime.
    double damped_frequency() const {
        if (!underdamped())
            throw DomainError("damped frequency requires omega0^2 > eta^2/4 (underdamped)");
        return std::sqrt(omega0 * omega0 - 0.25 * eta * eta);
    }
};

// J(w) = eta*w below the cutoff, zero above.
inline double spectral_density_J(double omega, const ModelParams& p) {
    if (omega < 0.0) throw DomainError("spectral density needs omega >= 0");
    return omega < p.omega_c ? p.eta * omega : 0.0;
}

// Inverse sub-system Green function, omega_c >> omega form.
inline std::complex<double> g_inverse(double omega, const ModelParams& p) noexcept {
    return {omega * omega - p.omega0 * p.omega0, omega * p.eta};
}

// s(w) = 2 w eta / ((w^2 - omega0^2)^2 + w^2 eta^2). Odd in w.
// With eta = 0 the weight collapses onto omega0 as a delta function; the
// regular part returned here is zero and callers take the exact branch.
inline double spectral_function_s(double omega, const ModelParams& p) {
    if (p.eta == 0.0) return 0.0;
    if (omega == 0.0) {
        if (p.free_particle())
            throw DomainError("s(omega) is singular at omega = 0 for the free particle");
        return 0.0;
    }
    const double d = omega * omega - p.omega0 * p.omega0;
    const double we = omega * p.eta;
    return 2.0 * we / (d * d + we * we);
}

} // namespace qbath
