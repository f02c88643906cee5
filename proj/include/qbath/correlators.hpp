// correlators.hpp — Thermal averages of the sub-system coordinate and momentum
//
// Every average is a spectral integral over s(w) up to the cutoff:
//     <Q0(t) Q0(0)> = int_0^wc dw/2pi s(w) [coth(bw/2) cos wt - i sin wt]
//     <P0(t) Q0(0)> = d/dt of the above
//     <Q0^2> = int dw/2pi s coth,   <P0^2> = int dw/2pi w^2 s coth
// and
//     <[Q0(t) - Q0(0)] Q0(0)> = -C(t) - i A(t)
// with C = int dw/2pi s coth (1 - cos wt) >= 0 and A = int dw/2pi s sin wt,
// the sign of A chosen so that the free-particle A(t) = (1 - e^{-eta t})/2eta.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "qbath/bath.hpp"
#include "qbath/errors.hpp"
#include "qbath/model.hpp"
#include "qbath/quadrature.hpp"

namespace qbath::correlators {

using cplx = std::complex<double>;

struct CorrelatorSet {
    double t{0.0};
    double varQ{0.0};  // +inf for the free particle
    double varP{0.0};
    double A{0.0};
    double C{0.0};
    cplx pq_t{};       // <P0(t) Q0(0)>

    bool free_particle() const noexcept { return std::isinf(varQ); }

    // <Q0(t) Q0(0)>; infinite real part for the free particle.
    cplx qq_t() const noexcept { return {varQ - C, -A}; }
    // <Q0(0) Q0(t)>
    cplx qq_t_reversed() const noexcept { return std::conj(qq_t()); }
    // <Q0(0) P0(t)>
    cplx qp_t_reversed() const noexcept { return std::conj(pq_t); }
    static constexpr cplx qp_equal() noexcept { return {0.0, 0.5}; }
    static constexpr cplx pq_equal() noexcept { return {0.0, -0.5}; }
};

// Initial panel boundaries for spectral integrals on [0, omega_c]: geometric
// ladders around each intrinsic scale (omega0, eta, 1/beta), a fine ladder
// around the resonance, and oscillation half-periods pi/t.
inline std::vector<double> spectral_breakpoints(const ModelParams& p, double t) {
    const double wc = p.omega_c;
    std::vector<double> pts{0.0, wc};
    auto ladder = [&](double scale) {
        if (!(scale > 0.0) || !std::isfinite(scale)) return;
        for (int k = -40; k <= 60; ++k) {
            const double w = std::ldexp(scale, k);
            if (w >= wc) break;
            if (w > 1e-14 * wc) pts.push_back(w);
        }
    };
    ladder(p.omega0);
    ladder(p.eta);
    if (!p.beta.is_infinite()) ladder(1.0 / p.beta.value());
    if (p.omega0 > 0.0 && p.eta > 0.0) {
        for (int k = -12; k <= 60; ++k) {
            const double off = std::ldexp(0.5 * p.eta, k);
            if (p.omega0 + off < wc) pts.push_back(p.omega0 + off);
            if (p.omega0 - off > 0.0) pts.push_back(p.omega0 - off);
            if (off > wc) break;
        }
    }
    if (t > 0.0) {
        constexpr double max_periods = 400000.0;
        const double step = std::numbers::pi / t;
        const double count = std::min(std::floor(wc / step), max_periods);
        for (double k = 1; k <= count; k += 1.0) pts.push_back(k * step);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    out.reserve(pts.size());
    for (double w : pts) {
        if (w < 0.0 || w > wc) continue;
        if (!out.empty() && w - out.back() <= 1e-15 * wc) continue;
        out.push_back(w);
    }
    if (out.back() != wc) out.back() = wc;
    return out;
}

// int_0^wc dw/2pi s(w) g(w), with g supplied by the caller.
template <class G>
double spectral_integral(const ModelParams& p, double t, const G& g, const quad::Options& opt = {}) {
    const auto pts = spectral_breakpoints(p, t);
    auto f = [&](double w) { return spectral_function_s(w, p) * g(w) / (2.0 * std::numbers::pi); };
    return quad::integrate<double>(f, pts, opt).value;
}

// 2 int_0^wc dw/2pi w s(w); equals 1 - O(eta/omega_c).
inline double sum_rule(const ModelParams& p, const quad::Options& opt = {}) {
    p.validate();
    if (p.eta == 0.0) return 1.0;
    return 2.0 * spectral_integral(p, 0.0, [](double w) { return w; }, opt);
}

inline double variance_Q0(const ModelParams& p, const quad::Options& opt = {}) {
    p.validate();
    if (p.free_particle())
        throw DomainError("variance_Q0: <Q0^2> diverges for the free particle (omega0 = 0)");
    if (p.eta == 0.0) return p.beta.coth_half(p.omega0) / (2.0 * p.omega0);
    return spectral_integral(p, 0.0, [&](double w) { return p.beta.coth_half(w); }, opt);
}

// (1/2 Omega)[1 - (2/pi) arctan(eta / 2 Omega)], zero temperature only.
inline double variance_Q0_closed_T0(const ModelParams& p) {
    p.validate();
    if (!p.beta.is_infinite())
        throw DomainError("variance_Q0_closed_T0: closed form holds at zero temperature only");
    const double om = p.damped_frequency();
    return (1.0 - 2.0 / std::numbers::pi * std::atan(p.eta / (2.0 * om))) / (2.0 * om);
}

inline double variance_P0(const ModelParams& p, const quad::Options& opt = {}) {
    p.validate();
    if (p.eta == 0.0) {
        if (p.free_particle()) return p.beta.is_infinite() ? 0.0 : 1.0 / p.beta.value();
        return 0.5 * p.omega0 * p.beta.coth_half(p.omega0);
    }
    return spectral_integral(p, 0.0, [&](double w) { return w * w * p.beta.coth_half(w); }, opt);
}

struct TwoTime {
    cplx qq;  // <Q0(t) Q0(0)>; real part +inf for the free particle
    cplx pq;  // <P0(t) Q0(0)>
    double A;
    double C;
};

inline TwoTime two_time(const ModelParams& p, double t, const quad::Options& opt = {}) {
    p.validate();
    if (t < 0.0) throw DomainError("two_time: t must be >= 0");
    const auto& b = p.beta;
    if (p.eta == 0.0) {
        if (p.free_particle()) {
            const double beta_inv = b.is_infinite() ? 0.0 : 1.0 / b.value();
            return {{std::numeric_limits<double>::infinity(), -0.5 * t},
                    {-t * beta_inv, -0.5},
                    0.5 * t,
                    0.5 * t * t * beta_inv};
        }
        const double w = p.omega0, ct = b.coth_half(w);
        const double s = std::sin(w * t), c = std::cos(w * t), h = std::sin(0.5 * w * t);
        return {{ct * c / (2.0 * w), -s / (2.0 * w)},
                {-0.5 * ct * s, -0.5 * c},
                s / (2.0 * w),
                ct * h * h / w};
    }
    const auto pts = spectral_breakpoints(p, t);
    auto integ = [&](auto g) {
        auto f = [&](double w) { return spectral_function_s(w, p) * g(w) / (2.0 * std::numbers::pi); };
        return quad::integrate<double>(f, pts, opt).value;
    };
    const double A = integ([&](double w) { return std::sin(w * t); });
    const double C = integ([&](double w) {
        const double h = std::sin(0.5 * w * t);
        return 2.0 * b.coth_half(w) * h * h;
    });
    const double Cdot = integ([&](double w) { return w * b.coth_half(w) * std::sin(w * t); });
    const double Adot = integ([&](double w) { return w * std::cos(w * t); });
    const double varQ =
        p.free_particle() ? std::numeric_limits<double>::infinity() : variance_Q0(p, opt);
    return {{varQ - C, -A}, {-Cdot, -Adot}, A, C};
}

struct FreeAC {
    double A;
    double C;
    std::optional<double> C_classical;  // (1/beta eta^2)(eta t - 1 + e^{-eta t})
};

// Free particle with damping: closed-form A, quadrature C.
inline FreeAC free_correlators(double t, const ModelParams& p, const quad::Options& opt = {}) {
    p.validate();
    if (!p.free_particle()) throw DomainError("free_correlators: requires omega0 = 0");
    if (t < 0.0) throw DomainError("free_correlators: t must be >= 0");
    if (p.eta == 0.0)
        throw DomainError("free_correlators: eta = 0, use no_dissipation_limit instead");
    const double et = p.eta * t;
    FreeAC r;
    r.A = -std::expm1(-et) / (2.0 * p.eta);
    r.C = t == 0.0 ? 0.0 : spectral_integral(p, t, [&](double w) {
        const double h = std::sin(0.5 * w * t);
        return 2.0 * p.beta.coth_half(w) * h * h;
    }, opt);
    if (!p.beta.is_infinite())
        r.C_classical = (et + std::expm1(-et)) / (p.beta.value() * p.eta * p.eta);
    return r;
}

struct AC {
    double A;
    double C;
};

// eta -> 0 limits of the free-particle A and C: A = t/2, C = t^2/(2 beta).
inline AC no_dissipation_limit(double t, InverseTemperature beta) {
    if (t < 0.0) throw DomainError("no_dissipation_limit: t must be >= 0");
    return {0.5 * t, beta.is_infinite() ? 0.0 : 0.5 * t * t / beta.value()};
}

inline void check_invariants(const CorrelatorSet& cs, const ModelParams& p) {
    if (!(cs.varP >= 0.0)) throw NumericalError("correlators: <P0^2> < 0");
    if (!cs.free_particle() && !(cs.varQ > 0.0)) throw NumericalError("correlators: <Q0^2> <= 0");
    const double scale = cs.free_particle() ? 1.0 : std::max(1.0, cs.varQ);
    if (cs.C < -1e-12 * scale)
        throw NumericalError("correlators: C(t) < 0");
    if (!cs.free_particle()) {
        // Cauchy-Schwarz on the spectral weight: <Q^2><P^2> >= (sum rule / 2)^2,
        // which is the Heisenberg floor 1/4 up to the cutoff deficit.
        const double s = sum_rule(p);
        if (cs.varQ * cs.varP < 0.25 * s * s * (1.0 - 1e-8))
            throw NumericalError("correlators: Heisenberg floor violated");
    }
}

// Every average entering the ln T quadratic form at time t.
inline CorrelatorSet assemble(const ModelParams& p, double t, const quad::Options& opt = {}) {
    const TwoTime tt = two_time(p, t, opt);
    CorrelatorSet cs;
    cs.t = t;
    cs.varQ = p.free_particle() ? std::numeric_limits<double>::infinity() : variance_Q0(p, opt);
    cs.varP = variance_P0(p, opt);
    cs.A = tt.A;
    cs.C = tt.C;
    cs.pq_t = tt.pq;
    check_invariants(cs, p);
    return cs;
}

// The same averages for a finite system, as exact sums over its normal modes.
inline CorrelatorSet from_normal_modes(const bath::NormalModes& modes, InverseTemperature beta,
                                       double t) {
    CorrelatorSet cs;
    cs.t = t;
    for (std::size_t nu = 0; nu < modes.freqs.size(); ++nu) {
        const double w = modes.freqs[nu];
        const double x2 = modes.x0[nu] * modes.x0[nu];
        if (x2 == 0.0) continue;
        if (!(w > 0.0)) throw DomainError("from_normal_modes: zero-frequency mode");
        const double ct = beta.coth_half(w);
        const double h = std::sin(0.5 * w * t);
        cs.varQ += x2 * ct / (2.0 * w);
        cs.varP += x2 * w * ct / 2.0;
        cs.A += x2 * std::sin(w * t) / (2.0 * w);
        cs.C += x2 * ct * h * h / w;
        cs.pq_t += x2 * 0.5 * cplx(-ct * std::sin(w * t), -std::cos(w * t));
    }
    return cs;
}

} // namespace qbath::correlators
