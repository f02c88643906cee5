// evolution.hpp — Reduced density matrix and position probability of the
// sub-system prepared as alpha(Q0) rho_th alpha(Q0) and released at t = 0.
//
// Two independent routes are provided:
//   * the Fourier route: rho(q', q'', t) as a Gaussian integral over the
//     aperture transform variables (a, b, v) of ln T, the thermal average of
//     e^{iQ0 b} e^{iP0(t) u} e^{iQ0(t) v} e^{iQ0 a} with u = q' - q'';
//   * the kernel route: P(x, t) = int dQ' dQ'' alpha(Q') alpha(Q'') J(x, x', X', t)
//     with the closed-form propagator kernels of the oscillator and of the
//     free particle.
// Both are normalized to unit trace. For the free particle the divergent
// thermal width is replaced by a uniform distribution whose length cancels
// in the normalization.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qbath/aperture.hpp"
#include "qbath/correlators.hpp"
#include "qbath/errors.hpp"
#include "qbath/gaussian.hpp"
#include "qbath/model.hpp"

namespace qbath::evolution {

using correlators::CorrelatorSet;

// ---------------------------------------------------------------- timescales

struct Timescales {
    double t_mix;    // 2 sigma d m / hbar
    double tau_flo;  // sqrt(8 beta m) sigma^2 / d
    double l_th;     // sqrt(beta/2) hbar / sqrt(m)
};

inline Timescales timescales(double sigma, double d, double mass, double beta, double hbar) {
    for (double v : {sigma, d, mass, beta, hbar})
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("timescales: arguments must be positive");
    return {2.0 * sigma * d * mass / hbar, std::sqrt(8.0 * beta * mass) * sigma * sigma / d,
            std::sqrt(0.5 * beta) * hbar / std::sqrt(mass)};
}

// Inverse temperature giving a thermal wavelength l_th (hbar = m = 1).
inline double beta_from_thermal_length(double l_th) { return 2.0 * l_th * l_th; }

// ---------------------------------------------------------------- ln T

// ln T at a point: the ordered-product cumulant
//   ln<e^{A1} e^{A2} e^{A3} e^{A4}> = 1/2 sum_i <A_i^2> + sum_{i<j} <A_i A_j>.
inline cplx ln_T(const CorrelatorSet& cs, double a, double b, double u, double v) {
    if (cs.free_particle()) throw DomainError("ln_T: needs a finite <Q0^2>");
    const double V = cs.varQ;
    return -0.5 * ((a + b) * (a + b) + v * v) * V - 0.5 * u * u * cs.varP -
           b * u * cs.qp_t_reversed() - b * v * cs.qq_t_reversed() - u * v * CorrelatorSet::pq_equal() -
           u * a * cs.pq_t - a * v * cs.qq_t();
}

struct LnTForm {
    QuadraticForm<3> form;  // over (a, b, v)
    // Free particle: the <Q0^2> (a + b + v)^2 part is omitted and acts as a
    // delta function constraint a + b + v = 0.
    bool free_particle{false};
};

inline LnTForm lnT_form(const CorrelatorSet& cs, double u) {
    LnTForm r;
    r.free_particle = cs.free_particle();
    const double V = r.free_particle ? 0.0 : cs.varQ;
    auto& q = r.form;
    const cplx dqq{-cs.C, -cs.A};  // <Q0(t)Q0> - <Q0^2>
    q.M[0][0] = q.M[1][1] = q.M[2][2] = q.M[0][1] = q.M[1][0] = V;
    q.M[0][2] = q.M[2][0] = V + dqq;            // a v : <Q0(t) Q0>
    q.M[1][2] = q.M[2][1] = V + std::conj(dqq); // b v : <Q0 Q0(t)>
    q.j[0] = -u * cs.pq_t;
    q.j[1] = -u * cs.qp_t_reversed();
    q.j[2] = -u * CorrelatorSet::pq_equal();
    q.c0 = -0.5 * u * u * cs.varP;

    if (!r.free_particle) {
        linalg::RMatrix re(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) re(i, k) = q.M[i][k].real();
        const auto eig = linalg::jacobi_eigen(re);
        if (eig.values.front() < -1e-10 * std::max(1.0, V))
            throw NumericalError("lnT_form: real part of the quadratic form is indefinite");
    }
    return r;
}

// ---------------------------------------------------------------- Fourier route

// Contribution of aperture components j (left) and k (right) to
// rho(qf, qb, t), normalized by the full trace.
inline cplx density_matrix_pair(const Aperture& ap, std::size_t j, std::size_t k, double qf,
                                double qb, const CorrelatorSet& cs) {
    const auto& cj = ap.components()[j];
    const auto& ck = ap.components()[k];
    LnTForm lt = lnT_form(cs, qf - qb);
    auto& q = lt.form;
    q.M[0][0] += ck.width * ck.width;
    q.M[1][1] += cj.width * cj.width;
    q.j[0] -= cplx(0.0, ck.center);
    q.j[1] -= cplx(0.0, cj.center);
    q.j[2] -= cplx(0.0, qf);
    q.c0 += std::log(cplx(cj.weight * ck.weight * cj.width * ck.width)) -
            2.0 * std::log(2.0 * std::numbers::pi);

    const double trace = ap.trace(cs.varQ);
    if (!lt.free_particle) return std::exp(log_gaussian_integrate<3>(q)) / trace;

    // restrict to v = -(a + b)
    const std::array<std::array<double, 2>, 3> B{{{1.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0}}};
    QuadraticForm<2> r;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y)
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) r.M[x][y] += B[m][x] * q.M[m][n] * B[n][y];
        for (int m = 0; m < 3; ++m) r.j[x] += B[m][x] * q.j[m];
    }
    r.c0 = q.c0 + std::log(2.0 * std::numbers::pi);
    return std::exp(log_gaussian_integrate<2>(r)) / trace;
}

inline cplx reduced_density_matrix(const Aperture& ap, double qf, double qb, const CorrelatorSet& cs) {
    cplx s{};
    for (std::size_t j = 0; j < ap.size(); ++j)
        for (std::size_t k = 0; k < ap.size(); ++k) s += density_matrix_pair(ap, j, k, qf, qb, cs);
    return s;
}

inline cplx reduced_density_matrix(const Aperture& ap, double qf, double qb, double t,
                                   const ModelParams& p) {
    if (!p.free_particle() && !p.underdamped())
        throw DomainError("reduced_density_matrix: oscillator must be underdamped");
    return reduced_density_matrix(ap, qf, qb, correlators::assemble(p, t));
}

// ---------------------------------------------------------------- kernel route

// Oscillator propagator kernel for the diagonal, x' = Q'_i - Q''_i,
// X' = (Q'_i + Q''_i)/2. The prefactor uses |A|, which is the kernel as
// written whenever A > 0.
inline cplx kernel_J_oscillator(double x, double xp, double Xp, const CorrelatorSet& cs) {
    if (cs.free_particle()) throw DomainError("kernel_J_oscillator: needs a finite <Q0^2>");
    if (cs.A == 0.0)
        throw DomainError("kernel_J_oscillator: A(t) = 0 (t = 0?); use the initial-state formula");
    const double A = cs.A, C = cs.C, V = cs.varQ;
    const cplx w{Xp, -xp * C / (2.0 * A)};
    const cplx e = cplx(0.0, xp / (2.0 * A) * (x - Xp)) - (xp * xp * C / (4.0 * A * A) + w * w / (2.0 * V));
    return std::exp(e) / (4.0 * std::numbers::pi * std::abs(A) * std::sqrt(2.0 * std::numbers::pi * V));
}

// Free-particle kernel with the 1/L factor dropped (restored by normalization).
inline cplx kernel_J_free(double x, double xp, double Xp, double A, double C) {
    if (!(A > 0.0)) throw DomainError("kernel_J_free: requires A > 0");
    const cplx e{-xp * xp * C / (4.0 * A * A), xp / (2.0 * A) * (x - Xp)};
    return std::exp(e) / (4.0 * std::numbers::pi * A);
}

// exp(q2 x^2 + q1 x + q0): every pair term of P(x, t) has this form.
struct XQuadratic {
    cplx q2{}, q1{}, q0{};
    cplx operator()(double x) const { return std::exp((q2 * x + q1) * x + q0); }
    // Envelope |.| is a Gaussian in x (Re q2 < 0); its center and width.
    double center() const { return -q1.real() / (2.0 * q2.real()); }
    double width() const { return std::sqrt(-0.5 / q2.real()); }
    double log_peak() const {
        const double c = center();
        return (q2.real() * c + q1.real()) * c + q0.real();
    }
    // local fringe wavenumber d/dx of the phase
    double wavenumber(double x) const { return 2.0 * q2.imag() * x + q1.imag(); }
};

// Pair term of the kernel route: int dx' dX' alpha_j(X' + x'/2) alpha_k(X' - x'/2) J,
// done analytically as a 2D complex Gaussian in (x', X'), normalized.
inline XQuadratic kernel_pair(const Aperture& ap, std::size_t j, std::size_t k, const CorrelatorSet& cs) {
    if (cs.A == 0.0) throw DomainError("kernel_pair: A(t) = 0; use initial_pair");
    const auto& cj = ap.components()[j];
    const auto& ck = ap.components()[k];
    const double pj = 1.0 / (cj.width * cj.width), pk = 1.0 / (ck.width * ck.width);
    const double A = cs.A, C = cs.C;
    const bool free = cs.free_particle();
    const double V = cs.varQ;

    CMat<2> N{};
    N[0][0] = C / (2.0 * A * A) + 0.25 * (pj + pk);
    N[1][1] = pj + pk;
    cplx n01 = cplx(0.0, 1.0 / (2.0 * A)) + 0.5 * (pj - pk);
    if (!free) {
        N[0][0] -= C * C / (4.0 * A * A * V);
        N[1][1] += 1.0 / V;
        n01 -= cplx(0.0, C / (2.0 * A * V));
    }
    N[0][1] = N[1][0] = n01;
    const CVec<2> h{cplx(0.5 * (cj.center * pj - ck.center * pk)), cplx(cj.center * pj + ck.center * pk)};
    const CVec<2> g{cplx(0.0, 1.0 / (2.0 * A)), cplx(0.0)};

    cplx h0 = -0.5 * (cj.center * cj.center * pj + ck.center * ck.center * pk) +
              std::log(cplx(cj.weight * ck.weight)) - std::log(4.0 * std::numbers::pi * std::abs(A)) -
              std::log(ap.trace(V));
    if (!free) h0 -= 0.5 * std::log(2.0 * std::numbers::pi * V);

    const ComplexSymmetricFactor<2> f(N);
    const CVec<2> ng = f.solve(g), nh = f.solve(h);
    XQuadratic r;
    r.q2 = 0.5 * bilinear(g, ng);
    r.q1 = bilinear(g, nh);
    r.q0 = 0.5 * bilinear(h, nh) + h0 + std::log(2.0 * std::numbers::pi) - f.log_sqrt_det();
    return r;
}

// Pair term at t = 0: alpha_j(x) alpha_k(x) rho_th(x, x), normalized.
inline XQuadratic initial_pair(const Aperture& ap, std::size_t j, std::size_t k, double var) {
    const auto& cj = ap.components()[j];
    const auto& ck = ap.components()[k];
    const double pj = 1.0 / (cj.width * cj.width), pk = 1.0 / (ck.width * ck.width);
    const bool free = std::isinf(var);
    XQuadratic r;
    r.q2 = -0.5 * (pj + pk + (free ? 0.0 : 1.0 / var));
    r.q1 = cj.center * pj + ck.center * pk;
    r.q0 = -0.5 * (cj.center * cj.center * pj + ck.center * ck.center * pk) +
           std::log(cplx(cj.weight * ck.weight)) - std::log(ap.trace(var));
    if (!free) r.q0 -= 0.5 * std::log(2.0 * std::numbers::pi * var);
    return r;
}

inline double probability_density(const Aperture& ap, double x, const CorrelatorSet& cs) {
    double s = 0.0;
    for (std::size_t j = 0; j < ap.size(); ++j)
        for (std::size_t k = 0; k < ap.size(); ++k) s += kernel_pair(ap, j, k, cs)(x).real();
    return s;
}

// ---------------------------------------------------------------- profiles

enum class Dynamics { oscillator, free, no_dissipation };

inline const char* to_string(Dynamics d) {
    switch (d) {
        case Dynamics::oscillator: return "oscillator";
        case Dynamics::free: return "free";
        case Dynamics::no_dissipation: return "no-dissipation";
    }
    return "?";
}

inline void check_dynamics(const ModelParams& p, Dynamics mode) {
    p.validate();
    switch (mode) {
        case Dynamics::oscillator:
            if (p.free_particle()) throw DomainError("oscillator mode requires omega0 > 0");
            if (!p.underdamped()) throw DomainError("oscillator mode requires omega0^2 > eta^2/4");
            break;
        case Dynamics::free:
            if (!p.free_particle() || !(p.eta > 0.0))
                throw DomainError("free mode requires omega0 = 0 and eta > 0");
            break;
        case Dynamics::no_dissipation:
            if (!p.free_particle() || p.eta != 0.0)
                throw DomainError("no-dissipation mode requires omega0 = 0 and eta = 0");
            break;
    }
}

struct ProfileOptions {
    // Times at or below this use the initial-state formula.
    double small_time{0.0};
};

// All n x n pair terms at time t, row-major (j, k).
struct PairTerms {
    double t{0.0};
    std::size_t n{0};
    std::vector<XQuadratic> terms;
    bool initial{false};

    const XQuadratic& operator()(std::size_t j, std::size_t k) const { return terms[j * n + k]; }
};

inline PairTerms pair_terms(const Aperture& ap, double t, const ModelParams& p, Dynamics mode,
                            const ProfileOptions& opt = {}) {
    check_dynamics(p, mode);
    if (t < 0.0) throw DomainError("profile: t must be >= 0");
    PairTerms r;
    r.t = t;
    r.n = ap.size();
    r.terms.reserve(r.n * r.n);
    if (t == 0.0 || t <= opt.small_time) {
        r.initial = true;
        const double var = p.free_particle() ? std::numeric_limits<double>::infinity()
                                             : correlators::variance_Q0(p);
        for (std::size_t j = 0; j < r.n; ++j)
            for (std::size_t k = 0; k < r.n; ++k) r.terms.push_back(initial_pair(ap, j, k, var));
        return r;
    }
    const CorrelatorSet cs = correlators::assemble(p, t);
    for (std::size_t j = 0; j < r.n; ++j)
        for (std::size_t k = 0; k < r.n; ++k) r.terms.push_back(kernel_pair(ap, j, k, cs));
    return r;
}

// 2|P_01(m)| / (P_00(m) + P_11(m)) at the midpoint m between two components.
inline double midpoint_ratio(const Aperture& ap, const PairTerms& pt) {
    if (ap.size() != 2) throw DomainError("midpoint ratio is defined for two-slit apertures");
    const double m = 0.5 * (ap.components()[0].center + ap.components()[1].center);
    const double same = pt(0, 0)(m).real() + pt(1, 1)(m).real();
    return 2.0 * std::abs(pt(0, 1)(m)) / same;
}

struct ProbabilityProfile {
    double t{0.0};
    std::vector<double> xs, p_total, p_sum, p_interference;
    double attenuation{std::numeric_limits<double>::quiet_NaN()};     // midpoint ratio / its t=0 value
    double midpoint_ratio{std::numeric_limits<double>::quiet_NaN()};  // un-normalized
    double cross_ratio{std::numeric_limits<double>::quiet_NaN()};     // max|p_int| / max p_sum
    double norm{0.0};  // trapezoid integral of p_total
    double min_value{0.0};
    ModelParams params;
    Dynamics mode{Dynamics::oscillator};

    // Normalization to 1e-6 and positivity to -1e-12.
    void validate() const {
        if (std::abs(norm - 1.0) > 1e-6)
            throw NumericalError("profile at t=" + std::to_string(t) + " integrates to " +
                                 std::to_string(norm) + " (grid too narrow or too coarse?)");
        if (min_value < -1e-12)
            throw NumericalError("profile at t=" + std::to_string(t) + " has negative density " +
                                 std::to_string(min_value));
    }
};

inline double trapezoid(std::span<const double> xs, std::span<const double> ys) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) s += 0.5 * (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]);
    return s;
}

inline ProbabilityProfile evaluate_profile(const Aperture& ap, const PairTerms& pt,
                                           std::span<const double> xs, const ModelParams& p,
                                           Dynamics mode, const PairTerms* initial = nullptr) {
    ProbabilityProfile r;
    r.t = pt.t;
    r.params = p;
    r.mode = mode;
    r.xs.assign(xs.begin(), xs.end());
    r.p_total.resize(xs.size());
    r.p_sum.resize(xs.size());
    r.p_interference.resize(xs.size());
    double max_int = 0.0, max_sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double same = 0.0, cross = 0.0;
        for (std::size_t j = 0; j < pt.n; ++j) {
            same += pt(j, j)(xs[i]).real();
            for (std::size_t k = j + 1; k < pt.n; ++k)
                cross += pt(j, k)(xs[i]).real() + pt(k, j)(xs[i]).real();
        }
        r.p_sum[i] = same;
        r.p_interference[i] = cross;
        r.p_total[i] = same + cross;
        max_int = std::max(max_int, std::abs(cross));
        max_sum = std::max(max_sum, same);
    }
    r.norm = trapezoid(r.xs, r.p_total);
    r.min_value = r.p_total.empty() ? 0.0 : *std::min_element(r.p_total.begin(), r.p_total.end());
    r.cross_ratio = max_sum > 0.0 ? max_int / max_sum : std::numeric_limits<double>::quiet_NaN();
    if (ap.size() == 2) {
        r.midpoint_ratio = midpoint_ratio(ap, pt);
        if (initial) r.attenuation = r.midpoint_ratio / midpoint_ratio(ap, *initial);
    }
    return r;
}

// Grid covering every pair envelope to 9 widths, fine enough to resolve the
// widest fringe wavenumber of the non-negligible interference terms.
inline std::vector<double> auto_grid(const PairTerms& pt, std::size_t max_points = 400001) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double smin = std::numeric_limits<double>::infinity();
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pt.n; ++j) {
        const auto& d = pt(j, j);
        const double c = d.center(), s = d.width();
        lo = std::min(lo, c - 9.0 * s);
        hi = std::max(hi, c + 9.0 * s);
        smin = std::min(smin, s);
        peak = std::max(peak, d.log_peak());
    }
    double h = smin / 5.0;
    for (std::size_t j = 0; j < pt.n; ++j)
        for (std::size_t k = 0; k < pt.n; ++k) {
            if (j == k) continue;
            const auto& q = pt(j, k);
            if (q.log_peak() < peak - 40.0) continue;
            const double c = q.center(), s = q.width();
            const double kmax = std::max(std::abs(q.wavenumber(c - 9.0 * s)), std::abs(q.wavenumber(c + 9.0 * s)));
            h = std::min(h, 2.0 * std::numbers::pi / (kmax + 10.0 / s));
        }
    std::size_t count = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
    count = std::clamp<std::size_t>(count, 3, max_points);
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i)
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return xs;
}

inline ProbabilityProfile probability_profile(const Aperture& ap, double t, std::span<const double> xs,
                                              const ModelParams& p, Dynamics mode,
                                              const ProfileOptions& opt = {}) {
    const PairTerms pt = pair_terms(ap, t, p, mode, opt);
    const PairTerms init = pt.initial ? pt : pair_terms(ap, 0.0, p, mode, opt);
    return evaluate_profile(ap, pt, xs, p, mode, &init);
}

} // namespace qbath::evolution
