// bath.hpp — Finite ohmic bath, its normal modes and mode sums
//
// The coupled potential of the sub-system plus N bath oscillators is the
// quadratic form with matrix
//     K_00 = omega0^2 + sum_k alpha_k^2 / omega_k^2,  K_kk = omega_k^2,
//     K_0k = alpha_k,
// whose eigenvalues are the squared normal-mode frequencies and whose
// orthonormal eigenvectors form the transformation X (Q_i = sum_nu X_inu q_nu).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "qbath/errors.hpp"
#include "qbath/linalg.hpp"
#include "qbath/model.hpp"

namespace qbath::bath {

struct DiscreteBath {
    std::vector<double> omegas;     // strictly increasing, > 0
    std::vector<double> couplings;  // alpha_k >= 0, frequency^2
    double eta_target{0.0};
    double omega_c{0.0};

    void validate() const {
        if (omegas.size() != couplings.size())
            throw DomainError("bath: frequency and coupling lists differ in length");
        if (omegas.empty()) throw DomainError("bath: no modes");
        for (std::size_t k = 0; k < omegas.size(); ++k) {
            if (!(omegas[k] > 0.0)) throw DomainError("bath: frequencies must be positive");
            if (k > 0 && !(omegas[k] > omegas[k - 1]))
                throw DomainError("bath: frequencies must be strictly increasing");
            if (!(couplings[k] >= 0.0)) throw DomainError("bath: couplings must be >= 0");
        }
    }
};

// Uniform grid omega_k = k*Delta (k = 1..n, Delta = omega_c/n) with
// alpha_k^2 = (2/pi) eta omega_k^2 Delta, so (pi/2) sum alpha_k^2/omega_k
// delta(w - omega_k) reproduces J(w) = eta*w in the mean.
inline DiscreteBath discretize_ohmic(std::size_t n_modes, const ModelParams& p) {
    if (n_modes < 2) throw ConfigError("discretize_ohmic: need at least 2 bath modes");
    p.validate();
    DiscreteBath b;
    b.eta_target = p.eta;
    b.omega_c = p.omega_c;
    const double delta = p.omega_c / static_cast<double>(n_modes);
    b.omegas.resize(n_modes);
    b.couplings.resize(n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        const double w = static_cast<double>(k + 1) * delta;
        b.omegas[k] = w;
        b.couplings[k] = w * std::sqrt(2.0 * p.eta * delta / std::numbers::pi);
    }
    return b;
}

struct NormalModes {
    std::vector<double> freqs;  // omega_nu, ascending
    std::vector<double> x0;     // X_{0 nu} >= 0
    linalg::RMatrix xk;         // X_{k nu}, N x (N+1); empty unless computed
    std::size_t bath_size{0};

    bool has_bath_components() const noexcept { return xk.rows() == bath_size && bath_size > 0; }
};

inline linalg::RMatrix frequency_matrix(const DiscreteBath& bath, double omega0) {
    const std::size_t n = bath.omegas.size();
    linalg::RMatrix k(n + 1, n + 1);
    double k00 = omega0 * omega0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = bath.couplings[i], w = bath.omegas[i];
        k00 += a * a / (w * w);
        k(0, i + 1) = k(i + 1, 0) = a;
        k(i + 1, i + 1) = w * w;
    }
    k(0, 0) = k00;
    return k;
}

namespace detail {

struct SecularRoots {
    std::vector<double> lambda;  // ascending
    std::vector<double> x0sq;
};

// Roots of K00 - l - sum_k z_k / (p_k - l) = 0 for the arrowhead matrix with
// corner K00, poles p_k (ascending) and weights z_k > 0. Exactly one root lies
// between consecutive poles, one below the first and one above the last. Each
// is bisected in the offset from its nearer pole so the differences p_j - l
// keep full relative precision; X_0^2 then follows from the amplitude identity.
inline SecularRoots arrowhead_roots(double k00, const std::vector<double>& poles, const std::vector<double>& z) {
    const std::size_t n = poles.size();
    double zsum = 0.0, zmax = 0.0;
    for (double x : z) {
        zsum += std::sqrt(x);
        zmax = std::max(zmax, std::sqrt(x));
    }
    const double lo_bound = std::min({0.0, k00 - zsum, n ? poles.front() - zmax : k00});
    const double hi_bound = std::max(k00 + zsum, n ? poles.back() + zmax : k00);

    SecularRoots r;
    r.lambda.resize(n + 1);
    r.x0sq.resize(n + 1);
    std::vector<double> shifted(n);
    auto secular = [&](double origin_gap, double delta) {
        // K00 - l - sum z_j/(p_j - l), l = origin + delta, origin_gap = K00 - origin
        double s = origin_gap - delta;
        for (std::size_t j = 0; j < n; ++j) s -= z[j] / (shifted[j] - delta);
        return s;
    };
    for (std::size_t nu = 0; nu <= n; ++nu) {
        const double left = nu == 0 ? lo_bound : poles[nu - 1];
        const double right = nu == n ? hi_bound : poles[nu];
        double origin;
        if (nu == 0)
            origin = right;
        else if (nu == n)
            origin = left;
        else {
            const double mid = 0.5 * (left + right);
            for (std::size_t j = 0; j < n; ++j) shifted[j] = poles[j] - mid;
            origin = secular(k00 - mid, 0.0) > 0.0 ? right : left;
        }
        for (std::size_t j = 0; j < n; ++j) shifted[j] = poles[j] - origin;
        double a = left - origin, b = right - origin;  // secular(a) > 0 > secular(b)
        for (int it = 0; it < 2000; ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            if (secular(k00 - origin, m) > 0.0)
                a = m;
            else
                b = m;
        }
        const double delta = 0.5 * (a + b);
        double s = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = shifted[j] - delta;
            s += z[j] / (d * d);
        }
        r.lambda[nu] = origin + delta;
        r.x0sq[nu] = 1.0 / s;
    }
    return r;
}

} // namespace detail

// Diagonalize the coupled quadratic form. With `with_bath_components` false
// only X_{0 nu} is produced, from the secular equation g^{-1}(omega_nu) = 0 and
// the amplitude identity (O(N^2)); otherwise the full orthogonal matrix comes
// from a dense symmetric eigensolver.
inline NormalModes normal_modes(const DiscreteBath& bath, const ModelParams& p,
                                bool with_bath_components = true) {
    bath.validate();
    p.validate();
    const std::size_t n = bath.omegas.size();
    NormalModes m;
    m.bath_size = n;
    m.freqs.resize(n + 1);
    m.x0.resize(n + 1);
    auto set_freq = [&](std::size_t nu, double lam) {
        if (lam < -1e-10)
            throw NumericalError("normal_modes: negative eigenvalue " + std::to_string(lam) +
                                 " of a positive semidefinite form");
        m.freqs[nu] = std::sqrt(std::max(lam, 0.0));
    };

    if (!with_bath_components) {
        // uncoupled bath modes are eigenvectors on their own
        double k00 = p.omega0 * p.omega0;
        std::vector<double> poles, z, free_lams;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = bath.couplings[k], w2 = bath.omegas[k] * bath.omegas[k];
            k00 += a * a / w2;
            if (a == 0.0)
                free_lams.push_back(w2);
            else {
                poles.push_back(w2);
                z.push_back(a * a);
            }
        }
        const auto roots = detail::arrowhead_roots(k00, poles, z);
        std::vector<std::pair<double, double>> all;
        for (std::size_t i = 0; i < roots.lambda.size(); ++i) all.emplace_back(roots.lambda[i], roots.x0sq[i]);
        for (double l : free_lams) all.emplace_back(l, 0.0);
        std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t nu = 0; nu <= n; ++nu) {
            set_freq(nu, all[nu].first);
            m.x0[nu] = std::sqrt(all[nu].second);
        }
        return m;
    }

    auto eig = linalg::symmetric_eigen(frequency_matrix(bath, p.omega0), linalg::VectorScope::full);
    for (std::size_t nu = 0; nu <= n; ++nu) {
        set_freq(nu, eig.values[nu]);
        m.x0[nu] = std::abs(eig.first_row[nu]);
    }
    m.xk = linalg::RMatrix(n, n + 1);
    for (std::size_t nu = 0; nu <= n; ++nu) {
        const double sign = eig.vectors(0, nu) < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) m.xk(k, nu) = sign * eig.vectors(k + 1, nu);
    }
    return m;
}

// sum_nu X_{0 nu}^2 f(omega_nu)
template <class F>
auto mode_sum(const NormalModes& modes, const F& f) {
    using R = decltype(f(0.0));
    R s{};
    for (std::size_t nu = 0; nu < modes.freqs.size(); ++nu)
        s += modes.x0[nu] * modes.x0[nu] * f(modes.freqs[nu]);
    return s;
}

// Sub-system displacement after a unit initial displacement with the bath
// relaxed (Q_k = -alpha_k / omega_k^2) and at rest. In normal coordinates
// q_nu(0) = X_{0 nu} omega0^2 / omega_nu^2, so the response is
// omega0^2 sum_nu X_{0 nu}^2 cos(omega_nu t) / omega_nu^2. Reliable for
// t < 2 pi / Delta.
inline double classical_response(const NormalModes& modes, double omega0, double t) {
    if (t < 0.0) throw DomainError("classical_response: t must be >= 0");
    if (!(omega0 > 0.0)) throw DomainError("classical_response: needs omega0 > 0");
    const double w02 = omega0 * omega0;
    return mode_sum(modes, [&](double w) { return w02 * std::cos(w * t) / (w * w); });
}

// Damped-oscillator solution of g^{-1}(omega) Q0 = 0 for unit initial
// displacement and zero velocity.
inline double damped_cosine(const ModelParams& p, double t) {
    const double om = p.damped_frequency();
    return std::exp(-0.5 * p.eta * t) *
           (std::cos(om * t) + 0.5 * p.eta / om * std::sin(om * t));
}

// Largest deviation of X_{0 nu}^{-2} from 1 + sum_k alpha_k^2 /
// (omega_k^2 - omega_nu^2)^2 over modes that are neither near-degenerate
// (spacing below 1e-12 omega_c^2) nor nearly decoupled (X_{0 nu}^2 below
// `min_weight`). Relative measure.
inline double amplitude_identity_defect(const DiscreteBath& bath, const NormalModes& modes,
                                        double min_weight = 1e-6) {
    const double gap_tol = 1e-12 * bath.omega_c * bath.omega_c;
    double worst = 0.0;
    const std::size_t nm = modes.freqs.size();
    for (std::size_t nu = 0; nu < nm; ++nu) {
        const double x2 = modes.x0[nu] * modes.x0[nu];
        if (x2 < min_weight) continue;
        const double lam = modes.freqs[nu] * modes.freqs[nu];
        bool degenerate = false;
        for (std::size_t mu : {nu - 1, nu + 1})
            if (mu < nm && std::abs(modes.freqs[mu] * modes.freqs[mu] - lam) < gap_tol)
                degenerate = true;
        double sum = 1.0;
        for (std::size_t k = 0; k < bath.omegas.size(); ++k) {
            const double den = bath.omegas[k] * bath.omegas[k] - lam;
            if (std::abs(den) < gap_tol) degenerate = true;
            sum += bath.couplings[k] * bath.couplings[k] / (den * den);
        }
        if (degenerate) continue;
        worst = std::max(worst, std::abs(sum * x2 - 1.0));
    }
    return worst;
}

// max |X^T X - I| over the full (N+1)x(N+1) transformation.
inline double orthogonality_defect(const NormalModes& modes) {
    if (!modes.has_bath_components())
        throw DomainError("orthogonality_defect: bath components were not computed");
    const std::size_t n = modes.freqs.size();
    auto col = [&](std::size_t i, std::size_t nu) {
        return i == 0 ? modes.x0[nu] : modes.xk(i - 1, nu);
    };
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += col(i, a) * col(i, b);
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

} // namespace qbath::bath
