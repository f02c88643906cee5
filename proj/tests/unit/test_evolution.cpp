#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qbath/evolution.hpp"

using namespace qbath;
using namespace qbath::evolution;
using correlators::CorrelatorSet;

namespace {

ModelParams params(double omega0, double eta, InverseTemperature beta, double omega_c = 200.0) {
    ModelParams p;
    p.omega0 = omega0;
    p.eta = eta;
    p.beta = beta;
    p.omega_c = omega_c;
    return p;
}

ModelParams no_dissipation(double l_th) {
    return params(0.0, 0.0, InverseTemperature::finite(beta_from_thermal_length(l_th)));
}

} // namespace

TEST(Timescales, Examples) {
    const auto ts = timescales(0.05, 1.0, 1.0, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(ts.t_mix, 0.1);
    EXPECT_DOUBLE_EQ(ts.l_th, 1.0);
    const auto t5 = timescales(0.05, 1.0, 1.0, beta_from_thermal_length(0.2), 1.0);
    EXPECT_NEAR(t5.tau_flo, 0.02 * t5.t_mix, 1e-15);
    EXPECT_THROW(timescales(0.0, 1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST(Timescales, FloodingTimeIdentity) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double s = u(rng), d = u(rng), b = u(rng);
        const auto ts = timescales(s, d, 1.0, b, 1.0);
        EXPECT_NEAR(ts.tau_flo, 2.0 * ts.t_mix * (ts.l_th / d) * (s / d), 1e-12 * ts.tau_flo);
    }
}

TEST(LnT, InitialTimeIsDebyeWaller) {
    const auto cs = correlators::assemble(params(1.0, 0.3, InverseTemperature::finite(2.0)), 0.0);
    for (auto [a, b, v] : {std::array{0.3, -0.2, 0.4}, std::array{1.0, 0.5, -1.5}}) {
        const cplx l = ln_T(cs, a, b, 0.0, v);
        EXPECT_NEAR(l.real(), -0.5 * cs.varQ * (a + b + v) * (a + b + v), 1e-14);
        EXPECT_NEAR(l.imag(), 0.0, 1e-14);
    }
}

TEST(LnT, QuadraticFormReproducesPointValues) {
    const auto cs = correlators::assemble(params(1.2, 0.4, InverseTemperature::finite(1.5)), 0.8);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double a = u(rng), b = u(rng), uu = u(rng), v = u(rng);
        const auto f = lnT_form(cs, uu);
        EXPECT_NEAR(std::abs(f.form.exponent({a, b, v}) - ln_T(cs, a, b, uu, v)), 0.0, 1e-12);
    }
}

TEST(LnT, RejectsInconsistentCorrelators) {
    CorrelatorSet cs;
    cs.varQ = 0.5;
    cs.varP = 0.5;
    cs.C = 3.0;  // C > 2 <Q0^2> is impossible
    cs.A = 0.1;
    EXPECT_THROW(lnT_form(cs, 0.0), NumericalError);
    EXPECT_THROW(ln_T(correlators::assemble(params(0.0, 1.0, InverseTemperature::finite(1.0)), 1.0), 0, 0, 0, 0),
                 DomainError);
}

TEST(Routes, AgreeOnRandomSamples) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int kind = i % 3;
        ModelParams p;
        if (kind == 0)
            p = params(0.5 + 1.5 * U(rng), 0.05 + 0.75 * U(rng), InverseTemperature::finite(0.5 + 4.5 * U(rng)));
        else if (kind == 1)
            p = params(0.0, 0.2 + U(rng), InverseTemperature::finite(0.5 + 4.5 * U(rng)));
        else
            p = no_dissipation(0.1 + U(rng));
        const auto ap = Aperture::two_slit(0.5 + 1.5 * U(rng), 0.05 + 0.25 * U(rng));
        const double t = 0.05 + 3.0 * U(rng);
        const auto cs = correlators::assemble(p, t);
        for (int s = 0; s < 3; ++s) {
            const double x = -2.0 + 4.0 * U(rng);
            const cplx r1 = reduced_density_matrix(ap, x, x, cs);
            const double r2 = probability_density(ap, x, cs);
            const double scale = std::max(1.0, std::abs(r2));
            worst = std::max(worst, std::abs(r1 - r2) / scale);
            EXPECT_NEAR(r1.real(), r2, 1e-8 * scale) << i;
            EXPECT_NEAR(r1.imag(), 0.0, 1e-8 * scale) << i;
        }
    }
    RecordProperty("worst", std::to_string(worst));
}

TEST(Routes, DensityMatrixIsHermitian) {
    const auto ap = Aperture::two_slit(1.0, 0.2);
    const auto cs = correlators::assemble(params(1.0, 0.3, InverseTemperature::finite(2.0)), 0.9);
    for (auto [a, b] : {std::pair{0.1, -0.4}, std::pair{0.7, 0.2}, std::pair{-1.0, 1.3}}) {
        const cplx r = reduced_density_matrix(ap, a, b, cs);
        const cplx s = reduced_density_matrix(ap, b, a, cs);
        EXPECT_NEAR(std::abs(r - std::conj(s)), 0.0, 1e-13 * std::abs(r) + 1e-300);
    }
}

TEST(Routes, FourierRouteTraceIsOne) {
    const auto ap = Aperture::two_slit(1.0, 0.2);
    const auto cs = correlators::assemble(params(1.0, 0.3, InverseTemperature::finite(2.0)), 1.3);
    quad::Options tight;
    tight.abs_tol = 1e-14;
    tight.rel_tol = 1e-12;
    std::vector<double> pts;
    for (int k = -60; k <= 60; ++k) pts.push_back(0.5 * k);
    const double tr = quad::integrate<double>(
                          [&](double x) { return reduced_density_matrix(ap, x, x, cs).real(); }, pts, tight)
                          .value;
    EXPECT_NEAR(tr, 1.0, 1e-8);
}

TEST(Kernel, PairTermMatchesNumericalDoubleIntegral) {
    const auto ap = Aperture::two_slit(1.0, 0.25);
    for (const auto& p : {params(1.0, 0.3, InverseTemperature::finite(2.0)),
                          params(0.0, 0.8, InverseTemperature::finite(2.0))}) {
        const auto cs = correlators::assemble(p, 0.7);
        const double tr = ap.trace(cs.varQ);
        const double h = 0.01;
        const int n = 300;
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (double x : {-0.8, 0.0, 0.35}) {
                    cplx sum{};
                    for (int a = -n; a <= n; ++a)
                        for (int b = -n; b <= n; ++b) {
                            const double xp = a * h, Xp = b * h;
                            const double w = ap.component(j, Xp + 0.5 * xp) * ap.component(k, Xp - 0.5 * xp);
                            if (w < 1e-30) continue;
                            const cplx J = cs.free_particle() ? kernel_J_free(x, xp, Xp, cs.A, cs.C)
                                                              : kernel_J_oscillator(x, xp, Xp, cs);
                            sum += w * J;
                        }
                    sum *= h * h / tr;
                    const cplx analytic = kernel_pair(ap, j, k, cs)(x);
                    EXPECT_NEAR(std::abs(sum - analytic), 0.0, 1e-9 * std::max(1.0, std::abs(analytic)));
                }
    }
}

TEST(Kernel, OscillatorKernelOnTheDiagonal) {
    const auto cs = correlators::assemble(params(1.0, 0.3, InverseTemperature::finite(2.0)), 0.7);
    const cplx a = kernel_J_oscillator(-1.0, 0.0, 0.2, cs), b = kernel_J_oscillator(2.0, 0.0, 0.2, cs);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.imag(), 0.0);
    const auto c0 = correlators::assemble(params(1.0, 0.3, InverseTemperature::finite(2.0)), 0.0);
    EXPECT_THROW(kernel_J_oscillator(0.0, 0.1, 0.0, c0), DomainError);
}

TEST(Kernel, FreeKernelDecoherenceEnvelope) {
    const double A = 0.4, C = 0.3;
    const double x0 = 2.0 * A / std::sqrt(C);
    EXPECT_NEAR(std::abs(kernel_J_free(0.5, x0, 0.1, A, C)) / std::abs(kernel_J_free(0.5, 0.0, 0.1, A, C)),
                std::exp(-1.0), 1e-14);
    EXPECT_NEAR(std::abs(kernel_J_free(0.5, 3.0, 0.1, A, 0.0)), std::abs(kernel_J_free(0.5, 0.0, 0.1, A, 0.0)), 1e-16);
    EXPECT_THROW(kernel_J_free(0.0, 0.0, 0.0, 0.0, 0.1), DomainError);
}

TEST(Profile, NormalizedPositiveAndStartsAtOne) {
    const auto ap = Aperture::two_slit(1.0, 0.05);
    struct Case {
        ModelParams p;
        Dynamics mode;
    };
    for (const auto& c : {Case{params(1.0, 0.2, InverseTemperature::finite(2.0)), Dynamics::oscillator},
                          Case{params(0.0, 0.5, InverseTemperature::finite(2.0)), Dynamics::free},
                          Case{no_dissipation(0.5), Dynamics::no_dissipation}}) {
        for (double t : {0.0, 0.05, 0.1, 0.4}) {
            const auto pt = pair_terms(ap, t, c.p, c.mode);
            const auto xs = auto_grid(pt);
            const auto prof = probability_profile(ap, t, xs, c.p, c.mode);
            EXPECT_NO_THROW(prof.validate()) << to_string(c.mode) << " t=" << t;
            EXPECT_NEAR(prof.norm, 1.0, 1e-6);
            EXPECT_GE(prof.min_value, -1e-12);
            if (t == 0.0) EXPECT_EQ(prof.attenuation, 1.0);
        }
    }
}

TEST(Profile, SymmetricApertureGivesEvenProfile) {
    const auto ap = Aperture::two_slit(1.0, 0.1);
    const auto cs = correlators::assemble(params(1.0, 0.2, InverseTemperature::finite(2.0)), 0.6);
    for (double x : {0.1, 0.45, 0.9, 1.7})
        EXPECT_NEAR(probability_density(ap, x, cs), probability_density(ap, -x, cs),
                    1e-12 * probability_density(ap, x, cs));
}

TEST(Profile, UndampedOscillatorIsPeriodic) {
    const auto ap = Aperture::two_slit(1.0, 0.1);
    const auto p = params(1.0, 0.0, InverseTemperature::infinite());
    const auto a = correlators::assemble(p, 0.7), b = correlators::assemble(p, 0.7 + 2.0 * std::numbers::pi);
    for (double x : {-1.0, -0.3, 0.0, 0.6})
        EXPECT_NEAR(probability_density(ap, x, a), probability_density(ap, x, b), 1e-9);
}

TEST(Profile, ScalingInvariance) {
    const double lambda = 2.5;
    const auto ap = Aperture::two_slit(1.0, 0.05);
    const auto apl = Aperture::two_slit(lambda, 0.05 * lambda);
    const auto p = no_dissipation(0.4), pl = no_dissipation(0.4 * lambda);
    const double t = 0.07;
    const auto pt = pair_terms(ap, t, p, Dynamics::no_dissipation);
    const auto ptl = pair_terms(apl, lambda * lambda * t, pl, Dynamics::no_dissipation);
    for (double x : {-0.9, -0.5, 0.0, 0.2, 0.5}) {
        double a = 0.0, b = 0.0;
        for (const auto& q : pt.terms) a += q(x).real();
        for (const auto& q : ptl.terms) b += q(lambda * x).real();
        EXPECT_NEAR(lambda * b, a, 1e-10 * std::max(1.0, std::abs(a)));
    }
    EXPECT_NEAR(midpoint_ratio(ap, pt), midpoint_ratio(apl, ptl), 1e-12);
}

TEST(Profile, ShortTimeApproachesInitialState) {
    const auto ap = Aperture::two_slit(1.0, 0.05);
    const auto p = no_dissipation(0.5);
    const double t_mix = 0.1;
    const auto init = pair_terms(ap, 0.0, p, Dynamics::no_dissipation);
    const auto early = pair_terms(ap, 1e-4 * t_mix, p, Dynamics::no_dissipation);
    for (double x : {-0.52, -0.5, 0.5, 0.47}) {
        double a = 0.0, b = 0.0;
        for (const auto& q : init.terms) a += q(x).real();
        for (const auto& q : early.terms) b += q(x).real();
        EXPECT_NEAR(b, a, 1e-3 * a) << x;
    }
}

TEST(Profile, ModeChecks) {
    EXPECT_THROW(check_dynamics(params(1.0, 3.0, InverseTemperature::infinite()), Dynamics::oscillator), DomainError);
    EXPECT_THROW(check_dynamics(params(1.0, 0.1, InverseTemperature::infinite()), Dynamics::free), DomainError);
    EXPECT_THROW(check_dynamics(params(0.0, 0.1, InverseTemperature::infinite()), Dynamics::no_dissipation),
                 DomainError);
    EXPECT_THROW(check_dynamics(params(0.0, 0.0, InverseTemperature::infinite()), Dynamics::free), DomainError);
}

TEST(Profile, ThermalLengthControlsFringes) {
    const auto ap = Aperture::two_slit(1.0, 0.05);
    const double t_mix = 0.1;
    auto cross_at = [&](double l) {
        const auto p = no_dissipation(l);
        const auto pt = pair_terms(ap, t_mix, p, Dynamics::no_dissipation);
        return probability_profile(ap, t_mix, auto_grid(pt), p, Dynamics::no_dissipation).cross_ratio;
    };
    EXPECT_GE(cross_at(1.0), 0.1);
    EXPECT_LE(cross_at(0.2), 5e-3);
    EXPECT_GT(cross_at(0.5), cross_at(0.3));
}

TEST(Profile, SmallTimeOptionUsesInitialFormula) {
    const auto ap = Aperture::two_slit(1.0, 0.05);
    ProfileOptions opt;
    opt.small_time = 1e-6;
    const auto pt = pair_terms(ap, 5e-7, no_dissipation(0.5), Dynamics::no_dissipation, opt);
    EXPECT_TRUE(pt.initial);
}
