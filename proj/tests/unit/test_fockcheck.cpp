#include <gtest/gtest.h>

#include <cmath>

#include "qbath/fockcheck.hpp"

using namespace qbath;
using namespace qbath::fockcheck;

namespace {

const cplx I{0.0, 1.0};

SmallBathSystem two_mode_system(std::size_t dim) {
    SmallBathSystem s;
    s.omega0 = 1.2;
    s.bath.omegas = {1.0, 1.5};
    s.bath.couplings = {0.3, 0.4};
    s.bath.omega_c = 1.5;
    s.dims = {dim, dim, dim};
    s.beta = InverseTemperature::finite(2.0);
    return s;
}

correlators::CorrelatorSet normal_mode_correlators(const SmallBathSystem& s, double t) {
    ModelParams p;
    p.omega0 = s.omega0;
    p.omega_c = 1.5;
    return correlators::from_normal_modes(bath::normal_modes(s.bath, p, false), s.beta, t);
}

} // namespace

TEST(TruncatedOscillator, OperatorsAreHermitianWithCanonicalCommutator) {
    const TruncatedOscillator osc(1.7, 30);
    EXPECT_LT(osc.hermiticity_defect(), 1e-15);
    EXPECT_LT(osc.commutator_defect(29), 1e-13);
    EXPECT_GT(osc.commutator_defect(30), 1.0);  // last level breaks [q,p] = i
    EXPECT_THROW(TruncatedOscillator(0.0, 10), DomainError);
    EXPECT_THROW(TruncatedOscillator(1.0, 1), DomainError);
}

TEST(DebyeWaller, Examples) {
    const TruncatedOscillator osc(1.0, 60);
    const auto trivial = debye_waller_check(osc, InverseTemperature::finite(2.0), 0.0);
    EXPECT_NEAR(std::abs(trivial.lhs - 1.0), 0.0, 1e-14);
    EXPECT_EQ(trivial.rhs, 1.0);

    const auto dw = debye_waller_check(osc, InverseTemperature::finite(2.0), 1.0);
    EXPECT_NEAR(dw.rhs, 0.72018, 1e-5);
    EXPECT_LE(dw.relative_gap(), 1e-8);

    const auto ground = debye_waller_check(TruncatedOscillator(2.0, 40), InverseTemperature::infinite(), 1.0);
    EXPECT_NEAR(ground.lhs.real(), std::exp(-0.125), 1e-10);
}

TEST(DebyeWaller, BudgetExceeded) {
    EXPECT_THROW(debye_waller_check(TruncatedOscillator(1.0, 4), InverseTemperature::finite(0.1), 1.0), NumericalError);
}

TEST(Bch, ConventionHolds) {
    const TruncatedOscillator osc(1.0, 80);
    EXPECT_EQ(bch_convention_check(osc, {0.3 * I, 0.0}, {0.0, 0.0}), 0.0);
    EXPECT_LE(bch_convention_check(osc, {0.3 * I, 0.0}, {0.0, 0.7 * I}), 1e-9);
    EXPECT_LE(bch_convention_check(osc, {0.3 * I, 0.0}, {-0.5 * I, 0.0}), 1e-12);
    EXPECT_LE(bch_convention_check(osc, {0.2 * I, -0.4 * I}, {0.5 * I, 0.3 * I}), 1e-9);
}

TEST(Bch, OppositeSignIsDetectable) {
    const TruncatedOscillator osc(1.0, 80);
    const auto A = osc.q * (0.3 * I), B = osc.p * (0.7 * I);
    const cplx comm = I * (0.3 * I * 0.7 * I);
    const auto lhs = linalg::expm(A) * linalg::expm(B);
    const auto wrong = linalg::expm(A + B) * std::exp(-0.5 * comm);
    double m = 0.0;
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 40; ++j) m = std::max(m, std::abs(lhs(i, j) - wrong(i, j)));
    EXPECT_GT(m, 1e-2);
}

TEST(SmallBath, ValidationAndSymmetry) {
    auto s = two_mode_system(6);
    EXPECT_LT(hamiltonian_symmetry_defect(s), 1e-10);
    s.dims = {6, 6};
    EXPECT_THROW(s.validate(), DomainError);
    s = two_mode_system(6);
    s.beta = InverseTemperature::infinite();
    EXPECT_THROW(s.validate(), DomainError);
}

TEST(SmallBath, TrivialArgumentsGiveOne) {
    const auto r = small_bath_T(two_mode_system(10), 0.0, 0.0, 0.0, 0.0, 0.5, {1e-4, 1e-14});
    EXPECT_NEAR(std::abs(r.T_exact - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.T_formula - 1.0), 0.0, 1e-15);
}

TEST(SmallBath, SingleModeEqualTimeMatchesHandDiagonalization) {
    SmallBathSystem s;
    s.omega0 = 1.0;
    s.bath.omegas = {1.6};
    s.bath.couplings = {0.5};
    s.bath.omega_c = 1.6;
    s.dims = {30, 30};
    s.beta = InverseTemperature::finite(1.5);
    // 2x2 frequency matrix by the quadratic formula
    const double k00 = 1.0 + 0.25 / (1.6 * 1.6), k11 = 1.6 * 1.6, k01 = 0.5;
    const double mean = 0.5 * (k00 + k11), rad = std::sqrt(0.25 * (k00 - k11) * (k00 - k11) + k01 * k01);
    double varQ = 0.0;
    for (double lam : {mean - rad, mean + rad}) {
        const double x0sq = k01 * k01 / (k01 * k01 + (lam - k00) * (lam - k00));
        const double w = std::sqrt(lam);
        varQ += x0sq / (2.0 * w * std::tanh(0.75 * w));
    }
    const double c = 0.3 - 0.2 + 0.4;
    const auto r = small_bath_T(s, 0.3, -0.2, 0.0, 0.4, 0.0);
    EXPECT_NEAR(std::abs(r.T_exact - std::exp(-0.5 * c * c * varQ)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(r.T_formula - std::exp(-0.5 * c * c * varQ)), 0.0, 1e-12);
}

TEST(SmallBath, CumulantFormulaConvergesWithTruncation) {
    std::vector<TQuery> qs{{0.3, -0.2, 0.25, 0.4, 0.0}, {0.3, -0.2, 0.25, 0.4, 0.5}};
    std::vector<double> prev(qs.size(), 1e300);
    for (std::size_t dim : {8u, 10u, 12u}) {
        const auto res = small_bath_T(two_mode_system(dim), qs, {1e-4, 1e-14});
        for (std::size_t k = 0; k < qs.size(); ++k) {
            EXPECT_LE(std::abs(res[k].T_exact), 1.0 + 1e-12);
            EXPECT_LT(res[k].relative_gap(), prev[k]) << dim;
            prev[k] = res[k].relative_gap();
        }
    }
    for (double g : prev) EXPECT_LE(g, 1e-6);
}

TEST(SmallBath, OtherOrderingsAreRejected) {
    const auto sys = two_mode_system(12);
    const double a = 0.3, b = -0.2, u = 0.25, v = 0.4, t = 0.5;
    const auto r = small_bath_T(sys, a, b, u, v, t);
    const auto cs = normal_mode_correlators(sys, t);
    const cplx base = evolution::ln_T(cs, a, b, u, v);
    // swap the time order inside single pair averages
    const cplx swapped_bu = base + b * u * (cs.qp_t_reversed() - cs.pq_t);
    const cplx swapped_av = base + a * v * (cs.qq_t() - cs.qq_t_reversed());
    const cplx swapped_uv = base + u * v * (correlators::CorrelatorSet::pq_equal() - correlators::CorrelatorSet::qp_equal());
    EXPECT_LE(r.relative_gap(), 1e-6);
    for (cplx alt : {swapped_bu, swapped_av, swapped_uv})
        EXPECT_GT(std::abs(r.T_exact - std::exp(alt)) / std::abs(r.T_exact), 1e3 * r.relative_gap());
}

TEST(SmallBath, TruncationBudgetEnforced) {
    EXPECT_THROW(small_bath_T(two_mode_system(4), 0.3, -0.2, 0.25, 0.4, 0.5), NumericalError);
}

TEST(SmallBath, GroundEnergyIsZeroPointSum) {
    const auto s = two_mode_system(12);
    ModelParams p;
    p.omega0 = s.omega0;
    const auto m = bath::normal_modes(s.bath, p, false);
    double zp = 0.0;
    for (double w : m.freqs) zp += 0.5 * w;
    EXPECT_NEAR(ground_energy(s), zp, 1e-6);
}
