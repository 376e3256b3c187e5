#include <gtest/gtest.h>

#include "rcr/oscillator.hpp"
#include "support.hpp"

namespace rcr {
namespace {

PolarizedAmplitude plus_only(std::size_t points, cplx v) {
    PolarizedAmplitude f(points);
    for (std::size_t i = 0; i < points; ++i) f(i, Helicity::plus) = v;
    return f;
}

TEST(Truncation, RejectsNegative) {
    EXPECT_THROW(FockTruncation(-1), std::invalid_argument);
    EXPECT_EQ(FockTruncation(2).block(), 9u);
}

TEST(Vacuum, Examples) {
    const MomentumGrid one = test::one_point_grid();
    const OscillatorState v1 = vacuum_state(VacuumProfile::from_amplitudes(one, {1.0}), FockTruncation(2));
    EXPECT_EQ(v1(0, 0, 0), cplx(1.0));
    EXPECT_NEAR(norm_squared(one, v1), 1.0, 1e-15);

    const MomentumGrid two = test::two_point_grid();
    const VacuumProfile half = VacuumProfile::from_amplitudes(two, {std::sqrt(0.5), std::sqrt(0.5)});
    const OscillatorState v2 = vacuum_state(half, FockTruncation(2));
    EXPECT_NEAR(norm_squared(two, v2), 1.0, 1e-15);

    test::Random rng(1);
    const OscillatorState gone = apply_annihilation(rng.amplitude(2), v2);
    EXPECT_EQ(norm_squared(two, gone), 0.0);
}

TEST(Ladder, AnnihilationMatrixElements) {
    const MomentumGrid one = test::one_point_grid();
    const FockTruncation t(3);
    const auto f = plus_only(1, 1.0);
    const OscillatorState a1 = apply_annihilation(f, OscillatorState::basis(one, t, 0, 1, 0));
    EXPECT_NEAR(max_weighted_difference(one, a1, OscillatorState::basis(one, t, 0, 0, 0)), 0.0, 1e-15);
    const OscillatorState a2 = apply_annihilation(f, OscillatorState::basis(one, t, 0, 2, 0));
    const OscillatorState expect = std::sqrt(2.0) * OscillatorState::basis(one, t, 0, 1, 0);
    EXPECT_NEAR(max_weighted_difference(one, a2, expect), 0.0, 1e-15);
}

TEST(Ladder, CreationOnUnitWeightGrid) {
    const MomentumGrid one = test::one_point_grid();
    const FockTruncation t(2);
    const auto f = plus_only(1, 1.0);
    const OscillatorState c = apply_creation(f, OscillatorState::basis(one, t, 0, 0, 0));
    EXPECT_NEAR(max_weighted_difference(one, c, OscillatorState::basis(one, t, 0, 1, 0)), 0.0, 1e-15);
}

TEST(Ladder, CreationAboveTruncationIsDropped) {
    const MomentumGrid one = test::one_point_grid();
    const FockTruncation t(2);
    const OscillatorState top = OscillatorState::basis(one, t, 0, 2, 0);
    EXPECT_EQ(norm_squared(one, apply_creation(plus_only(1, 1.0), top)), 0.0);
}

TEST(Ladder, AdjointnessOnSafeSubspace) {
    test::Random rng(2);
    const MomentumGrid g = test::small_built_grid(2, 2, 2);
    const FockTruncation t(3);
    for (int trial = 0; trial < 10; ++trial) {
        const OscillatorState phi = rng.state(g.size(), t, t.n_max() - 1);
        const OscillatorState psi = rng.state(g.size(), t, t.n_max() - 1);
        const auto f = rng.amplitude(g.size());
        const cplx lhs = inner_product(g, phi, apply_creation(f, psi));
        const cplx rhs = inner_product(g, apply_annihilation(f, phi), psi);
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(Ladder, SingleModeCommutatorBelowTop) {
    // [a(f), a(g)^+] = I(conj(f) g) on states below the top level.
    test::Random rng(9);
    const MomentumGrid g = test::small_built_grid(2, 1, 3);
    const FockTruncation t(3);
    const auto f = rng.amplitude(g.size());
    const auto h = rng.amplitude(g.size());
    std::vector<cplx> ff(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (Helicity s : kHelicities) ff[i] += std::conj(f(i, s)) * h(i, s);
    const OscillatorState psi = rng.state(g.size(), t, t.n_max() - 1);
    const OscillatorState lhs = apply_annihilation(f, apply_creation(h, psi)) -
                                apply_creation(h, apply_annihilation(f, psi));
    EXPECT_LT(max_weighted_difference(g, lhs, apply_ik(ff, psi)), 1e-12);
}

TEST(Ik, IdentityAndIndicator) {
    test::Random rng(4);
    const MomentumGrid g = test::small_built_grid(1, 1, 3);
    const FockTruncation t(2);
    const OscillatorState psi = rng.state(g.size(), t, 2);
    EXPECT_EQ(max_weighted_difference(g, apply_ik(std::vector<cplx>(3, 1.0), psi), psi), 0.0);
    const OscillatorState proj = apply_ik(std::vector<cplx>{0.0, 1.0, 0.0}, psi);
    for (std::size_t i = 0; i < 3; ++i)
        for (int np = 0; np <= 2; ++np)
            for (int nm = 0; nm <= 2; ++nm)
                EXPECT_EQ(proj(i, np, nm), i == 1 ? psi(i, np, nm) : cplx{});
}

TEST(Ik, MultipliesSmearingFunction) {
    // I(g) a(f)^+ = a(g f)^+ = a(f)^+ I(g): I_k is diagonal in momentum.
    test::Random rng(6);
    const MomentumGrid g = test::small_built_grid(2, 1, 2);
    const FockTruncation t(3);
    const auto f = rng.amplitude(g.size());
    const auto w = rng.scalars(g.size());
    PolarizedAmplitude gf(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (Helicity s : kHelicities) gf(i, s) = w[i] * f(i, s);
    const OscillatorState psi = rng.state(g.size(), t, t.n_max() - 1);
    const OscillatorState left = apply_ik(w, apply_creation(f, psi));
    EXPECT_LT(max_weighted_difference(g, left, apply_creation(gf, psi)), 1e-12);
    EXPECT_LT(max_weighted_difference(g, left, apply_creation(f, apply_ik(w, psi))), 1e-12);
}

TEST(FourMomentum, VacuumPictureKillsVacuum) {
    const MomentumGrid g = test::small_built_grid(2, 2, 2);
    const OscillatorState v =
        vacuum_state(VacuumProfile::from_template(g, ProfileTemplate{}), FockTruncation(2));
    EXPECT_EQ(norm_squared(g, apply_four_momentum(g, {1.0, 0.3, -0.2, 0.5}, v, Picture::vacuum)), 0.0);
}

TEST(FourMomentum, PhysicalPictureTranslationPhases) {
    const MomentumGrid one = test::one_point_grid();
    const FockTruncation t(2);
    const double time = 0.7;
    const FourVector x{time, 0, 0, 0};
    const OscillatorState k00 = OscillatorState::basis(one, t, 0, 0, 0);
    const OscillatorState k11 = OscillatorState::basis(one, t, 0, 1, 1);
    EXPECT_NEAR(std::abs(translate(one, x, k00, Picture::physical)(0, 0, 0) - std::polar(1.0, time)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(translate(one, x, k11, Picture::physical)(0, 1, 1) - std::polar(1.0, 3 * time)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(translate(one, x, k00, Picture::vacuum)(0, 0, 0) - 1.0), 0.0, 1e-15);
}

TEST(FourMomentum, GeneratorMatchesTranslationDerivative) {
    test::Random rng(8);
    const MomentumGrid g = test::small_built_grid(2, 2, 2);
    const FockTruncation t(2);
    const OscillatorState psi = rng.state(g.size(), t, 2);
    const FourVector x{0.3, -0.1, 0.4, 0.2};
    const double h = 1e-6;
    const FourVector xp{h * x[0], h * x[1], h * x[2], h * x[3]};
    const FourVector xm{-h * x[0], -h * x[1], -h * x[2], -h * x[3]};
    OscillatorState d = translate(g, xp, psi, Picture::physical) - translate(g, xm, psi, Picture::physical);
    d *= cplx(0.0, -1.0 / (2.0 * h));
    EXPECT_LT(max_weighted_difference(g, d, apply_four_momentum(g, x, psi, Picture::physical)), 1e-7);
}

TEST(Coherent, ZeroAlphaIsVacuum) {
    const MomentumGrid g = test::small_built_grid(2, 2, 2);
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    const FockTruncation t(3);
    const OscillatorState c = coherent_state(g, p, CoherentSpec{PolarizedAmplitude(g.size())}, t);
    EXPECT_EQ(max_weighted_difference(g, c, vacuum_state(p, t)), 0.0);
}

TEST(Coherent, SinglePointFormula) {
    const MomentumGrid one = test::one_point_grid();
    const VacuumProfile p = VacuumProfile::from_amplitudes(one, {1.0});
    CoherentSpec spec{PolarizedAmplitude(1)};
    spec.alpha(0, Helicity::plus) = 0.1;
    const OscillatorState c = coherent_state(one, p, spec, FockTruncation(2), 1e-3);
    const double d = std::exp(-0.005);
    EXPECT_NEAR(c(0, 0, 0).real(), d, 1e-15);
    EXPECT_NEAR(c(0, 1, 0).real(), d * 0.1, 1e-15);
    EXPECT_NEAR(c(0, 2, 0).real(), d * 0.01 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(c(0, 0, 1), cplx{});
}

TEST(Coherent, TailBeyondToleranceThrows) {
    const MomentumGrid one = test::one_point_grid();
    const VacuumProfile p = VacuumProfile::from_amplitudes(one, {1.0});
    CoherentSpec spec{plus_only(1, 1.0)};
    EXPECT_THROW(coherent_state(one, p, spec, FockTruncation(2)), TruncationError);
    // Poisson(1) mass above 2 is 1 - 2.5/e.
    EXPECT_NEAR(coherent_tail_mass(one, p, spec, FockTruncation(2)), 1.0 - 2.5 / std::exp(1.0), 1e-14);
}

TEST(Coherent, EigenstateOfAnnihilationPerPoint) {
    // On a single point a(f)|O_alpha> = sum_s conj(f_s) alpha_s |O_alpha> below the top level.
    test::Random rng(12);
    const MomentumGrid one = test::one_point_grid();
    const VacuumProfile p = VacuumProfile::from_amplitudes(one, {1.0});
    const FockTruncation t(20);
    CoherentSpec spec{0.3 * rng.amplitude(1)};
    const auto f = rng.amplitude(1);
    const OscillatorState c = coherent_state(one, p, spec, t);
    const OscillatorState af = apply_annihilation(f, c);
    cplx ev{};
    for (Helicity s : kHelicities) ev += std::conj(f(0, s)) * spec.alpha(0, s);
    for (int np = 0; np < t.n_max(); ++np)
        for (int nm = 0; nm < t.n_max(); ++nm) EXPECT_LT(std::abs(af(0, np, nm) - ev * c(0, np, nm)), 1e-14);
}

TEST(Coherent, ExcitationDistributionIsPoisson) {
    const MomentumGrid one = test::one_point_grid();
    const VacuumProfile p = VacuumProfile::from_amplitudes(one, {1.0});
    CoherentSpec spec{PolarizedAmplitude(1)};
    spec.alpha(0, Helicity::plus) = 0.2;
    spec.alpha(0, Helicity::minus) = cplx(0.0, 0.1);
    const auto dist = excitation_distribution(one, coherent_state(one, p, spec, FockTruncation(12)));
    const double lambda = 0.05;
    double fact = 1.0;
    for (std::size_t n = 0; n < 10; ++n) {
        if (n > 0) fact *= double(n);
        EXPECT_NEAR(dist[n], std::exp(-lambda) * std::pow(lambda, double(n)) / fact, 1e-15);
    }
}

}  // namespace
}  // namespace rcr
