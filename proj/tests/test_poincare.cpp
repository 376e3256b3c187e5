#include <gtest/gtest.h>

#include "rcr/poincare.hpp"
#include "support.hpp"

namespace rcr {
namespace {

SL2C random_sl2c(test::Random& rng) {
    SL2C::Matrix m{{{rng.complex(), rng.complex()}, {rng.complex(), rng.complex()}}};
    const cplx d = std::sqrt(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
    for (auto& row : m)
        for (auto& v : row) v /= d;
    return SL2C(m);
}

double max_diff(const FourVector& a, const FourVector& b) {
    double r = 0.0;
    for (int i = 0; i < 4; ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

TEST(SL2C, DeterminantChecked) {
    EXPECT_THROW(SL2C(SL2C::Matrix{{{2.0, 0.0}, {0.0, 1.0}}}), std::invalid_argument);
    test::Random rng(1);
    const SL2C l = random_sl2c(rng);
    const SL2C id = l * l.inverse();
    EXPECT_LT(std::abs(id.matrix()[0][0] - 1.0) + std::abs(id.matrix()[0][1]), 1e-12);
}

TEST(SL2C, ActsAsLorentzTransformations) {
    test::Random rng(2);
    for (int n = 0; n < 20; ++n) {
        const SL2C l = random_sl2c(rng);
        const FourVector x = rng.four_vector(2.0), y = rng.four_vector(2.0);
        const double scale = 1.0 + std::abs(minkowski(x, y));
        EXPECT_LT(std::abs(minkowski(l.act(x), l.act(y)) - minkowski(x, y)) / scale, 1e-9);
    }
    // rotation_z(phi) turns +x towards +y.
    const FourVector r = SL2C::rotation_z(kPi / 2).act(FourVector{1, 1, 0, 0});
    EXPECT_LT(max_diff(r, {1, 0, 1, 0}), 1e-15);
    const FourVector b = SL2C::boost_z(std::log(2.0)).act(FourVector{1, 0, 0, 1});
    EXPECT_LT(max_diff(b, {2, 0, 0, 2}), 1e-15);
}

TEST(Spinor, StandardSectionAlongZ) {
    const SpinorDyad d = standard_spinor({1, 0, 0, 1});
    const double c = std::pow(2.0, -0.25) * std::sqrt(2.0);
    EXPECT_NEAR(std::abs(d.pi[0] - c), 0.0, 1e-15);
    EXPECT_EQ(d.pi[1], cplx{});
    const CFourVector k = spinor_vector(d.pi, d.pi);
    EXPECT_LT(std::abs(k[0] - 1.0) + std::abs(k[3] - 1.0) + std::abs(k[1]) + std::abs(k[2]), 1e-12);
}

TEST(Spinor, PairingAndReconstructionForRandomNullMomenta) {
    test::Random rng(3);
    for (int n = 0; n < 100; ++n) {
        const FourVector k = rng.null_momentum();
        const SpinorDyad d = standard_spinor(k);
        EXPECT_LT(std::abs(pairing(d.omega, d.pi) - 1.0), 1e-12);
        const CFourVector rec = spinor_vector(d.pi, d.pi);
        for (int a = 0; a < 4; ++a) EXPECT_LT(std::abs(rec[a] - k[a]), 1e-12 * k[0]);
    }
}

TEST(Spinor, DomainErrors) {
    EXPECT_THROW(standard_spinor({1, 0, 0, -1}), DomainError);
    EXPECT_THROW(standard_spinor({2, 0, 0, 1}), DomainError);
}

TEST(Tetrad, NullFrameRelations) {
    test::Random rng(4);
    for (int n = 0; n < 100; ++n) {
        const FourVector k = rng.null_momentum();
        const PolarizationFrame f = polarization_frame(k);
        const CFourVector kc = complexify(k);
        EXPECT_LT(std::abs(minkowski(kc, f.m)), 1e-12 * k[0]);
        EXPECT_LT(std::abs(minkowski(f.m, f.m)), 1e-12);
        EXPECT_LT(std::abs(minkowski(f.m, f.m_bar) + 1.0), 1e-12);
        for (int a = 0; a < 4; ++a) EXPECT_LT(std::abs(f.m_bar[a] - std::conj(f.m[a])), 1e-14);
        for (int b = 0; b < 4; ++b) {
            cplx s{};
            for (int a = 0; a < 4; ++a) s += k[a] * f.e[a][b];
            EXPECT_LT(std::abs(s), 1e-12 * k[0] * k[0]);
        }
        EXPECT_LT(tetrad_residual(k), 1e-12 * std::max(1.0, k[0] * k[0]));
    }
}

TEST(Wigner, IdentityAndBoostAlongZ) {
    test::Random rng(5);
    for (int n = 0; n < 10; ++n)
        EXPECT_NEAR(wigner_phase(SL2C::identity(), rng.null_momentum()), 0.0, 1e-14);
    EXPECT_NEAR(wigner_phase(SL2C::boost_z(0.8), {1, 0, 0, 1}), 0.0, 1e-14);
}

TEST(Wigner, RotationSignIsPinned) {
    for (double phi : {0.3, 0.7, -1.1})
        EXPECT_NEAR(wigner_phase(SL2C::rotation_z(phi), {1, 0, 0, 1}), -phi / 2, 1e-14);
}

TEST(Wigner, CocycleForGeneralElements) {
    test::Random rng(6);
    for (int n = 0; n < 50; ++n) {
        const SL2C a = random_sl2c(rng), b = random_sl2c(rng);
        const FourVector k = rng.null_momentum();
        try {
            const double lhs = wigner_phase(a * b, k);
            const double rhs = wigner_phase(a, k) + wigner_phase(b, a.inverse().act(k));
            EXPECT_LT(std::abs(std::remainder(lhs - rhs, 2 * kPi)), 1e-9);
        } catch (const DomainError&) {
            // An intermediate momentum hit the excluded ray; not a cocycle failure.
        }
    }
}

TEST(Wigner, FactorIsUnimodular) {
    // Lambda pi(Lambda^{-1} k) and pi(k) both square to k, so they differ by a phase.
    test::Random rng(10);
    for (int n = 0; n < 20; ++n) {
        const SL2C l = random_sl2c(rng);
        const FourVector k = rng.null_momentum();
        try {
            EXPECT_NEAR(std::abs(wigner_factor(l, k)), 1.0, 1e-10);
        } catch (const DomainError&) {
        }
    }
    EXPECT_NEAR(std::abs(wigner_factor(SL2C::boost_z(0.4), {1, 0, 0, 1}) - 1.0), 0.0, 1e-14);
}

TEST(GridPermutation, RotationsPermuteBuiltGrids) {
    const MomentumGrid g = test::small_built_grid(2, 2, 4);
    for (int q = 0; q < 4; ++q) {
        const SL2C r = grid_rotation(g, q);
        const auto p = grid_permutation(g, r);
        std::vector<bool> seen(g.size(), false);
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_LT(max_diff(g.point(p[i]), r.inverse().act(g.point(i))), 1e-9);
            seen[p[i]] = true;
        }
        EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
    }
    EXPECT_THROW(grid_permutation(g, SL2C::rotation_z(0.3)), IncompatibleElement);
    EXPECT_THROW(grid_permutation(g, SL2C::boost_z(0.3)), IncompatibleElement);
}

TEST(Transform, TranslationLeavesVacuumInvariant) {
    const MomentumGrid g = test::small_built_grid(2, 2, 4);
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    const OscillatorState v = vacuum_state(p, FockTruncation(2));
    const OscillatorState moved = transform_state(g, {SL2C::identity(), {0.4, -1.0, 2.0, 0.3}}, v, Picture::vacuum);
    EXPECT_EQ(max_weighted_difference(g, moved, v), 0.0);
}

TEST(Transform, RotationPermutesProfileAndKeepsNorm) {
    const MomentumGrid g = test::small_built_grid(2, 2, 4);
    test::Random rng(7);
    const FockTruncation t(2);
    const OscillatorState psi = rng.state(g.size(), t, 2);
    const OscillatorState r = transform_state(g, {grid_rotation(g, 1), {}}, psi, Picture::physical);
    EXPECT_NEAR(norm_squared(g, r), norm_squared(g, psi), 1e-12 * norm_squared(g, psi));
    const auto perm = grid_permutation(g, grid_rotation(g, 1));
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(r(i, 0, 0)), std::abs(psi(perm[i], 0, 0)), 1e-15);
}

TEST(Transform, PhysicalTranslationOfOneExcitation) {
    const MomentumGrid one = test::one_point_grid();
    const FockTruncation t(1);
    const FourVector y{0.3, 0.1, 0.0, -0.2};
    const OscillatorState k10 = OscillatorState::basis(one, t, 0, 1, 0);
    const OscillatorState moved = transform_state(one, {SL2C::identity(), y}, k10, Picture::physical);
    const double ky = minkowski(one.point(0), y);
    EXPECT_LT(std::abs(moved(0, 1, 0) - std::polar(1.0, 2 * ky) * k10(0, 1, 0)), 1e-15);
}

TEST(Transform, ComposesAsARepresentation) {
    // U(a) U(b) = U(a b) for grid-compatible rotations with translations.
    const MomentumGrid g = test::small_built_grid(1, 2, 4);
    test::Random rng(8);
    const FockTruncation t(2);
    const OscillatorState psi = rng.state(g.size(), t, 2);
    const SL2C ra = grid_rotation(g, 1), rb = grid_rotation(g, 3);
    const FourVector ya = rng.four_vector(1.0), yb = rng.four_vector(1.0);
    const FourVector rya = ra.act(yb);
    const PoincareElement ab{ra * rb, {ya[0] + rya[0], ya[1] + rya[1], ya[2] + rya[2], ya[3] + rya[3]}};
    const OscillatorState two = transform_state(g, {ra, ya}, transform_state(g, {rb, yb}, psi, Picture::physical), Picture::physical);
    const OscillatorState one_step = transform_state(g, ab, psi, Picture::physical);
    EXPECT_LT(max_weighted_difference(g, two, one_step), 1e-12);
}

TEST(Covariance, IdentityTranslationsAndRotations) {
    const MomentumGrid g = test::small_built_grid(1, 1, 4);
    test::Random rng(9);
    const FockTruncation t(2);
    EXPECT_LT(covariance_check(g, {}, rng.amplitude(g.size()), rng.amplitude(g.size()), t), 1e-14);
    for (Picture pic : {Picture::vacuum, Picture::physical})
        EXPECT_LT(covariance_check(g, {SL2C::identity(), rng.four_vector(2.0)}, rng.amplitude(g.size()),
                                   rng.amplitude(g.size()), t, 2, pic), 1e-10);
    for (int q = 1; q < 4; ++q)
        EXPECT_LT(covariance_check(g, {grid_rotation(g, q), rng.four_vector(2.0)}, rng.amplitude(g.size()),
                                   rng.amplitude(g.size()), t), 1e-10);
    EXPECT_LT(ibar_covariance_residual(g, {grid_rotation(g, 1), {}}, rng.scalars(g.size()), t), 1e-10);
}

TEST(Covariance, TransportedAmplitudeOfTranslation) {
    const MomentumGrid one = test::one_point_grid();
    PolarizedAmplitude f(1);
    f(0, Helicity::plus) = 1.0;
    const FourVector y{0.5, 0, 0, 0};
    const auto moved = transport_amplitude(one, {SL2C::identity(), y}, f);
    EXPECT_LT(std::abs(moved(0, Helicity::plus) - std::polar(1.0, -0.5)), 1e-15);
}

TEST(Covariance, BoostFunctionalPathReportsQuadratureError) {
    const MomentumGrid g = MomentumGrid::build(GridSpec{});
    const StateEvaluator flat = [](const FourVector& k, int np, int nm) {
        return np == 0 && nm == 0 ? cplx(std::exp(-k[0])) : cplx{};
    };
    const auto id = transform_state(g, {}, flat, FockTruncation(1), Picture::vacuum);
    EXPECT_LT(id.norm_deviation, 1e-15);
    const auto boosted = transform_state(g, {SL2C::boost_z(0.3), {}}, flat, FockTruncation(1), Picture::vacuum);
    EXPECT_GT(boosted.norm_deviation, 0.0);
    EXPECT_LT(boosted.norm_deviation, 0.1 * norm_squared(g, id.state));
}

}  // namespace
}  // namespace rcr
