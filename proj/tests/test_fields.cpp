#include <gtest/gtest.h>

#include <sstream>

#include "rcr/fields.hpp"
#include "rcr/poincare.hpp"
#include "support.hpp"

namespace rcr {
namespace {

TEST(OnePhoton, AtOriginOnOnePointGrid) {
    const MomentumGrid one = test::one_point_grid();
    const VacuumProfile z = VacuumProfile::from_amplitudes(one, {1.0});
    const FieldVector A = one_photon_vector(one, z, {0, 0, 0, 0});
    const PolarizationFrame f = polarization_frame(one.point(0));
    const CFourVector m = lower(f.m), mb = lower(f.m_bar);
    for (int a = 0; a < 4; ++a) {
        EXPECT_LT(std::abs(A.components[a](0, 0, 1) - cplx(0, -1) * m[a]), 1e-15);
        EXPECT_LT(std::abs(A.components[a](0, 1, 0) - cplx(0, -1) * mb[a]), 1e-15);
        EXPECT_EQ(A.components[a](0, 0, 0), cplx{});
    }
}

TEST(OnePhoton, TranslationCovariance) {
    // |A(x)> = exp(i x.P) |A(0)> with P in the vacuum picture (one excitation).
    test::Random rng(1);
    const MomentumGrid g = test::small_built_grid(3, 2, 2);
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    const FourVector x = rng.four_vector(3.0);
    const FieldVector at0 = one_photon_vector(g, p, {0, 0, 0, 0});
    const FieldVector atx = one_photon_vector(g, p, x);
    for (int a = 0; a < 4; ++a)
        EXPECT_LT(max_weighted_difference(g, translate(g, x, at0.components[a], Picture::vacuum), atx.components[a]), 1e-12);
}

TEST(OnePhoton, NormIsFinite) {
    const MomentumGrid g = MomentumGrid::build(GridSpec{});
    for (const char* name : {"power_gauss", "constant"}) {
        ProfileTemplate tpl;
        tpl.name = name;
        const VacuumProfile p = VacuumProfile::from_template(g, tpl);
        const FieldVector A = one_photon_vector(g, p, {0.1, 0.2, 0.3, 0.4});
        for (const auto& c : A.components) EXPECT_TRUE(std::isfinite(norm_squared(g, c)));
    }
}

TEST(TwoPoint, CoincidentPointsGiveTwo) {
    test::Random rng(2);
    const MomentumGrid g = MomentumGrid::build(GridSpec{});
    for (int n = 0; n < 10; ++n) {
        std::vector<cplx> amps(g.size());
        for (auto& v : amps) v = rng.complex();
        const VacuumProfile p = VacuumProfile::normalize(g, amps);
        const FourVector x = rng.four_vector(5.0);
        EXPECT_NEAR(std::abs(two_point_product(g, p, x, x) - 2.0), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(two_point_contraction(g, p, x, x) - 2.0), 0.0, 1e-12);
    }
}

TEST(TwoPoint, OnePointGridPhase) {
    const MomentumGrid one = test::one_point_grid();
    const VacuumProfile z = VacuumProfile::from_amplitudes(one, {1.0});
    const double t = 0.9;
    EXPECT_LT(std::abs(two_point_product(one, z, {t, 0, 0, 0}, {0, 0, 0, 0}) - 2.0 * std::polar(1.0, t)), 1e-15);
}

TEST(TwoPoint, DualPathsAgree) {
    test::Random rng(3);
    const MomentumGrid g = MomentumGrid::build(GridSpec{});
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    for (int n = 0; n < 10; ++n) {
        const FourVector x = rng.four_vector(3.0), y = rng.four_vector(3.0);
        EXPECT_LT(std::abs(two_point_product(g, p, x, y) - two_point_contraction(g, p, x, y)), 1e-12);
    }
}

TEST(FieldAverage, ZeroAlphaIsZero) {
    const MomentumGrid g = test::small_built_grid(2, 2, 2);
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    const Tensor4 t = coherent_field_average(g, p, CoherentSpec{PolarizedAmplitude(g.size())}, {1, 2, 3, 4});
    EXPECT_EQ(test::max_abs_diff(t, Tensor4{}), 0.0);
}

TEST(FieldAverage, HalfWeightedPointGivesHalfTheFrame) {
    // Unit weight and Z = 0.5 at k = (1,0,0,1); the second point carries the rest of the norm.
    const MomentumGrid two = test::two_point_grid();
    const VacuumProfile half = VacuumProfile::from_amplitudes(two, {std::sqrt(0.5), std::sqrt(0.5)});
    CoherentSpec alpha{PolarizedAmplitude(2)};
    alpha.alpha(0, Helicity::minus) = 1.0;
    const Tensor4 got = coherent_field_average(two, half, alpha, {0, 0, 0, 0});
    Tensor4 expect = polarization_frame(two.point(0)).e;
    for (auto& row : expect)
        for (auto& v : row) v *= 0.5;
    EXPECT_LT(test::max_abs_diff(got, expect), 1e-15);
    const Tensor4 dense = coherent_field_average_dense(two, half, alpha, {0, 0, 0, 0}, 2, FockTruncation(10));
    EXPECT_LT(test::max_abs_diff(dense, expect), 1e-8);
}

TEST(FieldAverage, DenseOracleAwayFromOrigin) {
    test::Random rng(4);
    const MomentumGrid g = test::small_built_grid(1, 1, 2);
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    CoherentSpec alpha{0.3 * rng.amplitude(g.size())};
    const FourVector x = rng.four_vector(2.0);
    const Tensor4 formula = coherent_field_average(g, p, alpha, x);
    const Tensor4 dense = coherent_field_average_dense(g, p, alpha, x, 2, FockTruncation(6));
    EXPECT_LT(test::max_abs_diff(formula, dense), 1e-8);
}

TEST(FieldAverage, DependsOnlyOnZTimesAlpha) {
    // Two points with unit weights; move Z between them and rescale alpha.
    const MomentumGrid two = test::two_point_grid();
    const VacuumProfile a = VacuumProfile::from_amplitudes(two, {std::sqrt(0.5), std::sqrt(0.5)});
    const VacuumProfile b = VacuumProfile::from_amplitudes(two, {std::sqrt(0.25), std::sqrt(0.75)});
    CoherentSpec alpha_a{PolarizedAmplitude(2)}, alpha_b{PolarizedAmplitude(2)};
    alpha_a.alpha(0, Helicity::minus) = cplx(0.4, 0.1);
    alpha_a.alpha(1, Helicity::plus) = cplx(-0.2, 0.3);
    alpha_b.alpha(0, Helicity::minus) = 2.0 * alpha_a.alpha(0, Helicity::minus);
    alpha_b.alpha(1, Helicity::plus) = (0.5 / 0.75) * alpha_a.alpha(1, Helicity::plus);
    const FourVector x{0.3, 0.2, -0.4, 1.0};
    EXPECT_LT(test::max_abs_diff(coherent_field_average(two, a, alpha_a, x),
                                 coherent_field_average(two, b, alpha_b, x)), 1e-15);
}

TEST(FieldAverage, AntisymmetricAndHermitianPart) {
    test::Random rng(5);
    const MomentumGrid g = test::small_built_grid(3, 2, 3);
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    CoherentSpec alpha{rng.amplitude(g.size())};
    const FourVector x = rng.four_vector(2.0);
    const Tensor4 t = coherent_field_average(g, p, alpha, x);
    EXPECT_LT(antisymmetry_residual(t), 1e-14);
    const Tensor4 h = hermitian_field_average(g, p, alpha, x);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            EXPECT_LT(std::abs(h[a][b].imag()), 1e-14);
            EXPECT_LT(std::abs(h[a][b] - (t[a][b] + std::conj(t[a][b]))), 1e-14);
        }
}

TEST(FieldAverage, ScanCsvShape) {
    const MomentumGrid g = test::small_built_grid(1, 1, 2);
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    test::Random rng(6);
    std::ostringstream out;
    const std::vector<double> ts{0.0, 0.5, 1.0};
    write_field_scan(out, g, p, CoherentSpec{rng.amplitude(2)}, {0, 0, 0, 0}, {1, 0, 0, 0}, ts);
    const std::string s = out.str();
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
    const std::string header = s.substr(0, s.find('\r'));
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), 12);
    EXPECT_EQ(header.rfind("t,F01_re,F01_im", 0), 0u);
}

}  // namespace
}  // namespace rcr
