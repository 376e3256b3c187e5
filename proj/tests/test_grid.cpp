#include <gtest/gtest.h>

#include <sstream>

#include "rcr/grid.hpp"
#include "support.hpp"

namespace rcr {
namespace {

TEST(Grid, SinglePointExplicit) {
    const MomentumGrid g = test::one_point_grid();
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g.point(0), (FourVector{1, 0, 0, 1}));
    EXPECT_EQ(g.weight(0), 1.0);
}

TEST(Grid, TwoShellsAlongZ) {
    const MomentumGrid g = test::two_point_grid();
    EXPECT_EQ(g.point(0), (FourVector{1, 0, 0, 1}));
    EXPECT_EQ(g.point(1), (FourVector{2, 0, 0, 2}));
    EXPECT_EQ(g.weight(1), 1.0);
}

TEST(Grid, BuiltPointsAreNullPositiveAndOffNegativeZ) {
    for (int polar : {1, 2, 3, 8}) {
        GridSpec s;
        s.polar = polar;
        s.azimuthal = 5;
        const MomentumGrid g = MomentumGrid::build(s);
        EXPECT_EQ(g.size(), std::size_t(16 * polar * 5));
        for (std::size_t i = 0; i < g.size(); ++i) {
            const FourVector& k = g.point(i);
            EXPECT_GT(k[0], 0.0);
            EXPECT_GT(g.weight(i), 0.0);
            EXPECT_NEAR(minkowski(k, k), 0.0, 1e-12 * k[0] * k[0]);
            EXPECT_FALSE(std::hypot(k[1], k[2]) < 1e-12 * k[0] && k[3] < 0.0);
        }
    }
}

TEST(Grid, RejectsBadInput) {
    EXPECT_THROW(test::explicit_grid({{0, 0, -1}}, {1.0}), DomainError);
    EXPECT_THROW(test::explicit_grid({{0, 0, 0}}, {1.0}), std::invalid_argument);
    EXPECT_THROW(test::explicit_grid({{0, 0, 1}}, {0.0}), std::invalid_argument);
    EXPECT_THROW(test::explicit_grid({{0, 0, 1}}, {1.0, 1.0}), std::invalid_argument);
    GridSpec s;
    s.k_min = 0.0;
    EXPECT_THROW(MomentumGrid::build(s), std::invalid_argument);
    s = GridSpec{};
    s.radial = 0;
    EXPECT_THROW(MomentumGrid::build(s), std::invalid_argument);
}

TEST(Grid, TotalMeasureIsTheShellMeasure) {
    // dGamma integrated over the shell: (k_max^2 - k_min^2) / (8 pi^2).
    const MomentumGrid g = MomentumGrid::build(GridSpec{});
    const double exact = (100.0 - 0.01) / (8.0 * kPi * kPi);
    EXPECT_NEAR(g.total_measure(), exact, 1e-14 * exact);
    EXPECT_NEAR(shell_measure(0.1, 10.0), exact, 1e-14 * exact);
}

// int dGamma f(|k|) = (1 / 4 pi^2) int k f(k) dk; for f = exp(-k) the radial
// integral is (1 + a) e^{-a} - (1 + b) e^{-b}.
double integrate(const MomentumGrid& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double k = g.radius(i);
        // Quadrature of f against the exact cell measure.
        s += g.weight(i) * std::exp(-k);
    }
    return s;
}

TEST(Grid, QuadratureConvergesUnderDoubling) {
    const double a = 0.1, b = 10.0;
    const double exact = ((1 + a) * std::exp(-a) - (1 + b) * std::exp(-b)) / (4.0 * kPi * kPi);
    std::vector<double> errors;
    std::vector<double> values;
    for (int radial : {16, 32, 64, 128}) {
        GridSpec s;
        s.radial = radial;
        const double v = integrate(MomentumGrid::build(s));
        values.push_back(v);
        errors.push_back(std::abs(v - exact));
    }
    for (std::size_t r = 1; r < errors.size(); ++r) {
        const double order = std::log2(errors[r - 1] / errors[r]);
        EXPECT_NEAR(order, 2.0, 0.1) << "doubling " << r;
    }
    // Richardson: (4 I_{2h} - I_h) / 3 removes the leading term.
    const double rich = (4.0 * values[3] - values[2]) / 3.0;
    EXPECT_LT(std::abs(rich - exact), errors[3] / 50.0);
}

TEST(Grid, DeltaGamma) {
    const MomentumGrid unit = test::two_point_grid();
    EXPECT_EQ(unit.delta_gamma(0, 0), 1.0);
    EXPECT_EQ(unit.delta_gamma(0, 1), 0.0);
    const MomentumGrid quarter = test::explicit_grid({{0, 0, 1}}, {0.25});
    EXPECT_EQ(quarter.delta_gamma(0, 0), 4.0);
    EXPECT_THROW(unit.delta_gamma(0, 2), std::out_of_range);
}

TEST(Profile, NormalizationAndErrors) {
    const MomentumGrid g = MomentumGrid::build(GridSpec{});
    for (const char* name : {"power_gauss", "constant"}) {
        ProfileTemplate tpl;
        tpl.name = name;
        const VacuumProfile p = VacuumProfile::from_template(g, tpl);
        EXPECT_NEAR(profile_measure(g, p), 1.0, 1e-12);
        for (std::size_t i = 0; i < p.size(); ++i) EXPECT_GE(p.density(i), 0.0);
    }
    EXPECT_THROW(VacuumProfile::from_amplitudes(test::one_point_grid(), {0.5}), std::invalid_argument);
    ProfileTemplate bad;
    bad.name = "nope";
    EXPECT_THROW(VacuumProfile::from_template(g, bad), std::invalid_argument);
}

TEST(Profile, NormalizeRescales) {
    const MomentumGrid g = test::two_point_grid();
    const VacuumProfile p = VacuumProfile::normalize(g, {3.0, 4.0});
    EXPECT_NEAR(p.density(0), 9.0 / 25.0, 1e-15);
    EXPECT_NEAR(p.density(1), 16.0 / 25.0, 1e-15);
}

TEST(InnerProductZ, Examples) {
    const MomentumGrid one = test::one_point_grid();
    const VacuumProfile z1 = VacuumProfile::from_amplitudes(one, {1.0});
    PolarizedAmplitude f(1), g(1);
    f(0, Helicity::plus) = 1.0;
    g(0, Helicity::plus) = 1.0;
    EXPECT_EQ(inner_product_z(one, f, g, z1), cplx(1.0));

    PolarizedAmplitude minus(1);
    minus(0, Helicity::minus) = 1.0;
    EXPECT_EQ(inner_product_z(one, f, minus, z1), cplx(0.0));

    const MomentumGrid two = test::two_point_grid();
    const VacuumProfile half = VacuumProfile::from_amplitudes(two, {std::sqrt(0.5), std::sqrt(0.5)});
    PolarizedAmplitude a(2), b(2);
    a(0, Helicity::plus) = 1.0;
    a(1, Helicity::plus) = 1.0;
    b(0, Helicity::plus) = 1.0;
    b(1, Helicity::plus) = -1.0;
    EXPECT_NEAR(std::abs(inner_product_z(two, a, b, half)), 0.0, 1e-15);
}

TEST(InnerProductZ, ConjugateLinearInFirstSlot) {
    test::Random rng(5);
    const MomentumGrid g = test::small_built_grid(2, 2, 2);
    const VacuumProfile p = VacuumProfile::from_template(g, ProfileTemplate{});
    const auto f = rng.amplitude(g.size());
    const auto h = rng.amplitude(g.size());
    const cplx c{0.3, 0.7};
    EXPECT_LT(std::abs(inner_product_z(g, c * f, h, p) - std::conj(c) * inner_product_z(g, f, h, p)), 1e-13);
    EXPECT_LT(std::abs(inner_product_z(g, f, h, p) - std::conj(inner_product_z(g, h, f, p))), 1e-13);
}

TEST(Grid, CsvHasHeaderAndOneRowPerPoint) {
    const MomentumGrid g = test::two_point_grid();
    const VacuumProfile p = VacuumProfile::from_amplitudes(g, {std::sqrt(0.5), std::sqrt(0.5)});
    std::ostringstream out;
    write_grid_csv(out, g, p);
    EXPECT_EQ(out.str().rfind("k0,k1,k2,k3,w,Z\r\n", 0), 0u);
    const std::string csv = out.str();
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

}  // namespace
}  // namespace rcr
