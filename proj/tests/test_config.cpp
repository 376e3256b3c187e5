#include <gtest/gtest.h>

#include <sstream>

#include "rcr/config.hpp"

namespace rcr {
namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

TEST(Config, EmptyTextGivesDefaults) {
    const ExperimentConfig c = parse("");
    EXPECT_EQ(c.seed, 20240601u);
    EXPECT_FALSE(c.n_max.has_value());
    EXPECT_EQ(c.theorem1.limit_N, (std::vector<std::int64_t>{4, 8, 16, 32, 64}));
    EXPECT_EQ(c.radiation.shells, 64);
}

TEST(Config, ShippedDefaultFileMatchesBuiltInDefaults) {
    const ExperimentConfig file = load_config(std::string(RCR_SOURCE_DIR) + "/configs/default.ini");
    EXPECT_EQ(describe(file), describe(ExperimentConfig{}));
}

TEST(Config, ReadsSectionsListsAndOptionals) {
    const ExperimentConfig c = parse(
        "seed = 7\n"
        "[grid]\nradial = 8\nk_max = 4.5\n"
        "[truncation]\nn_max = 1\n"
        "[poisson]\nN = 2, 4 ,8\n"
        "[radiation]\nk_mins = 0.1,0.05\n"
        "[suite]\ntolerance = 1e-16\n");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.grid.radial, 8);
    EXPECT_EQ(c.grid.k_max, 4.5);
    EXPECT_EQ(c.n_max, 1);
    EXPECT_EQ(c.poisson.N, (std::vector<std::int64_t>{2, 4, 8}));
    ASSERT_TRUE(c.radiation.k_mins.has_value());
    EXPECT_EQ(c.radiation.k_mins->size(), 2u);
    EXPECT_EQ(c.suite.tolerance, 1e-16);
}

TEST(Config, DescribeRoundTrips) {
    ExperimentConfig c;
    c.seed = 99;
    c.profile.name = "constant";
    c.poisson.N = {3, 5};
    std::ostringstream text;
    for (const auto& [k, v] : describe(c)) {
        const auto dot = k.find('.');
        if (dot == std::string::npos) text << k << " = " << v << "\n";
    }
    std::string section;
    for (const auto& [k, v] : describe(c)) {
        const auto dot = k.find('.');
        if (dot == std::string::npos || v == "derived" || v == "default") continue;
        if (k.substr(0, dot) != section) {
            section = k.substr(0, dot);
            text << "[" << section << "]\n";
        }
        text << k.substr(dot + 1) << " = " << v << "\n";
    }
    EXPECT_EQ(describe(parse(text.str())), describe(c));
}

TEST(Config, Errors) {
    EXPECT_THROW(parse("[grid]\nradial = many\n"), ConfigError);
    EXPECT_THROW(parse("[grid]\nradial = 3x\n"), ConfigError);
    EXPECT_THROW(parse("[grid]\nspokes = 3\n"), ConfigError);
    EXPECT_THROW(parse("[nowhere]\nx = 1\n"), ConfigError);
    EXPECT_THROW(parse("[radiation]\nk_mins =\n"), ConfigError);
    EXPECT_THROW(parse("[grid]\nk_min = 5\nk_max = 1\n"), ConfigError);
    EXPECT_THROW(parse("[profile]\ntemplate = flat\n"), ConfigError);
    EXPECT_THROW(parse("[radiation]\nanisotropy = 2\n"), ConfigError);
    EXPECT_THROW(parse("[suite]\ntolerance = -1\n"), ConfigError);
    EXPECT_THROW(parse("this is not ini\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST(Config, BareSectionIsAllowed) {
    EXPECT_NO_THROW(parse("[grid]\n[poisson]\nlambda = 0.5\n"));
}

}  // namespace
}  // namespace rcr
