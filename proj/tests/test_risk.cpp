#include <doctest.h>

#include "helpers.hpp"

using namespace dynrisk;
using namespace testutil;

TEST_CASE("expectation and worst case on a law") {
    std::vector<std::pair<double, double>> law = {{-1.0, 0.25}, {0.0, 0.25}, {1.0, 0.25}, {2.0, 0.25}};
    CHECK(evaluate_on_law(RiskKind::expectation(), law) == doctest::Approx(0.5));
    CHECK(evaluate_on_law(RiskKind::worst_case(), law) == doctest::Approx(2.0));
}

TEST_CASE("cvar matches hand-computed tail averages") {
    std::vector<std::pair<double, double>> u4 = {{-1.0, 0.25}, {0.0, 0.25}, {1.0, 0.25}, {2.0, 0.25}};
    // Upper quarter of the uniform four-point law.
    CHECK(evaluate_on_law(RiskKind::cvar(0.75), u4) == doctest::Approx(2.0).epsilon(1e-12));
    std::vector<std::pair<double, double>> two = {{1.0, 0.5}, {3.0, 0.5}};
    CHECK(evaluate_on_law(RiskKind::cvar(0.5), two) == doctest::Approx(3.0).epsilon(1e-12));
    // Level zero degenerates to the mean.
    CHECK(evaluate_on_law(RiskKind::cvar(0.0), two) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(RiskKind::cvar(1.0), ValidationError);
    CHECK_THROWS_AS(RiskKind::cvar(-0.1), ValidationError);
}

TEST_CASE("entropic risk matches the exponential certainty equivalent") {
    std::vector<std::pair<double, double>> two = {{1.0, 0.5}, {3.0, 0.5}};
    CHECK(evaluate_on_law(RiskKind::entropic(1.0), two) ==
          doctest::Approx(2.4337808304830273).epsilon(1e-12));
    std::vector<std::pair<double, double>> skew = {{-1.0, 0.3}, {0.5, 0.7}};
    CHECK(evaluate_on_law(RiskKind::entropic(2.0), skew) ==
          doctest::Approx(0.3322189588885439).epsilon(1e-12));
    CHECK_THROWS_AS(RiskKind::entropic(0.0), ValidationError);
}

TEST_CASE("positive homogeneity and subadditivity tags") {
    CHECK(RiskKind::expectation().positive_homogeneous());
    CHECK(RiskKind::cvar(0.9).sub_additive());
    CHECK(RiskKind::worst_case().sub_additive());
    CHECK_FALSE(RiskKind::entropic(1.0).positive_homogeneous());
    CHECK_FALSE(RiskKind::entropic(1.0).sub_additive());
}

TEST_CASE("one-step evaluation conditions per parent atom") {
    ScenarioTree tree = skewed2();
    AdaptedVector z = vec(2, {1.0, 2.0, 3.0, 4.0, 5.0});
    AdaptedVector v = evaluate_one_step(RiskKind::worst_case(), tree, z);
    CHECK(v.time == 1);
    CHECK(v[0] == doctest::Approx(3.0));
    CHECK(v[1] == doctest::Approx(5.0));
}

TEST_CASE("nested evaluation composes one-step measures backwards") {
    ScenarioTree tree = binary2();
    AdaptedProcess x = proc(tree, {{0.0}, {1.0, -1.0}, {2.0, 0.0, 1.0, -1.0}});
    // Worst case: inner worst at time 1 is (2, 1); outer worst of X_1 + inner.
    AdaptedVector v = nested_evaluate(RiskFamily::uniform(tree, RiskKind::worst_case()), tree, x, 0);
    CHECK(v[0] == doctest::Approx(3.0));
    // Expectation tower property: equals the expectation of the summed tail.
    AdaptedVector e = nested_evaluate(RiskFamily::uniform(tree, RiskKind::expectation()), tree, x, 0);
    CHECK(e[0] == doctest::Approx(0.5 * (1.0 + 1.0) + 0.5 * (-1.0 + 0.0)));
}

TEST_CASE("acceptance indicator per atom") {
    ScenarioTree tree = binary2();
    AdaptedVector z = vec(2, {-0.5, -0.1, 0.2, -0.3});
    std::vector<bool> acc = acceptance_indicator(RiskKind::worst_case(), tree, z);
    REQUIRE(acc.size() == 2);
    CHECK(acc[0]);
    CHECK_FALSE(acc[1]);
}
