#include <doctest.h>

#include "dynrisk/oracle.hpp"
#include "helpers.hpp"

using namespace dynrisk;
using namespace testutil;

TEST_CASE("grid oracle brackets the sup-norm closed form") {
    ScenarioTree tree = binary1();
    AdaptedProcess x = AdaptedProcess::zero(tree);
    x.at(1).values = {1.0, 3.0};
    UncertaintyKind ball = UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.25));
    RiskKind rho = RiskKind::cvar(0.5);
    AdaptedVector grid = grid_worst_case(ball, rho, tree, x, 0);
    AdaptedVector spacing = grid_spacing(ball, tree, x, 0);
    double exact = 3.25;
    CHECK(grid[0] <= exact + 1e-9);
    CHECK(grid[0] >= exact - spacing[0] - 1e-9);
}

TEST_CASE("kl simplex scan approaches the dual value") {
    ScenarioTree tree = binary1();
    AdaptedVector z = vec(1, {-1.0, 1.0});
    AdaptedVector sup = kl_simplex_sup(tree, z, 0.1);
    CHECK(std::abs(sup[0] - 0.4395892523232469) <= 1e-4);
    CHECK(sup[0] <= 0.4395892523232469 + 1e-9);
    // Radius zero pins the base expectation; a huge radius frees the whole
    // simplex and the sup approaches the maximum value.
    CHECK(kl_simplex_sup(tree, z, 0.0)[0] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(kl_simplex_sup(tree, z, 10.0)[0] > 0.98);
}

TEST_CASE("grid oracle handles the exact-enumeration kinds with zero spacing") {
    ScenarioTree tree = binary1();
    AdaptedProcess x = AdaptedProcess::zero(tree);
    x.at(1).values = {-1.0, 1.0};
    UncertaintyKind fam = UncertaintyKind::measure_family({{{1.2, 0.8}, 0.0}});
    AdaptedVector grid = grid_worst_case(fam, RiskKind::expectation(), tree, x, 0);
    AdaptedVector spacing = grid_spacing(fam, tree, x, 0);
    CHECK(spacing[0] == doctest::Approx(0.0));
    CHECK(grid[0] == doctest::Approx(0.6 * -1.0 + 0.4 * 1.0).epsilon(1e-12));
}

TEST_CASE("grid oracle refuses wide atoms") {
    std::vector<AtomSpec> atoms;
    atoms.push_back({"root", 0, "", 1.0});
    for (int k = 0; k < 4; ++k)
        atoms.push_back({std::string("c") + std::to_string(k), 1, "root", 0.25});
    ScenarioTree tree = ScenarioTree::build(1, std::move(atoms));
    AdaptedProcess x = AdaptedProcess::zero(tree);
    UncertaintyKind ball = UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1));
    CHECK_THROWS_AS(grid_worst_case(ball, RiskKind::expectation(), tree, x, 0), ValidationError);
}

TEST_CASE("path enumeration matches the recursive conditional expectation") {
    ScenarioTree tree = skewed2();
    AdaptedVector z = vec(2, {1.0, -2.0, 0.5, 3.0, -1.0});
    AdaptedVector a = enumerate_conditional_expectation(tree, z, 0);
    AdaptedVector b = conditional_expectation(tree, z, 0);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-12));
}
