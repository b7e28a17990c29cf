#include <doctest.h>

#include "helpers.hpp"

using namespace dynrisk;
using namespace testutil;

TEST_CASE("tolerance rules evaluate per conditioning atom") {
    ScenarioTree tree = binary2();
    AdaptedProcess x = proc(tree, {{0.0}, {1.0, -1.0}, {0.0, 0.0, 0.0, 0.0}});

    AdaptedVector c = tolerance_eval(ToleranceRule::constant(0.3), tree, x, 1);
    CHECK(c.time == 0);
    CHECK(c[0] == doctest::Approx(0.3));

    // Horizon rule scales with the remaining time: eps * (T - t).
    std::vector<AtomSpec> atoms;
    atoms.push_back({"root", 0, "", 1.0});
    atoms.push_back({"a", 1, "root", 1.0});
    atoms.push_back({"aa", 2, "a", 1.0});
    atoms.push_back({"aaa", 3, "aa", 1.0});
    ScenarioTree chain = ScenarioTree::build(3, std::move(atoms));
    AdaptedProcess z = AdaptedProcess::zero(chain);
    CHECK(tolerance_eval(ToleranceRule::horizon(0.1), chain, z, 2)[0] == doctest::Approx(0.1));
    CHECK(tolerance_eval(ToleranceRule::horizon(0.1), chain, z, 1)[0] == doctest::Approx(0.2));

    // Variance-scaled rule reads the conditional variance of X_t.
    AdaptedVector v = tolerance_eval(ToleranceRule::var_scaled(0.5), tree, x, 1);
    CHECK(v[0] == doctest::Approx(0.5 * 1.0));
    CHECK(tolerance_eval(ToleranceRule::zero(), tree, x, 1)[0] == doctest::Approx(0.0));

    CHECK(ToleranceRule::var_scaled(0.5).zero_at_zero());
    CHECK_FALSE(ToleranceRule::constant(0.1).zero_at_zero());
    CHECK(ToleranceRule::zero().positively_homogeneous());
    CHECK_FALSE(ToleranceRule::var_scaled(0.5).positively_homogeneous());
}

TEST_CASE("identity set contains exactly the argument") {
    ScenarioTree tree = binary1();
    AdaptedProcess x = AdaptedProcess::zero(tree);
    x.at(1).values = {1.0, 3.0};
    UncertaintyKind id = UncertaintyKind::identity();
    CHECK(contains(id, tree, x.at(1), x, 1)[0]);
    CHECK_FALSE(contains(id, tree, vec(1, {1.0, 3.1}), x, 1)[0]);
    AdaptedVector w = worst_case(id, RiskKind::cvar(0.5), tree, x, 0);
    CHECK(w[0] == doctest::Approx(3.0));
}

TEST_CASE("sup-norm ball: membership, worst case, max member") {
    ScenarioTree tree = binary1();
    AdaptedProcess x = AdaptedProcess::zero(tree);
    x.at(1).values = {1.0, 3.0};
    UncertaintyKind ball = UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.25));

    CHECK(contains(ball, tree, vec(1, {1.25, 2.75}), x, 1)[0]);
    CHECK_FALSE(contains(ball, tree, vec(1, {1.3, 3.0}), x, 1)[0]);

    // Closed form: rho(X + eps).
    AdaptedVector w = worst_case(ball, RiskKind::cvar(0.5), tree, x, 0);
    CHECK(w[0] == doctest::Approx(3.25).epsilon(1e-12));

    AdaptedVector top;
    REQUIRE(max_member(ball, tree, x, 0, top));
    CHECK(top[0] == doctest::Approx(1.25));
    CHECK(top[1] == doctest::Approx(3.25));
}

TEST_CASE("wasserstein ball worst case reaches the transport optimum") {
    ScenarioTree tree = binary1();
    AdaptedProcess x = AdaptedProcess::zero(tree);
    x.at(1).values = {0.0, 1.0};
    UncertaintyKind ball = UncertaintyKind::wasserstein_ball(1.0, ToleranceRule::constant(0.25));
    // CVaR_0.5 pays only for the top half, so the whole budget moves the top
    // child: sup = 1 + 0.25 / 0.5.
    AdaptedVector w = worst_case(ball, RiskKind::cvar(0.5), tree, x, 0);
    CHECK(w[0] == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(contains(ball, tree, vec(1, {0.0, 1.5}), x, 1)[0]);
    CHECK_FALSE(contains(ball, tree, vec(1, {0.0, 1.6}), x, 1)[0]);
}

TEST_CASE("kl ball worst-case expectation matches the convex dual") {
    ScenarioTree tree = binary1();
    AdaptedProcess x = AdaptedProcess::zero(tree);
    x.at(1).values = {-1.0, 1.0};
    UncertaintyKind ball = UncertaintyKind::kl_ball(ToleranceRule::constant(0.1));
    AdaptedVector w = worst_case(ball, RiskKind::expectation(), tree, x, 0);
    CHECK(w[0] == doctest::Approx(0.4395892523232469).epsilon(1e-9));
    // Radius zero collapses to the base expectation.
    UncertaintyKind tight = UncertaintyKind::kl_ball(ToleranceRule::zero());
    CHECK(worst_case(tight, RiskKind::expectation(), tree, x, 0)[0] == doctest::Approx(0.0));
}

TEST_CASE("measure family reweights child laws and validates densities") {
    ScenarioTree tree = binary1();
    UncertaintyKind fam = UncertaintyKind::measure_family({{{1.2, 0.8}, 0.0}});
    validate_family(tree, fam);
    auto q = reweighted_child_probs(tree, fam.family[0], 0, 0);
    CHECK(q[0] == doctest::Approx(0.6));
    CHECK(q[1] == doctest::Approx(0.4));

    AdaptedProcess x = AdaptedProcess::zero(tree);
    x.at(1).values = {-1.0, 1.0};
    AdaptedVector w = worst_case(fam, RiskKind::expectation(), tree, x, 0);
    CHECK(w[0] == doctest::Approx(0.6 * -1.0 + 0.4 * 1.0).epsilon(1e-12));

    UncertaintyKind bad = UncertaintyKind::measure_family({{{1.0, 0.0}, 0.0}});
    CHECK_THROWS_AS(validate_family(tree, bad), ValidationError);
}

TEST_CASE("mean band constrains the conditional mean shift") {
    ScenarioTree tree = binary1();
    AdaptedProcess x = AdaptedProcess::zero(tree);
    x.at(1).values = {-1.0, 1.0};
    UncertaintyKind band = UncertaintyKind::mean_band({0.2});
    CHECK(contains(band, tree, vec(1, {-0.8, 1.2}), x, 1)[0]);
    CHECK_FALSE(contains(band, tree, vec(1, {-0.5, 1.2}), x, 1)[0]);
    AdaptedVector w = worst_case(band, RiskKind::expectation(), tree, x, 0);
    CHECK(w[0] == doctest::Approx(0.2).epsilon(1e-12));
    AdaptedVector top;
    REQUIRE(max_member(band, tree, x, 0, top));
    CHECK(top[0] == doctest::Approx(-0.8));
    CHECK(top[1] == doctest::Approx(1.2));
}

TEST_CASE("static tags") {
    CHECK(UncertaintyKind::identity().is_static());
    CHECK(UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1)).is_static());
    ScenarioTree tree = binary1();
    auto base = std::make_shared<RobustRiskMeasure>(
        measure(tree, RiskKind::expectation(), UncertaintyKind::identity()));
    CHECK_FALSE(UncertaintyKind::derived(base).is_static());
    CHECK_FALSE(UncertaintyKind::consolidated(base).is_static());
}
