#include <doctest.h>

#include <memory>
#include <random>

#include "dynrisk/properties.hpp"

#include "helpers.hpp"

using namespace dynrisk;
using namespace testutil;

TEST_CASE("identity set reduces the robust value to the one-step risk") {
    ScenarioTree tree = binary2();
    RobustRiskMeasure r = measure(tree, RiskKind::worst_case(), UncertaintyKind::identity());
    AdaptedProcess x = proc(tree, {{0.0}, {1.0, -1.0}, {2.0, 0.0, 1.0, -1.0}});
    AdaptedVector v1 = robust_value(r, 1, x);
    CHECK(v1[0] == doctest::Approx(2.0));
    CHECK(v1[1] == doctest::Approx(1.0));
    // Zero cache holds R(0) = 0 for the identity set.
    CHECK(zero_value(r, 0)[0] == doctest::Approx(0.0));
    CHECK(zero_value(r, 1)[1] == doctest::Approx(0.0));
    // Tilde convention adds the time-t component.
    AdaptedVector tld = robust_value_tilde(r, 1, x);
    CHECK(tld[0] == doctest::Approx(1.0 + 2.0));
}

TEST_CASE("sup-norm ball shifts the zero cache by the radius") {
    ScenarioTree tree = binary2();
    RobustRiskMeasure r = measure(tree, RiskKind::expectation(),
                                  UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1)));
    CHECK(zero_value(r, 1)[0] == doctest::Approx(0.1));
    AdaptedProcess zero = AdaptedProcess::zero(tree);
    std::vector<bool> acc = robust_accepts(r, 1, zero);
    CHECK_FALSE(acc[0]); // R(0) = 0.1 > 0 rejects the zero tail
}

TEST_CASE("consolidated membership agrees with its acceptance representation") {
    ScenarioTree tree = skewed2();
    auto r = std::make_shared<RobustRiskMeasure>(
        measure(tree, RiskKind::cvar(0.5),
                UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.2))));
    AdaptedProcess x = proc(tree, {{0.0}, {0.3, -0.2}, {0.5, -0.1, 0.2, 0.4, -0.3}});
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int k = 0; k < 50; ++k) {
        AdaptedVector y = vec(1, {unif(rng), unif(rng)});
        CHECK(consolidated_contains(*r, 1, y, x) == consolidated_contains_repr(*r, 1, y, x));
    }
    // Duality: membership iff rho_t(y) <= R_t(x).
    AdaptedVector level = robust_value(*r, 0, x);
    AdaptedVector inside = vec(1, {level[0] - 0.05, level[0] - 0.05});
    AdaptedVector outside = vec(1, {level[0] + 0.05, level[0] + 0.05});
    CHECK(consolidated_contains(*r, 1, inside, x)[0]);
    CHECK_FALSE(consolidated_contains(*r, 1, outside, x)[0]);
}

TEST_CASE("recursive construction agrees with the nested form") {
    ScenarioTree tree = skewed2();
    DynamicUncertaintySet base = DynamicUncertaintySet::uniform(
        tree, UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1)));
    RiskFamily fam = RiskFamily::uniform(tree, RiskKind::cvar(0.5));
    RobustRiskMeasure rec = construct_recursive(base, fam, tree);
    CHECK(rec.recursive);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 25; ++k) {
        AdaptedProcess x = random_process(tree, rng, -1.0, 1.0);
        for (int t = 0; t < tree.horizon(); ++t) {
            AdaptedVector a = robust_value(rec, t, x);
            AdaptedVector b = nested_robust_evaluate(base, fam, tree, x, t);
            for (std::size_t i = 0; i < a.values.size(); ++i)
                CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("identity base is a fixed point of the recursive construction") {
    ScenarioTree tree = binary2();
    DynamicUncertaintySet base =
        DynamicUncertaintySet::uniform(tree, UncertaintyKind::identity());
    RiskFamily fam = RiskFamily::uniform(tree, RiskKind::cvar(0.5));
    RobustRiskMeasure rec = construct_recursive(base, fam, tree);
    AdaptedProcess x = proc(tree, {{0.0}, {0.4, -0.3}, {0.2, -0.5, 0.1, 0.6}});
    AdaptedVector a = robust_value(rec, 0, x);
    AdaptedVector b = nested_evaluate(fam, tree, x, 0);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-12));
}

TEST_CASE("normalised wrapper subtracts the zero value") {
    ScenarioTree tree = binary2();
    auto r = std::make_shared<RobustRiskMeasure>(
        measure(tree, RiskKind::expectation(),
                UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1))));
    NormalizedRobust n = normalize(r);
    AdaptedProcess zero = AdaptedProcess::zero(tree);
    CHECK(normalized_value(n, 0, zero)[0] == doctest::Approx(0.0));
}

TEST_CASE("static representation refuses without a weak-recursiveness certificate") {
    ScenarioTree tree = binary2();
    auto r = std::make_shared<RobustRiskMeasure>(
        measure(tree, RiskKind::expectation(),
                UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1))));
    try {
        StaticRepresentation rep = static_representation(r, false);
        rep.value(0, vec(1, {0.0, 0.0}));
        FAIL("expected a refusal");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()) ==
              "static representation refused: the measure failed the weak-recursiveness check");
    }
}

TEST_CASE("static representation of a recursive measure recovers base values") {
    ScenarioTree tree = binary2();
    DynamicUncertaintySet base = DynamicUncertaintySet::uniform(
        tree, UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1)));
    RiskFamily fam = RiskFamily::uniform(tree, RiskKind::expectation());
    auto rec = std::make_shared<RobustRiskMeasure>(construct_recursive(base, fam, tree));
    StaticRepresentation rep = static_representation(rec, true);
    AdaptedVector z = vec(1, {0.5, -0.3});
    AdaptedProcess probe = AdaptedProcess::zero(tree);
    probe.at(1) = z;
    AdaptedVector direct = worst_case(base.at_time(1), fam.at(0), tree, probe, 0);
    AdaptedVector via = rep.value(0, z);
    CHECK(via[0] == doctest::Approx(direct[0]).epsilon(1e-9));
}
