#include <doctest.h>

#include <memory>

#include "dynrisk/properties.hpp"
#include "helpers.hpp"

using namespace dynrisk;
using namespace testutil;

namespace {

CheckSpec quick() {
    CheckSpec spec;
    spec.trials = 60;
    spec.seed = 424242;
    return spec;
}

} // namespace

TEST_CASE("identity set satisfies the core set axioms") {
    ScenarioTree tree = binary2();
    RobustRiskMeasure r = measure(tree, RiskKind::expectation(), UncertaintyKind::identity());
    for (SetProperty p : {SetProperty::Proper, SetProperty::Normalised,
                          SetProperty::OrderPreserving, SetProperty::Static,
                          SetProperty::TranslationInvariant, SetProperty::Local,
                          SetProperty::PositiveHomogeneous, SetProperty::StarShaped}) {
        Verdict v = check_set_property(r, p, quick());
        INFO(std::string(to_string(p)), " ", v.detail);
        CHECK(v.corroborated());
    }
    // Singleton sets cannot absorb a strict increase, so monotone inclusion
    // fails even though order preservation holds.
    CHECK(check_set_property(r, SetProperty::Monotone, quick()).counterexample());
}

TEST_CASE("radius rules split normalisation of the sup-norm ball") {
    ScenarioTree tree = binary2();
    RobustRiskMeasure fixed = measure(tree, RiskKind::expectation(),
                                      UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.15)));
    CHECK(check_set_property(fixed, SetProperty::Normalised, quick()).counterexample());
    RobustRiskMeasure scaled = measure(tree, RiskKind::expectation(),
                                       UncertaintyKind::sup_norm_ball(ToleranceRule::var_scaled(0.5)));
    CHECK(check_set_property(scaled, SetProperty::Normalised, quick()).corroborated());
    CHECK(check_set_property(scaled, SetProperty::Proper, quick()).corroborated());
    CHECK(check_set_property(fixed, SetProperty::Static, quick()).corroborated());
}

TEST_CASE("measure axioms for the constant sup-norm ball under expectation") {
    ScenarioTree tree = binary2();
    RobustRiskMeasure r = measure(tree, RiskKind::expectation(),
                                  UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1)));
    CHECK(check_measure_property(r, MeasureProperty::Monotone, quick()).corroborated());
    CHECK(check_measure_property(r, MeasureProperty::TranslationInvariant, quick()).corroborated());
    CHECK(check_measure_property(r, MeasureProperty::SubAdditive, quick()).corroborated());
    CHECK(check_measure_property(r, MeasureProperty::Convex, quick()).corroborated());
    CHECK(check_measure_property(r, MeasureProperty::StarShaped, quick()).corroborated());
    // R(0) equals the radius, so normalisation fails deterministically.
    Verdict n = check_measure_property(r, MeasureProperty::Normalised, quick());
    CHECK(n.counterexample());
    CHECK(n.gap == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("zero-set acceptance identity holds for normalised balls") {
    ScenarioTree tree = binary2();
    RobustRiskMeasure r = measure(tree, RiskKind::expectation(),
                                  UncertaintyKind::sup_norm_ball(ToleranceRule::var_scaled(0.5)));
    CHECK(check_measure_property(r, MeasureProperty::Normalised, quick()).corroborated());
    CHECK(check_measure_property(r, MeasureProperty::AcceptanceZeroIdentity, quick()).corroborated());
}

TEST_CASE("entropic base breaks positive homogeneity but keeps star-shapedness") {
    ScenarioTree tree = binary2();
    RobustRiskMeasure r = measure(tree, RiskKind::entropic(2.0), UncertaintyKind::identity());
    CHECK(check_measure_property(r, MeasureProperty::PositiveHomogeneous, quick()).counterexample());
    CHECK(check_measure_property(r, MeasureProperty::StarShaped, quick()).corroborated());
}

TEST_CASE("recursion over a normalised base is strong, over a constant base only weakly recursive") {
    ScenarioTree tree = binary2();
    RiskFamily fam = RiskFamily::uniform(tree, RiskKind::expectation());

    DynamicUncertaintySet normalised = DynamicUncertaintySet::uniform(
        tree, UncertaintyKind::sup_norm_ball(ToleranceRule::var_scaled(0.5)));
    RobustRiskMeasure rec = construct_recursive(normalised, fam, tree);
    CHECK(check_time_consistency(rec, TimeConsistency::Strong, Level::Measure, quick())
              .corroborated());
    CHECK(check_time_consistency(rec, TimeConsistency::WeakRecursive, Level::Measure, quick())
              .corroborated());

    DynamicUncertaintySet fixed = DynamicUncertaintySet::uniform(
        tree, UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1)));
    RobustRiskMeasure rec_fixed = construct_recursive(fixed, fam, tree);
    CHECK(check_time_consistency(rec_fixed, TimeConsistency::WeakRecursive, Level::Measure, quick())
              .corroborated());
    CHECK(check_time_consistency(rec_fixed, TimeConsistency::Strong, Level::Measure, quick())
              .counterexample());

    // A plain (non-derived) static ball already fails the one-step substitution.
    RobustRiskMeasure flat = RobustRiskMeasure::make(tree, fam, fixed);
    CHECK(check_time_consistency(flat, TimeConsistency::Strong, Level::Measure, quick())
              .counterexample());
    Verdict set_level = check_time_consistency(flat, TimeConsistency::Strong, Level::Set, quick());
    CHECK(set_level.counterexample());
}

TEST_CASE("implication audit is silent on sound tables and loud on a poisoned one") {
    ScenarioTree tree = binary2();
    DynamicUncertaintySet base = DynamicUncertaintySet::uniform(
        tree, UncertaintyKind::sup_norm_ball(ToleranceRule::var_scaled(0.5)));
    RiskFamily fam = RiskFamily::uniform(tree, RiskKind::expectation());
    RobustRiskMeasure rec = construct_recursive(base, fam, tree);

    CheckSpec spec = quick();
    spec.trials = 40;
    TcAudit audit = gather_tc_audit(rec, Level::Measure, spec);
    CHECK(audit_implications(audit).empty());
    CHECK(audit.strong.corroborated());

    audit.mutant_flip_weak_recursive = true;
    std::vector<std::string> violations = audit_implications(audit);
    CHECK_FALSE(violations.empty());

    // The same audit over the non-normalised recursion is also violation-free:
    // strong fails there, but every edge with a failing premise is moot.
    DynamicUncertaintySet fixed = DynamicUncertaintySet::uniform(
        tree, UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.1)));
    TcAudit fixed_audit = gather_tc_audit(construct_recursive(fixed, fam, tree),
                                          Level::Measure, spec);
    CHECK(audit_implications(fixed_audit).empty());
    CHECK(fixed_audit.strong.counterexample());
    CHECK(fixed_audit.weak_recursive.corroborated());
}

TEST_CASE("adversarial wrappers keep the values and flip the targeted axiom") {
    ScenarioTree tree = binary2();
    CheckSpec spec = quick();
    std::mt19937_64 rng(1234);

    auto same_values = [&](const RobustRiskMeasure& a, const RobustRiskMeasure& b) {
        for (int k = 0; k < 20; ++k) {
            AdaptedProcess x = random_process(tree, rng, -1.0, 1.0);
            for (int t = 0; t < tree.horizon(); ++t) {
                AdaptedVector va = robust_value(a, t, x);
                AdaptedVector vb = robust_value(b, t, x);
                for (std::size_t i = 0; i < va.values.size(); ++i)
                    if (std::abs(va[i] - vb[i]) > 1e-9) return false;
            }
        }
        return true;
    };

    SUBCASE("normalisation break") {
        RobustRiskMeasure r = measure(tree, RiskKind::expectation(),
                                      UncertaintyKind::sup_norm_ball(ToleranceRule::var_scaled(0.5)));
        REQUIRE(check_set_property(r, SetProperty::Normalised, spec).corroborated());
        DynamicUncertaintySet wrapped = adversarial_equivalent_set(r, AdversarialFlavor::BreakNormalisation);
        RobustRiskMeasure w = RobustRiskMeasure::make(tree, r.family, wrapped);
        CHECK(same_values(r, w));
        CHECK(check_set_property(w, SetProperty::Normalised, spec).counterexample());
    }
    SUBCASE("order break") {
        RobustRiskMeasure r = measure(tree, RiskKind::expectation(),
                                      UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.2)));
        REQUIRE(check_set_property(r, SetProperty::OrderPreserving, spec).corroborated());
        DynamicUncertaintySet wrapped = adversarial_equivalent_set(r, AdversarialFlavor::BreakOrder);
        RobustRiskMeasure w = RobustRiskMeasure::make(tree, r.family, wrapped);
        CHECK(same_values(r, w));
        CHECK(check_set_property(w, SetProperty::OrderPreserving, spec).counterexample());
    }
    SUBCASE("translation break") {
        RobustRiskMeasure r = measure(tree, RiskKind::expectation(),
                                      UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.2)));
        REQUIRE(check_set_property(r, SetProperty::TranslationInvariant, spec).corroborated());
        DynamicUncertaintySet wrapped = adversarial_equivalent_set(r, AdversarialFlavor::BreakTranslation);
        RobustRiskMeasure w = RobustRiskMeasure::make(tree, r.family, wrapped);
        CHECK(same_values(r, w));
        CHECK(check_set_property(w, SetProperty::TranslationInvariant, spec).counterexample());
    }
    SUBCASE("normalisation break refuses a non-normalised start") {
        RobustRiskMeasure r = measure(tree, RiskKind::expectation(),
                                      UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.2)));
        CHECK_THROWS_AS(adversarial_equivalent_set(r, AdversarialFlavor::BreakNormalisation),
                        ValidationError);
    }
}

TEST_CASE("seeded check runs are deterministic") {
    ScenarioTree tree = binary2();
    RobustRiskMeasure r = measure(tree, RiskKind::expectation(),
                                  UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.15)));
    Verdict a = check_set_property(r, SetProperty::Normalised, quick());
    Verdict b = check_set_property(r, SetProperty::Normalised, quick());
    CHECK(a.status == b.status);
    CHECK(a.trial_index == b.trial_index);
    CHECK(a.detail == b.detail);
}
