#pragma once

#include <memory>
#include <vector>

#include "dynrisk/risk.hpp"
#include "dynrisk/tree.hpp"
#include "dynrisk/uncertainty.hpp"

namespace dynrisk {

// Dynamic robust risk measure R_{t,T}(X_{t+1:T}) = sup{ rho_t(Y) : Y in
// u_{t+1}(X_{t+1:T}) }. When `recursive` is set the measure is the
// backward-recursive construction over the static base set and robust_value
// evaluates the recursion directly.
struct RobustRiskMeasure {
    ScenarioTree tree;
    RiskFamily family;
    DynamicUncertaintySet set;

    bool recursive = false;
    DynamicUncertaintySet base; // static, used when recursive

    // Memoized R_{t,T}(0) for t in {0..T-1}.
    std::vector<AdaptedVector> zero_cache;

    static RobustRiskMeasure make(ScenarioTree tree, RiskFamily family,
                                  DynamicUncertaintySet set);
};

// Per-atom robust value at time t of the tail X_{t+1:T}. Components of X at
// times <= t are ignored.
AdaptedVector robust_value(const RobustRiskMeasure& r, int t, const AdaptedProcess& x);

// R_{t,T}(0), from the cache.
const AdaptedVector& zero_value(const RobustRiskMeasure& r, int t);

// Tilde convention: R~_{t,T}(X_{t:T}) = X_t + R_{t,T}(X_{t+1:T}).
AdaptedVector robust_value_tilde(const RobustRiskMeasure& r, int t, const AdaptedProcess& x);

// Acceptance: robust_value <= tolerance per atom, equivalently
// u_{t+1}(X_{t+1:T}) inside the one-step acceptance set of rho_t.
std::vector<bool> robust_accepts(const RobustRiskMeasure& r, int t, const AdaptedProcess& x);

// Consolidated-set membership of Y (time t+1) given the tail X_{t+1:T}:
// rho_t(Y) <= R_{t,T}(X) per time-t atom, and its acceptance-set
// representation rho_t(Y - R_{t,T}(X)) <= 0. The two must agree.
std::vector<bool> consolidated_contains(const RobustRiskMeasure& r, int t_plus_1,
                                        const AdaptedVector& y, const AdaptedProcess& x);
std::vector<bool> consolidated_contains_repr(const RobustRiskMeasure& r, int t_plus_1,
                                             const AdaptedVector& y, const AdaptedProcess& x);

// Normalised version R~(X) = R(X) - R(0).
struct NormalizedRobust {
    std::shared_ptr<const RobustRiskMeasure> measure;
};
NormalizedRobust normalize(std::shared_ptr<const RobustRiskMeasure> r);
AdaptedVector normalized_value(const NormalizedRobust& n, int t, const AdaptedProcess& x);

// Backward-recursive construction over a static base set:
//   R_{t,T}(X_{t+1:T}) = R^base_t(X_{t+1} + R_{t+1,T}(X_{t+2:T}) - R_{t+1,T}(0)).
// The returned measure's set holds Derived kinds answering membership by
// reduction to the base at the shifted argument.
RobustRiskMeasure construct_recursive(const DynamicUncertaintySet& base,
                                      const RiskFamily& family, const ScenarioTree& tree);

// Nested form of the same value with Y_i = X_i - R^base_i(0) and Y_T = X_T:
//   R^base_t(Y_{t+1} + R^base_{t+1}(Y_{t+2} + ...)).
AdaptedVector nested_robust_evaluate(const DynamicUncertaintySet& base, const RiskFamily& family,
                                     const ScenarioTree& tree, const AdaptedProcess& x, int t);

// Static set recovered from a weakly recursive measure: queries the
// consolidated set at the argument padded with a zero tail. `valid` must be
// set by the caller after a weak-recursiveness check; value queries refuse
// when it is false.
struct StaticRepresentation {
    std::shared_ptr<const RobustRiskMeasure> measure;
    bool valid = false;

    // Worst case of the recovered static set at the time-(t+1) argument z.
    AdaptedVector value(int t, const AdaptedVector& z) const;
    // Membership of Y in the recovered set at argument z (per time-t atom).
    std::vector<bool> contains(int t_plus_1, const AdaptedVector& y, const AdaptedVector& z) const;
    // Rebuild the measure by backward recursion over the recovered set.
    AdaptedVector rebuild_value(int t, const AdaptedProcess& x) const;
};
StaticRepresentation static_representation(std::shared_ptr<const RobustRiskMeasure> r,
                                           bool weakly_recursive_corroborated);

} // namespace dynrisk
