#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dynrisk/risk.hpp"
#include "dynrisk/tree.hpp"

namespace dynrisk {

struct RobustRiskMeasure; // robust.hpp

// Per-atom tolerance radius eps_X used by the ball variants. Every rule
// evaluates to an F_{t-1}-measurable nonnegative vector.
struct ToleranceRule {
    enum class Tag { Constant, Horizon, VarScaled, Zero };

    Tag tag = Tag::Constant;
    double eps = 0.0;

    static ToleranceRule constant(double eps);
    static ToleranceRule horizon(double eps);
    static ToleranceRule var_scaled(double eps);
    static ToleranceRule zero() { return {Tag::Zero, 0.0}; }

    // Vanishes at X = 0 (needed for a normalised ball).
    bool zero_at_zero() const { return tag != Tag::Constant && tag != Tag::Horizon; }
    // Unchanged under F_{t-1}-measurable shifts of X_t (all four rules are).
    bool shift_invariant() const { return true; }
    // eps_{lambda X} = |lambda| eps_X.
    bool positively_homogeneous() const { return tag == Tag::Zero; }
};

// Radius of the ball around X_t, one value per time-(t-1) atom.
AdaptedVector tolerance_eval(const ToleranceRule& rule, const ScenarioTree& tree,
                             const AdaptedProcess& x, int t);

// One alternative measure Q: density w.r.t. the base measure per terminal
// atom, plus a penalty subtracted from the Q-evaluation in the worst case.
struct MeasureComponent {
    std::vector<double> density; // per terminal atom, strictly positive
    double penalty = 0.0;        // >= 0
};

// Time-t uncertainty set u_t. The ball variants and MeasureFamily are static
// (they read only X_t); Derived / Consolidated / the adversarial wrappers
// consult a robust risk measure and may read the whole tail.
struct UncertaintyKind {
    enum class Tag {
        Identity,
        SupNormBall,
        WassersteinBall,
        KLBall,
        MeasureFamily,
        Derived,
        MeanBand,
        Consolidated,
        AdversarialOrder,
        AdversarialTranslation,
    };

    Tag tag = Tag::Identity;
    ToleranceRule rule;                    // ball radius
    double p = 1.0;                        // Wasserstein order
    std::vector<MeasureComponent> family;  // MeasureFamily
    std::vector<double> band_eps;          // MeanBand: per time-(t-1) atom
    std::shared_ptr<const RobustRiskMeasure> measure; // Derived / Consolidated / adversarial
    std::shared_ptr<const UncertaintyKind> base;      // adversarial wrappee
    double threshold = 0.0;                // adversarial region switch
    double delta = 0.0;                    // AdversarialOrder bump size
    std::vector<double> eta;               // AdversarialOrder direction, E[eta|F_t] = 0

    static UncertaintyKind identity() { return {}; }
    static UncertaintyKind sup_norm_ball(const ToleranceRule& rule);
    static UncertaintyKind wasserstein_ball(double p, const ToleranceRule& rule);
    static UncertaintyKind kl_ball(const ToleranceRule& rule);
    static UncertaintyKind measure_family(std::vector<MeasureComponent> family);
    static UncertaintyKind derived(std::shared_ptr<const RobustRiskMeasure> measure);
    static UncertaintyKind mean_band(std::vector<double> band_eps);
    static UncertaintyKind consolidated(std::shared_ptr<const RobustRiskMeasure> measure);
    static UncertaintyKind adversarial_order(std::shared_ptr<const UncertaintyKind> base,
                                             std::shared_ptr<const RobustRiskMeasure> measure,
                                             double threshold, double delta,
                                             std::vector<double> eta);
    static UncertaintyKind adversarial_translation(std::shared_ptr<const UncertaintyKind> base,
                                                   std::shared_ptr<const RobustRiskMeasure> measure,
                                                   double threshold);

    bool is_static() const;
};

// One kind per time t in {1..T}.
struct DynamicUncertaintySet {
    std::vector<UncertaintyKind> kinds;

    static DynamicUncertaintySet uniform(const ScenarioTree& tree, const UncertaintyKind& kind);
    const UncertaintyKind& at_time(int t) const { return kinds.at(static_cast<std::size_t>(t) - 1); }
    bool is_static() const;
};

// Validate a MeasureFamily against the tree (densities per terminal atom,
// strictly positive, penalties >= 0).
void validate_family(const ScenarioTree& tree, const UncertaintyKind& kind);

// Conditional child probabilities at time t+1 implied by the component's
// terminal density, for the parent atom (t, parent_idx).
std::vector<double> reweighted_child_probs(const ScenarioTree& tree, const MeasureComponent& q,
                                           int t, std::size_t parent_idx);

// Is Y a member of u_t(X_{t:T}), one flag per time-(t-1) atom. Membership is
// decided within the global tolerance band.
std::vector<bool> contains(const UncertaintyKind& kind, const ScenarioTree& tree,
                           const AdaptedVector& y, const AdaptedProcess& x, int t);

// sup{ rho_t(Y) : Y in u_{t+1}(X_{t+1:T}) }, one value per time-t atom.
// Closed forms where available, seeded multi-start ascent otherwise.
AdaptedVector worst_case(const UncertaintyKind& kind, const RiskKind& rho,
                         const ScenarioTree& tree, const AdaptedProcess& x, int t,
                         std::uint64_t seed = 0x5eed);

// Largest member of u_{t+1}(X_{t+1:T}) when the set has a pointwise maximum
// (Identity, SupNormBall, MeanBand, AdversarialOrder in the switched region);
// returns false otherwise. Used by order-preservation certificates.
bool max_member(const UncertaintyKind& kind, const ScenarioTree& tree,
                const AdaptedProcess& x, int t, AdaptedVector& out);

} // namespace dynrisk
