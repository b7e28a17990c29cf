#pragma once

#include <vector>

#include "dynrisk/tree.hpp"

namespace dynrisk {

// One-step conditional risk measure rho_t : L^inf_{t+1} -> L^inf_t. Every
// variant is normalised, monotone, and translation invariant (the test suite
// checks rather than assumes this).
struct RiskKind {
    enum class Tag { Expectation, CVaR, Entropic, WorstCase };

    Tag tag = Tag::Expectation;
    double alpha = 0.0; // CVaR level, in [0, 1)
    double beta = 1.0;  // entropic risk aversion, > 0

    static RiskKind expectation() { return {Tag::Expectation, 0.0, 0.0}; }
    static RiskKind cvar(double alpha);
    static RiskKind entropic(double beta);
    static RiskKind worst_case() { return {Tag::WorstCase, 0.0, 0.0}; }

    bool positive_homogeneous() const { return tag != Tag::Entropic; }
    bool sub_additive() const { return tag != Tag::Entropic; }
};

// Evaluate rho on a discrete one-step law (value, probability), probabilities
// summing to one. All four kinds are law-invariant, so this is the kernel the
// per-atom evaluation reduces to.
double evaluate_on_law(const RiskKind& kind, const std::vector<std::pair<double, double>>& law);

// Per-time family of one-step risk measures, one entry per t in {0..T-1}.
struct RiskFamily {
    std::vector<RiskKind> kinds;

    static RiskFamily uniform(const ScenarioTree& tree, const RiskKind& kind);
    const RiskKind& at(int t) const { return kinds.at(t); }
};

// rho_t applied one step: Z at time t+1 -> value at time t.
AdaptedVector evaluate_one_step(const RiskKind& kind, const ScenarioTree& tree,
                                const AdaptedVector& z);

// Nested composition rho_t(X_{t+1} + rho_{t+1}(X_{t+2} + ... + rho_{T-1}(X_T))).
AdaptedVector nested_evaluate(const RiskFamily& family, const ScenarioTree& tree,
                              const AdaptedProcess& x, int t);

// Membership of Z in the one-step acceptance set A^rho_t, per time-t atom.
std::vector<bool> acceptance_indicator(const RiskKind& kind, const ScenarioTree& tree,
                                       const AdaptedVector& z);

} // namespace dynrisk
