#include "dynrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynrisk/common.hpp"

namespace dynrisk {

RiskKind RiskKind::cvar(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw ValidationError("CVaR level must lie in [0, 1)");
    return {Tag::CVaR, alpha, 0.0};
}

RiskKind RiskKind::entropic(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ValidationError("entropic risk aversion must be finite and positive");
    return {Tag::Entropic, 0.0, beta};
}

namespace {

double expectation_on_law(const std::vector<std::pair<double, double>>& law) {
    double s = 0.0;
    for (const auto& [v, p] : law) s += p * v;
    return s;
}

// Rockafellar-Uryasev: CVaR_a = min_m { m + (1-a)^{-1} E[(Z - m)^+] }.
// For a discrete law the minimum is attained at one of the support points.
double cvar_on_law(double alpha, const std::vector<std::pair<double, double>>& law) {
    if (alpha == 0.0) return expectation_on_law(law);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [m, _] : law) {
        double tail = 0.0;
        for (const auto& [v, p] : law)
            if (v > m) tail += p * (v - m);
        best = std::min(best, m + tail / (1.0 - alpha));
    }
    return best;
}

// beta^{-1} log E[exp(beta Z)], evaluated with a max shift so large beta does
// not overflow.
double entropic_on_law(double beta, const std::vector<std::pair<double, double>>& law) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (const auto& [v, _] : law) zmax = std::max(zmax, v);
    double s = 0.0;
    for (const auto& [v, p] : law) s += p * std::exp(beta * (v - zmax));
    return zmax + std::log(s) / beta;
}

double worst_case_on_law(const std::vector<std::pair<double, double>>& law) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (const auto& [v, _] : law) zmax = std::max(zmax, v);
    return zmax;
}

} // namespace

double evaluate_on_law(const RiskKind& kind, const std::vector<std::pair<double, double>>& law) {
    if (law.empty()) throw ValidationError("risk evaluation needs a nonempty law");
    switch (kind.tag) {
        case RiskKind::Tag::Expectation: return expectation_on_law(law);
        case RiskKind::Tag::CVaR: return cvar_on_law(kind.alpha, law);
        case RiskKind::Tag::Entropic: return entropic_on_law(kind.beta, law);
        case RiskKind::Tag::WorstCase: return worst_case_on_law(law);
    }
    throw StructuralError("unknown risk kind");
}

RiskFamily RiskFamily::uniform(const ScenarioTree& tree, const RiskKind& kind) {
    RiskFamily f;
    f.kinds.assign(static_cast<std::size_t>(tree.horizon()), kind);
    return f;
}

AdaptedVector evaluate_one_step(const RiskKind& kind, const ScenarioTree& tree,
                                const AdaptedVector& z) {
    if (z.time < 1 || z.time > tree.horizon())
        throw ValidationError("one-step evaluation needs an argument at time 1..T");
    const int t = z.time - 1;
    if (z.values.size() != tree.count(z.time))
        throw ValidationError("argument does not match the time slice of the tree");
    AdaptedVector out;
    out.time = t;
    out.values.resize(tree.count(t));
    for (std::size_t i = 0; i < tree.count(t); ++i) {
        std::vector<std::pair<double, double>> law;
        for (std::size_t c : tree.child_indices(t, i))
            law.emplace_back(z.values[c], tree.cond_prob(z.time, c));
        out.values[i] = evaluate_on_law(kind, law);
    }
    return out;
}

AdaptedVector nested_evaluate(const RiskFamily& family, const ScenarioTree& tree,
                              const AdaptedProcess& x, int t) {
    const int T = tree.horizon();
    if (static_cast<int>(family.kinds.size()) != T)
        throw ValidationError("risk family has wrong length for this tree");
    if (t < 0 || t >= T) throw ValidationError("evaluation time must lie in 0..T-1");
    // Backward recursion: acc at time s holds rho_s(X_{s+1} + ... ), s from T-1 down to t.
    AdaptedVector acc = x.components.at(static_cast<std::size_t>(T));
    for (int s = T - 1; s >= t; --s) {
        AdaptedVector stepped = evaluate_one_step(family.at(s), tree, acc);
        if (s > t) acc = x.components.at(static_cast<std::size_t>(s)) + stepped;
        else acc = stepped;
    }
    return acc;
}

std::vector<bool> acceptance_indicator(const RiskKind& kind, const ScenarioTree& tree,
                                       const AdaptedVector& z) {
    AdaptedVector v = evaluate_one_step(kind, tree, z);
    std::vector<bool> out(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i)
        out[i] = v.values[i] <= tolerance();
    return out;
}

} // namespace dynrisk
