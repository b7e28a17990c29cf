#include "dynrisk/robust.hpp"

#include <cmath>

#include "dynrisk/common.hpp"

namespace dynrisk {

namespace {

AdaptedVector lift(const ScenarioTree& tree, const AdaptedVector& v) {
    AdaptedVector out;
    out.time = v.time + 1;
    out.values.resize(tree.count(out.time));
    for (std::size_t c = 0; c < out.values.size(); ++c)
        out.values[c] = v.values[tree.parent(out.time, c)];
    return out;
}

// One-step robust value of a static set: sup rho_t over u_{t+1}(z) with z the
// only component read.
AdaptedVector static_step(const DynamicUncertaintySet& base, const RiskFamily& family,
                          const ScenarioTree& tree, const AdaptedVector& z, int t) {
    AdaptedProcess proc = AdaptedProcess::zero(tree);
    proc.at(t + 1) = z;
    return worst_case(base.at_time(t + 1), family.at(t), tree, proc, t);
}

AdaptedVector recursive_value(const RobustRiskMeasure& r, int t, const AdaptedProcess& x) {
    const int T = r.tree.horizon();
    if (t == T - 1) return static_step(r.base, r.family, r.tree, x.at(T), T - 1);
    AdaptedVector next = recursive_value(r, t + 1, x);
    const AdaptedVector& next0 = r.zero_cache.empty()
                                     ? recursive_value(r, t + 1, AdaptedProcess::zero(r.tree))
                                     : r.zero_cache.at(static_cast<std::size_t>(t) + 1);
    return static_step(r.base, r.family, r.tree, x.at(t + 1) + next - next0, t);
}

} // namespace

RobustRiskMeasure RobustRiskMeasure::make(ScenarioTree tree, RiskFamily family,
                                          DynamicUncertaintySet set) {
    const int T = tree.horizon();
    if (static_cast<int>(family.kinds.size()) != T)
        throw ValidationError("risk family has wrong length for this tree");
    if (static_cast<int>(set.kinds.size()) != T)
        throw ValidationError("uncertainty set needs one kind per time 1..T");
    for (const auto& k : set.kinds) validate_family(tree, k);

    RobustRiskMeasure r;
    r.tree = std::move(tree);
    r.family = std::move(family);
    r.set = std::move(set);
    AdaptedProcess zero = AdaptedProcess::zero(r.tree);
    for (int t = 0; t < T; ++t) r.zero_cache.push_back(robust_value(r, t, zero));
    return r;
}

AdaptedVector robust_value(const RobustRiskMeasure& r, int t, const AdaptedProcess& x) {
    if (t < 0 || t >= r.tree.horizon())
        throw ValidationError("robust values are taken at times 0..T-1");
    if (r.recursive) return recursive_value(r, t, x);
    return worst_case(r.set.at_time(t + 1), r.family.at(t), r.tree, x, t);
}

const AdaptedVector& zero_value(const RobustRiskMeasure& r, int t) {
    return r.zero_cache.at(static_cast<std::size_t>(t));
}

AdaptedVector robust_value_tilde(const RobustRiskMeasure& r, int t, const AdaptedProcess& x) {
    return x.at(t) + robust_value(r, t, x);
}

std::vector<bool> robust_accepts(const RobustRiskMeasure& r, int t, const AdaptedProcess& x) {
    AdaptedVector v = robust_value(r, t, x);
    std::vector<bool> out(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) out[i] = v.values[i] <= tolerance();
    return out;
}

std::vector<bool> consolidated_contains(const RobustRiskMeasure& r, int t_plus_1,
                                        const AdaptedVector& y, const AdaptedProcess& x) {
    const int t = t_plus_1 - 1;
    AdaptedVector lhs = evaluate_one_step(r.family.at(t), r.tree, y);
    AdaptedVector rhs = robust_value(r, t, x);
    std::vector<bool> out(lhs.values.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = lhs.values[i] <= rhs.values[i] + tolerance();
    return out;
}

std::vector<bool> consolidated_contains_repr(const RobustRiskMeasure& r, int t_plus_1,
                                             const AdaptedVector& y, const AdaptedProcess& x) {
    const int t = t_plus_1 - 1;
    AdaptedVector rhs = robust_value(r, t, x);
    AdaptedVector v = evaluate_one_step(r.family.at(t), r.tree, y - lift(r.tree, rhs));
    std::vector<bool> out(v.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v.values[i] <= tolerance();
    return out;
}

NormalizedRobust normalize(std::shared_ptr<const RobustRiskMeasure> r) { return {std::move(r)}; }

AdaptedVector normalized_value(const NormalizedRobust& n, int t, const AdaptedProcess& x) {
    return robust_value(*n.measure, t, x) - zero_value(*n.measure, t);
}

RobustRiskMeasure construct_recursive(const DynamicUncertaintySet& base, const RiskFamily& family,
                                      const ScenarioTree& tree) {
    if (!base.is_static())
        throw ValidationError("the recursive construction needs a static base set");

    auto inner = std::make_shared<RobustRiskMeasure>();
    inner->tree = tree;
    inner->family = family;
    inner->set = base;
    inner->base = base;
    inner->recursive = true;
    // R_{t,T}(0) = one-step robust value of zero; filled strictly backwards so
    // each level's offset exists before earlier levels use it.
    AdaptedProcess zero = AdaptedProcess::zero(tree);
    inner->zero_cache.resize(static_cast<std::size_t>(tree.horizon()));
    for (int t = tree.horizon() - 1; t >= 0; --t)
        inner->zero_cache[static_cast<std::size_t>(t)] =
            static_step(base, family, tree, zero.at(t + 1), t);

    RobustRiskMeasure outer = *inner;
    outer.set.kinds.clear();
    for (int s = 1; s <= tree.horizon(); ++s)
        outer.set.kinds.push_back(UncertaintyKind::derived(inner));
    return outer;
}

AdaptedVector nested_robust_evaluate(const DynamicUncertaintySet& base, const RiskFamily& family,
                                     const ScenarioTree& tree, const AdaptedProcess& x, int t) {
    if (!base.is_static())
        throw ValidationError("the nested form needs a static base set");
    const int T = tree.horizon();
    AdaptedProcess zero = AdaptedProcess::zero(tree);
    AdaptedVector acc = x.at(T); // Y_T = X_T
    for (int s = T - 1; s >= t; --s) {
        AdaptedVector v = static_step(base, family, tree, acc, s);
        if (s == t) return v;
        // Y_s = X_s - R^base_s(0)
        AdaptedVector zero_s = static_step(base, family, tree, zero.at(s + 1), s);
        acc = x.at(s) - zero_s + v;
    }
    return acc; // unreachable for t <= T-1
}

AdaptedVector StaticRepresentation::value(int t, const AdaptedVector& z) const {
    if (!valid)
        throw ValidationError(
            "static representation refused: the measure failed the weak-recursiveness check");
    AdaptedProcess proc = AdaptedProcess::zero(measure->tree);
    proc.at(t + 1) = z;
    return robust_value(*measure, t, proc);
}

std::vector<bool> StaticRepresentation::contains(int t_plus_1, const AdaptedVector& y,
                                                 const AdaptedVector& z) const {
    if (!valid)
        throw ValidationError(
            "static representation refused: the measure failed the weak-recursiveness check");
    AdaptedProcess proc = AdaptedProcess::zero(measure->tree);
    proc.at(t_plus_1) = z;
    return consolidated_contains(*measure, t_plus_1, y, proc);
}

AdaptedVector StaticRepresentation::rebuild_value(int t, const AdaptedProcess& x) const {
    const int T = measure->tree.horizon();
    AdaptedVector acc = x.at(T);
    for (int s = T - 1; s >= t; --s) {
        AdaptedVector v = value(s, acc);
        if (s == t) return v;
        acc = x.at(s) - zero_value(*measure, s) + v;
    }
    return acc;
}

StaticRepresentation static_representation(std::shared_ptr<const RobustRiskMeasure> r,
                                           bool weakly_recursive_corroborated) {
    return {std::move(r), weakly_recursive_corroborated};
}

} // namespace dynrisk
