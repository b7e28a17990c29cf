#pragma once

#include <vector>

#include "dynrisk/robust.hpp"

namespace testutil {

using namespace dynrisk;

// T = 1, two children with probabilities (pa, 1 - pa).
inline ScenarioTree binary1(double pa = 0.5) {
    std::vector<AtomSpec> atoms;
    atoms.push_back({"root", 0, "", 1.0});
    atoms.push_back({"a", 1, "root", pa});
    atoms.push_back({"b", 1, "root", 1.0 - pa});
    return ScenarioTree::build(1, std::move(atoms));
}

// T = 2, uniform binary.
inline ScenarioTree binary2() {
    std::vector<AtomSpec> atoms;
    atoms.push_back({"root", 0, "", 1.0});
    atoms.push_back({"a", 1, "root", 0.5});
    atoms.push_back({"b", 1, "root", 0.5});
    atoms.push_back({"aa", 2, "a", 0.5});
    atoms.push_back({"ab", 2, "a", 0.5});
    atoms.push_back({"ba", 2, "b", 0.5});
    atoms.push_back({"bb", 2, "b", 0.5});
    return ScenarioTree::build(2, std::move(atoms));
}

// T = 2 with skewed probabilities and a three-way split.
inline ScenarioTree skewed2() {
    std::vector<AtomSpec> atoms;
    atoms.push_back({"root", 0, "", 1.0});
    atoms.push_back({"a", 1, "root", 0.3});
    atoms.push_back({"b", 1, "root", 0.7});
    atoms.push_back({"aa", 2, "a", 0.2});
    atoms.push_back({"ab", 2, "a", 0.5});
    atoms.push_back({"ac", 2, "a", 0.3});
    atoms.push_back({"ba", 2, "b", 0.6});
    atoms.push_back({"bb", 2, "b", 0.4});
    return ScenarioTree::build(2, std::move(atoms));
}

inline AdaptedProcess proc(const ScenarioTree& tree,
                           std::vector<std::vector<double>> values) {
    AdaptedProcess x = AdaptedProcess::zero(tree);
    for (std::size_t t = 0; t < values.size(); ++t) x.at(static_cast<int>(t)).values = values[t];
    return x;
}

inline AdaptedVector vec(int t, std::vector<double> values) {
    AdaptedVector v;
    v.time = t;
    v.values = std::move(values);
    return v;
}

inline RobustRiskMeasure measure(const ScenarioTree& tree, const RiskKind& rho,
                                 const UncertaintyKind& kind) {
    return RobustRiskMeasure::make(tree, RiskFamily::uniform(tree, rho),
                                   DynamicUncertaintySet::uniform(tree, kind));
}

} // namespace testutil
