#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "dynrisk/distance.hpp"
#include "dynrisk/oracle.hpp"
#include "dynrisk/risk.hpp"
#include "dynrisk/robust.hpp"
#include "dynrisk/tree.hpp"
#include "dynrisk/uncertainty.hpp"

using namespace dynrisk;

namespace {

// Balanced tree with `branch` children per node up to `horizon`.
ScenarioTree balanced_tree(int horizon, int branch, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<AtomSpec> atoms;
    atoms.push_back({"r", 0, "", 1.0});
    std::vector<std::string> frontier = {"r"};
    for (int t = 1; t <= horizon; ++t) {
        std::vector<std::string> next;
        for (const auto& p : frontier) {
            std::vector<double> w(branch);
            double s = 0.0;
            for (double& v : w) s += (v = 0.2 + unif(rng));
            for (int c = 0; c < branch; ++c) {
                std::string id = p + char('a' + c);
                atoms.push_back({id, t, p, w[c] / s});
                next.push_back(id);
            }
        }
        frontier = std::move(next);
    }
    return ScenarioTree::build(horizon, std::move(atoms));
}

AdaptedProcess random_process(const ScenarioTree& tree, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    AdaptedProcess x = AdaptedProcess::zero(tree);
    for (int t = 0; t <= tree.horizon(); ++t)
        for (double& v : x.at(t).values) v = unif(rng);
    return x;
}

DiscreteLaw random_law(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<double, double>> pairs;
    double s = 0.0;
    std::vector<double> w(n);
    for (double& v : w) s += (v = 0.1 + unif(rng));
    for (std::size_t i = 0; i < n; ++i)
        pairs.emplace_back(2.0 * unif(rng) - 1.0, w[i] / s);
    return make_law(std::move(pairs));
}

void bm_wasserstein_distance(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    DiscreteLaw a = random_law(n, rng);
    DiscreteLaw b = random_law(n, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(wasserstein_distance(a, b, 2.0));
}
BENCHMARK(bm_wasserstein_distance)->Arg(4)->Arg(16)->Arg(64);

void bm_kl_worst_case(benchmark::State& state) {
    std::mt19937_64 rng(2);
    ScenarioTree tree = balanced_tree(1, static_cast<int>(state.range(0)), rng);
    AdaptedProcess x = random_process(tree, rng);
    UncertaintyKind ball = UncertaintyKind::kl_ball(ToleranceRule::constant(0.1));
    for (auto _ : state)
        benchmark::DoNotOptimize(worst_case(ball, RiskKind::expectation(), tree, x, 0));
}
BENCHMARK(bm_kl_worst_case)->Arg(2)->Arg(8)->Arg(32);

void bm_wasserstein_worst_case(benchmark::State& state) {
    std::mt19937_64 rng(3);
    ScenarioTree tree = balanced_tree(1, static_cast<int>(state.range(0)), rng);
    AdaptedProcess x = random_process(tree, rng);
    UncertaintyKind ball = UncertaintyKind::wasserstein_ball(2.0, ToleranceRule::constant(0.25));
    for (auto _ : state)
        benchmark::DoNotOptimize(worst_case(ball, RiskKind::cvar(0.5), tree, x, 0));
}
BENCHMARK(bm_wasserstein_worst_case)->Arg(2)->Arg(3)->Arg(4);

void bm_robust_value(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const int horizon = static_cast<int>(state.range(0));
    ScenarioTree tree = balanced_tree(horizon, 2, rng);
    AdaptedProcess x = random_process(tree, rng);
    RiskFamily fam = RiskFamily::uniform(tree, RiskKind::cvar(0.5));
    DynamicUncertaintySet set = DynamicUncertaintySet::uniform(
        tree, UncertaintyKind::sup_norm_ball(ToleranceRule::constant(0.25)));
    RobustRiskMeasure r = RobustRiskMeasure::make(tree, fam, set);
    for (auto _ : state)
        benchmark::DoNotOptimize(robust_value(r, 0, x));
}
BENCHMARK(bm_robust_value)->Arg(2)->Arg(4)->Arg(6);

void bm_recursive_construction(benchmark::State& state) {
    std::mt19937_64 rng(5);
    const int horizon = static_cast<int>(state.range(0));
    ScenarioTree tree = balanced_tree(horizon, 2, rng);
    AdaptedProcess x = random_process(tree, rng);
    RiskFamily fam = RiskFamily::uniform(tree, RiskKind::expectation());
    DynamicUncertaintySet base = DynamicUncertaintySet::uniform(
        tree, UncertaintyKind::sup_norm_ball(ToleranceRule::var_scaled(0.5)));
    for (auto _ : state) {
        RobustRiskMeasure r = construct_recursive(base, fam, tree);
        benchmark::DoNotOptimize(robust_value(r, 0, x));
    }
}
BENCHMARK(bm_recursive_construction)->Arg(2)->Arg(3)->Arg(4);

} // namespace

BENCHMARK_MAIN();
