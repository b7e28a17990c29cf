#include "dynrisk/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynrisk/common.hpp"

namespace dynrisk {

DiscreteLaw make_law(std::vector<std::pair<double, double>> pairs) {
    if (pairs.empty()) throw ValidationError("law needs at least one point");
    std::sort(pairs.begin(), pairs.end());
    DiscreteLaw law;
    double total = 0.0;
    for (const auto& [v, p] : pairs) {
        if (p < 0.0) throw ValidationError("law masses must be nonnegative");
        total += p;
        if (!law.empty() && law.back().first == v) law.back().second += p;
        else law.emplace_back(v, p);
    }
    if (std::abs(total - 1.0) > kProbabilitySumTol)
        throw ValidationError("law masses must sum to one");
    return law;
}

namespace {

// Walk the merged cdf breakpoints of a and b; call f(alpha_mass, qa, qb) on
// each interval of probability where both quantile functions are constant.
template <typename F>
void over_quantile_segments(const DiscreteLaw& a, const DiscreteLaw& b, F&& f) {
    std::size_t ia = 0, ib = 0;
    double ra = a[0].second, rb = b[0].second; // remaining mass of current points
    double left = 1.0;                         // probability not yet consumed
    while (left > 1e-15) {
        double seg = std::min({ra, rb, left});
        f(seg, a[ia].first, b[ib].first);
        ra -= seg;
        rb -= seg;
        left -= seg;
        if (ra <= 1e-15 && ia + 1 < a.size()) ra = a[++ia].second;
        if (rb <= 1e-15 && ib + 1 < b.size()) rb = b[++ib].second;
    }
}

} // namespace

double wasserstein_distance(const DiscreteLaw& a, const DiscreteLaw& b, double p) {
    if (!(p >= 1.0)) throw ValidationError("Wasserstein order must be >= 1");
    double acc = 0.0;
    over_quantile_segments(a, b, [&](double seg, double qa, double qb) {
        acc += seg * std::pow(std::abs(qa - qb), p);
    });
    return std::pow(acc, 1.0 / p);
}

double wasserstein_excess(const DiscreteLaw& a, const DiscreteLaw& b, double p) {
    if (!(p >= 1.0)) throw ValidationError("Wasserstein order must be >= 1");
    double acc = 0.0;
    over_quantile_segments(a, b, [&](double seg, double qa, double qb) {
        double d = qa - qb;
        if (d > 0.0) acc += seg * std::pow(d, p);
    });
    return std::pow(acc, 1.0 / p);
}

double kl_divergence(const DiscreteLaw& a, const DiscreteLaw& b) {
    const double tol = tolerance();
    double acc = 0.0;
    for (const auto& [v, m] : a) {
        if (m <= 0.0) continue;
        double ref = 0.0; // total b-mass at this value, matched within tol
        for (const auto& [w, q] : b)
            if (std::abs(w - v) <= tol) ref += q;
        if (ref <= 0.0) return std::numeric_limits<double>::infinity();
        acc += m * std::log(m / ref);
    }
    return acc;
}

double conditional_wasserstein(const ScenarioTree& tree, const AdaptedVector& y,
                               const AdaptedVector& x, std::size_t parent_idx, double p) {
    return wasserstein_distance(conditional_law(tree, y, parent_idx),
                                conditional_law(tree, x, parent_idx), p);
}

double conditional_kl(const ScenarioTree& tree, const AdaptedVector& y,
                      const AdaptedVector& x, std::size_t parent_idx) {
    return kl_divergence(conditional_law(tree, y, parent_idx),
                         conditional_law(tree, x, parent_idx));
}

} // namespace dynrisk
