#pragma once

#include <utility>
#include <vector>

#include "dynrisk/tree.hpp"

namespace dynrisk {

// Discrete law on the reals: sorted (value, mass) pairs with equal values
// merged and masses summing to one.
using DiscreteLaw = std::vector<std::pair<double, double>>;

DiscreteLaw make_law(std::vector<std::pair<double, double>> pairs);

// W_p between two discrete laws, computed exactly as the L^p distance of the
// quantile functions over the merged breakpoint grid.
double wasserstein_distance(const DiscreteLaw& a, const DiscreteLaw& b, double p);

// One-sided variant: integrates only the positive part of F_a^{-1} - F_b^{-1}.
// Zero iff a is dominated by b in first order.
double wasserstein_excess(const DiscreteLaw& a, const DiscreteLaw& b, double p);

// KL(a || b) on laws: +inf (represented as infinity()) when a is not
// absolutely continuous w.r.t. b on the value grid. Values are matched within
// the global tolerance.
double kl_divergence(const DiscreteLaw& a, const DiscreteLaw& b);

// Conditional distances between the child laws of Y and X given the parent
// atom (both vectors live at the parent's time + 1).
double conditional_wasserstein(const ScenarioTree& tree, const AdaptedVector& y,
                               const AdaptedVector& x, std::size_t parent_idx, double p);
double conditional_kl(const ScenarioTree& tree, const AdaptedVector& y,
                      const AdaptedVector& x, std::size_t parent_idx);

} // namespace dynrisk
