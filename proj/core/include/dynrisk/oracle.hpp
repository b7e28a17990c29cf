#pragma once

#include "dynrisk/risk.hpp"
#include "dynrisk/tree.hpp"
#include "dynrisk/uncertainty.hpp"

namespace dynrisk {

// Brute-force reference implementations. Verification surface only: exact up
// to grid resolution, exponential in the number of children.
struct GridSpec {
    int points = 41;            // per coordinate
    int max_children = 3;       // refuse wider atoms
    double box_margin = 2.0;    // box = [min x - margin*eps, max x + margin*eps]
    double max_total = 1e7;     // refuse larger grids
};

// Exhaustive feasible-point maximum of rho over the ball; a lower bound on
// the true supremum with gap bounded by the grid spacing.
AdaptedVector grid_worst_case(const UncertaintyKind& kind, const RiskKind& rho,
                              const ScenarioTree& tree, const AdaptedProcess& x, int t,
                              const GridSpec& spec = {});

// Per-coordinate spacing of the grid used above, per time-t atom.
AdaptedVector grid_spacing(const UncertaintyKind& kind, const ScenarioTree& tree,
                           const AdaptedProcess& x, int t, const GridSpec& spec = {});

// Simplex-grid supremum of the reweighted conditional expectation over the
// KL ball of radius eps.
AdaptedVector kl_simplex_sup(const ScenarioTree& tree, const AdaptedVector& z, double eps,
                             double resolution = 1e-3);

// E[Z | F_t] by explicit path enumeration.
AdaptedVector enumerate_conditional_expectation(const ScenarioTree& tree, const AdaptedVector& z,
                                                int t);

} // namespace dynrisk
