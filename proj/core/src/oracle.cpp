#include "dynrisk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynrisk/common.hpp"

namespace dynrisk {

namespace {

double rule_eps(const UncertaintyKind& kind, const ScenarioTree& tree, const AdaptedProcess& x,
                int s, std::size_t parent_idx) {
    if (kind.tag == UncertaintyKind::Tag::Identity ||
        kind.tag == UncertaintyKind::Tag::MeasureFamily)
        return 0.0;
    return tolerance_eval(kind.rule, tree, x, s)[parent_idx];
}

// A KL ball fixes the support, so the brute-force search walks the
// reweighting simplex instead of a value grid.
constexpr int kSimplexSteps = 400;

double kl_of_weights(const std::vector<double>& q, const std::vector<double>& p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k)
        if (q[k] > 0.0) acc += q[k] * std::log(q[k] / p[k]);
    return acc;
}

double kl_grid_sup(const RiskKind& rho, const std::vector<double>& xv,
                   const std::vector<double>& p, double eps) {
    const std::size_t n = xv.size();
    auto value = [&](const std::vector<double>& q) {
        std::vector<std::pair<double, double>> law;
        for (std::size_t k = 0; k < n; ++k)
            if (q[k] > 0.0) law.emplace_back(xv[k], q[k]);
        return evaluate_on_law(rho, law);
    };
    std::vector<std::pair<double, double>> center;
    for (std::size_t k = 0; k < n; ++k) center.emplace_back(xv[k], p[k]);
    double best = evaluate_on_law(rho, center);
    if (n == 1) return best;
    const int steps = kSimplexSteps;
    if (n == 2) {
        for (int a = 0; a <= steps; ++a) {
            std::vector<double> q = {static_cast<double>(a) / steps,
                                     1.0 - static_cast<double>(a) / steps};
            if (kl_of_weights(q, p) <= eps + 1e-12) best = std::max(best, value(q));
        }
        return best;
    }
    if (n == 3) {
        for (int a = 0; a <= steps; ++a)
            for (int b = 0; a + b <= steps; ++b) {
                std::vector<double> q = {static_cast<double>(a) / steps,
                                         static_cast<double>(b) / steps,
                                         1.0 - static_cast<double>(a + b) / steps};
                if (kl_of_weights(q, p) <= eps + 1e-12) best = std::max(best, value(q));
            }
        return best;
    }
    throw ValidationError("grid oracle refused: too many children per atom");
}

} // namespace

AdaptedVector grid_spacing(const UncertaintyKind& kind, const ScenarioTree& tree,
                           const AdaptedProcess& x, int t, const GridSpec& spec) {
    const int s = t + 1;
    const AdaptedVector& xs = x.at(s);
    AdaptedVector out;
    out.time = t;
    out.values.resize(tree.count(t));
    for (std::size_t i = 0; i < tree.count(t); ++i) {
        double hi = 0.0;
        const auto& kids = tree.child_indices(t, i);
        double lo = std::numeric_limits<double>::infinity(), top = -lo, amax = 0.0;
        for (std::size_t c : kids) {
            lo = std::min(lo, xs[c]);
            top = std::max(top, xs[c]);
            amax = std::max(amax, std::abs(xs[c]));
        }
        if (kind.tag == UncertaintyKind::Tag::KLBall) {
            // Simplex-scan resolution bound: the risk kinds are Lipschitz in
            // the weights with constant <= spread of the values; the factor
            // covers the walk back inside the constraint.
            hi = 4.0 * kids.size() * (amax + 1.0) / kSimplexSteps;
        } else if (kind.tag == UncertaintyKind::Tag::MeasureFamily ||
                   kind.tag == UncertaintyKind::Tag::Identity) {
            hi = 0.0; // enumeration is exact
        } else {
            double eps = rule_eps(kind, tree, x, s, i);
            hi = (top - lo + 2.0 * spec.box_margin * eps) / (spec.points - 1);
        }
        out.values[i] = hi;
    }
    return out;
}

AdaptedVector grid_worst_case(const UncertaintyKind& kind, const RiskKind& rho,
                              const ScenarioTree& tree, const AdaptedProcess& x, int t,
                              const GridSpec& spec) {
    if (!kind.is_static())
        throw ValidationError("the grid oracle handles static set variants only");
    const int s = t + 1;
    const AdaptedVector& xs = x.at(s);
    AdaptedVector out;
    out.time = t;
    out.values.resize(tree.count(t));

    for (std::size_t i = 0; i < tree.count(t); ++i) {
        const auto& kids = tree.child_indices(t, i);
        const std::size_t n = kids.size();
        if (static_cast<int>(n) > spec.max_children)
            throw ValidationError("grid oracle refused: too many children per atom");
        if (kind.tag == UncertaintyKind::Tag::KLBall) {
            std::vector<double> xv, p;
            for (std::size_t c : kids) {
                xv.push_back(xs[c]);
                p.push_back(tree.cond_prob(s, c));
            }
            double eps = rule_eps(kind, tree, x, s, i);
            out.values[i] = kl_grid_sup(rho, xv, p, eps);
            continue;
        }
        if (kind.tag == UncertaintyKind::Tag::MeasureFamily) {
            double best = -std::numeric_limits<double>::infinity();
            for (const MeasureComponent& q : kind.family) {
                auto probs = reweighted_child_probs(tree, q, t, i);
                std::vector<std::pair<double, double>> law;
                for (std::size_t k = 0; k < n; ++k) law.emplace_back(xs[kids[k]], probs[k]);
                best = std::max(best, evaluate_on_law(rho, law) - q.penalty);
            }
            out.values[i] = best;
            continue;
        }
        if (std::pow(static_cast<double>(spec.points), static_cast<double>(n)) > spec.max_total)
            throw ValidationError("grid oracle refused: grid too large");

        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        std::vector<std::pair<double, double>> center;
        for (std::size_t c : kids) {
            lo = std::min(lo, xs[c]);
            hi = std::max(hi, xs[c]);
            center.emplace_back(xs[c], tree.cond_prob(s, c));
        }
        double eps = rule_eps(kind, tree, x, s, i);
        lo -= spec.box_margin * eps;
        hi += spec.box_margin * eps;
        double step = (hi - lo) / (spec.points - 1);

        double best = evaluate_on_law(rho, center); // the center is always feasible
        std::vector<int> idx(n, 0);
        AdaptedVector y = xs;
        while (true) {
            for (std::size_t k = 0; k < n; ++k) y.values[kids[k]] = lo + idx[k] * step;
            if (contains(kind, tree, y, x, s)[i]) {
                std::vector<std::pair<double, double>> law;
                for (std::size_t k = 0; k < n; ++k)
                    law.emplace_back(y.values[kids[k]], tree.cond_prob(s, kids[k]));
                best = std::max(best, evaluate_on_law(rho, law));
            }
            std::size_t k = 0;
            while (k < n && ++idx[k] == spec.points) idx[k++] = 0;
            if (k == n) break;
        }
        out.values[i] = best;
    }
    return out;
}

AdaptedVector kl_simplex_sup(const ScenarioTree& tree, const AdaptedVector& z, double eps,
                             double resolution) {
    if (resolution > 1e-3 + 1e-15)
        throw ValidationError("simplex grid resolution too coarse for the requested tolerance");
    const int t = z.time - 1;
    AdaptedVector out;
    out.time = t;
    out.values.resize(tree.count(t));
    const int steps = static_cast<int>(std::round(1.0 / resolution));

    for (std::size_t i = 0; i < tree.count(t); ++i) {
        const auto& kids = tree.child_indices(t, i);
        const std::size_t n = kids.size();
        if (n > 3)
            throw ValidationError("simplex grid oracle refused: more than three children");
        std::vector<double> xv, p;
        for (std::size_t c : kids) {
            xv.push_back(z[c]);
            p.push_back(tree.cond_prob(z.time, c));
        }

        auto kl = [&](const std::vector<double>& q) {
            double acc = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k)
                if (q[k] > 0.0) acc += q[k] * std::log(q[k] / p[k]);
            return acc;
        };
        // A zero radius pins the base law exactly; the tiny slack below is
        // only meant to absorb rounding on the constraint boundary.
        const double slack = eps > 0.0 ? 1e-12 : 0.0;
        auto val = [&](const std::vector<double>& q) {
            double acc = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k) acc += q[k] * xv[k];
            return acc;
        };

        double best = val(p);
        if (n == 1) {
            best = xv[0];
        } else if (n == 2) {
            double best_a = p[0];
            for (int a = 0; a <= steps; ++a) {
                std::vector<double> q = {static_cast<double>(a) / steps,
                                         1.0 - static_cast<double>(a) / steps};
                if (kl(q) <= eps + slack && val(q) > best) {
                    best = val(q);
                    best_a = q[0];
                }
            }
            // Local zoom around the incumbent; the feasible region is convex
            // and the objective linear, so the optimum sits within one coarse
            // step of the best feasible grid point.
            double step = 1.0 / steps;
            for (int round = 0; round < 4; ++round) {
                double lo = std::max(0.0, best_a - 2.0 * step);
                double hi = std::min(1.0, best_a + 2.0 * step);
                step = (hi - lo) / 100.0;
                for (int a = 0; a <= 100; ++a) {
                    std::vector<double> q = {lo + a * step, 1.0 - (lo + a * step)};
                    if (kl(q) <= eps + slack && val(q) > best) {
                        best = val(q);
                        best_a = q[0];
                    }
                }
            }
        } else {
            // Reduce to a scan over the first weight. For fixed qa the
            // divergence is convex in qb with minimiser qb = p1 (1-qa)/(p1+p2),
            // so the feasible qb form an interval; the objective is linear in
            // qb, hence maximised at whichever interval endpoint the sign of
            // x1 - x2 selects. Each endpoint comes from a bisection between
            // the minimiser and the simplex edge.
            auto inner = [&](double qa) {
                double rest = 1.0 - qa;
                double qstar = p[1] * rest / (p[1] + p[2]);
                auto g = [&](double qb) {
                    return kl({qa, qb, rest - qb});
                };
                if (g(qstar) > eps + slack)
                    return -std::numeric_limits<double>::infinity();
                auto edge = [&](double far) {
                    if (g(far) <= eps + slack) return far;
                    double in = qstar, out = far;
                    for (int it = 0; it < 80; ++it) {
                        double mid = 0.5 * (in + out);
                        if (g(mid) <= eps + slack) in = mid;
                        else out = mid;
                    }
                    return in;
                };
                double qb = xv[1] >= xv[2] ? edge(rest) : edge(0.0);
                return val({qa, qb, rest - qb});
            };

            double best_a = p[0];
            for (int a = 0; a <= steps; ++a) {
                double qa = static_cast<double>(a) / steps;
                double v = inner(qa);
                if (v > best) {
                    best = v;
                    best_a = qa;
                }
            }
            // The value is concave in qa, so in one dimension the incumbent
            // sits within one coarse step of the argmax; zoom as usual.
            double step = 1.0 / steps;
            for (int round = 0; round < 4; ++round) {
                double lo = std::max(0.0, best_a - 2.0 * step);
                double hi = std::min(1.0, best_a + 2.0 * step);
                step = (hi - lo) / 100.0;
                for (int a = 0; a <= 100; ++a) {
                    double qa = lo + a * step;
                    double v = inner(qa);
                    if (v > best) {
                        best = v;
                        best_a = qa;
                    }
                }
            }
        }
        out.values[i] = best;
    }
    return out;
}

AdaptedVector enumerate_conditional_expectation(const ScenarioTree& tree, const AdaptedVector& z,
                                                int t) {
    const int s = z.time;
    if (t > s) throw ValidationError("conditioning time must not exceed the variable's time");
    AdaptedVector out;
    out.time = t;
    out.values.assign(tree.count(t), 0.0);
    for (std::size_t w = 0; w < tree.count(s); ++w) {
        std::size_t a = tree.ancestor(s, w, t);
        out.values[a] += tree.path_prob(s, w) / tree.path_prob(t, a) * z[w];
    }
    return out;
}

} // namespace dynrisk
