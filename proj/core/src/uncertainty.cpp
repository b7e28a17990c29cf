#include "dynrisk/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dynrisk/common.hpp"
#include "dynrisk/distance.hpp"
#include "dynrisk/robust.hpp"

namespace dynrisk {

ToleranceRule ToleranceRule::constant(double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw ValidationError("tolerance radius must be finite and nonnegative");
    return {Tag::Constant, eps};
}

ToleranceRule ToleranceRule::horizon(double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw ValidationError("tolerance radius must be finite and nonnegative");
    return {Tag::Horizon, eps};
}

ToleranceRule ToleranceRule::var_scaled(double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw ValidationError("tolerance radius must be finite and nonnegative");
    return {Tag::VarScaled, eps};
}

AdaptedVector tolerance_eval(const ToleranceRule& rule, const ScenarioTree& tree,
                             const AdaptedProcess& x, int t) {
    if (t < 1 || t > tree.horizon())
        throw ValidationError("tolerance is conditioned one step back; t must lie in 1..T");
    AdaptedVector out;
    out.time = t - 1;
    out.values.resize(tree.count(t - 1), 0.0);
    switch (rule.tag) {
        case ToleranceRule::Tag::Constant:
            std::fill(out.values.begin(), out.values.end(), rule.eps);
            break;
        case ToleranceRule::Tag::Horizon:
            std::fill(out.values.begin(), out.values.end(),
                      rule.eps * static_cast<double>(tree.horizon() - t));
            break;
        case ToleranceRule::Tag::VarScaled: {
            const AdaptedVector& xt = x.at(t);
            for (std::size_t i = 0; i < tree.count(t - 1); ++i) {
                double mean = 0.0, sq = 0.0;
                for (std::size_t c : tree.child_indices(t - 1, i)) {
                    double pc = tree.cond_prob(t, c);
                    mean += pc * xt[c];
                    sq += pc * xt[c] * xt[c];
                }
                out.values[i] = rule.eps * std::max(0.0, sq - mean * mean);
            }
            break;
        }
        case ToleranceRule::Tag::Zero:
            break;
    }
    return out;
}

UncertaintyKind UncertaintyKind::sup_norm_ball(const ToleranceRule& rule) {
    UncertaintyKind k;
    k.tag = Tag::SupNormBall;
    k.rule = rule;
    return k;
}

UncertaintyKind UncertaintyKind::wasserstein_ball(double p, const ToleranceRule& rule) {
    if (!(p >= 1.0)) throw ValidationError("Wasserstein order must be >= 1");
    UncertaintyKind k;
    k.tag = Tag::WassersteinBall;
    k.rule = rule;
    k.p = p;
    return k;
}

UncertaintyKind UncertaintyKind::kl_ball(const ToleranceRule& rule) {
    UncertaintyKind k;
    k.tag = Tag::KLBall;
    k.rule = rule;
    return k;
}

UncertaintyKind UncertaintyKind::measure_family(std::vector<MeasureComponent> family) {
    if (family.empty()) throw ValidationError("measure family must be nonempty");
    UncertaintyKind k;
    k.tag = Tag::MeasureFamily;
    k.family = std::move(family);
    return k;
}

UncertaintyKind UncertaintyKind::derived(std::shared_ptr<const RobustRiskMeasure> measure) {
    UncertaintyKind k;
    k.tag = Tag::Derived;
    k.measure = std::move(measure);
    return k;
}

UncertaintyKind UncertaintyKind::mean_band(std::vector<double> band_eps) {
    UncertaintyKind k;
    k.tag = Tag::MeanBand;
    k.band_eps = std::move(band_eps);
    return k;
}

UncertaintyKind UncertaintyKind::consolidated(std::shared_ptr<const RobustRiskMeasure> measure) {
    UncertaintyKind k;
    k.tag = Tag::Consolidated;
    k.measure = std::move(measure);
    return k;
}

UncertaintyKind UncertaintyKind::adversarial_order(std::shared_ptr<const UncertaintyKind> base,
                                                   std::shared_ptr<const RobustRiskMeasure> measure,
                                                   double threshold, double delta,
                                                   std::vector<double> eta) {
    if (!base || base->tag != Tag::SupNormBall)
        throw ValidationError("region-switch construction needs a sup-norm-ball base");
    UncertaintyKind k;
    k.tag = Tag::AdversarialOrder;
    k.base = std::move(base);
    k.measure = std::move(measure);
    k.threshold = threshold;
    k.delta = delta;
    k.eta = std::move(eta);
    return k;
}

UncertaintyKind UncertaintyKind::adversarial_translation(
    std::shared_ptr<const UncertaintyKind> base,
    std::shared_ptr<const RobustRiskMeasure> measure, double threshold) {
    if (!base) throw ValidationError("threshold-switch construction needs a base set");
    UncertaintyKind k;
    k.tag = Tag::AdversarialTranslation;
    k.base = std::move(base);
    k.measure = std::move(measure);
    k.threshold = threshold;
    return k;
}

bool UncertaintyKind::is_static() const {
    switch (tag) {
        case Tag::Identity:
        case Tag::SupNormBall:
        case Tag::WassersteinBall:
        case Tag::KLBall:
        case Tag::MeasureFamily:
            return true;
        default:
            return false;
    }
}

DynamicUncertaintySet DynamicUncertaintySet::uniform(const ScenarioTree& tree,
                                                     const UncertaintyKind& kind) {
    DynamicUncertaintySet s;
    s.kinds.assign(static_cast<std::size_t>(tree.horizon()), kind);
    return s;
}

bool DynamicUncertaintySet::is_static() const {
    for (const auto& k : kinds)
        if (!k.is_static()) return false;
    return true;
}

void validate_family(const ScenarioTree& tree, const UncertaintyKind& kind) {
    if (kind.tag != UncertaintyKind::Tag::MeasureFamily) return;
    for (const auto& q : kind.family) {
        if (q.density.size() != tree.count(tree.horizon()))
            throw ValidationError("density must assign one value per terminal atom");
        for (double d : q.density)
            if (!(d > 0.0) || !std::isfinite(d))
                throw ValidationError(
                    "density must be strictly positive: zero-density atoms make the measure "
                    "not absolutely continuous w.r.t. base");
        if (!(q.penalty >= 0.0) || !std::isfinite(q.penalty))
            throw ValidationError("penalty must be finite and nonnegative");
    }
}

std::vector<double> reweighted_child_probs(const ScenarioTree& tree, const MeasureComponent& q,
                                           int t, std::size_t parent_idx) {
    const int T = tree.horizon();
    const auto& kids = tree.child_indices(t, parent_idx);
    std::vector<double> mass(kids.size(), 0.0);
    for (std::size_t w = 0; w < tree.count(T); ++w) {
        if (tree.ancestor(T, w, t) != parent_idx) continue;
        std::size_t child = tree.ancestor(T, w, t + 1);
        auto it = std::find(kids.begin(), kids.end(), child);
        mass[static_cast<std::size_t>(it - kids.begin())] +=
            tree.path_prob(T, w) * q.density[w];
    }
    double total = 0.0;
    for (double m : mass) total += m;
    for (double& m : mass) m /= total;
    return mass;
}

namespace {

// Lift a time-t vector to time t+1 (value of the parent on each child).
AdaptedVector lift(const ScenarioTree& tree, const AdaptedVector& v) {
    AdaptedVector out;
    out.time = v.time + 1;
    out.values.resize(tree.count(out.time));
    for (std::size_t c = 0; c < out.values.size(); ++c)
        out.values[c] = v.values[tree.parent(out.time, c)];
    return out;
}

// S_s = X_s + E[S_{s+1} | F_s]: conditional expectation of the tail sum
// sum_{i=s..T} X_i given F_s.
AdaptedVector tail_sum_conditional(const ScenarioTree& tree, const AdaptedProcess& x, int s) {
    AdaptedVector acc = x.at(tree.horizon());
    for (int r = tree.horizon() - 1; r >= s; --r)
        acc = x.at(r) + conditional_expectation_step(tree, acc);
    return acc;
}

struct ChildProblem {
    std::vector<double> x; // reference child values
    std::vector<double> p; // child conditional probabilities
};

ChildProblem child_problem(const ScenarioTree& tree, const AdaptedVector& xt, int t,
                           std::size_t parent_idx) {
    ChildProblem cp;
    for (std::size_t c : tree.child_indices(t, parent_idx)) {
        cp.x.push_back(xt[c]);
        cp.p.push_back(tree.cond_prob(t + 1, c));
    }
    return cp;
}

DiscreteLaw law_of(const std::vector<double>& v, const std::vector<double>& p) {
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < v.size(); ++i) pairs.emplace_back(v[i], p[i]);
    return make_law(std::move(pairs));
}

double rho_of(const RiskKind& rho, const std::vector<double>& v, const std::vector<double>& p) {
    std::vector<std::pair<double, double>> law;
    for (std::size_t i = 0; i < v.size(); ++i) law.emplace_back(v[i], p[i]);
    return evaluate_on_law(rho, law);
}

double wdist(const ChildProblem& cp, const std::vector<double>& y, double p) {
    return wasserstein_distance(law_of(y, cp.p), law_of(cp.x, cp.p), p);
}

// Largest s in [0,1] with y(s) = x + s (y - x) inside the ball, by downward
// scan plus bisection. s = 0 (the center) is always feasible.
std::vector<double> project_to_ball(const ChildProblem& cp, const std::vector<double>& y,
                                    double order, double eps) {
    auto at = [&](double s) {
        std::vector<double> z(cp.x.size());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = cp.x[i] + s * (y[i] - cp.x[i]);
        return z;
    };
    const double slack = eps + 1e-12;
    if (wdist(cp, y, order) <= slack) return y;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (wdist(cp, at(mid), order) <= slack) lo = mid;
        else hi = mid;
    }
    return at(lo);
}

// sup rho over the Wasserstein ball by multi-start projected ascent.
double wball_sup(const RiskKind& rho, const ChildProblem& cp, double order, double eps,
                 std::mt19937_64& rng) {
    const std::size_t n = cp.x.size();
    std::vector<std::vector<double>> starts;
    starts.push_back(cp.x);
    {
        std::vector<double> up = cp.x, down = cp.x;
        for (std::size_t i = 0; i < n; ++i) {
            up[i] += eps;
            down[i] -= eps;
        }
        starts.push_back(up);
        starts.push_back(down);
    }
    // Signed one-sided pushes: the risk functionals here are convex in the
    // outcomes, so the supremum sits at an extreme point of the ball and
    // these rays land near the candidate corners.
    if (n <= 6) {
        for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
            std::vector<double> y = cp.x;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t{1} << i)) y[i] += 4.0 * eps;
            starts.push_back(project_to_ball(cp, y, order, eps));
        }
    }
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        std::vector<double> y = cp.x;
        for (std::size_t i = 0; i < n; ++i) y[i] += 2.0 * eps * unif(rng);
        starts.push_back(project_to_ball(cp, y, order, eps));
    }

    double best = rho_of(rho, cp.x, cp.p);
    for (auto y : starts) {
        double fy = rho_of(rho, y, cp.p);
        double step = std::max(eps, 1e-3);
        const double h = 1e-7;
        for (int iter = 0; iter < 400 && step > 1e-10; ++iter) {
            std::vector<double> g(n);
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<double> yp = y, ym = y;
                yp[i] += h;
                ym[i] -= h;
                g[i] = (rho_of(rho, yp, cp.p) - rho_of(rho, ym, cp.p)) / (2.0 * h);
            }
            double norm = 0.0;
            for (double gi : g) norm += gi * gi;
            norm = std::sqrt(norm);
            if (norm < 1e-14) break;
            std::vector<double> cand(n);
            for (std::size_t i = 0; i < n; ++i) cand[i] = y[i] + step * g[i] / norm;
            cand = project_to_ball(cp, cand, order, eps);
            double fc = rho_of(rho, cand, cp.p);
            if (fc > fy + 1e-15) {
                double moved = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    moved = std::max(moved, std::abs(cand[i] - y[i]));
                y = cand;
                fy = fc;
                if (moved < 1e-10) break;
            } else {
                step *= 0.5;
            }
        }
        // Coordinate polish: along a single coordinate the feasible set is an
        // interval and the objective convex, so the exact one-dimensional
        // maximum is at a feasible endpoint reached by bisection.
        for (int pass = 0; pass < 40; ++pass) {
            bool moved = false;
            for (std::size_t i = 0; i < n; ++i) {
                for (double sign : {1.0, -1.0}) {
                    double lo = 0.0, hi = 8.0 * std::max(eps, 1e-6);
                    auto shifted = [&](double d) {
                        std::vector<double> z = y;
                        z[i] += sign * d;
                        return z;
                    };
                    if (wdist(cp, shifted(hi), order) <= eps + 1e-12) {
                        lo = hi;
                    } else {
                        for (int it = 0; it < 60; ++it) {
                            double mid = 0.5 * (lo + hi);
                            if (wdist(cp, shifted(mid), order) <= eps + 1e-12) lo = mid;
                            else hi = mid;
                        }
                    }
                    std::vector<double> cand = shifted(lo);
                    double fc = rho_of(rho, cand, cp.p);
                    if (fc > fy + 1e-13) {
                        y = cand;
                        fy = fc;
                        moved = true;
                    }
                }
            }
            if (!moved) break;
        }
        best = std::max(best, fy);
    }
    return best;
}

double kl_of(const std::vector<double>& q, const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] > 0.0) s += q[i] * std::log(q[i] / p[i]);
    return s;
}

// Largest feasible point on the segment p -> q (KL is convex along it and
// zero at p).
std::vector<double> project_to_kl(const std::vector<double>& p, const std::vector<double>& q,
                                  double eps) {
    const double slack = eps + 1e-12;
    if (kl_of(q, p) <= slack) return q;
    auto at = [&](double s) {
        std::vector<double> z(p.size());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = p[i] + s * (q[i] - p[i]);
        return z;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (kl_of(at(mid), p) <= slack) lo = mid;
        else hi = mid;
    }
    return at(lo);
}

// Convex dual of the KL-ball worst-case expectation:
//   inf_{beta>0} beta^{-1} (log sum p_i e^{beta x_i} + eps).
double kl_dual_expectation(const std::vector<double>& x, const std::vector<double>& p,
                           double eps) {
    double mean = 0.0, xmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean += p[i] * x[i];
        xmax = std::max(xmax, x[i]);
    }
    if (eps <= 0.0) return mean;
    if (xmax - *std::min_element(x.begin(), x.end()) < 1e-14) return xmax;

    auto g = [&](double logb) {
        double beta = std::exp(logb);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += p[i] * std::exp(beta * (x[i] - xmax));
        return xmax + (std::log(s) + eps) / beta;
    };
    // Coarse scan, then golden-section refinement of the bracketing interval.
    const double lo0 = -20.0, hi0 = 25.0;
    const int scan = 400;
    double best_u = lo0, best_v = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= scan; ++k) {
        double u = lo0 + (hi0 - lo0) * k / scan;
        double v = g(u);
        if (v < best_v) {
            best_v = v;
            best_u = u;
        }
    }
    double a = best_u - (hi0 - lo0) / scan, b = best_u + (hi0 - lo0) / scan;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = g(c), fd = g(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = g(d);
        }
    }
    return std::min({best_v, fc, fd, xmax});
}

// sup rho over KL-feasible reweightings q of the child law.
double klball_sup(const RiskKind& rho, const ChildProblem& cp, double eps, std::mt19937_64& rng) {
    if (eps <= 0.0) return rho_of(rho, cp.x, cp.p);
    if (rho.tag == RiskKind::Tag::Expectation) return kl_dual_expectation(cp.x, cp.p, eps);
    if (rho.tag == RiskKind::Tag::WorstCase) return rho_of(rho, cp.x, cp.p);

    const std::size_t n = cp.p.size();
    auto f = [&](const std::vector<double>& q) { return rho_of(rho, cp.x, q); };
    std::vector<std::vector<double>> starts;
    starts.push_back(cp.p);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(n, 1e-12);
        v[i] = 1.0;
        double s = 0.0;
        for (double e : v) s += e;
        for (double& e : v) e /= s;
        starts.push_back(project_to_kl(cp.p, v, eps));
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        std::vector<double> v(n);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = -std::log(std::max(unif(rng), 1e-12));
            s += v[i];
        }
        for (double& e : v) e /= s;
        starts.push_back(project_to_kl(cp.p, v, eps));
    }

    double best = f(cp.p);
    for (auto q : starts) {
        double fq = f(q);
        double step = 0.25;
        for (int iter = 0; iter < 600 && step > 1e-11; ++iter) {
            bool improved = false;
            for (std::size_t i = 0; i < n && !improved; ++i) {
                for (std::size_t j = 0; j < n && !improved; ++j) {
                    if (i == j) continue;
                    double m = std::min(step, q[i]);
                    if (m <= 0.0) continue;
                    std::vector<double> cand = q;
                    cand[i] -= m;
                    cand[j] += m;
                    if (kl_of(cand, cp.p) > eps + 1e-12)
                        cand = project_to_kl(cp.p, cand, eps);
                    double fc = f(cand);
                    if (fc > fq + 1e-15) {
                        q = cand;
                        fq = fc;
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        best = std::max(best, fq);
    }
    return best;
}

// Law comparison with value matching inside the global tolerance.
bool laws_match(const DiscreteLaw& a, const DiscreteLaw& b) {
    const double tol = tolerance();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::abs(a[i].first - b[j].first) <= tol) {
            if (std::abs(a[i].second - b[j].second) > 1e-9) return false;
            ++i;
            ++j;
        } else if (a[i].first < b[j].first) {
            if (a[i].second > 1e-9) return false;
            ++i;
        } else {
            if (b[j].second > 1e-9) return false;
            ++j;
        }
    }
    for (; i < a.size(); ++i)
        if (a[i].second > 1e-9) return false;
    for (; j < b.size(); ++j)
        if (b[j].second > 1e-9) return false;
    return true;
}

void require_mean_zero_eta(const ScenarioTree& tree, const UncertaintyKind& kind, int s) {
    if (kind.eta.size() != tree.count(s))
        throw ValidationError("direction vector must assign one value per atom of its time slice");
    for (std::size_t i = 0; i < tree.count(s - 1); ++i) {
        double m = 0.0;
        for (std::size_t c : tree.child_indices(s - 1, i))
            m += tree.cond_prob(s, c) * kind.eta[c];
        if (std::abs(m) > 1e-9)
            throw ValidationError("direction vector must have zero conditional mean");
    }
}

} // namespace

std::vector<bool> contains(const UncertaintyKind& kind, const ScenarioTree& tree,
                           const AdaptedVector& y, const AdaptedProcess& x, int t) {
    if (t < 1 || t > tree.horizon())
        throw ValidationError("uncertainty sets live at times 1..T");
    if (y.time != t) throw ValidationError("candidate must live at the set's time");
    const double tol = tolerance();
    const std::size_t parents = tree.count(t - 1);
    std::vector<bool> out(parents, true);
    const AdaptedVector& xt = x.at(t);

    switch (kind.tag) {
        case UncertaintyKind::Tag::Identity: {
            for (std::size_t i = 0; i < parents; ++i)
                for (std::size_t c : tree.child_indices(t - 1, i))
                    if (std::abs(y[c] - xt[c]) > tol) out[i] = false;
            break;
        }
        case UncertaintyKind::Tag::SupNormBall: {
            AdaptedVector eps = tolerance_eval(kind.rule, tree, x, t);
            for (std::size_t i = 0; i < parents; ++i)
                for (std::size_t c : tree.child_indices(t - 1, i))
                    if (std::abs(y[c] - xt[c]) > eps[i] + tol) out[i] = false;
            break;
        }
        case UncertaintyKind::Tag::WassersteinBall: {
            AdaptedVector eps = tolerance_eval(kind.rule, tree, x, t);
            for (std::size_t i = 0; i < parents; ++i)
                out[i] = conditional_wasserstein(tree, y, xt, i, kind.p) <= eps[i] + tol;
            break;
        }
        case UncertaintyKind::Tag::KLBall: {
            AdaptedVector eps = tolerance_eval(kind.rule, tree, x, t);
            for (std::size_t i = 0; i < parents; ++i) {
                double d = kl_divergence(conditional_law(tree, y, i), conditional_law(tree, xt, i));
                out[i] = d <= eps[i] + tol;
            }
            break;
        }
        case UncertaintyKind::Tag::MeasureFamily: {
            for (std::size_t i = 0; i < parents; ++i) {
                DiscreteLaw ylaw = conditional_law(tree, y, i);
                bool any = false;
                for (const auto& q : kind.family) {
                    auto probs = reweighted_child_probs(tree, q, t - 1, i);
                    const auto& kids = tree.child_indices(t - 1, i);
                    std::vector<std::pair<double, double>> pairs;
                    for (std::size_t k = 0; k < kids.size(); ++k)
                        pairs.emplace_back(xt[kids[k]], probs[k]);
                    if (laws_match(ylaw, make_law(std::move(pairs)))) {
                        any = true;
                        break;
                    }
                }
                out[i] = any;
            }
            break;
        }
        case UncertaintyKind::Tag::Derived: {
            const RobustRiskMeasure& r = *kind.measure;
            if (t == tree.horizon()) return contains(r.base.at_time(t), tree, y, x, t);
            AdaptedProcess shifted = x;
            shifted.at(t) = x.at(t) + robust_value(r, t, x) - zero_value(r, t);
            return contains(r.base.at_time(t), tree, y, shifted, t);
        }
        case UncertaintyKind::Tag::MeanBand: {
            if (kind.band_eps.size() != parents)
                throw ValidationError("band width must assign one value per conditioning atom");
            AdaptedVector cap = tail_sum_conditional(tree, x, t);
            for (std::size_t i = 0; i < parents; ++i)
                for (std::size_t c : tree.child_indices(t - 1, i))
                    if (y[c] > cap[c] + kind.band_eps[i] + tol) out[i] = false;
            break;
        }
        case UncertaintyKind::Tag::Consolidated: {
            return consolidated_contains(*kind.measure, t, y, x);
        }
        case UncertaintyKind::Tag::AdversarialOrder: {
            require_mean_zero_eta(tree, kind, t);
            AdaptedVector eps = tolerance_eval(kind.base->rule, tree, x, t);
            std::vector<bool> base = contains(*kind.base, tree, y, x, t);
            AdaptedVector mean = conditional_expectation_step(tree, xt);
            for (std::size_t i = 0; i < parents; ++i) {
                if (mean[i] >= kind.threshold) {
                    out[i] = base[i];
                    continue;
                }
                out[i] = true;
                for (std::size_t c : tree.child_indices(t - 1, i)) {
                    double w = xt[c] + eps[i] + kind.delta * kind.eta[c];
                    if (std::abs(y[c] - w) > tol) out[i] = false;
                }
            }
            break;
        }
        case UncertaintyKind::Tag::AdversarialTranslation: {
            std::vector<bool> base = contains(*kind.base, tree, y, x, t);
            std::vector<bool> cons = consolidated_contains(*kind.measure, t, y, x);
            for (std::size_t i = 0; i < parents; ++i) {
                double m = -std::numeric_limits<double>::infinity();
                for (std::size_t c : tree.child_indices(t - 1, i)) m = std::max(m, xt[c]);
                out[i] = (m <= kind.threshold) ? base[i] : cons[i];
            }
            break;
        }
    }
    return out;
}

AdaptedVector worst_case(const UncertaintyKind& kind, const RiskKind& rho,
                         const ScenarioTree& tree, const AdaptedProcess& x, int t,
                         std::uint64_t seed) {
    if (t < 0 || t >= tree.horizon())
        throw ValidationError("worst case is taken at times 0..T-1");
    const int s = t + 1; // time of the set and of the candidates
    const AdaptedVector& xs = x.at(s);

    switch (kind.tag) {
        case UncertaintyKind::Tag::Identity:
            return evaluate_one_step(rho, tree, xs);
        case UncertaintyKind::Tag::SupNormBall:
            return evaluate_one_step(rho, tree, xs) + tolerance_eval(kind.rule, tree, x, s);
        case UncertaintyKind::Tag::WassersteinBall: {
            AdaptedVector eps = tolerance_eval(kind.rule, tree, x, s);
            if (rho.tag == RiskKind::Tag::Expectation)
                return conditional_expectation_step(tree, xs) + eps;
            AdaptedVector out;
            out.time = t;
            out.values.resize(tree.count(t));
            for (std::size_t i = 0; i < tree.count(t); ++i) {
                std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
                out.values[i] = wball_sup(rho, child_problem(tree, xs, t, i), kind.p, eps[i], rng);
            }
            return out;
        }
        case UncertaintyKind::Tag::KLBall: {
            AdaptedVector eps = tolerance_eval(kind.rule, tree, x, s);
            AdaptedVector out;
            out.time = t;
            out.values.resize(tree.count(t));
            for (std::size_t i = 0; i < tree.count(t); ++i) {
                std::mt19937_64 rng(seed ^ (0xbf58476d1ce4e5b9ULL * (i + 1)));
                out.values[i] = klball_sup(rho, child_problem(tree, xs, t, i), eps[i], rng);
            }
            return out;
        }
        case UncertaintyKind::Tag::MeasureFamily: {
            validate_family(tree, kind);
            AdaptedVector out;
            out.time = t;
            out.values.assign(tree.count(t), -std::numeric_limits<double>::infinity());
            for (std::size_t i = 0; i < tree.count(t); ++i) {
                const auto& kids = tree.child_indices(t, i);
                for (const auto& q : kind.family) {
                    auto probs = reweighted_child_probs(tree, q, t, i);
                    std::vector<std::pair<double, double>> law;
                    for (std::size_t k = 0; k < kids.size(); ++k)
                        law.emplace_back(xs[kids[k]], probs[k]);
                    out.values[i] =
                        std::max(out.values[i], evaluate_on_law(rho, law) - q.penalty);
                }
            }
            return out;
        }
        case UncertaintyKind::Tag::Derived:
        case UncertaintyKind::Tag::Consolidated:
            return robust_value(*kind.measure, t, x);
        case UncertaintyKind::Tag::MeanBand: {
            if (kind.band_eps.size() != tree.count(t))
                throw ValidationError("band width must assign one value per conditioning atom");
            AdaptedVector cap = tail_sum_conditional(tree, x, s);
            AdaptedVector eps;
            eps.time = t;
            eps.values = kind.band_eps;
            return evaluate_one_step(rho, tree, cap + lift(tree, eps));
        }
        case UncertaintyKind::Tag::AdversarialOrder: {
            require_mean_zero_eta(tree, kind, s);
            AdaptedVector base = worst_case(*kind.base, rho, tree, x, t, seed);
            AdaptedVector eps = tolerance_eval(kind.base->rule, tree, x, s);
            AdaptedVector mean = conditional_expectation_step(tree, xs);
            AdaptedVector w = xs;
            for (std::size_t c = 0; c < w.values.size(); ++c)
                w.values[c] += eps[tree.parent(s, c)] + kind.delta * kind.eta[c];
            AdaptedVector switched = evaluate_one_step(rho, tree, w);
            AdaptedVector out = base;
            for (std::size_t i = 0; i < out.values.size(); ++i)
                if (mean[i] < kind.threshold) out.values[i] = switched[i];
            return out;
        }
        case UncertaintyKind::Tag::AdversarialTranslation:
            // Both regions produce the base's robust value (the consolidated
            // set shares it by construction).
            return worst_case(*kind.base, rho, tree, x, t, seed);
    }
    throw StructuralError("unknown uncertainty kind");
}

bool max_member(const UncertaintyKind& kind, const ScenarioTree& tree, const AdaptedProcess& x,
                int t, AdaptedVector& out) {
    const int s = t + 1;
    const AdaptedVector& xs = x.at(s);
    switch (kind.tag) {
        case UncertaintyKind::Tag::Identity:
            out = xs;
            return true;
        case UncertaintyKind::Tag::SupNormBall:
            out = xs + lift(tree, tolerance_eval(kind.rule, tree, x, s));
            return true;
        case UncertaintyKind::Tag::MeanBand: {
            if (kind.band_eps.size() != tree.count(t)) return false;
            AdaptedVector eps;
            eps.time = t;
            eps.values = kind.band_eps;
            out = tail_sum_conditional(tree, x, s) + lift(tree, eps);
            return true;
        }
        case UncertaintyKind::Tag::AdversarialOrder: {
            AdaptedVector eps = tolerance_eval(kind.base->rule, tree, x, s);
            AdaptedVector mean = conditional_expectation_step(tree, xs);
            out = xs;
            for (std::size_t c = 0; c < out.values.size(); ++c) {
                std::size_t i = tree.parent(s, c);
                out.values[c] += eps[i];
                if (mean[i] < kind.threshold) out.values[c] += kind.delta * kind.eta[c];
            }
            return true;
        }
        default:
            return false;
    }
}

} // namespace dynrisk
