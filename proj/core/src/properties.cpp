#include "dynrisk/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dynrisk/distance.hpp"

namespace dynrisk {

namespace {

// Probe comparisons allow for the iterative worst-case solvers' residual.
constexpr double kProbeTol = 1e-6;

AdaptedVector lift(const ScenarioTree& tree, const AdaptedVector& v) {
    AdaptedVector out = zero_vector(tree, v.time + 1);
    for (std::size_t c = 0; c < out.values.size(); ++c)
        out.values[c] = v[tree.parent(v.time + 1, c)];
    return out;
}

double uniform_rounded(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return std::round(d(rng) * 1e6) / 1e6;
}

AdaptedVector random_vector(const ScenarioTree& tree, int t, std::mt19937_64& rng, double lo,
                            double hi) {
    AdaptedVector out = zero_vector(tree, t);
    for (double& v : out.values) v = uniform_rounded(rng, lo, hi);
    return out;
}

AdaptedProcess add(const AdaptedProcess& a, const AdaptedProcess& b) {
    AdaptedProcess out = a;
    for (int t = 0; t <= a.horizon(); ++t) out.at(t) = a.at(t) + b.at(t);
    return out;
}

AdaptedProcess scale(double lambda, const AdaptedProcess& a) {
    AdaptedProcess out = a;
    for (int t = 0; t <= a.horizon(); ++t) out.at(t) = lambda * a.at(t);
    return out;
}

// Argument with the time-s component bumped by R_s (recentered for the weak
// notions) and everything after s zeroed.
AdaptedProcess substituted(const RobustRiskMeasure& r, const AdaptedProcess& x, int s,
                           bool recenter) {
    AdaptedProcess out = x;
    AdaptedVector v = robust_value(r, s, x);
    if (recenter) v = v - zero_value(r, s);
    out.at(s) = out.at(s) + v;
    for (int i = s + 1; i <= x.horizon(); ++i) out.at(i) = zero_vector(r.tree, i);
    return out;
}

// Risk kinds used as worst-case probes when two sets are compared. The
// iterative solvers are only trusted at kProbeTol, so the noisy combinations
// are left out per kind.
std::vector<RiskKind> probe_panel(const UncertaintyKind& kind) {
    switch (kind.tag) {
        case UncertaintyKind::Tag::WassersteinBall:
            return {RiskKind::expectation()};
        case UncertaintyKind::Tag::KLBall:
            return {RiskKind::expectation(), RiskKind::worst_case()};
        default:
            return {RiskKind::expectation(), RiskKind::cvar(0.5), RiskKind::cvar(0.9),
                    RiskKind::worst_case()};
    }
}

bool kind_has_rule(const UncertaintyKind& kind) {
    switch (kind.tag) {
        case UncertaintyKind::Tag::SupNormBall:
        case UncertaintyKind::Tag::WassersteinBall:
        case UncertaintyKind::Tag::KLBall:
            return true;
        default:
            return false;
    }
}

// Per-block permutation of the time-t values (law-preserving when the block
// probabilities are uniform; useful membership probes either way).
AdaptedVector permuted_within_parents(const ScenarioTree& tree, const AdaptedVector& v,
                                      std::mt19937_64& rng) {
    AdaptedVector out = v;
    const int t = v.time;
    for (std::size_t i = 0; i < tree.count(t - 1); ++i) {
        std::vector<std::size_t> kids = tree.child_indices(t - 1, i);
        std::shuffle(kids.begin(), kids.end(), rng);
        const auto& orig = tree.child_indices(t - 1, i);
        for (std::size_t k = 0; k < kids.size(); ++k) out.values[orig[k]] = v[kids[k]];
    }
    return out;
}

// Conditionally mean-zero tilt scaled per block: lands inside value-bound
// sets (consolidated, mean bands) while escaping sup-norm balls.
AdaptedVector mean_zero_tilt(const ScenarioTree& tree, int t, double magnitude,
                             std::mt19937_64& rng) {
    AdaptedVector out = zero_vector(tree, t);
    for (std::size_t i = 0; i < tree.count(t - 1); ++i) {
        const auto& kids = tree.child_indices(t - 1, i);
        if (kids.size() < 2) continue;
        double mean = 0.0;
        for (std::size_t c : kids) {
            out.values[c] = uniform_rounded(rng, -1.0, 1.0);
            mean += tree.cond_prob(t, c) * out.values[c];
        }
        double peak = 0.0;
        for (std::size_t c : kids) {
            out.values[c] -= mean;
            peak = std::max(peak, std::abs(out.values[c]));
        }
        if (peak > 0.0)
            for (std::size_t c : kids) out.values[c] *= magnitude / peak;
    }
    return out;
}

// Membership probes for comparing time-t sets built from the given argument
// processes: centers, ball boundaries (both just inside and just outside),
// pointwise maxima, block permutations, mean-zero tilts, random boxes.
std::vector<AdaptedVector> gen_candidates(const UncertaintyKind& kind, const ScenarioTree& tree,
                                          int t, const std::vector<const AdaptedProcess*>& args,
                                          std::mt19937_64& rng, int total) {
    std::vector<AdaptedVector> out;
    for (const AdaptedProcess* a : args) {
        const AdaptedVector& c = a->at(t);
        out.push_back(c);
        double scale_eps = 0.1;
        if (kind_has_rule(kind)) {
            AdaptedVector eps = lift(tree, tolerance_eval(kind.rule, tree, *a, t));
            out.push_back(c + eps);
            out.push_back(c - eps);
            out.push_back(c + eps + 1e-7);
            out.push_back(c + 0.5 * eps);
            double m = 0.0;
            for (double e : eps.values) m = std::max(m, e);
            scale_eps = std::max(scale_eps, m);
        }
        AdaptedVector mm;
        if (t >= 1 && max_member(kind, tree, *a, t - 1, mm)) {
            out.push_back(mm);
            out.push_back(mm + 1e-7);
            out.push_back(mm - 0.05);
        }
        out.push_back(permuted_within_parents(tree, c, rng));
        out.push_back(permuted_within_parents(tree, c, rng));
        out.push_back(c + mean_zero_tilt(tree, t, 2.0 * scale_eps, rng));
        out.push_back(c + mean_zero_tilt(tree, t, 0.5 * scale_eps, rng));
    }
    const AdaptedVector& base = args.front()->at(t);
    const double spreads[] = {0.05, 0.25, 0.6};
    std::size_t k = 0;
    while (static_cast<int>(out.size()) < total) {
        double s = spreads[k++ % 3];
        out.push_back(base + random_vector(tree, t, rng, -s, s));
    }
    return out;
}

struct Comparison {
    bool mismatch = false;
    double gap = 0.0;
    std::string detail;
    AdaptedVector witness;
    bool has_witness = false;
};

// Compare u_t built from (kindA, xA) against (kindB, xB). two_sided demands
// equality, otherwise A subset-of B.
Comparison compare_sets(const UncertaintyKind& kindA, const AdaptedProcess& xA,
                        const UncertaintyKind& kindB, const AdaptedProcess& xB,
                        const ScenarioTree& tree, int t, bool two_sided, std::mt19937_64& rng,
                        int probes) {
    Comparison cmp;
    std::vector<const AdaptedProcess*> args{&xA, &xB};
    std::vector<AdaptedVector> cands = gen_candidates(kindA, tree, t, args, rng, probes);
    for (const AdaptedVector& c : cands) {
        std::vector<bool> fa = contains(kindA, tree, c, xA, t);
        std::vector<bool> fb = contains(kindB, tree, c, xB, t);
        for (std::size_t i = 0; i < fa.size(); ++i) {
            bool bad = two_sided ? (fa[i] != fb[i]) : (fa[i] && !fb[i]);
            if (bad) {
                cmp.mismatch = true;
                cmp.witness = c;
                cmp.has_witness = true;
                std::ostringstream os;
                os << "membership flag differs at time " << t << ", block " << i
                   << (fa[i] ? " (member of lhs only)" : " (member of rhs only)");
                cmp.detail = os.str();
                return cmp;
            }
        }
    }
    if (t >= 1 && t <= tree.horizon()) {
        for (const RiskKind& rho : probe_panel(kindA)) {
            AdaptedVector wa = worst_case(kindA, rho, tree, xA, t - 1);
            AdaptedVector wb = worst_case(kindB, rho, tree, xB, t - 1);
            for (std::size_t i = 0; i < wa.values.size(); ++i) {
                double g = two_sided ? std::abs(wa[i] - wb[i]) : (wa[i] - wb[i]);
                if (g > kProbeTol) {
                    cmp.mismatch = true;
                    cmp.gap = g;
                    std::ostringstream os;
                    os << "worst-case probe differs at time " << t << ", block " << i << " by "
                       << g;
                    cmp.detail = os.str();
                    return cmp;
                }
            }
        }
    }
    return cmp;
}

// Does u_t(yproc) contain a member dominating z on the children of block
// (t-1, i)? Exact per kind; the enumeration path is used for the law-matching
// kinds.
bool dominating_member_exists(const UncertaintyKind& kind, const ScenarioTree& tree,
                              const AdaptedProcess& yproc, int t, std::size_t i,
                              const AdaptedVector& z) {
    const double tol = tolerance();
    const AdaptedVector& yt = yproc.at(t);
    switch (kind.tag) {
        case UncertaintyKind::Tag::Identity:
        case UncertaintyKind::Tag::SupNormBall:
        case UncertaintyKind::Tag::MeanBand:
        case UncertaintyKind::Tag::AdversarialOrder: {
            AdaptedVector m;
            if (!max_member(kind, tree, yproc, t - 1, m)) return false;
            for (std::size_t c : tree.child_indices(t - 1, i))
                if (z[c] > m[c] + tol) return false;
            return true;
        }
        case UncertaintyKind::Tag::WassersteinBall: {
            AdaptedVector eps = tolerance_eval(kind.rule, tree, yproc, t);
            double excess = wasserstein_excess(conditional_law(tree, z, i),
                                               conditional_law(tree, yt, i), kind.p);
            return excess <= eps[i] + tol;
        }
        case UncertaintyKind::Tag::KLBall:
        case UncertaintyKind::Tag::MeasureFamily: {
            // Enumerate per-child assignments from the block's value support;
            // feasibility is delegated to the membership test itself.
            const auto& kids = tree.child_indices(t - 1, i);
            std::vector<double> support;
            for (std::size_t c : kids) support.push_back(yt[c]);
            std::sort(support.begin(), support.end());
            support.erase(std::unique(support.begin(), support.end()), support.end());
            std::vector<std::vector<double>> allowed(kids.size());
            for (std::size_t k = 0; k < kids.size(); ++k) {
                for (double v : support)
                    if (v >= z[kids[k]] - tol) allowed[k].push_back(v);
                if (allowed[k].empty()) return false;
            }
            double combos = 1.0;
            for (const auto& a : allowed) combos *= static_cast<double>(a.size());
            if (combos > 200000.0)
                throw ValidationError("order-domination enumeration too large for this block");
            AdaptedVector w = yt;
            std::vector<std::size_t> idx(kids.size(), 0);
            while (true) {
                for (std::size_t k = 0; k < kids.size(); ++k) w.values[kids[k]] = allowed[k][idx[k]];
                if (contains(kind, tree, w, yproc, t)[i]) return true;
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == allowed[k].size()) idx[k++] = 0;
                if (k == idx.size()) return false;
            }
        }
        case UncertaintyKind::Tag::Derived: {
            const RobustRiskMeasure& r = *kind.measure;
            if (t == tree.horizon())
                return dominating_member_exists(r.base.at_time(t), tree, yproc, t, i, z);
            AdaptedProcess shifted = yproc;
            shifted.at(t) = yproc.at(t) + robust_value(r, t, yproc) - zero_value(r, t);
            return dominating_member_exists(r.base.at_time(t), tree, shifted, t, i, z);
        }
        case UncertaintyKind::Tag::Consolidated: {
            // Level set of a monotone rho: a dominating member exists iff z
            // itself is feasible.
            const RobustRiskMeasure& r = *kind.measure;
            AdaptedVector bound = robust_value(r, t - 1, yproc);
            AdaptedVector rho_z = evaluate_one_step(r.family.at(t - 1), tree, z);
            return rho_z[i] <= bound[i] + tol;
        }
        case UncertaintyKind::Tag::AdversarialTranslation: {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t c : tree.child_indices(t - 1, i)) m = std::max(m, yt[c]);
            if (m <= kind.threshold)
                return dominating_member_exists(*kind.base, tree, yproc, t, i, z);
            const RobustRiskMeasure& r = *kind.measure;
            AdaptedVector bound = robust_value(r, t - 1, yproc);
            AdaptedVector rho_z = evaluate_one_step(r.family.at(t - 1), tree, z);
            return rho_z[i] <= bound[i] + tol;
        }
    }
    return false;
}

Verdict corroborated(int trials) {
    Verdict v;
    v.status = trials > 0 ? Verdict::Status::Corroborated : Verdict::Status::Vacuous;
    v.trials = trials;
    return v;
}

void fail(Verdict& v, int trial, const AdaptedProcess& x, int t, const std::string& detail,
          double gap = 0.0) {
    v.status = Verdict::Status::Counterexample;
    v.trial_index = trial;
    v.witness_x = x;
    v.time = t;
    v.detail = detail;
    v.gap = gap;
}

std::string atom_msg(const char* what, int t, std::size_t i, double gap) {
    std::ostringstream os;
    os << what << " violated at time " << t << ", atom " << i << " by " << gap;
    return os.str();
}

} // namespace

bool order_dominated(const UncertaintyKind& kind, const ScenarioTree& tree,
                     const AdaptedProcess& y, int t, std::size_t block, const AdaptedVector& z) {
    return dominating_member_exists(kind, tree, y, t, block, z);
}

AdaptedProcess random_process(const ScenarioTree& tree, std::mt19937_64& rng, double lo,
                              double hi) {
    AdaptedProcess x = AdaptedProcess::zero(tree);
    for (int t = 1; t <= tree.horizon(); ++t) x.at(t) = random_vector(tree, t, rng, lo, hi);
    return x;
}

// ---------------------------------------------------------------------------
// Measure-level axioms
// ---------------------------------------------------------------------------

Verdict check_measure_property(const RobustRiskMeasure& r, MeasureProperty id,
                               const CheckSpec& spec) {
    const ScenarioTree& tree = r.tree;
    const int T = tree.horizon();
    std::mt19937_64 rng(spec.seed);
    const double tol = tolerance();
    Verdict v = corroborated(0);

    if (id == MeasureProperty::Normalised) {
        for (int t = 0; t < T; ++t) {
            const AdaptedVector& z = zero_value(r, t);
            for (std::size_t i = 0; i < z.values.size(); ++i)
                if (std::abs(z[i]) > tol) {
                    fail(v, 0, AdaptedProcess::zero(tree), t,
                         atom_msg("value at the zero process nonzero", t, i, std::abs(z[i])),
                         std::abs(z[i]));
                    return v;
                }
        }
        return corroborated(T);
    }

    for (int trial = 0; trial < spec.trials; ++trial) {
        AdaptedProcess x = random_process(tree, rng, spec.value_lo, spec.value_hi);
        switch (id) {
            case MeasureProperty::Normalised:
                break; // handled above
            case MeasureProperty::Monotone: {
                AdaptedProcess y = x;
                for (int t = 1; t <= T; ++t)
                    y.at(t) = y.at(t) + random_vector(tree, t, rng, 0.0, 0.5);
                for (int t = 0; t < T; ++t) {
                    AdaptedVector a = robust_value(r, t, x), b = robust_value(r, t, y);
                    for (std::size_t i = 0; i < a.values.size(); ++i)
                        if (a[i] > b[i] + tol) {
                            fail(v, trial, x, t, atom_msg("monotonicity", t, i, a[i] - b[i]),
                                 a[i] - b[i]);
                            v.witness_y = y;
                            v.has_y = true;
                            return v;
                        }
                }
                break;
            }
            case MeasureProperty::TranslationInvariant: {
                std::uniform_int_distribution<int> pick(0, T - 1);
                int t = pick(rng);
                AdaptedVector z = random_vector(tree, t, rng, spec.value_lo, spec.value_hi);
                AdaptedProcess y = x;
                y.at(t + 1) = y.at(t + 1) + lift(tree, z);
                AdaptedVector a = robust_value(r, t, y);
                AdaptedVector b = robust_value(r, t, x) + z;
                for (std::size_t i = 0; i < a.values.size(); ++i)
                    if (std::abs(a[i] - b[i]) > tol) {
                        fail(v, trial, x, t,
                             atom_msg("translation invariance", t, i, std::abs(a[i] - b[i])),
                             std::abs(a[i] - b[i]));
                        v.witness_y = y;
                        v.has_y = true;
                        return v;
                    }
                break;
            }
            case MeasureProperty::Local: {
                AdaptedProcess y = random_process(tree, rng, spec.value_lo, spec.value_hi);
                std::uniform_int_distribution<int> pick(0, T - 1);
                int t = pick(rng);
                EventSet B;
                B.time = t;
                B.members.resize(tree.count(t));
                bool anyin = false, anyout = false;
                for (std::size_t i = 0; i < B.members.size(); ++i) {
                    B.members[i] = (rng() & 1u) != 0;
                    (B.members[i] ? anyin : anyout) = true;
                }
                if (!anyin || !anyout) break;
                AdaptedProcess m = mix(tree, B, x, y);
                AdaptedVector rm = robust_value(r, t, m);
                AdaptedVector rx = robust_value(r, t, x), ry = robust_value(r, t, y);
                for (std::size_t i = 0; i < rm.values.size(); ++i) {
                    double want = B.members[i] ? rx[i] : ry[i];
                    if (std::abs(rm[i] - want) > tol) {
                        fail(v, trial, x, t, atom_msg("locality", t, i, std::abs(rm[i] - want)),
                             std::abs(rm[i] - want));
                        v.witness_y = y;
                        v.has_y = true;
                        return v;
                    }
                }
                break;
            }
            case MeasureProperty::PositiveHomogeneous:
            case MeasureProperty::StarShaped: {
                double lo = 0.0, hi = id == MeasureProperty::StarShaped ? 1.0 : 2.0;
                double lambda = uniform_rounded(rng, lo, hi);
                if (lambda <= 0.0) lambda = 0.5;
                AdaptedProcess y = scale(lambda, x);
                for (int t = 0; t < T; ++t) {
                    AdaptedVector a = robust_value(r, t, y);
                    AdaptedVector b = lambda * robust_value(r, t, x);
                    if (id == MeasureProperty::StarShaped)
                        b = b + (1.0 - lambda) * zero_value(r, t);
                    for (std::size_t i = 0; i < a.values.size(); ++i) {
                        double g = id == MeasureProperty::StarShaped ? a[i] - b[i]
                                                                     : std::abs(a[i] - b[i]);
                        if (g > tol) {
                            fail(v, trial, x, t, atom_msg("scaling", t, i, g), g);
                            v.lambda = lambda;
                            return v;
                        }
                    }
                }
                break;
            }
            case MeasureProperty::Convex: {
                AdaptedProcess y = random_process(tree, rng, spec.value_lo, spec.value_hi);
                double lambda = uniform_rounded(rng, 0.0, 1.0);
                AdaptedProcess m = add(scale(lambda, x), scale(1.0 - lambda, y));
                for (int t = 0; t < T; ++t) {
                    AdaptedVector a = robust_value(r, t, m);
                    AdaptedVector b =
                        lambda * robust_value(r, t, x) + (1.0 - lambda) * robust_value(r, t, y);
                    for (std::size_t i = 0; i < a.values.size(); ++i)
                        if (a[i] > b[i] + tol) {
                            fail(v, trial, x, t, atom_msg("convexity", t, i, a[i] - b[i]),
                                 a[i] - b[i]);
                            v.witness_y = y;
                            v.has_y = true;
                            v.lambda = lambda;
                            return v;
                        }
                }
                break;
            }
            case MeasureProperty::SubAdditive: {
                AdaptedProcess y = random_process(tree, rng, spec.value_lo, spec.value_hi);
                AdaptedProcess m = add(x, y);
                for (int t = 0; t < T; ++t) {
                    AdaptedVector a = robust_value(r, t, m);
                    AdaptedVector b = robust_value(r, t, x) + robust_value(r, t, y);
                    for (std::size_t i = 0; i < a.values.size(); ++i)
                        if (a[i] > b[i] + tol) {
                            fail(v, trial, x, t, atom_msg("sub-additivity", t, i, a[i] - b[i]),
                                 a[i] - b[i]);
                            v.witness_y = y;
                            v.has_y = true;
                            return v;
                        }
                }
                break;
            }
            case MeasureProperty::AcceptanceZeroIdentity: {
                for (int t = 0; t < T; ++t) {
                    const AdaptedVector& z = zero_value(r, t);
                    for (std::size_t i = 0; i < z.values.size(); ++i)
                        if (std::abs(z[i]) > tol) {
                            fail(v, trial, AdaptedProcess::zero(tree), t,
                                 atom_msg("zero value nonzero", t, i, std::abs(z[i])),
                                 std::abs(z[i]));
                            return v;
                        }
                }
                std::uniform_int_distribution<int> pick(0, T - 1);
                int t = pick(rng);
                AdaptedVector y = random_vector(tree, t + 1, rng, spec.value_lo, spec.value_hi);
                AdaptedProcess zero = AdaptedProcess::zero(tree);
                std::vector<bool> cons = consolidated_contains(r, t + 1, y, zero);
                std::vector<bool> acc = acceptance_indicator(r.family.at(t), tree, y);
                for (std::size_t i = 0; i < cons.size(); ++i)
                    if (cons[i] != acc[i]) {
                        fail(v, trial, zero, t + 1,
                             atom_msg("zero-set/acceptance-set identity", t + 1, i, 0.0));
                        v.witness_member = y;
                        v.has_member = true;
                        return v;
                    }
                break;
            }
        }
    }
    return corroborated(spec.trials);
}

// ---------------------------------------------------------------------------
// Set-level axioms
// ---------------------------------------------------------------------------

Verdict check_set_property(const RobustRiskMeasure& r, SetProperty id, const CheckSpec& spec) {
    const ScenarioTree& tree = r.tree;
    const int T = tree.horizon();
    std::mt19937_64 rng(spec.seed);
    const double tol = tolerance();
    Verdict v = corroborated(0);
    std::uniform_int_distribution<int> pick_t(1, T);
    int executed = 0;

    for (int trial = 0; trial < spec.trials; ++trial) {
        AdaptedProcess x = random_process(tree, rng, spec.value_lo, spec.value_hi);
        int t = pick_t(rng);
        const UncertaintyKind& kind = r.set.at_time(t);
        ++executed;
        switch (id) {
            case SetProperty::Proper: {
                for (const RiskKind& rho : probe_panel(kind)) {
                    AdaptedVector w = worst_case(kind, rho, tree, x, t - 1);
                    for (std::size_t i = 0; i < w.values.size(); ++i)
                        if (!std::isfinite(w[i])) {
                            fail(v, trial, x, t, atom_msg("finite worst case", t - 1, i, 0.0));
                            return v;
                        }
                }
                AdaptedVector m;
                if (max_member(kind, tree, x, t - 1, m)) {
                    std::vector<bool> f = contains(kind, tree, m, x, t);
                    for (std::size_t i = 0; i < f.size(); ++i)
                        if (!f[i]) {
                            fail(v, trial, x, t,
                                 atom_msg("pointwise maximum is a member", t, i, 0.0));
                            v.witness_member = m;
                            v.has_member = true;
                            return v;
                        }
                }
                break;
            }
            case SetProperty::Normalised: {
                AdaptedProcess zero = AdaptedProcess::zero(tree);
                std::vector<bool> f0 = contains(kind, tree, zero_vector(tree, t), zero, t);
                for (std::size_t i = 0; i < f0.size(); ++i)
                    if (!f0[i]) {
                        fail(v, trial, zero, t, atom_msg("zero-set contains zero", t, i, 0.0));
                        return v;
                    }
                std::vector<AdaptedVector> cands{constant_vector(tree, t, 0.05),
                                                 constant_vector(tree, t, -0.05),
                                                 constant_vector(tree, t, -0.2),
                                                 random_vector(tree, t, rng, -0.3, 0.3),
                                                 mean_zero_tilt(tree, t, 0.1, rng)};
                for (const AdaptedVector& c : cands) {
                    std::vector<bool> f = contains(kind, tree, c, zero, t);
                    for (std::size_t i = 0; i < f.size(); ++i) {
                        if (!f[i]) continue;
                        double peak = 0.0;
                        for (std::size_t k : tree.child_indices(t - 1, i))
                            peak = std::max(peak, std::abs(c[k]));
                        if (peak > 10.0 * tol) {
                            fail(v, trial, zero, t,
                                 atom_msg("zero-set holds a nonzero member", t, i, peak), peak);
                            v.witness_member = c;
                            v.has_member = true;
                            return v;
                        }
                    }
                }
                break;
            }
            case SetProperty::OrderPreserving: {
                AdaptedProcess y = x;
                for (int s = 1; s <= T; ++s)
                    y.at(s) = y.at(s) + random_vector(tree, s, rng, 0.0, 0.4);
                std::vector<const AdaptedProcess*> args{&x, &y};
                std::vector<AdaptedVector> cands =
                    gen_candidates(kind, tree, t, args, rng, spec.member_probes);
                for (const AdaptedVector& z : cands) {
                    std::vector<bool> member = contains(kind, tree, z, x, t);
                    for (std::size_t i = 0; i < member.size(); ++i) {
                        if (!member[i]) continue;
                        if (!dominating_member_exists(kind, tree, y, t, i, z)) {
                            fail(v, trial, x, t,
                                 atom_msg("order preservation (no dominating member)", t, i, 0.0));
                            v.witness_y = y;
                            v.has_y = true;
                            v.witness_member = z;
                            v.has_member = true;
                            return v;
                        }
                    }
                }
                break;
            }
            case SetProperty::Monotone: {
                AdaptedProcess y = x;
                for (int s = 1; s <= T; ++s)
                    y.at(s) = y.at(s) + random_vector(tree, s, rng, 0.0, 0.4);
                Comparison cmp =
                    compare_sets(kind, x, kind, y, tree, t, false, rng, spec.member_probes);
                if (cmp.mismatch) {
                    fail(v, trial, x, t, "set inclusion under pointwise order: " + cmp.detail,
                         cmp.gap);
                    v.witness_y = y;
                    v.has_y = true;
                    if (cmp.has_witness) {
                        v.witness_member = cmp.witness;
                        v.has_member = true;
                    }
                    return v;
                }
                break;
            }
            case SetProperty::TranslationInvariant: {
                AdaptedVector z = random_vector(tree, t - 1, rng, spec.value_lo, spec.value_hi);
                AdaptedVector zl = lift(tree, z);
                AdaptedProcess y = x;
                y.at(t) = y.at(t) + zl;
                std::vector<const AdaptedProcess*> args{&y, &x};
                std::vector<AdaptedVector> cands =
                    gen_candidates(kind, tree, t, args, rng, spec.member_probes);
                for (AdaptedVector& c : cands) {
                    std::vector<bool> fa = contains(kind, tree, c, y, t);
                    std::vector<bool> fb = contains(kind, tree, c - zl, x, t);
                    for (std::size_t i = 0; i < fa.size(); ++i)
                        if (fa[i] != fb[i]) {
                            fail(v, trial, x, t,
                                 atom_msg("translation invariance of the set", t, i, 0.0));
                            v.witness_y = y;
                            v.has_y = true;
                            v.witness_member = c;
                            v.has_member = true;
                            return v;
                        }
                }
                for (const RiskKind& rho : probe_panel(kind)) {
                    AdaptedVector wa = worst_case(kind, rho, tree, y, t - 1);
                    AdaptedVector wb = worst_case(kind, rho, tree, x, t - 1) + z;
                    for (std::size_t i = 0; i < wa.values.size(); ++i)
                        if (std::abs(wa[i] - wb[i]) > kProbeTol) {
                            fail(v, trial, x, t,
                                 atom_msg("translated worst case", t - 1, i,
                                          std::abs(wa[i] - wb[i])),
                                 std::abs(wa[i] - wb[i]));
                            v.witness_y = y;
                            v.has_y = true;
                            return v;
                        }
                }
                break;
            }
            case SetProperty::Static: {
                AdaptedProcess head = x.slice(tree, t, t);
                Comparison cmp =
                    compare_sets(kind, x, kind, head, tree, t, true, rng,
                                 spec.member_probes);
                if (cmp.mismatch) {
                    fail(v, trial, x, t, "set depends on the tail: " + cmp.detail, cmp.gap);
                    if (cmp.has_witness) {
                        v.witness_member = cmp.witness;
                        v.has_member = true;
                    }
                    return v;
                }
                break;
            }
            case SetProperty::Local: {
                EventSet B;
                B.time = t - 1;
                B.members.resize(tree.count(t - 1));
                bool anyin = false, anyout = false;
                for (std::size_t i = 0; i < B.members.size(); ++i) {
                    B.members[i] = (rng() & 1u) != 0;
                    (B.members[i] ? anyin : anyout) = true;
                }
                if (!anyin || !anyout) {
                    --executed;
                    break;
                }
                AdaptedProcess masked = mix(tree, B, x, AdaptedProcess::zero(tree));
                std::vector<const AdaptedProcess*> args{&x, &masked};
                std::vector<AdaptedVector> cands =
                    gen_candidates(kind, tree, t, args, rng, spec.member_probes);
                for (const AdaptedVector& c : cands) {
                    std::vector<bool> lhs = contains(kind, tree, c, masked, t);
                    std::vector<bool> inx = contains(kind, tree, c, x, t);
                    for (std::size_t i = 0; i < lhs.size(); ++i) {
                        bool rhs;
                        if (B.members[i]) {
                            rhs = inx[i];
                        } else {
                            rhs = true;
                            for (std::size_t k : tree.child_indices(t - 1, i))
                                if (std::abs(c[k]) > tol) rhs = false;
                        }
                        if (lhs[i] != rhs) {
                            fail(v, trial, x, t,
                                 atom_msg("masked-argument locality", t, i, 0.0));
                            v.witness_member = c;
                            v.has_member = true;
                            return v;
                        }
                    }
                }
                break;
            }
            case SetProperty::PositiveHomogeneous:
            case SetProperty::StarShaped: {
                double hi = id == SetProperty::StarShaped ? 1.0 : 2.0;
                double lambda = uniform_rounded(rng, 0.1, hi);
                AdaptedProcess y = scale(lambda, x);
                std::vector<const AdaptedProcess*> args{&y, &x};
                std::vector<AdaptedVector> cands =
                    gen_candidates(kind, tree, t, args, rng, spec.member_probes);
                bool two_sided = id == SetProperty::PositiveHomogeneous;
                for (const AdaptedVector& c : cands) {
                    std::vector<bool> fa = contains(kind, tree, c, y, t);
                    std::vector<bool> fb = contains(kind, tree, (1.0 / lambda) * c, x, t);
                    for (std::size_t i = 0; i < fa.size(); ++i) {
                        bool bad = two_sided ? (fa[i] != fb[i]) : (fa[i] && !fb[i]);
                        if (bad) {
                            fail(v, trial, x, t, atom_msg("scaling of the set", t, i, 0.0));
                            v.lambda = lambda;
                            v.witness_member = c;
                            v.has_member = true;
                            return v;
                        }
                    }
                }
                break;
            }
        }
    }
    return corroborated(executed);
}

// ---------------------------------------------------------------------------
// Time consistency
// ---------------------------------------------------------------------------

namespace {

// Numeric (measure or consolidated level) comparison loops. At the
// consolidated level the set index t in {1..T-1} maps to values at t-1 and
// splits s in {t..T-1}; at the measure level t in {0..T-2}, s in {t+1..T-1}.
struct NumericRanges {
    int t_lo, t_hi;       // inclusive, set/measure index
    int eval_shift;       // evaluate robust_value at t + eval_shift
    int s_lo_shift;       // s starts at t + s_lo_shift
};

NumericRanges ranges_for(Level level, int T) {
    if (level == Level::Consolidated) return {1, T - 1, -1, 0};
    return {0, T - 2, 0, 1};
}

} // namespace

Verdict check_time_consistency(const RobustRiskMeasure& r, TimeConsistency id, Level level,
                               const CheckSpec& spec) {
    const ScenarioTree& tree = r.tree;
    const int T = tree.horizon();
    std::mt19937_64 rng(spec.seed);
    const double tol = tolerance();
    Verdict v = corroborated(0);
    int executed = 0;

    if (id == TimeConsistency::Prudent && level == Level::Measure)
        throw ValidationError(
            "prudence is defined on uncertainty sets; check it at the set or consolidated level");

    // -- set level: sampled membership --------------------------------------
    if (level == Level::Set) {
        std::uniform_int_distribution<int> pick_t(1, std::max(1, T - 1));
        for (int trial = 0; trial < spec.trials; ++trial) {
            AdaptedProcess x = random_process(tree, rng, spec.value_lo, spec.value_hi);
            switch (id) {
                case TimeConsistency::Strong:
                case TimeConsistency::WeakRecursive:
                case TimeConsistency::Weak: {
                    if (T < 2) break;
                    int t = pick_t(rng);
                    std::uniform_int_distribution<int> pick_s(t, T - 1);
                    int s = pick_s(rng);
                    bool recenter = id != TimeConsistency::Strong;
                    AdaptedProcess sub = substituted(r, x, s, recenter);
                    const UncertaintyKind& kind = r.set.at_time(t);
                    bool two_sided = id != TimeConsistency::Weak;
                    // Weak asks that members at the substituted argument stay
                    // members at the original one.
                    Comparison cmp = two_sided
                        ? compare_sets(kind, x, kind, sub, tree, t, true, rng,
                                       spec.member_probes)
                        : compare_sets(kind, sub, kind, x, tree, t, false, rng,
                                       spec.member_probes);
                    ++executed;
                    if (cmp.mismatch) {
                        fail(v, trial, x, t, cmp.detail, cmp.gap);
                        v.split = s;
                        v.witness_y = sub;
                        v.has_y = true;
                        if (cmp.has_witness) {
                            v.witness_member = cmp.witness;
                            v.has_member = true;
                        }
                        return v;
                    }
                    break;
                }
                case TimeConsistency::Order: {
                    if (T < 2) break;
                    int t = pick_t(rng);
                    std::uniform_int_distribution<int> pick_s(t, T - 1);
                    int s = pick_s(rng);
                    AdaptedProcess y = x;
                    // Every other trial keeps the tail equal so the premise is
                    // attainable even for sets whose inclusions are thin.
                    if (trial % 2 == 0)
                        for (int u = s + 1; u <= T; ++u)
                            y.at(u) = y.at(u) + random_vector(tree, u, rng, -0.4, 0.4);
                    // Premise: the time-(s+1) set at x sits inside the one at y.
                    Comparison premise =
                        compare_sets(r.set.at_time(s + 1), x, r.set.at_time(s + 1), y, tree,
                                     s + 1, false, rng, spec.member_probes);
                    if (premise.mismatch) break; // premise not corroborated; skip
                    Comparison cmp =
                        compare_sets(r.set.at_time(t), x, r.set.at_time(t), y, tree, t,
                                     false, rng, spec.member_probes);
                    ++executed;
                    if (cmp.mismatch) {
                        fail(v, trial, x, t,
                             "order consistency (premise corroborated on sample): " + cmp.detail,
                             cmp.gap);
                        v.split = s;
                        v.witness_y = y;
                        v.has_y = true;
                        if (cmp.has_witness) {
                            v.witness_member = cmp.witness;
                            v.has_member = true;
                        }
                        return v;
                    }
                    break;
                }
                case TimeConsistency::Rejection: {
                    if (T < 2) break;
                    int t = pick_t(rng);
                    for (int u = t; u <= T; ++u)
                        for (double& val : x.at(u).values) val = std::abs(val);
                    std::vector<bool> premise =
                        contains(r.set.at_time(t + 1), tree, zero_vector(tree, t + 1), x, t + 1);
                    if (std::find(premise.begin(), premise.end(), false) != premise.end()) break;
                    ++executed;
                    std::vector<bool> concl =
                        contains(r.set.at_time(t), tree, zero_vector(tree, t), x, t);
                    for (std::size_t i = 0; i < concl.size(); ++i)
                        if (!concl[i]) {
                            fail(v, trial, x, t, atom_msg("rejection consistency", t, i, 0.0));
                            return v;
                        }
                    break;
                }
                case TimeConsistency::Prudent: {
                    for (int t = 1; t < T; ++t) {
                        AdaptedVector y =
                            x.at(t) + robust_value(r, t, x) - zero_value(r, t);
                        std::vector<bool> f = contains(r.set.at_time(t), tree, y, x, t);
                        ++executed;
                        for (std::size_t i = 0; i < f.size(); ++i)
                            if (!f[i]) {
                                fail(v, trial, x, t, atom_msg("prudence", t, i, 0.0));
                                v.witness_member = y;
                                v.has_member = true;
                                return v;
                            }
                    }
                    std::vector<bool> f = contains(r.set.at_time(T), tree, x.at(T), x, T);
                    ++executed;
                    for (std::size_t i = 0; i < f.size(); ++i)
                        if (!f[i]) {
                            fail(v, trial, x, T, atom_msg("terminal prudence", T, i, 0.0));
                            v.witness_member = x.at(T);
                            v.has_member = true;
                            return v;
                        }
                    break;
                }
            }
        }
        Verdict out = corroborated(executed);
        return out;
    }

    // -- measure / consolidated level: numeric ------------------------------
    NumericRanges rg = ranges_for(level, T);
    for (int trial = 0; trial < spec.trials; ++trial) {
        AdaptedProcess x = random_process(tree, rng, spec.value_lo, spec.value_hi);
        switch (id) {
            case TimeConsistency::Strong:
            case TimeConsistency::WeakRecursive:
            case TimeConsistency::Weak: {
                bool recenter = id != TimeConsistency::Strong;
                for (int t = rg.t_lo; t <= rg.t_hi; ++t) {
                    for (int s = t + rg.s_lo_shift; s <= T - 1; ++s) {
                        AdaptedProcess sub = substituted(r, x, s, recenter);
                        AdaptedVector a = robust_value(r, t + rg.eval_shift, sub);
                        AdaptedVector b = robust_value(r, t + rg.eval_shift, x);
                        ++executed;
                        for (std::size_t i = 0; i < a.values.size(); ++i) {
                            double g = id == TimeConsistency::Weak ? a[i] - b[i]
                                                                   : std::abs(a[i] - b[i]);
                            if (g > tol) {
                                fail(v, trial, x, t,
                                     atom_msg("substituted value", t + rg.eval_shift, i, g), g);
                                v.split = s;
                                v.witness_y = sub;
                                v.has_y = true;
                                return v;
                            }
                        }
                    }
                }
                break;
            }
            case TimeConsistency::Order: {
                for (int t = rg.t_lo; t <= rg.t_hi; ++t) {
                    for (int s = t + rg.s_lo_shift; s <= T - 1; ++s) {
                        AdaptedProcess y = x;
                        for (int u = s + 1; u <= T; ++u)
                            y.at(u) = y.at(u) + random_vector(tree, u, rng, -0.4, 0.4);
                        AdaptedVector rsx = robust_value(r, s, x);
                        AdaptedVector rsy = robust_value(r, s, y);
                        const AdaptedProcess* lo = &x;
                        const AdaptedProcess* hi = &y;
                        bool xley = true, ylex = true;
                        for (std::size_t i = 0; i < rsx.values.size(); ++i) {
                            if (rsx[i] > rsy[i] + tol) xley = false;
                            if (rsy[i] > rsx[i] + tol) ylex = false;
                        }
                        if (!xley && !ylex) continue;
                        if (!xley) std::swap(lo, hi);
                        ++executed;
                        AdaptedVector a = robust_value(r, t + rg.eval_shift, *lo);
                        AdaptedVector b = robust_value(r, t + rg.eval_shift, *hi);
                        for (std::size_t i = 0; i < a.values.size(); ++i)
                            if (a[i] > b[i] + tol) {
                                fail(v, trial, *lo, t,
                                     atom_msg("order consistency", t + rg.eval_shift, i,
                                              a[i] - b[i]),
                                     a[i] - b[i]);
                                v.split = s;
                                v.witness_y = *hi;
                                v.has_y = true;
                                return v;
                            }
                    }
                }
                break;
            }
            case TimeConsistency::Rejection: {
                int first = level == Level::Consolidated ? 1 : 0;
                for (int t = first; t <= T - 1 - (level == Level::Consolidated ? 0 : 1); ++t) {
                    for (int u = t + (level == Level::Consolidated ? 0 : 1); u <= T; ++u)
                        for (double& val : x.at(u).values) val = std::abs(val);
                    int prem_t = level == Level::Consolidated ? t : t + 1;
                    AdaptedVector prem = robust_value(r, prem_t, x);
                    bool ok = true;
                    for (double val : prem.values)
                        if (val < 0.0) ok = false;
                    if (!ok) continue;
                    ++executed;
                    AdaptedVector concl = robust_value(r, t + rg.eval_shift, x);
                    for (std::size_t i = 0; i < concl.values.size(); ++i)
                        if (concl[i] < -tol) {
                            fail(v, trial, x, t,
                                 atom_msg("rejection consistency", t + rg.eval_shift, i,
                                          -concl[i]),
                                 -concl[i]);
                            return v;
                        }
                }
                break;
            }
            case TimeConsistency::Prudent: {
                for (int t = 1; t <= T - 1; ++t) {
                    AdaptedVector y = x.at(t) + robust_value(r, t, x) - zero_value(r, t);
                    AdaptedVector rho_y = evaluate_one_step(r.family.at(t - 1), tree, y);
                    AdaptedVector bound = robust_value(r, t - 1, x);
                    ++executed;
                    for (std::size_t i = 0; i < rho_y.values.size(); ++i)
                        if (rho_y[i] > bound[i] + tol) {
                            fail(v, trial, x, t,
                                 atom_msg("prudence", t - 1, i, rho_y[i] - bound[i]),
                                 rho_y[i] - bound[i]);
                            v.witness_member = y;
                            v.has_member = true;
                            return v;
                        }
                }
                AdaptedVector rho_T = evaluate_one_step(r.family.at(T - 1), tree, x.at(T));
                AdaptedVector bound = robust_value(r, T - 1, x);
                ++executed;
                for (std::size_t i = 0; i < rho_T.values.size(); ++i)
                    if (rho_T[i] > bound[i] + tol) {
                        fail(v, trial, x, T,
                             atom_msg("terminal prudence", T - 1, i, rho_T[i] - bound[i]),
                             rho_T[i] - bound[i]);
                        return v;
                    }
                break;
            }
        }
    }
    return corroborated(executed);
}

// ---------------------------------------------------------------------------
// Implication audit
// ---------------------------------------------------------------------------

TcAudit gather_tc_audit(const RobustRiskMeasure& r, Level level, const CheckSpec& spec) {
    TcAudit a;
    a.strong = check_time_consistency(r, TimeConsistency::Strong, level, spec);
    a.order = check_time_consistency(r, TimeConsistency::Order, level, spec);
    a.rejection = check_time_consistency(r, TimeConsistency::Rejection, level, spec);
    a.weak_recursive = check_time_consistency(r, TimeConsistency::WeakRecursive, level, spec);
    a.weak = check_time_consistency(r, TimeConsistency::Weak, level, spec);
    Level prudent_level = level == Level::Measure ? Level::Consolidated : level;
    a.prudent = check_time_consistency(r, TimeConsistency::Prudent, prudent_level, spec);

    // Integer shifts of the argument by R_s(0) must not move a strongly
    // consistent value.
    {
        const ScenarioTree& tree = r.tree;
        const int T = tree.horizon();
        std::mt19937_64 rng(spec.seed + 1);
        Verdict v = corroborated(0);
        int executed = 0;
        const double tol = tolerance();
        const int ks[] = {-2, -1, 1, 2, 3};
        for (int trial = 0; trial < std::max(1, spec.trials / 5) && !v.counterexample(); ++trial) {
            AdaptedProcess x = random_process(tree, rng, spec.value_lo, spec.value_hi);
            for (int t = 0; t <= T - 2 && !v.counterexample(); ++t) {
                for (int s = t + 1; s <= T - 1; ++s) {
                    int k = ks[(static_cast<std::size_t>(trial) + s) % 5];
                    AdaptedProcess y = x;
                    y.at(s) = y.at(s) + static_cast<double>(k) * zero_value(r, s);
                    AdaptedVector va = robust_value(r, t, y);
                    AdaptedVector vb = robust_value(r, t, x);
                    ++executed;
                    for (std::size_t i = 0; i < va.values.size(); ++i)
                        if (std::abs(va[i] - vb[i]) > tol) {
                            fail(v, trial, x, t,
                                 atom_msg("integer shift by the zero value", t, i,
                                          std::abs(va[i] - vb[i])),
                                 std::abs(va[i] - vb[i]));
                            v.split = s;
                            v.lambda = static_cast<double>(k);
                        }
                    if (v.counterexample()) break;
                }
            }
        }
        if (!v.counterexample()) v = corroborated(executed);
        a.integer_shift = v;
    }

    CheckSpec side = spec;
    side.trials = std::max(50, spec.trials / 5);
    a.normalised = check_measure_property(r, MeasureProperty::Normalised, side).corroborated();
    a.monotone = check_measure_property(r, MeasureProperty::Monotone, side).corroborated();
    a.translation_invariant =
        check_measure_property(r, MeasureProperty::TranslationInvariant, side).corroborated();
    a.zero_nonneg = true;
    a.zero_nonpos = true;
    for (int t = 0; t < r.tree.horizon(); ++t)
        for (double z : zero_value(r, t).values) {
            if (z < -tolerance()) a.zero_nonneg = false;
            if (z > tolerance()) a.zero_nonpos = false;
        }
    return a;
}

std::vector<std::string> audit_implications(const TcAudit& table) {
    TcAudit t = table;
    if (t.mutant_flip_weak_recursive) {
        if (t.weak_recursive.corroborated())
            t.weak_recursive.status = Verdict::Status::Counterexample;
        else if (t.weak_recursive.counterexample())
            t.weak_recursive.status = Verdict::Status::Corroborated;
    }
    std::vector<std::string> out;
    auto yes = [](const Verdict& v) { return v.corroborated(); };
    auto no = [](const Verdict& v) { return v.counterexample(); };

    if (yes(t.strong) && no(t.weak_recursive))
        out.push_back("strong consistency holds but weak recursive consistency fails");
    if (t.normalised && yes(t.weak_recursive) && no(t.strong))
        out.push_back("normalised and weakly recursive, yet strong consistency fails");
    if (yes(t.strong) && no(t.integer_shift))
        out.push_back("strong consistency holds but an integer shift by the zero value moves it");
    if (t.monotone && yes(t.weak_recursive) && no(t.order))
        out.push_back("monotone and weakly recursive, yet order consistency fails");
    if (t.translation_invariant && yes(t.order) && no(t.weak_recursive))
        out.push_back(
            "translation invariant and order consistent, yet weak recursive consistency fails");
    if (t.zero_nonpos && t.monotone && yes(t.weak_recursive) && no(t.weak))
        out.push_back(
            "nonpositive at zero, monotone and weakly recursive, yet weak consistency fails");
    if (t.monotone && t.zero_nonneg && yes(t.weak) && no(t.rejection))
        out.push_back(
            "monotone, nonnegative at zero and weakly consistent, yet rejection consistency fails");
    if (yes(t.prudent) && no(t.rejection))
        out.push_back("prudent, yet rejection consistency fails");
    if (t.normalised && yes(t.order) && no(t.rejection))
        out.push_back("normalised and order consistent, yet rejection consistency fails");
    return out;
}

// ---------------------------------------------------------------------------
// Adversarial equivalents
// ---------------------------------------------------------------------------

DynamicUncertaintySet adversarial_equivalent_set(const RobustRiskMeasure& r,
                                                 AdversarialFlavor flavor) {
    const ScenarioTree& tree = r.tree;
    const int T = tree.horizon();
    auto shared = std::make_shared<RobustRiskMeasure>(r);
    DynamicUncertaintySet out;

    if (flavor == AdversarialFlavor::BreakNormalisation) {
        for (int t = 0; t < T; ++t)
            for (double z : zero_value(r, t).values)
                if (std::abs(z) > tolerance())
                    throw ValidationError(
                        "the normalisation break needs a normalised measure to start from");
        for (int t = 1; t <= T; ++t) out.kinds.push_back(UncertaintyKind::consolidated(shared));
        return out;
    }

    for (int t = 1; t <= T; ++t)
        if (r.set.at_time(t).tag != UncertaintyKind::Tag::SupNormBall)
            throw ValidationError(
                "adversarial wrappers require a sup-norm ball at every time");

    if (flavor == AdversarialFlavor::BreakTranslation) {
        for (int t = 1; t <= T; ++t) {
            auto base = std::make_shared<UncertaintyKind>(r.set.at_time(t));
            out.kinds.push_back(UncertaintyKind::adversarial_translation(base, shared, 0.0));
        }
        return out;
    }

    // BreakOrder: rank-based direction with zero conditional mean per block.
    for (int t = 1; t <= T; ++t) {
        auto base = std::make_shared<UncertaintyKind>(r.set.at_time(t));
        std::vector<double> eta(tree.count(t), 0.0);
        for (std::size_t i = 0; i < tree.count(t - 1); ++i) {
            const auto& kids = tree.child_indices(t - 1, i);
            if (kids.size() < 2) continue;
            double mean = 0.0;
            for (std::size_t k = 0; k < kids.size(); ++k) {
                eta[kids[k]] = static_cast<double>(k);
                mean += tree.cond_prob(t, kids[k]) * eta[kids[k]];
            }
            double peak = 0.0;
            for (std::size_t k : kids) {
                eta[k] -= mean;
                peak = std::max(peak, std::abs(eta[k]));
            }
            for (std::size_t k : kids) eta[k] /= peak;
        }
        out.kinds.push_back(
            UncertaintyKind::adversarial_order(base, shared, 0.0, 0.25, std::move(eta)));
    }
    return out;
}

const char* to_string(SetProperty id) {
    switch (id) {
        case SetProperty::Proper: return "proper";
        case SetProperty::Normalised: return "normalised";
        case SetProperty::OrderPreserving: return "order-preserving";
        case SetProperty::Monotone: return "monotone";
        case SetProperty::TranslationInvariant: return "translation-invariant";
        case SetProperty::Static: return "static";
        case SetProperty::Local: return "local";
        case SetProperty::PositiveHomogeneous: return "positively-homogeneous";
        case SetProperty::StarShaped: return "star-shaped";
    }
    return "?";
}

const char* to_string(MeasureProperty id) {
    switch (id) {
        case MeasureProperty::Normalised: return "normalised";
        case MeasureProperty::Monotone: return "monotone";
        case MeasureProperty::TranslationInvariant: return "translation-invariant";
        case MeasureProperty::Local: return "local";
        case MeasureProperty::PositiveHomogeneous: return "positively-homogeneous";
        case MeasureProperty::StarShaped: return "star-shaped";
        case MeasureProperty::Convex: return "convex";
        case MeasureProperty::SubAdditive: return "sub-additive";
        case MeasureProperty::AcceptanceZeroIdentity: return "zero-set-acceptance-identity";
    }
    return "?";
}

const char* to_string(TimeConsistency id) {
    switch (id) {
        case TimeConsistency::Strong: return "strong";
        case TimeConsistency::Order: return "order";
        case TimeConsistency::Rejection: return "rejection";
        case TimeConsistency::WeakRecursive: return "weak-recursive";
        case TimeConsistency::Weak: return "weak";
        case TimeConsistency::Prudent: return "prudent";
    }
    return "?";
}

const char* to_string(Verdict::Status s) {
    switch (s) {
        case Verdict::Status::Corroborated: return "corroborated";
        case Verdict::Status::Counterexample: return "counterexample";
        case Verdict::Status::Vacuous: return "vacuous";
    }
    return "?";
}

} // namespace dynrisk
