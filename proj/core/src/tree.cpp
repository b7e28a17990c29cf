#include "dynrisk/tree.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

namespace dynrisk {

namespace {
std::atomic<double> g_tolerance{1e-9};
} // namespace

double tolerance() { return g_tolerance.load(); }
void set_tolerance(double tol) { g_tolerance.store(tol); }

ScenarioTree ScenarioTree::build(int horizon, std::vector<AtomSpec> atoms) {
    if (horizon < 1)
        throw ValidationError("horizon must be >= 1");

    ScenarioTree tree;
    tree.horizon_ = horizon;
    tree.slices_.resize(horizon + 1);

    std::stable_sort(atoms.begin(), atoms.end(), [](const AtomSpec& a, const AtomSpec& b) {
        return std::tie(a.time, a.id) < std::tie(b.time, b.id);
    });

    std::vector<std::map<std::string, std::size_t>> index(horizon + 1);
    for (const AtomSpec& a : atoms) {
        if (a.time < 0 || a.time > horizon)
            throw ValidationError("atom '" + a.id + "' has time outside {0.." +
                                  std::to_string(horizon) + "}");
        if (!(a.cond_prob > 0.0) || a.cond_prob > 1.0)
            throw ValidationError("atom '" + a.id +
                                  "': conditional probability must lie in (0, 1]; "
                                  "zero-probability branches make the measure not "
                                  "absolutely continuous w.r.t. base");
        if (!std::isfinite(a.cond_prob))
            throw ValidationError("atom '" + a.id + "': conditional probability not finite");
        auto [it, inserted] = index[a.time].emplace(a.id, tree.slices_[a.time].size());
        if (!inserted)
            throw ValidationError("duplicate atom id '" + a.id + "' at time " +
                                  std::to_string(a.time));
        Node n;
        n.id = a.id;
        n.cond_prob = a.cond_prob;
        tree.slices_[a.time].push_back(std::move(n));
    }

    if (tree.slices_[0].size() != 1)
        throw ValidationError("exactly one atom required at time 0 (F_0 trivial), got " +
                              std::to_string(tree.slices_[0].size()));
    tree.slices_[0][0].cond_prob = 1.0;
    tree.slices_[0][0].path_prob = 1.0;

    // Re-scan input to wire parents (slice order is already fixed).
    for (const AtomSpec& a : atoms) {
        if (a.time == 0)
            continue;
        auto pit = index[a.time - 1].find(a.parent);
        if (pit == index[a.time - 1].end())
            throw ValidationError("atom '" + a.id + "' at time " + std::to_string(a.time) +
                                  " references unknown parent '" + a.parent + "'");
        std::size_t self = index[a.time][a.id];
        std::size_t par = pit->second;
        tree.slices_[a.time][self].parent = par;
        tree.slices_[a.time - 1][par].children.push_back(self);
    }

    for (int t = 1; t <= horizon; ++t) {
        if (tree.slices_[t].empty())
            throw ValidationError("no atoms at time " + std::to_string(t));
        for (std::size_t i = 0; i < tree.slices_[t].size(); ++i) {
            Node& n = tree.slices_[t][i];
            n.path_prob = tree.slices_[t - 1][n.parent].path_prob * n.cond_prob;
        }
    }
    for (int t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < tree.slices_[t].size(); ++i) {
            const Node& n = tree.slices_[t][i];
            if (n.children.empty())
                throw ValidationError("atom '" + n.id + "' at time " + std::to_string(t) +
                                      " has no children");
            double sum = 0.0;
            for (std::size_t c : n.children)
                sum += tree.slices_[t + 1][c].cond_prob;
            if (std::abs(sum - 1.0) > kProbabilitySumTol)
                throw ValidationError("children probabilities of atom '" + n.id + "' at time " +
                                      std::to_string(t) + " sum to " + std::to_string(sum));
        }
    }
    return tree;
}

std::size_t ScenarioTree::parent(int t, std::size_t i) const {
    if (t <= 0)
        throw StructuralError("root atom has no parent");
    return node(t, i).parent;
}

const std::vector<std::size_t>& ScenarioTree::child_indices(int t, std::size_t i) const {
    if (t >= horizon_)
        throw StructuralError("terminal atom: atom '" + node(t, i).id + "' at time " +
                              std::to_string(t) + " has no children");
    return node(t, i).children;
}

std::size_t ScenarioTree::ancestor(int t, std::size_t i, int r) const {
    if (r > t)
        throw StructuralError("ancestor time exceeds atom time");
    std::size_t cur = i;
    for (int s = t; s > r; --s)
        cur = node(s, cur).parent;
    return cur;
}

AdaptedVector zero_vector(const ScenarioTree& tree, int t) {
    return AdaptedVector{t, std::vector<double>(tree.count(t), 0.0)};
}

AdaptedVector constant_vector(const ScenarioTree& tree, int t, double c) {
    return AdaptedVector{t, std::vector<double>(tree.count(t), c)};
}

namespace {
void require_same_time(const AdaptedVector& a, const AdaptedVector& b) {
    if (a.time != b.time || a.values.size() != b.values.size())
        throw StructuralError("adapted vectors live on different time slices");
}
} // namespace

AdaptedVector operator+(const AdaptedVector& a, const AdaptedVector& b) {
    require_same_time(a, b);
    AdaptedVector r = a;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        r.values[i] += b.values[i];
    return r;
}

AdaptedVector operator-(const AdaptedVector& a, const AdaptedVector& b) {
    require_same_time(a, b);
    AdaptedVector r = a;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        r.values[i] -= b.values[i];
    return r;
}

AdaptedVector operator*(double s, const AdaptedVector& a) {
    AdaptedVector r = a;
    for (double& v : r.values)
        v *= s;
    return r;
}

AdaptedVector operator+(const AdaptedVector& a, double c) {
    AdaptedVector r = a;
    for (double& v : r.values)
        v += c;
    return r;
}

AdaptedVector operator-(const AdaptedVector& a, double c) { return a + (-c); }

AdaptedProcess AdaptedProcess::zero(const ScenarioTree& tree) {
    AdaptedProcess p;
    for (int t = 0; t <= tree.horizon(); ++t)
        p.components.push_back(zero_vector(tree, t));
    return p;
}

AdaptedProcess AdaptedProcess::slice(const ScenarioTree& tree, int t, int s) const {
    AdaptedProcess out = *this;
    for (int r = 0; r <= horizon(); ++r)
        if (r < t || r > s)
            out.components[r] = zero_vector(tree, r);
    return out;
}

std::vector<std::pair<std::size_t, double>>
children(const ScenarioTree& tree, int t, std::size_t i) {
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t c : tree.child_indices(t, i))
        out.emplace_back(c, tree.cond_prob(t + 1, c));
    return out;
}

AdaptedProcess mix(const ScenarioTree& tree, const EventSet& B, const AdaptedProcess& X,
                   const AdaptedProcess& Y) {
    if (X.horizon() != tree.horizon() || Y.horizon() != tree.horizon())
        throw StructuralError("mix: processes do not match the tree horizon");
    if (B.members.size() != tree.count(B.time))
        throw StructuralError("mix: event set does not match the time-" +
                              std::to_string(B.time) + " partition");
    AdaptedProcess out = Y;
    for (int r = B.time; r <= tree.horizon(); ++r) {
        for (std::size_t j = 0; j < tree.count(r); ++j) {
            if (B.members[tree.ancestor(r, j, B.time)])
                out.components[r].values[j] = X.at(r).values[j];
        }
    }
    return out;
}

AdaptedVector sup_norm(const ScenarioTree& tree, const AdaptedProcess& X, int t, int s) {
    if (t > s || s > tree.horizon() || t < 0)
        throw StructuralError("sup_norm: require 0 <= t <= s <= T");
    AdaptedVector out = zero_vector(tree, t);
    for (int r = t; r <= s; ++r) {
        for (std::size_t j = 0; j < tree.count(r); ++j) {
            std::size_t anc = tree.ancestor(r, j, t);
            out.values[anc] = std::max(out.values[anc], std::abs(X.at(r).values[j]));
        }
    }
    return out;
}

std::vector<std::pair<double, double>>
conditional_law(const ScenarioTree& tree, const AdaptedVector& x, std::size_t parent_idx) {
    int t = x.time;
    std::vector<std::pair<double, double>> law;
    for (std::size_t c : tree.child_indices(t - 1, parent_idx))
        law.emplace_back(x.values[c], tree.cond_prob(t, c));
    std::sort(law.begin(), law.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& [v, p] : law) {
        if (!merged.empty() && v == merged.back().first)
            merged.back().second += p;
        else
            merged.emplace_back(v, p);
    }
    return merged;
}

AdaptedVector conditional_expectation_step(const ScenarioTree& tree, const AdaptedVector& z) {
    int t = z.time - 1;
    AdaptedVector out = zero_vector(tree, t);
    for (std::size_t i = 0; i < tree.count(t); ++i) {
        double acc = 0.0;
        for (std::size_t c : tree.child_indices(t, i))
            acc += tree.cond_prob(t + 1, c) * z.values[c];
        out.values[i] = acc;
    }
    return out;
}

AdaptedVector conditional_expectation(const ScenarioTree& tree, const AdaptedVector& z, int t) {
    AdaptedVector cur = z;
    while (cur.time > t)
        cur = conditional_expectation_step(tree, cur);
    return cur;
}

bool same_shape(const ScenarioTree& tree, const AdaptedVector& v) {
    return v.time >= 0 && v.time <= tree.horizon() && v.values.size() == tree.count(v.time);
}

} // namespace dynrisk
