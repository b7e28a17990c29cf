#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dynrisk/common.hpp"

namespace dynrisk {

// Input form of a tree node. Atoms at time t form the partition generating
// F_t; every atom at t >= 1 names its parent at t-1 and carries the
// conditional probability of being reached from that parent.
struct AtomSpec {
    std::string id;
    int time = 0;
    std::string parent; // empty iff time == 0
    double cond_prob = 1.0;
};

// Finite filtered probability space on a scenario tree. Immutable after
// construction; atoms within a time slice are ordered lexicographically by id
// so every derived report is deterministic.
class ScenarioTree {
public:
    static ScenarioTree build(int horizon, std::vector<AtomSpec> atoms);

    int horizon() const { return horizon_; }
    std::size_t count(int t) const { return slices_.at(t).size(); }

    const std::string& atom_id(int t, std::size_t i) const { return node(t, i).id; }
    double cond_prob(int t, std::size_t i) const { return node(t, i).cond_prob; }
    std::size_t parent(int t, std::size_t i) const;
    const std::vector<std::size_t>& child_indices(int t, std::size_t i) const;

    // Unconditional probability of the atom (product of conditional
    // probabilities along the path from the root).
    double path_prob(int t, std::size_t i) const { return node(t, i).path_prob; }

    // Local index at time r <= t of the ancestor of atom (t, i).
    std::size_t ancestor(int t, std::size_t i, int r) const;

private:
    struct Node {
        std::string id;
        double cond_prob = 1.0;
        double path_prob = 1.0;
        std::size_t parent = 0;
        std::vector<std::size_t> children; // local indices at time t+1
    };

    const Node& node(int t, std::size_t i) const { return slices_.at(t).at(i); }

    int horizon_ = 0;
    std::vector<std::vector<Node>> slices_;
};

// F_t-measurable random variable: one finite value per time-t atom, in slice
// order.
struct AdaptedVector {
    int time = 0;
    std::vector<double> values;

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

AdaptedVector zero_vector(const ScenarioTree& tree, int t);
AdaptedVector constant_vector(const ScenarioTree& tree, int t, double c);

AdaptedVector operator+(const AdaptedVector& a, const AdaptedVector& b);
AdaptedVector operator-(const AdaptedVector& a, const AdaptedVector& b);
AdaptedVector operator*(double s, const AdaptedVector& a);
AdaptedVector operator+(const AdaptedVector& a, double c);
AdaptedVector operator-(const AdaptedVector& a, double c);

// Adapted process X = (X_0, ..., X_T). X_0 = 0 by convention unless set
// explicitly.
struct AdaptedProcess {
    std::vector<AdaptedVector> components; // index = time

    static AdaptedProcess zero(const ScenarioTree& tree);

    int horizon() const { return static_cast<int>(components.size()) - 1; }
    AdaptedVector& at(int t) { return components.at(t); }
    const AdaptedVector& at(int t) const { return components.at(t); }

    // Projection X_{t:s}: components outside [t, s] replaced with zeros.
    AdaptedProcess slice(const ScenarioTree& tree, int t, int s) const;
};

// A time-t event: subset of the time-t partition.
struct EventSet {
    int time = 0;
    std::vector<bool> members; // one flag per time-t atom
};

// -- operations --------------------------------------------------------------

// Children of atom (t, i) with their conditional probabilities.
std::vector<std::pair<std::size_t, double>>
children(const ScenarioTree& tree, int t, std::size_t i);

// 1_B X + 1_{B^c} Y: on atoms descending from B the result follows X,
// elsewhere Y.
AdaptedProcess mix(const ScenarioTree& tree, const EventSet& B,
                   const AdaptedProcess& X, const AdaptedProcess& Y);

// Per time-t atom, max over i in [t, s] and descendants of |X_i|.
AdaptedVector sup_norm(const ScenarioTree& tree, const AdaptedProcess& X, int t, int s);

// Conditional law of X_t given the parent atom (t-1, parent_idx): sorted
// (value, probability) pairs with equal values merged.
std::vector<std::pair<double, double>>
conditional_law(const ScenarioTree& tree, const AdaptedVector& x, std::size_t parent_idx);

// One-step conditional expectation E[Z_{t+1} | F_t].
AdaptedVector conditional_expectation_step(const ScenarioTree& tree, const AdaptedVector& z);

// E[Z_s | F_t] for s >= t.
AdaptedVector conditional_expectation(const ScenarioTree& tree, const AdaptedVector& z, int t);

bool same_shape(const ScenarioTree& tree, const AdaptedVector& v);

} // namespace dynrisk
