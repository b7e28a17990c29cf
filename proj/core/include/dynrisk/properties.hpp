#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dynrisk/robust.hpp"

namespace dynrisk {

// Axioms of uncertainty sets, checked by randomized falsification.
enum class SetProperty {
    Proper,
    Normalised,
    OrderPreserving,
    Monotone,
    TranslationInvariant,
    Static,
    Local,
    PositiveHomogeneous,
    StarShaped,
};

// Axioms of robust risk measures (direct numeric comparisons).
enum class MeasureProperty {
    Normalised,
    Monotone,
    TranslationInvariant,
    Local,
    PositiveHomogeneous,
    StarShaped,
    Convex,
    SubAdditive,
    // U_{t+1}(0) equals the one-step acceptance set of rho_t.
    AcceptanceZeroIdentity,
};

enum class TimeConsistency { Strong, Order, Rejection, WeakRecursive, Weak, Prudent };

// Where a time-consistency notion is evaluated: on the uncertainty set itself
// (sampled membership), on the robust measure (numeric), or on the
// consolidated set (numeric via the membership duality).
enum class Level { Set, Measure, Consolidated };

struct CheckSpec {
    int trials = 500;
    std::uint64_t seed = 20240;
    double value_lo = -1.0;
    double value_hi = 1.0;
    // Membership probes per set comparison; roughly a fifth are
    // boundary-targeted.
    int member_probes = 40;
};

struct Verdict {
    enum class Status { Corroborated, Counterexample, Vacuous };

    Status status = Status::Vacuous;
    int trials = 0;
    int trial_index = -1; // first failing trial
    double gap = 0.0;     // violation size past tolerance
    std::string detail;   // human-readable witness

    // Replay payload (meaning depends on the check).
    AdaptedProcess witness_x;
    AdaptedProcess witness_y;
    AdaptedVector witness_member;
    int time = -1;
    int split = -1; // the s index of the failing substitution
    double lambda = 1.0;
    bool has_y = false;
    bool has_member = false;

    bool corroborated() const { return status == Status::Corroborated; }
    bool counterexample() const { return status == Status::Counterexample; }
};

Verdict check_set_property(const RobustRiskMeasure& r, SetProperty id, const CheckSpec& spec);
Verdict check_measure_property(const RobustRiskMeasure& r, MeasureProperty id,
                               const CheckSpec& spec);
Verdict check_time_consistency(const RobustRiskMeasure& r, TimeConsistency id, Level level,
                               const CheckSpec& spec);

// Verdict table for one configuration plus the side conditions the
// implication lattice needs. `integer_shift` is the sampled check of
// R(X + k R_s(0)) = R(X) for integer k.
struct TcAudit {
    Verdict strong, order, rejection, weak_recursive, weak, prudent, integer_shift;
    bool normalised = false;           // R(0) = 0 at every time
    bool monotone = false;
    bool translation_invariant = false;
    bool zero_nonneg = false;          // R(0) >= 0 per atom (0 in U(0))
    bool zero_nonpos = false;          // R(0) <= 0 per atom
    // Test-only: flip the weak-recursive verdict before auditing, to prove
    // the auditor can see a poisoned table.
    bool mutant_flip_weak_recursive = false;
};

// Gather the table for a configuration (runs all six checks + side flags).
TcAudit gather_tc_audit(const RobustRiskMeasure& r, Level level, const CheckSpec& spec);

// Empty when no implication edge is violated by the verdict pattern
// premise-corroborated + side-conditions + conclusion-counterexample.
std::vector<std::string> audit_implications(const TcAudit& table);

// Equivalent-but-pathological sets: same robust values, targeted property
// check flips to a counterexample.
enum class AdversarialFlavor { BreakNormalisation, BreakOrder, BreakTranslation };
DynamicUncertaintySet adversarial_equivalent_set(const RobustRiskMeasure& r,
                                                 AdversarialFlavor flavor);

// Does u_t at argument y hold a member dominating z pointwise on the
// children of block (t-1, block)? Exact per kind (closed form, transport
// excess, or assignment enumeration).
bool order_dominated(const UncertaintyKind& kind, const ScenarioTree& tree,
                     const AdaptedProcess& y, int t, std::size_t block, const AdaptedVector& z);

// Random adapted process with X_0 = 0, values uniform in [lo, hi] rounded to
// 1e-6 so witnesses print exactly.
AdaptedProcess random_process(const ScenarioTree& tree, std::mt19937_64& rng, double lo,
                              double hi);

const char* to_string(SetProperty id);
const char* to_string(MeasureProperty id);
const char* to_string(TimeConsistency id);
const char* to_string(Verdict::Status s);

} // namespace dynrisk
