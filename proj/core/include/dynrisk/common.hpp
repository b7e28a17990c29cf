#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace dynrisk {

// Absolute tolerance used for all value comparisons. Single global knob;
// overridable from the CLI via --tol.
double tolerance();
void set_tolerance(double tol);

// Children probabilities must sum to one within this bound at validation.
inline constexpr double kProbabilitySumTol = 1e-12;

class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

inline bool approx_eq(double a, double b) { return std::abs(a - b) <= tolerance(); }
inline bool approx_le(double a, double b) { return a <= b + tolerance(); }

} // namespace dynrisk
