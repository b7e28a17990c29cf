#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynrisk/properties.hpp"
#include "dynrisk/robust.hpp"

namespace dynrisk {

// Parsed experiment document (schema version 1): a tree, one or more
// processes, a risk family, one uncertainty kind per time, and run
// configuration. The CLI flags override the config block.
struct ExperimentDoc {
    int schema = 1;
    ScenarioTree tree;
    std::vector<AdaptedProcess> processes; // at least one
    RiskFamily family;
    DynamicUncertaintySet set;

    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> tol;
    std::optional<int> time;

    // Optional extras consumed by specific commands.
    std::vector<std::string> checks;            // property / consistency ids
    std::string level = "measure";              // set | measure | consolidated
    std::string wrap;                           // adversarial wrapper, if any
    bool mutant = false;                        // audit self-test flag
    bool recursive = false;                     // build the backward recursion over 'set'

    RobustRiskMeasure measure() const;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parse and validate a JSON document. Diagnostics name the offending field
// (and atom id where applicable).
ExperimentDoc parse_experiment(const std::string& text);

// Canonical JSON form; parse(serialize(doc)) yields an identical model.
std::string serialize_experiment(const ExperimentDoc& doc);

} // namespace dynrisk
