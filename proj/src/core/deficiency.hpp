#pragma once

#include <json.hpp>

#include "core/expr.hpp"
#include "core/rng.hpp"
#include "core/subjects.hpp"

namespace aoi {

struct DeficiencyConfig {
    long input_budget = 10'000; // fresh inputs sampled per search
    int max_findings = 10;      // counterexamples returned per search
    int precision = 9;
};

struct FoundState {
    std::vector<Value> values;
    std::string input;
    std::string mutant; // empty for false positives
    bool faulted = false;
};

struct DeficiencyReport {
    std::vector<FoundState> fp_states;
    std::vector<FoundState> fn_states;
    long inputs_examined = 0;
    bool exhausted = false; // budget spent with nothing found
};

// Samples fresh inputs and returns up to max_findings correct states on
// which the assertion fails or errors.
std::vector<FoundState> find_false_positives(const Subject& subject, const Expr& e,
                                             const DeficiencyConfig& cfg, Rng& rng);

// Samples fresh inputs, runs every mutant, and returns up to max_findings
// incorrect states that (a) differ from the correct state in at least one
// variable referenced by e and (b) on which the assertion passes.
std::vector<FoundState> find_false_negatives(const Subject& subject, const Expr& e,
                                             const DeficiencyConfig& cfg, Rng& rng);

// Runs both searches on disjoint streams derived from rng.
DeficiencyReport check_assertion(const Subject& subject, const Expr& e,
                                 const DeficiencyConfig& cfg, Rng& rng);

nlohmann::ordered_json report_to_json(const DeficiencyReport& report, const VarSignature& sig);

} // namespace aoi
