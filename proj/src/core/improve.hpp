#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/deficiency.hpp"
#include "core/evolve.hpp"
#include "core/subjects.hpp"

namespace aoi {

// Configuration of a full improvement run. All randomness derives from
// `seed` through independent streams (repo initialization, evolution,
// deficiency search, validation).
struct RunConfig {
    std::string subject;
    std::string assertion; // empty: use the subject's default
    EvolutionConfig evolution;
    // Whole-loop wall-clock budget; defaults to 3x the internal time budget
    // when that is set. Iterations are additionally capped at 20.
    std::optional<std::int64_t> global_budget_ms;
    int max_iterations = 20;
    int init_samples = 100;
    long validation_samples = 10'000;
    long deficiency_budget = 10'000;
    int deficiency_max_findings = 10;
    int precision = 9;
    std::vector<std::string> held_out_mutants; // empty: default split
    std::uint64_t seed = 1;
};

void validate_run_config(const RunConfig& cfg);

// Training/held-out mutant split. With no explicit request: subjects with
// >= 6 mutants hold out the second half; smaller subjects use every mutant
// for both roles and flag the overlap.
std::pair<std::vector<std::string>, std::vector<std::string>>
split_mutants(const Subject& subject, const std::vector<std::string>& requested_held_out,
              bool& overlap_warning);

// Correct and incorrect states captured from fresh validation inputs.
struct ValidationSet {
    std::vector<std::vector<Value>> positives;
    std::vector<std::pair<std::string, std::vector<Value>>> incorrect; // (mutant, state)
    std::vector<std::string> held_out;
    long inputs = 0;
};

ValidationSet build_validation_set(const Subject& validation_subject, long samples, Rng& rng,
                                   int precision);

struct ValidationSide {
    long fp = 0;
    long fn = 0;
    bool reduction_applied = false;     // fp > 0 triggered conjunct reduction
    std::optional<std::string> reduced; // surviving conjunction, when any
    double mutation_score = 0.0;
    bool score_defined = true; // false: reduction removed every conjunct
};

ValidationSide validate_on(const ValidationSet& set, const ExprPtr& e, int precision);

// Top-level AND components in original order; a non-conjunctive expression
// is its own single conjunct.
std::vector<ExprPtr> split_conjuncts(const ExprPtr& e);

// Drops every conjunct that fails or errors on some positive state; returns
// the AND of the survivors in original order, or nullptr if none survive.
ExprPtr reduce_conjuncts(const ExprPtr& e, std::span<const std::vector<Value>> positives,
                         int precision);

struct ValidationResult {
    long inputs = 0;
    std::vector<std::string> held_out;
    bool overlap_warning = false;
    ValidationSide initial;
    ValidationSide improved;
};

struct IterationRecord {
    std::string assertion; // evolved candidate
    FitnessVector fitness; // on the repository it was evolved against
    bool zero_fp_explored = false;
    bool perfect_found = false;
    long long explored = 0;
    int generations = 0;
    int fp_found = 0;
    int fn_found = 0;
    bool exhausted = false;
};

struct ImprovementReport {
    std::string subject;
    RunConfig config; // echo, with resolved held-out split
    std::string initial_assertion;
    std::string improved_assertion;
    FitnessVector initial_on_initial_repo;
    FitnessVector initial_on_final_repo;
    FitnessVector improved_on_final_repo;
    std::vector<IterationRecord> iterations;
    bool last_zero_fp_explored = false; // archive flag of the final evolution
    long long final_positive_weight = 0;
    long long final_negative_weight = 0;
    ValidationResult validation;

    struct Timings {
        double total_ms = 0;
        double init_ms = 0;
        double validation_ms = 0;
        std::vector<double> iteration_ms;
    } timings;
};

// Runs repo initialization, the alternating evolve/deficiency-check loop,
// and validation. Throws UnknownSubjectError, ParseError, or TypeError on
// bad configuration.
ImprovementReport improve(const RunConfig& cfg);

// Validation phase only, for the `validate` command.
struct StandaloneValidation {
    ValidationSide side;
    long inputs = 0;
    std::vector<std::string> held_out;
    bool overlap_warning = false;
};
StandaloneValidation validate_standalone(const RunConfig& cfg);

// `with_timings=false` omits every wall-clock field; the remaining document
// is a pure function of the configuration.
nlohmann::ordered_json report_to_json(const ImprovementReport& report, bool with_timings = true);
nlohmann::ordered_json fitness_to_json(const FitnessVector& f);
nlohmann::ordered_json run_config_to_json(const RunConfig& cfg);

} // namespace aoi
