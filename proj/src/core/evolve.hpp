#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "core/fitness.hpp"
#include "core/gen.hpp"
#include "core/rng.hpp"
#include "core/state.hpp"

namespace aoi {

struct EvolutionConfig {
    int population_size = 200;
    int tournament_size = 7;
    double crossover_rate = 0.8;
    double mutation_rate = 0.2;
    double conjunctive_crossover_prob = 0.25;
    int migration_interval = 10; // generations between exchanges
    int migration_count = 5;
    int max_depth = 7;
    int max_size = 50;
    // Stop on whichever limit hits first; with neither set, a 30 s wall-clock
    // budget applies. Generation budgets give bit-reproducible runs.
    std::optional<std::int64_t> time_budget_ms;
    std::optional<int> max_generations;
    std::uint64_t seed = 1;
    bool guided = true; // false: parent selection ignores fitness entirely
    int threads = 0;    // 0 = hardware concurrency

    // Test/diagnostic hook, called after each generation with the per-
    // population best fitness (FpFirst pop, FnFirst pop).
    std::function<void(int gen, const FitnessVector&, const FitnessVector&)> on_generation;
};

// Throws std::invalid_argument on out-of-range rates or sizes.
void validate_config(const EvolutionConfig& cfg);

struct Individual {
    ExprPtr expr;
    FitnessVector fit;
};

struct EvolveResult {
    ExprPtr best;
    FitnessVector fitness;       // as archived; recomputable against the repo
    bool zero_fp_explored = false;
    bool perfect_found = false;  // some explored individual had fp=0 and fn=0
    long long explored = 0;      // individuals evaluated (duplicates included)
    int generations = 0;
};

// Both populations seeded with alpha, its boolean subexpressions, any extra
// seed expressions (plus their boolean subexpressions), then filled with
// ramped half-and-half trees of depth 2..6. Members are returned
// unevaluated.
std::pair<std::vector<Individual>, std::vector<Individual>>
init_populations(const ExprPtr& alpha, const VarSignature& sig, const EvolutionConfig& cfg,
                 Rng& rng, std::span<const ExprPtr> extra_seeds = {});

// Tournament selection under the population objective; uniform draw when
// cfg.guided is false.
const Individual& select_parent(const std::vector<Individual>& pop, PopKind kind,
                                const EvolutionConfig& cfg, Rng& rng);

// Conjunctive composition (AND of both parents) with probability
// cfg.conjunctive_crossover_prob, otherwise a type-aware subtree swap.
// Offspring violating the depth/size limits are retried up to 5 times, then
// the first parent is returned unchanged.
ExprPtr crossover(const ExprPtr& a, const ExprPtr& b, Rng& rng, const EvolutionConfig& cfg);

// With probability cfg.mutation_rate applies one uniformly chosen applicable
// operator: operator flip, subtree regeneration (depth <= 3), constant
// perturbation, or variable replacement. Otherwise returns e unchanged.
ExprPtr mutate(const ExprPtr& e, const VarSignature& sig, Rng& rng, const EvolutionConfig& cfg);

// The mutation step without the rate gate (always mutates). Exposed for
// closure property tests.
ExprPtr mutate_always(const ExprPtr& e, const VarSignature& sig, Rng& rng,
                      const EvolutionConfig& cfg);

// The migration_count best of each population (under its own objective)
// replace the worst of the other population; sizes are preserved.
void migrate(std::vector<Individual>& fp_pop, std::vector<Individual>& fn_pop, int count);

// Runs the two-population search. Returns the first explored individual with
// zero deficiencies; on budget expiry, the explored zero-fp individual with
// the fewest false negatives (ties: smaller, then earliest); if nothing with
// fp=0 was explored, the best individual under the FpFirst order.
EvolveResult evolve(const StateRepo& repo, const ExprPtr& alpha, const EvolutionConfig& cfg,
                    std::span<const ExprPtr> extra_seeds = {});

} // namespace aoi
