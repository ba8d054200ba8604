#include "core/improve.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "core/errors.hpp"

namespace aoi {

namespace {

constexpr std::uint64_t kStreamInit = 0x1A17;
constexpr std::uint64_t kStreamEvolve = 0x2BEE;
constexpr std::uint64_t kStreamDeficiency = 0x3CAF;
constexpr std::uint64_t kStreamValidation = 0x4D1C;

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

} // namespace

void validate_run_config(const RunConfig& cfg) {
    validate_config(cfg.evolution);
    if (cfg.global_budget_ms && *cfg.global_budget_ms < 0)
        throw std::invalid_argument("global budget must be >= 0");
    if (cfg.max_iterations < 0 || cfg.max_iterations > 20)
        throw std::invalid_argument("max_iterations must be in [0, 20]");
    if (cfg.init_samples < 1) throw std::invalid_argument("init_samples must be >= 1");
    if (cfg.validation_samples < 1) throw std::invalid_argument("validation_samples must be >= 1");
    if (cfg.deficiency_budget < 1) throw std::invalid_argument("deficiency_budget must be >= 1");
    if (cfg.deficiency_max_findings < 1)
        throw std::invalid_argument("deficiency_max_findings must be >= 1");
    if (cfg.precision < 0) throw std::invalid_argument("precision must be >= 0");
}

std::pair<std::vector<std::string>, std::vector<std::string>>
split_mutants(const Subject& subject, const std::vector<std::string>& requested_held_out,
              bool& overlap_warning) {
    overlap_warning = false;
    auto all = subject.mutant_ids();
    if (!requested_held_out.empty()) {
        std::vector<std::string> training;
        for (const auto& id : all)
            if (std::find(requested_held_out.begin(), requested_held_out.end(), id) ==
                requested_held_out.end())
                training.push_back(id);
        for (const auto& id : requested_held_out)
            if (std::find(all.begin(), all.end(), id) == all.end())
                throw std::invalid_argument("held-out mutant '" + id + "' unknown for subject '" +
                                            subject.name() + "'");
        return {training, requested_held_out};
    }
    if (all.size() >= 6) {
        const std::size_t train_n = (all.size() + 1) / 2;
        std::vector<std::string> training(all.begin(), all.begin() + static_cast<long>(train_n));
        std::vector<std::string> held(all.begin() + static_cast<long>(train_n), all.end());
        return {training, held};
    }
    overlap_warning = true;
    return {all, all};
}

ValidationSet build_validation_set(const Subject& validation_subject, long samples, Rng& rng,
                                   int precision) {
    ValidationSet set;
    set.held_out = validation_subject.mutant_ids();
    set.inputs = samples;
    for (long i = 0; i < samples; ++i) {
        auto input = sample_input(validation_subject, rng);
        auto run = run_and_capture(validation_subject, input, precision);
        for (const auto& [id, st] : run.mutants)
            if (st.values != run.reference.values) set.incorrect.emplace_back(id, st.values);
        set.positives.push_back(std::move(run.reference.values));
    }
    return set;
}

std::vector<ExprPtr> split_conjuncts(const ExprPtr& e) {
    if (e->kind() == ExprKind::BoolBin && e->bool_op() == BoolBinOp::And) {
        auto out = split_conjuncts(e->left());
        auto right = split_conjuncts(e->right());
        out.insert(out.end(), right.begin(), right.end());
        return out;
    }
    return {e};
}

ExprPtr reduce_conjuncts(const ExprPtr& e, std::span<const std::vector<Value>> positives,
                         int precision) {
    std::vector<ExprPtr> survivors;
    for (const auto& conjunct : split_conjuncts(e)) {
        bool clean = true;
        for (const auto& s : positives) {
            auto r = evaluate(*conjunct, s, precision);
            if (!r || !*r) {
                clean = false;
                break;
            }
        }
        if (clean) survivors.push_back(conjunct);
    }
    if (survivors.empty()) return nullptr;
    ExprPtr acc = survivors.front();
    for (std::size_t i = 1; i < survivors.size(); ++i)
        acc = Expr::bool_bin(BoolBinOp::And, acc, survivors[i]);
    return acc;
}

ValidationSide validate_on(const ValidationSet& set, const ExprPtr& e, int precision) {
    ValidationSide side;
    for (const auto& s : set.positives) {
        auto r = evaluate(*e, s, precision);
        if (!r || !*r) ++side.fp;
    }
    for (const auto& [id, s] : set.incorrect) {
        auto r = evaluate(*e, s, precision);
        if (r && *r) ++side.fn;
    }

    ExprPtr scored = e;
    if (side.fp > 0) {
        side.reduction_applied = true;
        ExprPtr red = reduce_conjuncts(e, set.positives, precision);
        if (!red) {
            side.score_defined = false;
            side.mutation_score = 0.0;
            return side;
        }
        side.reduced = print(*red);
        scored = red;
    }

    int killed = 0;
    for (const auto& id : set.held_out) {
        bool kill = false;
        for (const auto& [mid, s] : set.incorrect) {
            if (mid != id) continue;
            auto r = evaluate(*scored, s, precision);
            if (!r || !*r) {
                kill = true;
                break;
            }
        }
        if (kill) ++killed;
    }
    side.mutation_score =
        set.held_out.empty() ? 0.0 : static_cast<double>(killed) / static_cast<double>(set.held_out.size());
    return side;
}

ImprovementReport improve(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    validate_run_config(cfg);

    const Subject* subject = find_subject(cfg.subject);
    if (!subject) throw UnknownSubjectError(cfg.subject);

    const std::string assertion_text =
        cfg.assertion.empty() ? subject->initial_assertion() : cfg.assertion;
    ExprPtr alpha0 = parse(assertion_text, subject->signature());

    bool overlap = false;
    auto [train_ids, held_ids] = split_mutants(*subject, cfg.held_out_mutants, overlap);
    cfg.held_out_mutants = held_ids; // echo the resolved split
    Subject training = subject->with_mutants(train_ids);

    std::optional<std::int64_t> global = cfg.global_budget_ms;
    if (!global && cfg.evolution.time_budget_ms) global = *cfg.evolution.time_budget_ms * 3;

    ImprovementReport report;
    report.subject = subject->name();
    report.initial_assertion = print(*alpha0);

    const auto started = std::chrono::steady_clock::now();
    Rng init_rng(Rng::mix(cfg.seed, kStreamInit));
    StateRepo repo = init_repo(training, cfg.init_samples, init_rng, cfg.precision);
    report.timings.init_ms = ms_since(started);

    report.initial_on_initial_repo = count_deficiencies(*alpha0, repo);

    ExprPtr improved = alpha0;
    ExprPtr current = alpha0;
    const ExprPtr extra_seeds[] = {alpha0};

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        if (iter == 0 && global && ms_since(started) >= static_cast<double>(*global)) break;
        const auto iter_started = std::chrono::steady_clock::now();

        EvolutionConfig evo = cfg.evolution;
        evo.seed = Rng::mix(Rng::mix(cfg.seed, kStreamEvolve), static_cast<std::uint64_t>(iter));
        EvolveResult res = evolve(repo, current, evo, extra_seeds);
        improved = res.best;
        current = res.best;

        DeficiencyConfig dc{cfg.deficiency_budget, cfg.deficiency_max_findings, cfg.precision};
        Rng def_rng(Rng::mix(Rng::mix(cfg.seed, kStreamDeficiency), static_cast<std::uint64_t>(iter)));
        DeficiencyReport found = check_assertion(training, *res.best, dc, def_rng);

        IterationRecord rec;
        rec.assertion = print(*res.best);
        rec.fitness = res.fitness;
        rec.zero_fp_explored = res.zero_fp_explored;
        rec.perfect_found = res.perfect_found;
        rec.explored = res.explored;
        rec.generations = res.generations;
        rec.fp_found = static_cast<int>(found.fp_states.size());
        rec.fn_found = static_cast<int>(found.fn_states.size());
        rec.exhausted = found.exhausted;
        report.iterations.push_back(rec);
        report.timings.iteration_ms.push_back(ms_since(iter_started));
        report.last_zero_fp_explored = res.zero_fp_explored;

        if (found.exhausted) break;

        // Ingest only when another evolution will actually consume the new
        // states; the reported final repository is then always the one the
        // final assertion was evolved against.
        const bool more = iter + 1 < cfg.max_iterations &&
                          !(global && ms_since(started) >= static_cast<double>(*global));
        if (!more) break;
        for (const auto& s : found.fp_states)
            repo.ingest(s.values, StateMeta{Origin::DeficiencyFp, s.input, "", false}, true);
        for (const auto& s : found.fn_states)
            repo.ingest(s.values, StateMeta{Origin::DeficiencyFn, s.input, s.mutant, s.faulted},
                        false);
    }

    report.improved_assertion = print(*improved);
    report.initial_on_final_repo = count_deficiencies(*alpha0, repo);
    report.improved_on_final_repo = count_deficiencies(*improved, repo);
    report.final_positive_weight = repo.positive_weight();
    report.final_negative_weight = repo.negative_weight();

    const auto validation_started = std::chrono::steady_clock::now();
    Rng val_rng(Rng::mix(cfg.seed, kStreamValidation));
    Subject validation_subject = subject->with_mutants(held_ids);
    ValidationSet set =
        build_validation_set(validation_subject, cfg.validation_samples, val_rng, cfg.precision);
    report.validation.inputs = set.inputs;
    report.validation.held_out = set.held_out;
    report.validation.overlap_warning = overlap;
    report.validation.initial = validate_on(set, alpha0, cfg.precision);
    report.validation.improved = validate_on(set, improved, cfg.precision);
    report.timings.validation_ms = ms_since(validation_started);

    report.config = cfg;
    report.timings.total_ms = ms_since(started);
    return report;
}

StandaloneValidation validate_standalone(const RunConfig& cfg) {
    validate_run_config(cfg);
    const Subject* subject = find_subject(cfg.subject);
    if (!subject) throw UnknownSubjectError(cfg.subject);
    const std::string assertion_text =
        cfg.assertion.empty() ? subject->initial_assertion() : cfg.assertion;
    ExprPtr e = parse(assertion_text, subject->signature());

    bool overlap = false;
    auto [train_ids, held_ids] = split_mutants(*subject, cfg.held_out_mutants, overlap);
    (void)train_ids;

    Rng val_rng(Rng::mix(cfg.seed, kStreamValidation));
    ValidationSet set = build_validation_set(subject->with_mutants(held_ids),
                                             cfg.validation_samples, val_rng, cfg.precision);
    StandaloneValidation out;
    out.side = validate_on(set, e, cfg.precision);
    out.inputs = set.inputs;
    out.held_out = set.held_out;
    out.overlap_warning = overlap;
    return out;
}

// --- JSON ---

nlohmann::ordered_json fitness_to_json(const FitnessVector& f) {
    return {{"fp", f.fp}, {"fn", f.fn}, {"size", f.size}};
}

nlohmann::ordered_json run_config_to_json(const RunConfig& cfg) {
    nlohmann::ordered_json evo;
    evo["population_size"] = cfg.evolution.population_size;
    evo["tournament_size"] = cfg.evolution.tournament_size;
    evo["crossover_rate"] = cfg.evolution.crossover_rate;
    evo["mutation_rate"] = cfg.evolution.mutation_rate;
    evo["conjunctive_crossover_prob"] = cfg.evolution.conjunctive_crossover_prob;
    evo["migration_interval"] = cfg.evolution.migration_interval;
    evo["migration_count"] = cfg.evolution.migration_count;
    evo["max_depth"] = cfg.evolution.max_depth;
    evo["max_size"] = cfg.evolution.max_size;
    if (cfg.evolution.time_budget_ms) evo["time_budget_ms"] = *cfg.evolution.time_budget_ms;
    else evo["time_budget_ms"] = nullptr;
    if (cfg.evolution.max_generations) evo["max_generations"] = *cfg.evolution.max_generations;
    else evo["max_generations"] = nullptr;
    evo["guided"] = cfg.evolution.guided;
    evo["threads"] = cfg.evolution.threads;

    nlohmann::ordered_json j;
    j["subject"] = cfg.subject;
    j["assertion"] = cfg.assertion;
    j["evolution"] = std::move(evo);
    if (cfg.global_budget_ms) j["global_budget_ms"] = *cfg.global_budget_ms;
    else j["global_budget_ms"] = nullptr;
    j["max_iterations"] = cfg.max_iterations;
    j["init_samples"] = cfg.init_samples;
    j["validation_samples"] = cfg.validation_samples;
    j["deficiency_budget"] = cfg.deficiency_budget;
    j["deficiency_max_findings"] = cfg.deficiency_max_findings;
    j["precision"] = cfg.precision;
    j["held_out_mutants"] = cfg.held_out_mutants;
    j["seed"] = cfg.seed;
    return j;
}

namespace {

nlohmann::ordered_json side_to_json(const ValidationSide& side) {
    nlohmann::ordered_json j;
    j["fp"] = side.fp;
    j["fn"] = side.fn;
    j["reduction_applied"] = side.reduction_applied;
    if (side.reduced) j["reduced"] = *side.reduced;
    else j["reduced"] = nullptr;
    j["mutation_score"] = side.mutation_score;
    j["score_defined"] = side.score_defined;
    return j;
}

} // namespace

nlohmann::ordered_json report_to_json(const ImprovementReport& report, bool with_timings) {
    nlohmann::ordered_json j;
    j["subject"] = report.subject;
    j["config"] = run_config_to_json(report.config);

    j["initial"] = {{"assertion", report.initial_assertion},
                    {"fitness_initial_repo", fitness_to_json(report.initial_on_initial_repo)},
                    {"fitness_final_repo", fitness_to_json(report.initial_on_final_repo)}};
    j["improved"] = {{"assertion", report.improved_assertion},
                     {"fitness_final_repo", fitness_to_json(report.improved_on_final_repo)}};

    nlohmann::ordered_json iters = nlohmann::ordered_json::array();
    for (const auto& it : report.iterations) {
        nlohmann::ordered_json rec;
        rec["assertion"] = it.assertion;
        rec["fitness"] = fitness_to_json(it.fitness);
        rec["zero_fp_explored"] = it.zero_fp_explored;
        rec["perfect_found"] = it.perfect_found;
        rec["explored"] = it.explored;
        rec["generations"] = it.generations;
        rec["fp_found"] = it.fp_found;
        rec["fn_found"] = it.fn_found;
        rec["exhausted"] = it.exhausted;
        iters.push_back(std::move(rec));
    }
    j["iterations"] = std::move(iters);
    j["last_zero_fp_explored"] = report.last_zero_fp_explored;
    j["final_repo"] = {{"positive_weight", report.final_positive_weight},
                       {"negative_weight", report.final_negative_weight}};

    nlohmann::ordered_json val;
    val["inputs"] = report.validation.inputs;
    val["held_out_mutants"] = report.validation.held_out;
    val["overlap_warning"] = report.validation.overlap_warning;
    val["initial"] = side_to_json(report.validation.initial);
    val["improved"] = side_to_json(report.validation.improved);
    j["validation"] = std::move(val);

    if (with_timings) {
        nlohmann::ordered_json t;
        t["total_ms"] = report.timings.total_ms;
        t["init_ms"] = report.timings.init_ms;
        t["validation_ms"] = report.timings.validation_ms;
        t["iteration_ms"] = report.timings.iteration_ms;
        j["timings"] = std::move(t);
    }
    return j;
}

} // namespace aoi
