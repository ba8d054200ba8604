#include "core/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace aoi {

void validate_config(const EvolutionConfig& cfg) {
    auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (cfg.population_size < 1) throw std::invalid_argument("population_size must be >= 1");
    if (cfg.tournament_size < 1) throw std::invalid_argument("tournament_size must be >= 1");
    if (!rate_ok(cfg.crossover_rate) || !rate_ok(cfg.mutation_rate) ||
        !rate_ok(cfg.conjunctive_crossover_prob))
        throw std::invalid_argument("rates must be in [0, 1]");
    if (cfg.migration_interval < 1) throw std::invalid_argument("migration_interval must be >= 1");
    if (cfg.migration_count < 0) throw std::invalid_argument("migration_count must be >= 0");
    if (cfg.max_depth < 2) throw std::invalid_argument("max_depth must be >= 2");
    if (cfg.max_size < 3) throw std::invalid_argument("max_size must be >= 3");
    if (cfg.time_budget_ms && *cfg.time_budget_ms < 0)
        throw std::invalid_argument("time budget must be >= 0");
    if (cfg.max_generations && *cfg.max_generations < 0)
        throw std::invalid_argument("generation budget must be >= 0");
    if (cfg.threads < 0) throw std::invalid_argument("threads must be >= 0");
}

namespace {

bool within_limits(const Expr& e, const EvolutionConfig& cfg) {
    return e.depth() <= cfg.max_depth && e.size() <= cfg.max_size;
}

// Ramped half-and-half tree within the size limit; shrinks the depth ramp if
// the limit keeps rejecting.
ExprPtr ramped_tree(const VarSignature& sig, int depth, bool full, const EvolutionConfig& cfg,
                    Rng& rng) {
    int d = std::min(depth, cfg.max_depth);
    const int d_min = min_bool_depth(sig);
    for (;;) {
        for (int attempt = 0; attempt < 3; ++attempt) {
            ExprPtr t = random_tree(sig, Type::Boolean, d, full, rng);
            if (t->size() <= cfg.max_size) return t;
        }
        if (d > d_min) --d;
        else full = false; // grow at minimum depth always fits
    }
}

} // namespace

std::pair<std::vector<Individual>, std::vector<Individual>>
init_populations(const ExprPtr& alpha, const VarSignature& sig, const EvolutionConfig& cfg,
                 Rng& rng, std::span<const ExprPtr> extra_seeds) {
    validate_config(cfg);
    if (!alpha || alpha->type() != Type::Boolean)
        throw std::invalid_argument("init_populations: alpha must be boolean-typed");
    if (!within_limits(*alpha, cfg))
        throw std::invalid_argument("init_populations: alpha exceeds depth/size limits");

    std::vector<ExprPtr> seeds;
    std::unordered_map<std::string, bool> seen;
    auto add_with_subexprs = [&](const ExprPtr& e) {
        for (const auto& sub : bool_subexpressions(e)) {
            if (!within_limits(*sub, cfg)) continue;
            if (seen.emplace(print(*sub), true).second) seeds.push_back(sub);
        }
    };
    add_with_subexprs(alpha);
    for (const auto& s : extra_seeds) {
        if (!s || s->type() != Type::Boolean)
            throw std::invalid_argument("init_populations: seed must be boolean-typed");
        add_with_subexprs(s);
    }

    const auto capacity = static_cast<std::size_t>(cfg.population_size);
    if (seeds.size() > capacity) seeds.resize(capacity);

    auto build = [&]() {
        std::vector<Individual> pop;
        pop.reserve(capacity);
        for (const auto& s : seeds) pop.push_back({s, {}});
        int ramp = 2;
        bool full = false;
        while (pop.size() < capacity) {
            pop.push_back({ramped_tree(sig, ramp, full, cfg, rng), {}});
            full = !full;
            if (!full) ramp = ramp == 6 ? 2 : ramp + 1;
        }
        return pop;
    };
    auto a = build();
    auto b = build();
    return {std::move(a), std::move(b)};
}

const Individual& select_parent(const std::vector<Individual>& pop, PopKind kind,
                                const EvolutionConfig& cfg, Rng& rng) {
    if (pop.empty()) throw std::invalid_argument("select_parent: empty population");
    const int n = static_cast<int>(pop.size());
    if (!cfg.guided) return pop[static_cast<std::size_t>(rng.uniform_int(n))];
    int best = rng.uniform_int(n);
    for (int i = 1; i < cfg.tournament_size; ++i) {
        int c = rng.uniform_int(n);
        if (better_for(kind, pop[static_cast<std::size_t>(c)].fit,
                       pop[static_cast<std::size_t>(best)].fit))
            best = c;
    }
    return pop[static_cast<std::size_t>(best)];
}

ExprPtr crossover(const ExprPtr& a, const ExprPtr& b, Rng& rng, const EvolutionConfig& cfg) {
    for (int attempt = 0; attempt < 5; ++attempt) {
        ExprPtr child;
        if (rng.chance(cfg.conjunctive_crossover_prob)) {
            child = Expr::bool_bin(BoolBinOp::And, a, b);
        } else {
            std::vector<ExprPtr> na, nb;
            collect_nodes(a, na);
            collect_nodes(b, nb);
            const int i = rng.uniform_int(static_cast<int>(na.size()));
            const Type t = na[static_cast<std::size_t>(i)]->type();
            std::vector<int> candidates;
            for (int j = 0; j < static_cast<int>(nb.size()); ++j)
                if (nb[static_cast<std::size_t>(j)]->type() == t) candidates.push_back(j);
            if (candidates.empty()) continue;
            const int j = candidates[static_cast<std::size_t>(
                rng.uniform_int(static_cast<int>(candidates.size())))];
            child = replace_at(a, i, nb[static_cast<std::size_t>(j)]);
        }
        if (within_limits(*child, cfg)) return child;
    }
    return a;
}

namespace {

enum class MutOp { Flip, Regen, Perturb, VarReplace };

ExprPtr flip_operator(const ExprPtr& e, const std::vector<ExprPtr>& nodes,
                      const std::vector<int>& sites, Rng& rng) {
    const int idx = sites[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(sites.size())))];
    const ExprPtr& n = nodes[static_cast<std::size_t>(idx)];
    ExprPtr replacement;
    if (n->kind() == ExprKind::Cmp) {
        auto op = static_cast<CmpOp>((static_cast<int>(n->cmp_op()) + 1 + rng.uniform_int(5)) % 6);
        replacement = Expr::cmp(op, n->left(), n->right());
    } else {
        auto op = static_cast<BoolBinOp>((static_cast<int>(n->bool_op()) + 1 + rng.uniform_int(4)) % 5);
        replacement = Expr::bool_bin(op, n->left(), n->right());
    }
    return replace_at(e, idx, std::move(replacement));
}

} // namespace

ExprPtr mutate_always(const ExprPtr& e, const VarSignature& sig, Rng& rng,
                      const EvolutionConfig& cfg) {
    std::vector<ExprPtr> nodes;
    collect_nodes(e, nodes);

    std::vector<int> flip_sites, const_sites, var_sites;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        const auto& n = nodes[static_cast<std::size_t>(i)];
        switch (n->kind()) {
        case ExprKind::Cmp:
        case ExprKind::BoolBin: flip_sites.push_back(i); break;
        case ExprKind::Const: const_sites.push_back(i); break;
        case ExprKind::BoolVar:
        case ExprKind::NumVar:
            if (sig.indexes_of(n->type()).size() >= 2) var_sites.push_back(i);
            break;
        default: break;
        }
    }

    std::vector<MutOp> applicable;
    if (!flip_sites.empty()) applicable.push_back(MutOp::Flip);
    applicable.push_back(MutOp::Regen);
    if (!const_sites.empty()) applicable.push_back(MutOp::Perturb);
    if (!var_sites.empty()) applicable.push_back(MutOp::VarReplace);

    switch (applicable[static_cast<std::size_t>(
        rng.uniform_int(static_cast<int>(applicable.size())))]) {
    case MutOp::Flip:
        return flip_operator(e, nodes, flip_sites, rng);
    case MutOp::Regen: {
        for (int attempt = 0; attempt < 5; ++attempt) {
            const int idx = rng.uniform_int(static_cast<int>(nodes.size()));
            const Type t = nodes[static_cast<std::size_t>(idx)]->type();
            const int depth = t == Type::Boolean ? std::max(3, min_bool_depth(sig)) : 3;
            ExprPtr sub = random_tree(sig, t, depth, false, rng);
            ExprPtr child = replace_at(e, idx, std::move(sub));
            if (within_limits(*child, cfg)) return child;
        }
        return e;
    }
    case MutOp::Perturb: {
        const int idx = const_sites[static_cast<std::size_t>(
            rng.uniform_int(static_cast<int>(const_sites.size())))];
        const double old = nodes[static_cast<std::size_t>(idx)]->const_value();
        double v;
        if (rng.chance(0.5)) v = rng.chance(0.5) ? old + 1.0 : old - 1.0;
        else v = kConstantPool[rng.uniform_int(4)];
        return replace_at(e, idx, Expr::constant(v));
    }
    case MutOp::VarReplace: {
        const int idx = var_sites[static_cast<std::size_t>(
            rng.uniform_int(static_cast<int>(var_sites.size())))];
        const auto& n = nodes[static_cast<std::size_t>(idx)];
        auto options = sig.indexes_of(n->type());
        options.erase(std::remove(options.begin(), options.end(), n->var_index()), options.end());
        const int pick = options[static_cast<std::size_t>(
            rng.uniform_int(static_cast<int>(options.size())))];
        return replace_at(e, idx, Expr::var(sig, pick));
    }
    }
    return e;
}

ExprPtr mutate(const ExprPtr& e, const VarSignature& sig, Rng& rng, const EvolutionConfig& cfg) {
    if (!rng.chance(cfg.mutation_rate)) return e;
    return mutate_always(e, sig, rng, cfg);
}

namespace {

int best_index(const std::vector<Individual>& pop, PopKind kind) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(pop.size()); ++i)
        if (better_for(kind, pop[static_cast<std::size_t>(i)].fit,
                       pop[static_cast<std::size_t>(best)].fit))
            best = i;
    return best;
}

// Indexes ordered best-first under the population objective, index as the
// final tiebreak so the ordering is total and deterministic.
std::vector<int> ranked_indexes(const std::vector<Individual>& pop, PopKind kind) {
    std::vector<int> idx(pop.size());
    for (int i = 0; i < static_cast<int>(idx.size()); ++i) idx[static_cast<std::size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        auto c = compare_for(kind, pop[static_cast<std::size_t>(a)].fit,
                             pop[static_cast<std::size_t>(b)].fit);
        if (c != 0) return c == std::strong_ordering::less;
        return a < b;
    });
    return idx;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int workers = std::min<int>(threads, static_cast<int>(n));
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

struct ArchiveEntry {
    ExprPtr expr;
    FitnessVector fit;
};

// Running best-trackers over every individual ever evaluated. Replacement is
// strict, so earliest discovery wins all ties.
class Archive {
public:
    void record(const ExprPtr& e, const FitnessVector& f) {
        ++count_;
        if (f.fp == 0) {
            if (f.fn == 0 && !perfect_) perfect_ = ArchiveEntry{e, f};
            if (!best_zero_fp_ ||
                std::tie(f.fn, f.size) < std::tie(best_zero_fp_->fit.fn, best_zero_fp_->fit.size))
                best_zero_fp_ = ArchiveEntry{e, f};
        }
        if (!best_overall_ || compare_for(PopKind::FpFirst, f, best_overall_->fit) ==
                                  std::strong_ordering::less)
            best_overall_ = ArchiveEntry{e, f};
    }

    long long count() const { return count_; }
    const std::optional<ArchiveEntry>& perfect() const { return perfect_; }
    const std::optional<ArchiveEntry>& best_zero_fp() const { return best_zero_fp_; }
    const std::optional<ArchiveEntry>& best_overall() const { return best_overall_; }

private:
    long long count_ = 0;
    std::optional<ArchiveEntry> perfect_, best_zero_fp_, best_overall_;
};

} // namespace

void migrate(std::vector<Individual>& fp_pop, std::vector<Individual>& fn_pop, int count) {
    if (count <= 0) return;
    const int k = std::min<int>({count, static_cast<int>(fp_pop.size()),
                                 static_cast<int>(fn_pop.size())});
    auto fp_rank = ranked_indexes(fp_pop, PopKind::FpFirst);
    auto fn_rank = ranked_indexes(fn_pop, PopKind::FnFirst);

    std::vector<Individual> fp_best, fn_best;
    for (int i = 0; i < k; ++i) {
        fp_best.push_back(fp_pop[static_cast<std::size_t>(fp_rank[static_cast<std::size_t>(i)])]);
        fn_best.push_back(fn_pop[static_cast<std::size_t>(fn_rank[static_cast<std::size_t>(i)])]);
    }
    for (int i = 0; i < k; ++i) {
        const auto fp_worst = fp_rank[fp_rank.size() - 1 - static_cast<std::size_t>(i)];
        const auto fn_worst = fn_rank[fn_rank.size() - 1 - static_cast<std::size_t>(i)];
        fn_pop[static_cast<std::size_t>(fn_worst)] = fp_best[static_cast<std::size_t>(i)];
        fp_pop[static_cast<std::size_t>(fp_worst)] = fn_best[static_cast<std::size_t>(i)];
    }
}

EvolveResult evolve(const StateRepo& repo, const ExprPtr& alpha, const EvolutionConfig& cfg,
                    std::span<const ExprPtr> extra_seeds) {
    validate_config(cfg);
    if (repo.positives().empty() && repo.negatives().empty())
        throw std::invalid_argument("evolve: repository is empty on both sides");

    const int threads = cfg.threads > 0
                            ? cfg.threads
                            : std::max(1u, std::thread::hardware_concurrency());
    const auto start = std::chrono::steady_clock::now();
    std::optional<std::int64_t> time_budget_ms = cfg.time_budget_ms;
    if (!time_budget_ms && !cfg.max_generations) time_budget_ms = 30'000;

    Rng rng(cfg.seed);
    auto [fp_pop, fn_pop] = init_populations(alpha, repo.signature(), cfg, rng, extra_seeds);

    Archive archive;
    auto evaluate_all = [&](std::vector<Individual*>& fresh) {
        parallel_for(fresh.size(), threads, [&](std::size_t i) {
            fresh[i]->fit = count_deficiencies(*fresh[i]->expr, repo);
        });
        for (auto* ind : fresh) archive.record(ind->expr, ind->fit);
    };

    {
        std::vector<Individual*> fresh;
        for (auto& ind : fp_pop) fresh.push_back(&ind);
        for (auto& ind : fn_pop) fresh.push_back(&ind);
        evaluate_all(fresh);
    }

    auto expired = [&]() {
        if (!time_budget_ms) return false;
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        return elapsed >= *time_budget_ms;
    };

    auto result_from = [&](const ArchiveEntry& entry, int generations) {
        EvolveResult r;
        r.best = entry.expr;
        r.fitness = entry.fit;
        r.zero_fp_explored = archive.best_zero_fp().has_value();
        r.perfect_found = archive.perfect().has_value();
        r.explored = archive.count();
        r.generations = generations;
        return r;
    };

    int gen = 0;
    if (!archive.perfect()) {
        auto breed = [&](const std::vector<Individual>& pop, PopKind kind) {
            std::vector<Individual> next;
            next.reserve(pop.size());
            next.push_back(pop[static_cast<std::size_t>(best_index(pop, kind))]); // elitism
            while (next.size() < pop.size()) {
                const Individual& p1 = select_parent(pop, kind, cfg, rng);
                ExprPtr child;
                if (rng.chance(cfg.crossover_rate)) {
                    const Individual& p2 = select_parent(pop, kind, cfg, rng);
                    child = crossover(p1.expr, p2.expr, rng, cfg);
                } else {
                    child = p1.expr;
                }
                child = mutate(child, repo.signature(), rng, cfg);
                next.push_back({std::move(child), {}});
            }
            return next;
        };

        while (!(cfg.max_generations && gen >= *cfg.max_generations) && !expired()) {
            ++gen;
            auto next_fp = breed(fp_pop, PopKind::FpFirst);
            auto next_fn = breed(fn_pop, PopKind::FnFirst);

            std::vector<Individual*> fresh;
            for (std::size_t i = 1; i < next_fp.size(); ++i) fresh.push_back(&next_fp[i]);
            for (std::size_t i = 1; i < next_fn.size(); ++i) fresh.push_back(&next_fn[i]);
            evaluate_all(fresh);

            fp_pop = std::move(next_fp);
            fn_pop = std::move(next_fn);

            if (cfg.on_generation)
                cfg.on_generation(gen,
                                  fp_pop[static_cast<std::size_t>(best_index(fp_pop, PopKind::FpFirst))].fit,
                                  fn_pop[static_cast<std::size_t>(best_index(fn_pop, PopKind::FnFirst))].fit);

            if (archive.perfect()) break;

            if (cfg.migration_count > 0 && gen % cfg.migration_interval == 0)
                migrate(fp_pop, fn_pop, cfg.migration_count);
        }
    }

    if (archive.perfect()) return result_from(*archive.perfect(), gen);
    if (archive.best_zero_fp()) return result_from(*archive.best_zero_fp(), gen);
    return result_from(*archive.best_overall(), gen);
}

} // namespace aoi
