#ifndef NOVARCH_SEARCH_HPP
#define NOVARCH_SEARCH_HPP

// The generation loop: random initial population, per-generation fitness
// and novelty evaluation, archive update, NSGA-II variation and survival,
// and final Pareto-front extraction. Single-objective ablation modes share
// the exact same variation operators; only ranking and survival change.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "novarch/error.hpp"
#include "novarch/evaluator.hpp"
#include "novarch/novelty.hpp"
#include "novarch/nsga2.hpp"
#include "novarch/rng.hpp"
#include "novarch/space.hpp"

namespace novarch {

enum class SearchMode { multi, accuracy_only, novelty_only };

inline std::string to_string(SearchMode m) {
    switch (m) {
        case SearchMode::multi: return "multi";
        case SearchMode::accuracy_only: return "accuracy-only";
        case SearchMode::novelty_only: return "novelty-only";
    }
    throw config_error("invalid search mode value");
}

inline SearchMode parse_mode(std::string_view s) {
    if (s == "multi") return SearchMode::multi;
    if (s == "accuracy-only") return SearchMode::accuracy_only;
    if (s == "novelty-only") return SearchMode::novelty_only;
    throw config_error("mode must be one of multi, accuracy-only, novelty-only (got \"" +
                       std::string(s) + "\")");
}

struct SearchConfig {
    EAConfig ea;
    NoveltyConfig novelty;
    const OperationSpace* space = &OperationSpace::s2();
    std::shared_ptr<const FitnessOracle> oracle;
    SearchMode mode = SearchMode::multi;
    std::size_t workers = 1; // evaluation fan-out; 0 = hardware concurrency

    // Echoed verbatim into the result for provenance; no behavior.
    std::string oracle_spec;
    double noise_sigma = 0.0;

    void check() const {
        ea.check();
        novelty.check();
        if (space == nullptr) throw config_error("search space not set");
        if (!oracle) throw config_error("fitness oracle not set");
    }
};

struct IndividualRecord {
    std::string key;
    double f_acc = 0.0;
    double f_nov = 0.0;
    int rank = 0;
    double crowding = 0.0;
};

// Snapshot of one generation's population, taken after ranking and archive
// update but before variation.
struct GenerationRecord {
    std::size_t generation = 0;
    std::vector<IndividualRecord> individuals; // population order
    std::size_t unique_count = 0;              // distinct keys in this population
    std::size_t archive_size = 0;              // after this generation's update
    std::size_t cumulative_distinct = 0;       // distinct keys seen in any recorded population
};

struct FrontEntry {
    std::string key;
    double f_acc = 0.0;
    double f_nov = 0.0;
};

struct SearchResult {
    std::uint64_t seed = 0;
    SearchMode mode = SearchMode::multi;
    std::string space_name;
    std::string oracle_spec;
    double noise_sigma = 0.0;
    EAConfig ea;
    NoveltyConfig novelty;
    std::vector<FrontEntry> pareto_front; // deduplicated final front 0,
                                          // sorted by (f_acc, f_nov) desc, key asc
    FrontEntry best;                      // pareto_front.front()
    std::vector<GenerationRecord> history;
};

// Runs fn(0..n-1) across up to `workers` threads (0 = hardware concurrency).
// Each index is processed exactly once; the first exception is rethrown on
// the caller after all threads join.
inline void parallel_for(std::size_t n, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    }
    for (std::thread& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::vector<std::size_t> diversity_series(const SearchResult& r) {
    std::vector<std::size_t> out;
    out.reserve(r.history.size());
    for (const GenerationRecord& rec : r.history) out.push_back(rec.unique_count);
    return out;
}

inline std::set<std::string> exploration_set(const SearchResult& r) {
    std::set<std::string> keys;
    for (const GenerationRecord& rec : r.history)
        for (const IndividualRecord& ind : rec.individuals) keys.insert(ind.key);
    return keys;
}

namespace detail {

inline void rank_by_mode(std::vector<Individual>& pop, SearchMode mode) {
    switch (mode) {
        case SearchMode::multi:
            rank_population(pop);
            return;
        case SearchMode::accuracy_only:
        case SearchMode::novelty_only: {
            std::vector<double> values;
            values.reserve(pop.size());
            for (const Individual& ind : pop)
                values.push_back(mode == SearchMode::accuracy_only ? ind.f_acc : ind.f_nov);
            rank_population_scalar(pop, values);
            return;
        }
    }
}

inline std::vector<std::size_t> survive_by_mode(const std::vector<Individual>& pool,
                                                std::size_t target, SearchMode mode) {
    if (mode == SearchMode::multi) return environmental_selection(pool, target);
    std::vector<double> values;
    values.reserve(pool.size());
    for (const Individual& ind : pool)
        values.push_back(mode == SearchMode::accuracy_only ? ind.f_acc : ind.f_nov);
    return environmental_selection_scalar(values, target);
}

} // namespace detail

inline SearchResult run_search(const SearchConfig& cfg) {
    cfg.check();
    const OperationSpace& space = *cfg.space;
    const FitnessOracle& oracle = *cfg.oracle;
    const std::size_t n = cfg.ea.population_size;

    RandomEngine eng(splitmix64(cfg.ea.rng_seed));
    std::vector<Individual> pop(n);
    for (Individual& ind : pop) ind.genotype = random_genotype(space, eng);

    Archive archive;
    std::set<std::string> seen;

    SearchResult result;
    result.seed = cfg.ea.rng_seed;
    result.mode = cfg.mode;
    result.space_name = space.name;
    result.oracle_spec = cfg.oracle_spec.empty() ? oracle.kind() : cfg.oracle_spec;
    result.noise_sigma = cfg.noise_sigma;
    result.ea = cfg.ea;
    result.novelty = cfg.novelty;

    const auto decode_all = [&](const std::vector<Individual>& p) {
        std::vector<DiscreteArchitecture> archs(p.size());
        parallel_for(p.size(), cfg.workers,
                     [&](std::size_t i) { archs[i] = decode(p[i].genotype); });
        return archs;
    };

    // One generation sees one oracle realization (the stamp) and one frozen
    // novelty reference pool. in_pool says whether the scored individuals
    // are themselves pool members (population) or outsiders (offspring).
    const auto evaluate_all = [&](std::vector<Individual>& p,
                                  const std::vector<DiscreteArchitecture>& archs,
                                  const std::vector<const DiscreteArchitecture*>& pool,
                                  std::uint64_t stamp, bool in_pool) {
        parallel_for(p.size(), cfg.workers, [&](std::size_t i) {
            p[i].f_acc = oracle.evaluate(archs[i], stamp);
            p[i].f_nov = novelty(archs[i], pool, cfg.novelty, in_pool);
            p[i].rank = -1;
            p[i].crowding = 0.0;
        });
    };

    const auto record_generation = [&](std::size_t gen, const std::vector<Individual>& p,
                                       const std::vector<DiscreteArchitecture>& archs) {
        GenerationRecord rec;
        rec.generation = gen;
        rec.individuals.reserve(p.size());
        std::unordered_set<std::string> unique;
        for (std::size_t i = 0; i < p.size(); ++i) {
            std::string key = canonical_key(archs[i]);
            unique.insert(key);
            seen.insert(key);
            rec.individuals.push_back(
                {std::move(key), p[i].f_acc, p[i].f_nov, p[i].rank, p[i].crowding});
        }
        rec.unique_count = unique.size();
        archive_update(archive, archs, cfg.novelty);
        rec.archive_size = archive.size();
        rec.cumulative_distinct = seen.size();
        result.history.push_back(std::move(rec));
    };

    std::vector<DiscreteArchitecture> archs;
    if (cfg.ea.generations == 0) {
        archs = decode_all(pop);
        evaluate_all(pop, archs, novelty_pool(archive, archs), 0, true);
        detail::rank_by_mode(pop, cfg.mode);
        record_generation(0, pop, archs);
    } else {
        for (std::size_t g = 1; g <= cfg.ea.generations; ++g) {
            archs = decode_all(pop);
            evaluate_all(pop, archs, novelty_pool(archive, archs), g, true);
            detail::rank_by_mode(pop, cfg.mode);
            record_generation(g, pop, archs);

            std::vector<Individual> offspring;
            offspring.reserve(n);
            for (std::size_t pair = 0; pair < n / 2; ++pair) {
                const std::size_t a = binary_tournament(pop, eng);
                const std::size_t b = binary_tournament(pop, eng);
                auto [c1, c2] = sbx_crossover(pop[a].genotype, pop[b].genotype,
                                              cfg.ea.crossover_eta, cfg.ea.crossover_prob, eng);
                Individual o1, o2;
                o1.genotype =
                    polynomial_mutation(c1, cfg.ea.mutation_eta, cfg.ea.mutation_prob, eng);
                o2.genotype =
                    polynomial_mutation(c2, cfg.ea.mutation_eta, cfg.ea.mutation_prob, eng);
                offspring.push_back(std::move(o1));
                offspring.push_back(std::move(o2));
            }
            const auto off_archs = decode_all(offspring);
            // Offspring score novelty against the post-update archive, which
            // at this point holds every parent architecture as well. They are
            // not pool members: an offspring that reproduces an archived
            // architecture meets its copy at distance zero and scores low,
            // so survival pressure favors unseen architectures.
            std::vector<const DiscreteArchitecture*> archive_pool;
            archive_pool.reserve(archive.size());
            for (const DiscreteArchitecture& e : archive.entries()) archive_pool.push_back(&e);
            evaluate_all(offspring, off_archs, archive_pool, g, false);

            std::vector<Individual> combined = pop;
            combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                            std::make_move_iterator(offspring.end()));
            std::vector<Individual> next;
            next.reserve(n);
            for (std::size_t idx : detail::survive_by_mode(combined, n, cfg.mode))
                next.push_back(std::move(combined[idx]));
            pop = std::move(next);
        }
        archs = decode_all(pop);
    }

    // Final front: rank 0 of the last population under both objectives
    // (whatever the search mode), deduplicated by key.
    const auto fronts = fast_nondominated_sort(detail::objective_rows(pop));
    std::vector<FrontEntry> entries;
    entries.reserve(fronts[0].size());
    for (std::size_t idx : fronts[0])
        entries.push_back({canonical_key(archs[idx]), pop[idx].f_acc, pop[idx].f_nov});
    std::sort(entries.begin(), entries.end(), [](const FrontEntry& a, const FrontEntry& b) {
        if (a.f_acc != b.f_acc) return a.f_acc > b.f_acc;
        if (a.f_nov != b.f_nov) return a.f_nov > b.f_nov;
        return a.key < b.key;
    });
    std::unordered_set<std::string> front_keys;
    for (FrontEntry& e : entries)
        if (front_keys.insert(e.key).second) result.pareto_front.push_back(std::move(e));

    for (std::size_t i = 0; i < result.pareto_front.size(); ++i) {
        for (std::size_t j = 0; j < result.pareto_front.size(); ++j) {
            if (i == j) continue;
            const FrontEntry& p = result.pareto_front[i];
            const FrontEntry& q = result.pareto_front[j];
            if (dominates({p.f_acc, p.f_nov}, {q.f_acc, q.f_nov}))
                throw std::logic_error("pareto front failed post-hoc non-domination check");
        }
    }
    result.best = result.pareto_front.front();
    return result;
}

} // namespace novarch

#endif
