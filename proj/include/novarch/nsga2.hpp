#ifndef NOVARCH_NSGA2_HPP
#define NOVARCH_NSGA2_HPP

// NSGA-II machinery, written from scratch: Pareto dominance, fast
// non-dominated sorting, crowding distance, binary tournament, simulated
// binary crossover, polynomial mutation, and (mu + lambda) environmental
// selection. Both objectives are maximized throughout; there is no sign
// juggling at call sites. Every tie breaks on an index, so whole runs are
// bit-reproducible given a seed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "novarch/error.hpp"
#include "novarch/rng.hpp"
#include "novarch/space.hpp"

namespace novarch {

struct Individual {
    ContinuousGenotype genotype;
    double f_acc = 0.0; // fitness objective, [0,1], maximized
    double f_nov = 0.0; // novelty objective, [0,1], maximized
    int rank = -1;      // front index after a sort pass; -1 = stale/unranked
    double crowding = 0.0;
};

struct EAConfig {
    std::size_t population_size = 20;
    std::size_t generations = 50;
    double crossover_eta = 15.0;
    double crossover_prob = 0.7;
    double mutation_eta = 20.0;
    double mutation_prob = 0.1;
    std::uint64_t rng_seed = 0;

    void check() const {
        if (population_size < 4 || population_size % 2 != 0)
            throw config_error("population_size must be even and >= 4");
        if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0))
            throw config_error("crossover_prob must be in [0,1]");
        if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
            throw config_error("mutation_prob must be in [0,1]");
        if (!(crossover_eta > 0.0)) throw config_error("crossover_eta must be > 0");
        if (!(mutation_eta > 0.0)) throw config_error("mutation_eta must be > 0");
    }
};

// Objective rows, one per individual, every column maximized.
using ObjectiveMatrix = std::vector<std::vector<double>>;

inline bool dominates(const std::vector<double>& p, const std::vector<double>& q) {
    bool strictly_better = false;
    for (std::size_t m = 0; m < p.size(); ++m) {
        if (p[m] < q[m]) return false;
        if (p[m] > q[m]) strictly_better = true;
    }
    return strictly_better;
}

inline bool dominates(const Individual& p, const Individual& q) {
    return dominates({p.f_acc, p.f_nov}, {q.f_acc, q.f_nov});
}

// Deb's fast non-dominated sort. Front 0 is the non-dominated set; front
// i+1 is non-dominated once fronts <= i are removed. Fronts list indices in
// ascending order.
inline std::vector<std::vector<std::size_t>> fast_nondominated_sort(const ObjectiveMatrix& objs) {
    const std::size_t n = objs.size();
    std::vector<std::vector<std::size_t>> dominated_by(n); // S_p: who p dominates
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(objs[p], objs[q]))
                dominated_by[p].push_back(q);
            else if (dominates(objs[q], objs[p]))
                ++domination_count[p];
        }
        if (domination_count[p] == 0) fronts[0].push_back(p);
    }

    std::size_t i = 0;
    while (!fronts[i].empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[i]) {
            for (std::size_t q : dominated_by[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        ++i;
        fronts.push_back(std::move(next));
    }
    fronts.pop_back(); // the loop always leaves one empty front
    std::for_each(fronts.begin(), fronts.end(),
                  [](std::vector<std::size_t>& f) { std::sort(f.begin(), f.end()); });
    return fronts;
}

// Crowding distance for one front, aligned with `front`. Per objective the
// front is ordered by (value, index); the positional first and last get
// +infinity, interior members accumulate (gap to neighbors) / (range), and
// a zero-range objective contributes nothing.
inline std::vector<double> crowding_distance(const ObjectiveMatrix& objs,
                                             const std::vector<std::size_t>& front) {
    const std::size_t n = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    const std::size_t n_obj = objs[front[0]].size();

    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < n_obj; ++m) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            double va = objs[front[a]][m], vb = objs[front[b]][m];
            if (va != vb) return va < vb;
            return front[a] < front[b];
        });
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double range = objs[front[order.back()]][m] - objs[front[order.front()]][m];
        if (range <= 0.0) continue;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            if (dist[order[j]] == inf) continue;
            dist[order[j]] +=
                (objs[front[order[j + 1]]][m] - objs[front[order[j - 1]]][m]) / range;
        }
    }
    return dist;
}

namespace detail {

inline ObjectiveMatrix objective_rows(const std::vector<Individual>& pop) {
    ObjectiveMatrix objs;
    objs.reserve(pop.size());
    for (const Individual& ind : pop) objs.push_back({ind.f_acc, ind.f_nov});
    return objs;
}

} // namespace detail

// Stamps rank (front index) and crowding distance onto every individual.
inline void rank_population(std::vector<Individual>& pop) {
    const ObjectiveMatrix objs = detail::objective_rows(pop);
    const auto fronts = fast_nondominated_sort(objs);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        const auto dist = crowding_distance(objs, fronts[f]);
        for (std::size_t j = 0; j < fronts[f].size(); ++j) {
            pop[fronts[f][j]].rank = static_cast<int>(f);
            pop[fronts[f][j]].crowding = dist[j];
        }
    }
}

// Single-objective ranking for the ablation modes: every individual gets a
// unique rank by (value descending, index ascending); crowding is unused
// and cleared to 0.
inline void rank_population_scalar(std::vector<Individual>& pop,
                                   const std::vector<double>& values) {
    if (values.size() != pop.size())
        throw std::logic_error("scalar rank values must align with population");
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return a < b;
    });
    for (std::size_t r = 0; r < order.size(); ++r) {
        pop[order[r]].rank = static_cast<int>(r);
        pop[order[r]].crowding = 0.0;
    }
}

// Picks two distinct indices uniformly; the winner has the lower rank, then
// the larger crowding distance, then the lower index.
inline std::size_t binary_tournament(const std::vector<Individual>& pop, RandomEngine& eng) {
    if (pop.size() < 2) throw selection_error("binary tournament needs at least 2 individuals");
    std::size_t i = uniform_index(eng, pop.size());
    std::size_t j = uniform_index(eng, pop.size() - 1);
    if (j >= i) ++j;
    if (pop[i].rank < 0 || pop[j].rank < 0)
        throw std::logic_error("binary tournament on unranked individuals");
    if (pop[i].rank != pop[j].rank) return pop[i].rank < pop[j].rank ? i : j;
    if (pop[i].crowding != pop[j].crowding) return pop[i].crowding > pop[j].crowding ? i : j;
    return std::min(i, j);
}

// Pre-clip SBX spread transform for one variable pair. Exposed separately
// because the midpoint identity (c1+c2)/2 = (x1+x2)/2 holds only before
// clipping.
inline std::pair<double, double> sbx_transform(double x1, double x2, double u, double eta) {
    const double beta = (u <= 0.5) ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                   : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
    const double mid = 0.5 * (x1 + x2);
    const double half = 0.5 * std::abs(x2 - x1);
    return {mid - beta * half, mid + beta * half};
}

inline double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

// SBX over [0,1] bounds. The whole-pair probability gates the operator;
// within an active pair each variable is crossed with probability 0.5 and
// near-identical components (|diff| < 1e-14) are copied without consuming
// random draws.
inline std::pair<ContinuousGenotype, ContinuousGenotype> sbx_crossover(
    const ContinuousGenotype& p1, const ContinuousGenotype& p2, double eta, double prob,
    RandomEngine& eng) {
    if (p1.space != p2.space || p1.values.size() != p2.values.size())
        throw encoding_error("sbx parents must share a space and length");
    ContinuousGenotype c1 = p1;
    ContinuousGenotype c2 = p2;
    if (!(uniform01(eng) < prob)) return {std::move(c1), std::move(c2)};

    for (std::size_t i = 0; i < p1.values.size(); ++i) {
        if (std::abs(p1.values[i] - p2.values[i]) < 1e-14) continue;
        if (uniform01(eng) > 0.5) continue;
        const auto [a, b] = sbx_transform(p1.values[i], p2.values[i], uniform01(eng), eta);
        c1.values[i] = clip01(a);
        c2.values[i] = clip01(b);
    }
    return {std::move(c1), std::move(c2)};
}

// Deb's bounded polynomial mutation over [0,1], applied per variable with
// probability prob.
inline ContinuousGenotype polynomial_mutation(const ContinuousGenotype& g, double eta, double prob,
                                              RandomEngine& eng) {
    ContinuousGenotype out = g;
    const double mut_pow = 1.0 / (eta + 1.0);
    for (double& y : out.values) {
        if (!(uniform01(eng) < prob)) continue;
        const double u = uniform01(eng);
        double deltaq;
        if (u <= 0.5) {
            const double xy = 1.0 - y; // 1 - delta1 with bounds [0,1]
            deltaq = std::pow(2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0), mut_pow) - 1.0;
        } else {
            const double xy = y; // 1 - delta2
            deltaq = 1.0 - std::pow(2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0),
                                    mut_pow);
        }
        y = clip01(y + deltaq);
    }
    return out;
}

// (mu + lambda) survival: admit whole fronts in rank order, truncate the
// last admitted front by descending crowding (ties toward the lower index).
// Returns selected indices in admission order.
inline std::vector<std::size_t> environmental_selection(const ObjectiveMatrix& objs,
                                                        std::size_t target_size) {
    if (objs.size() < target_size)
        throw selection_error("environmental selection pool smaller than target size");
    std::vector<std::size_t> selected;
    selected.reserve(target_size);
    for (const auto& front : fast_nondominated_sort(objs)) {
        if (selected.size() + front.size() <= target_size) {
            selected.insert(selected.end(), front.begin(), front.end());
            if (selected.size() == target_size) break;
            continue;
        }
        const auto dist = crowding_distance(objs, front);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (dist[a] != dist[b]) return dist[a] > dist[b];
            return front[a] < front[b];
        });
        for (std::size_t j = 0; selected.size() < target_size; ++j)
            selected.push_back(front[order[j]]);
        break;
    }
    return selected;
}

inline std::vector<std::size_t> environmental_selection(const std::vector<Individual>& pool,
                                                        std::size_t target_size) {
    return environmental_selection(detail::objective_rows(pool), target_size);
}

// Single-objective survival: the target_size best by (value descending,
// index ascending).
inline std::vector<std::size_t> environmental_selection_scalar(const std::vector<double>& values,
                                                               std::size_t target_size) {
    if (values.size() < target_size)
        throw selection_error("environmental selection pool smaller than target size");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return a < b;
    });
    order.resize(target_size);
    return order;
}

} // namespace novarch

#endif
