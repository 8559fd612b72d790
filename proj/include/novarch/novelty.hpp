#ifndef NOVARCH_NOVELTY_HPP
#define NOVARCH_NOVELTY_HPP

// Structural novelty: edge-set similarity between architectures, the
// archive of everything ever present in a population, and the k-nearest
// neighbor novelty score computed against archive + current population.

#include <algorithm>
#include <cstddef>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "novarch/error.hpp"
#include "novarch/space.hpp"

namespace novarch {

struct NoveltyConfig {
    std::size_t k = 5;           // neighbors averaged into the score
    std::size_t archive_cap = 0; // 0 = unlimited; nonzero freezes the archive at that size

    void check() const {
        if (k < 1) throw config_error("novelty k must be >= 1");
    }
};

// Sim = |common tuples| / (n1 + n2 - |common tuples|) over full
// (cell, source, target, op) tuples. 1 iff equal, 0 iff disjoint.
inline double similarity(const DiscreteArchitecture& a1, const DiscreteArchitecture& a2) {
    if (a1.space != a2.space)
        throw space_error("similarity requires architectures from the same space");
    // Edges are sorted by (cell, target, source) and unique on that triple,
    // so a single merge pass finds all matching tuples.
    std::size_t common = 0;
    std::size_t i = 0, j = 0;
    while (i < a1.edges.size() && j < a2.edges.size()) {
        const ArchEdge& x = a1.edges[i];
        const ArchEdge& y = a2.edges[j];
        auto kx = std::tie(x.cell, x.target, x.source);
        auto ky = std::tie(y.cell, y.target, y.source);
        if (kx < ky) {
            ++i;
        } else if (ky < kx) {
            ++j;
        } else {
            if (x.op == y.op) ++common;
            ++i;
            ++j;
        }
    }
    const std::size_t n1 = a1.edges.size();
    const std::size_t n2 = a2.edges.size();
    if (n1 + n2 == 0) return 1.0;
    return static_cast<double>(common) / static_cast<double>(n1 + n2 - common);
}

inline double dissimilarity(const DiscreteArchitecture& a1, const DiscreteArchitecture& a2) {
    return 1.0 - similarity(a1, a2);
}

// Every distinct architecture that has ever been part of a population.
// Insertion order is kept for reporting; no iteration depends on hash order.
class Archive {
  public:
    // Returns true when the architecture was newly added. A full archive
    // (size at cap) silently rejects new entries; existing ones are kept.
    bool insert(const DiscreteArchitecture& a, std::size_t cap = 0) {
        std::string key = canonical_key(a);
        if (keys_.count(key)) return false;
        if (cap != 0 && entries_.size() >= cap) return false;
        keys_.insert(std::move(key));
        entries_.push_back(a);
        return true;
    }

    bool contains(const std::string& key) const { return keys_.count(key) != 0; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<DiscreteArchitecture>& entries() const { return entries_; }

  private:
    std::unordered_set<std::string> keys_;
    std::vector<DiscreteArchitecture> entries_; // insertion order
};

// Inserts every population member's architecture once, in population order.
inline void archive_update(Archive& archive, const std::vector<DiscreteArchitecture>& population,
                           const NoveltyConfig& cfg = {}) {
    for (const DiscreteArchitecture& a : population) archive.insert(a, cfg.archive_cap);
}

// Reference pool for novelty scoring: the population as-is (duplicates
// included, they signal low novelty) plus archive entries whose key the
// population does not already contain.
inline std::vector<const DiscreteArchitecture*> novelty_pool(
    const Archive& archive, const std::vector<DiscreteArchitecture>& population) {
    std::vector<const DiscreteArchitecture*> pool;
    pool.reserve(population.size() + archive.size());
    std::unordered_set<std::string> pop_keys;
    for (const DiscreteArchitecture& a : population) {
        pool.push_back(&a);
        pop_keys.insert(canonical_key(a));
    }
    for (const DiscreteArchitecture& e : archive.entries()) {
        if (!pop_keys.count(canonical_key(e))) pool.push_back(&e);
    }
    return pool;
}

// F_nov(a): mean dissimilarity to the k nearest pool members. When the
// queried individual is itself a member of the pool (scoring a population
// against archive-union-population), exactly one entry equal to it is
// dropped as the self-match; further equal entries are genuine zero-distance
// neighbors. When the query is NOT in the pool (scoring offspring against
// the archive), nothing is dropped: an archived copy of the same
// architecture is a real zero-distance neighbor, which is what makes
// rediscovering old architectures unattractive. Fewer than k candidates:
// average what is there. Empty pool: maximally novel.
inline double novelty(const DiscreteArchitecture& a,
                      const std::vector<const DiscreteArchitecture*>& pool,
                      const NoveltyConfig& cfg = {}, bool query_in_pool = true) {
    cfg.check();
    std::vector<double> dis;
    dis.reserve(pool.size());
    bool self_removed = !query_in_pool;
    for (const DiscreteArchitecture* p : pool) {
        if (!self_removed && *p == a) {
            self_removed = true;
            continue;
        }
        dis.push_back(dissimilarity(a, *p));
    }
    if (dis.empty()) return 1.0;
    // full ascending sort: the summation order (and so the exact result)
    // must not depend on how the pool was ordered
    std::sort(dis.begin(), dis.end());
    const std::size_t k = std::min(cfg.k, dis.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += dis[i];
    return sum / static_cast<double>(k);
}

} // namespace novarch

#endif
