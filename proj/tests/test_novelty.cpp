#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "novarch/novelty.hpp"
#include "novarch/space.hpp"

using namespace novarch;

namespace {

// s2 architecture with one operation index on every edge
DiscreteArchitecture uniform_arch(int op) {
    const OperationSpace& s2 = OperationSpace::s2();
    DiscreteArchitecture a;
    a.space = &s2;
    for (const auto& [src, dst] : s2.edges) a.edges.push_back({0, src, dst, op});
    a.normalize();
    return a;
}

std::vector<const DiscreteArchitecture*> as_pool(const std::vector<DiscreteArchitecture>& v) {
    std::vector<const DiscreteArchitecture*> pool;
    for (const DiscreteArchitecture& a : v) pool.push_back(&a);
    return pool;
}

// independent reference: all dissimilarities, one self-match dropped,
// ascending sort, mean of the first k
double novelty_reference(const DiscreteArchitecture& a,
                         const std::vector<DiscreteArchitecture>& pool, std::size_t k) {
    std::vector<double> dis;
    bool dropped = false;
    for (const DiscreteArchitecture& p : pool) {
        if (!dropped && p == a) {
            dropped = true;
            continue;
        }
        dis.push_back(dissimilarity(a, p));
    }
    if (dis.empty()) return 1.0;
    std::sort(dis.begin(), dis.end());
    const std::size_t take = std::min(k, dis.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) sum += dis[i];
    return sum / static_cast<double>(take);
}

} // namespace

TEST_CASE("two cells sharing exactly two of six edges score 0.2 and 0.8", "[novelty]") {
    // 4-node cells, 6 edges each; identical tuples only on the two edges
    // into node 3 from nodes 0 and 1
    DiscreteArchitecture a = uniform_arch(1);
    DiscreteArchitecture b = uniform_arch(2);
    for (ArchEdge& e : b.edges) {
        if (e.target == 3 && (e.source == 0 || e.source == 1)) e.op = 1;
    }
    REQUIRE(similarity(a, b) == 0.2);
    REQUIRE(dissimilarity(a, b) == 0.8);
    REQUIRE(similarity(b, a) == 0.2);
}

TEST_CASE("similarity bounds and identities", "[novelty]") {
    DiscreteArchitecture a = uniform_arch(1);
    REQUIRE(similarity(a, a) == 1.0);
    REQUIRE(dissimilarity(a, a) == 0.0);

    DiscreteArchitecture disjoint = uniform_arch(3);
    REQUIRE(similarity(a, disjoint) == 0.0);
    REQUIRE(dissimilarity(a, disjoint) == 1.0);
}

TEST_CASE("similarity rejects mismatched spaces", "[novelty]") {
    DiscreteArchitecture a = uniform_arch(1);
    DiscreteArchitecture b = decode(random_genotype(OperationSpace::s1(), std::uint64_t{1}));
    REQUIRE_THROWS_AS(similarity(a, b), space_error);
}

TEST_CASE("s2 similarity takes only the values m/(12-m)", "[novelty]") {
    const std::set<double> allowed = {0.0,      1.0 / 11.0, 2.0 / 10.0, 3.0 / 9.0,
                                      4.0 / 8.0, 5.0 / 7.0,  1.0};
    RandomEngine eng(31337);
    const OperationSpace& s2 = OperationSpace::s2();
    for (int trial = 0; trial < 2000; ++trial) {
        DiscreteArchitecture a = arch_at(s2, uniform_index(eng, kS2SpaceSize));
        DiscreteArchitecture b = arch_at(s2, uniform_index(eng, kS2SpaceSize));
        const double sim = similarity(a, b);
        REQUIRE(allowed.count(sim) == 1);
        REQUIRE(similarity(b, a) == sim);
        REQUIRE(dissimilarity(a, b) == 1.0 - sim);
    }
}

TEST_CASE("novelty of a fully duplicated pool is zero", "[novelty]") {
    DiscreteArchitecture a = uniform_arch(2);
    std::vector<DiscreteArchitecture> pool = {a, a, a};
    REQUIRE(novelty(a, as_pool(pool), {.k = 5}) == 0.0);
}

TEST_CASE("novelty averages what is available when the pool is small", "[novelty]") {
    DiscreteArchitecture a = uniform_arch(1);
    DiscreteArchitecture at08 = uniform_arch(2); // shares nothing yet
    for (ArchEdge& e : at08.edges)
        if (e.target == 3 && (e.source == 0 || e.source == 1)) e.op = 1;
    DiscreteArchitecture at10 = uniform_arch(0);
    REQUIRE(dissimilarity(a, at08) == 0.8);
    REQUIRE(dissimilarity(a, at10) == 1.0);

    std::vector<DiscreteArchitecture> pool = {at08, at10};
    REQUIRE(novelty(a, as_pool(pool), {.k = 5}) == 0.9);
}

TEST_CASE("empty pools are maximally novel", "[novelty]") {
    DiscreteArchitecture a = uniform_arch(1);
    REQUIRE(novelty(a, {}, {.k = 5}) == 1.0);
    // a pool holding only the individual itself degenerates to empty
    std::vector<DiscreteArchitecture> self_only = {a};
    REQUIRE(novelty(a, as_pool(self_only), {.k = 5}) == 1.0);
}

TEST_CASE("novelty matches a brute-force reference on random pools", "[novelty]") {
    const OperationSpace& s2 = OperationSpace::s2();
    RandomEngine eng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<DiscreteArchitecture> pool;
        for (int i = 0; i < 50; ++i) pool.push_back(arch_at(s2, uniform_index(eng, kS2SpaceSize)));
        DiscreteArchitecture a = arch_at(s2, uniform_index(eng, kS2SpaceSize));
        const double expect = novelty_reference(a, pool, 5);
        REQUIRE(novelty(a, as_pool(pool), {.k = 5}) == expect);

        // pool order must not matter
        std::vector<DiscreteArchitecture> shuffled = pool;
        std::reverse(shuffled.begin(), shuffled.end());
        REQUIRE(novelty(a, as_pool(shuffled), {.k = 5}) == expect);
    }
}

TEST_CASE("adding a duplicate of the scored architecture never raises novelty", "[novelty]") {
    const OperationSpace& s2 = OperationSpace::s2();
    RandomEngine eng(555);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<DiscreteArchitecture> pool;
        for (int i = 0; i < 10; ++i) pool.push_back(arch_at(s2, uniform_index(eng, kS2SpaceSize)));
        DiscreteArchitecture a = arch_at(s2, uniform_index(eng, kS2SpaceSize));
        const double before = novelty(a, as_pool(pool), {.k = 5});
        std::vector<DiscreteArchitecture> with_dup = pool;
        with_dup.push_back(a);
        REQUIRE(novelty(a, as_pool(with_dup), {.k = 5}) <= before);
    }
}

TEST_CASE("novelty keeps the self-match when the query is outside the pool", "[novelty]") {
    DiscreteArchitecture a = uniform_arch(1);
    DiscreteArchitecture b = uniform_arch(2);

    // query_in_pool=true drops one zero-distance entry; false keeps it, so a
    // rediscovered architecture meets its archived copy at distance zero
    std::vector<DiscreteArchitecture> pool = {a, b};
    REQUIRE(novelty(a, as_pool(pool), {.k = 5}, true) == 1.0);
    REQUIRE(novelty(a, as_pool(pool), {.k = 5}, false) == 0.5);

    // only one self-match is ever dropped even if several copies are pooled
    std::vector<DiscreteArchitecture> two_copies = {a, a, b};
    REQUIRE(novelty(a, as_pool(two_copies), {.k = 5}, true) == 0.5);
    REQUIRE(novelty(a, as_pool(two_copies), {.k = 5}, false) ==
            Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("novelty lies in [0, 1]", "[novelty]") {
    const OperationSpace& s2 = OperationSpace::s2();
    RandomEngine eng(808);
    std::vector<DiscreteArchitecture> pool;
    for (int i = 0; i < 40; ++i) pool.push_back(arch_at(s2, uniform_index(eng, kS2SpaceSize)));
    for (int trial = 0; trial < 100; ++trial) {
        DiscreteArchitecture a = arch_at(s2, uniform_index(eng, kS2SpaceSize));
        const double nov = novelty(a, as_pool(pool), {.k = 5});
        REQUIRE(nov >= 0.0);
        REQUIRE(nov <= 1.0);
    }
}

TEST_CASE("novelty config rejects k below one", "[novelty]") {
    DiscreteArchitecture a = uniform_arch(1);
    std::vector<DiscreteArchitecture> pool = {uniform_arch(2)};
    REQUIRE_THROWS_AS(novelty(a, as_pool(pool), {.k = 0}), config_error);
}

TEST_CASE("archive deduplicates by key", "[novelty]") {
    Archive archive;
    std::vector<DiscreteArchitecture> pop;
    const OperationSpace& s2 = OperationSpace::s2();
    for (std::size_t i = 0; i < 17; ++i) pop.push_back(arch_at(s2, i));
    pop.push_back(arch_at(s2, 0)); // three duplicates
    pop.push_back(arch_at(s2, 1));
    pop.push_back(arch_at(s2, 2));
    REQUIRE(pop.size() == 20);

    archive_update(archive, pop);
    REQUIRE(archive.size() == 17);

    archive_update(archive, pop); // idempotent
    REQUIRE(archive.size() == 17);
}

TEST_CASE("archive size equals the distinct keys ever inserted", "[novelty]") {
    const OperationSpace& s2 = OperationSpace::s2();
    Archive archive;
    std::set<std::string> keys_seen;
    RandomEngine eng(4711);
    for (int gen = 0; gen < 30; ++gen) {
        std::vector<DiscreteArchitecture> pop;
        for (int i = 0; i < 10; ++i) pop.push_back(arch_at(s2, uniform_index(eng, 200)));
        for (const DiscreteArchitecture& a : pop) keys_seen.insert(canonical_key(a));
        const std::size_t before = archive.size();
        archive_update(archive, pop);
        REQUIRE(archive.size() >= before); // monotone
        REQUIRE(archive.size() == keys_seen.size());
    }
    for (const DiscreteArchitecture& a : archive.entries())
        REQUIRE(keys_seen.count(canonical_key(a)) == 1);
}

TEST_CASE("a capped archive freezes instead of evicting", "[novelty]") {
    const OperationSpace& s2 = OperationSpace::s2();
    Archive archive;
    NoveltyConfig cfg{.k = 5, .archive_cap = 3};
    std::vector<DiscreteArchitecture> pop;
    for (std::size_t i = 0; i < 8; ++i) pop.push_back(arch_at(s2, i));
    archive_update(archive, pop, cfg);
    REQUIRE(archive.size() == 3);
    // the first three keys, in insertion order, are untouched
    for (std::size_t i = 0; i < 3; ++i)
        REQUIRE(canonical_key(archive.entries()[i]) == canonical_key(pop[i]));
    REQUIRE(!archive.contains(canonical_key(pop[5])));
}

TEST_CASE("novelty pool merges population and archive by key", "[novelty]") {
    const OperationSpace& s2 = OperationSpace::s2();
    Archive archive;
    std::vector<DiscreteArchitecture> old_pop = {arch_at(s2, 0), arch_at(s2, 1), arch_at(s2, 2)};
    archive_update(archive, old_pop);

    // population repeats one archived architecture and adds two new ones,
    // one of them twice
    std::vector<DiscreteArchitecture> pop = {arch_at(s2, 1), arch_at(s2, 7), arch_at(s2, 7),
                                             arch_at(s2, 9)};
    const auto pool = novelty_pool(archive, pop);
    // all 4 population entries + archived 0 and 2 (archived 1 is shadowed)
    REQUIRE(pool.size() == 6);
    std::multiset<std::string> keys;
    for (const DiscreteArchitecture* p : pool) keys.insert(canonical_key(*p));
    REQUIRE(keys.count(canonical_key(arch_at(s2, 1))) == 1);
    REQUIRE(keys.count(canonical_key(arch_at(s2, 7))) == 2);
    REQUIRE(keys.count(canonical_key(arch_at(s2, 0))) == 1);
    REQUIRE(keys.count(canonical_key(arch_at(s2, 2))) == 1);
    REQUIRE(keys.count(canonical_key(arch_at(s2, 9))) == 1);
}
