#ifndef NOVARCH_SPACE_HPP
#define NOVARCH_SPACE_HPP

// Cell-based architecture search spaces: the continuous genotype the
// variation operators act on, the discrete architecture it decodes to,
// and the canonical string key used for archiving and benchmark lookup.
//
// Two spaces are built in:
//   s2 - 4 nodes, 6 edges, 5 operations, one cell   (genotype length 30)
//   s1 - 7 nodes, 14 candidate edges per cell, 8 operations, two cells
//        (normal + reduction, genotype length 224)

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "novarch/error.hpp"
#include "novarch/rng.hpp"

namespace novarch {

struct OperationSpace {
    std::string name;                          // "s1" or "s2"
    std::vector<std::string> ops;              // ordered operation names
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;    // ordered (source, target); defines genotype layout
    int cells_per_genotype = 1;

    std::size_t genotype_length() const {
        return static_cast<std::size_t>(cells_per_genotype) * edges.size() * ops.size();
    }

    int op_index(std::string_view op_name) const {
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (ops[i] == op_name) return static_cast<int>(i);
        }
        return -1;
    }

    // The two canonical spaces. Returned objects are immutable singletons;
    // genotypes and architectures reference them by pointer.
    static const OperationSpace& s1();
    static const OperationSpace& s2();
    static const OperationSpace& by_name(std::string_view name);
};

inline const OperationSpace& OperationSpace::s2() {
    static const OperationSpace space = [] {
        OperationSpace s;
        s.name = "s2";
        s.ops = {"none", "skip_connect", "nor_conv_1x1", "nor_conv_3x3", "avg_pool_3x3"};
        s.num_nodes = 4;
        // All pairs (i, j) with i < j, ordered by (target, source). This
        // grouping-by-target matches the key string layout below.
        for (int t = 1; t < 4; ++t)
            for (int src = 0; src < t; ++src) s.edges.emplace_back(src, t);
        s.cells_per_genotype = 1;
        return s;
    }();
    return space;
}

inline const OperationSpace& OperationSpace::s1() {
    static const OperationSpace space = [] {
        OperationSpace s;
        s.name = "s1";
        s.ops = {"none",         "max_pool_3x3", "avg_pool_3x3", "skip_connect",
                 "sep_conv_3x3", "sep_conv_5x5", "dil_conv_3x3", "dil_conv_5x5"};
        // Nodes 0,1 are cell inputs, 2..5 intermediate, 6 output. Candidate
        // edges feed each intermediate node from every earlier node.
        s.num_nodes = 7;
        for (int t = 2; t <= 5; ++t)
            for (int src = 0; src < t; ++src) s.edges.emplace_back(src, t);
        s.cells_per_genotype = 2; // normal + reduction
        return s;
    }();
    return space;
}

inline const OperationSpace& OperationSpace::by_name(std::string_view name) {
    if (name == "s1") return s1();
    if (name == "s2") return s2();
    throw space_error("unknown search space: " + std::string(name));
}

// Real vector in [0,1]^L; rows of |ops| weights per edge, cell-major.
struct ContinuousGenotype {
    const OperationSpace* space = nullptr;
    std::vector<double> values;

    std::size_t row_offset(int cell, std::size_t edge_idx) const {
        return (static_cast<std::size_t>(cell) * space->edges.size() + edge_idx) * space->ops.size();
    }

    void check() const {
        if (space == nullptr) throw encoding_error("genotype has no space");
        if (values.size() != space->genotype_length()) {
            throw encoding_error("genotype length " + std::to_string(values.size()) +
                                 " does not match space " + space->name + " (expected " +
                                 std::to_string(space->genotype_length()) + ")");
        }
        for (double v : values) {
            if (!(v >= 0.0 && v <= 1.0))
                throw encoding_error("genotype component " + std::to_string(v) + " outside [0,1]");
        }
    }
};

// One selected operation on one edge of one cell.
struct ArchEdge {
    int cell = 0;
    int source = 0;
    int target = 0;
    int op = 0; // index into space ops

    auto operator<=>(const ArchEdge&) const = default;
};

// Set of selected edges; normalized to a fixed sort order so equality and
// key generation are independent of construction order.
struct DiscreteArchitecture {
    const OperationSpace* space = nullptr;
    std::vector<ArchEdge> edges;

    void normalize() {
        std::sort(edges.begin(), edges.end(), [](const ArchEdge& a, const ArchEdge& b) {
            return std::tie(a.cell, a.target, a.source) < std::tie(b.cell, b.target, b.source);
        });
    }

    bool operator==(const DiscreteArchitecture& other) const {
        return space == other.space && edges == other.edges;
    }
};

namespace detail {

inline int argmax_op(const ContinuousGenotype& g, std::size_t row) {
    const std::size_t n_ops = g.space->ops.size();
    int best = 0;
    double best_w = g.values[row];
    for (std::size_t k = 1; k < n_ops; ++k) {
        if (g.values[row + k] > best_w) { // ties keep the lowest op index
            best_w = g.values[row + k];
            best = static_cast<int>(k);
        }
    }
    return best;
}

inline double max_weight(const ContinuousGenotype& g, std::size_t row) {
    const std::size_t n_ops = g.space->ops.size();
    double m = g.values[row];
    for (std::size_t k = 1; k < n_ops; ++k) m = std::max(m, g.values[row + k]);
    return m;
}

} // namespace detail

// Discretization. s2: per edge row, the operation with maximal weight.
// s1: per intermediate node, rank candidate incoming edges by their maximal
// operation weight, keep the top 2 (ties toward the lower source index),
// and give each kept edge its argmax operation.
inline DiscreteArchitecture decode(const ContinuousGenotype& g) {
    g.check();
    const OperationSpace& space = *g.space;
    DiscreteArchitecture arch;
    arch.space = g.space;

    if (space.name == "s2") {
        for (std::size_t e = 0; e < space.edges.size(); ++e) {
            const auto [src, dst] = space.edges[e];
            arch.edges.push_back({0, src, dst, detail::argmax_op(g, g.row_offset(0, e))});
        }
        arch.normalize();
        return arch;
    }

    // s1
    for (int cell = 0; cell < space.cells_per_genotype; ++cell) {
        for (int node = 2; node <= 5; ++node) {
            struct Candidate {
                double weight;
                int source;
                std::size_t edge_idx;
            };
            std::vector<Candidate> cands;
            for (std::size_t e = 0; e < space.edges.size(); ++e) {
                if (space.edges[e].second != node) continue;
                cands.push_back({detail::max_weight(g, g.row_offset(cell, e)),
                                 space.edges[e].first, e});
            }
            std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
                if (a.weight != b.weight) return a.weight > b.weight;
                return a.source < b.source;
            });
            for (std::size_t i = 0; i < 2 && i < cands.size(); ++i) {
                const auto& c = cands[i];
                arch.edges.push_back(
                    {cell, c.source, node, detail::argmax_op(g, g.row_offset(cell, c.edge_idx))});
            }
        }
    }
    arch.normalize();
    return arch;
}

// Canonical key string. Bijective with the architecture within its space and
// stable across platforms.
//
// s2 uses the NAS-Bench-201 community convention, grouping edges by target
// node:   |op~0|+|op~0|op~1|+|op~0|op~1|op~2|
// s1 joins "src-dst:op" tuples sorted by (dst, src) with ';' per cell and
// joins cells with "//".
inline std::string canonical_key(const DiscreteArchitecture& a) {
    const OperationSpace& space = *a.space;
    DiscreteArchitecture sorted = a;
    sorted.normalize();

    std::string out;
    if (space.name == "s2") {
        int current_target = 0;
        for (const ArchEdge& e : sorted.edges) {
            if (e.target != current_target) {
                if (current_target != 0) out += '+';
                out += '|';
                current_target = e.target;
            }
            out += space.ops[static_cast<std::size_t>(e.op)];
            out += '~';
            out += std::to_string(e.source);
            out += '|';
        }
        return out;
    }

    for (int cell = 0; cell < space.cells_per_genotype; ++cell) {
        if (cell != 0) out += "//";
        bool first = true;
        for (const ArchEdge& e : sorted.edges) {
            if (e.cell != cell) continue;
            if (!first) out += ';';
            first = false;
            out += std::to_string(e.source);
            out += '-';
            out += std::to_string(e.target);
            out += ':';
            out += space.ops[static_cast<std::size_t>(e.op)];
        }
    }
    return out;
}

// Structural validity check for architectures built outside decode().
inline void validate_architecture(const DiscreteArchitecture& a) {
    const OperationSpace& space = *a.space;
    std::vector<ArchEdge> edges = a.edges;
    for (const ArchEdge& e : edges) {
        if (e.cell < 0 || e.cell >= space.cells_per_genotype)
            throw space_error("architecture edge cell out of range");
        if (e.op < 0 || static_cast<std::size_t>(e.op) >= space.ops.size())
            throw space_error("architecture edge op out of range");
        if (e.source < 0 || e.target <= e.source || e.target >= space.num_nodes)
            throw space_error("architecture edge nodes out of range");
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            if (edges[i].cell == edges[j].cell && edges[i].source == edges[j].source &&
                edges[i].target == edges[j].target)
                throw space_error("duplicate (cell, source, target) edge");
        }
    }
    if (space.name == "s2") {
        if (edges.size() != space.edges.size())
            throw space_error("s2 architecture must select one op per edge");
    } else {
        if (edges.size() != 16)
            throw space_error("s1 architecture must hold 16 edges");
        for (int cell = 0; cell < 2; ++cell) {
            for (int node = 2; node <= 5; ++node) {
                int incoming = 0;
                for (const ArchEdge& e : edges)
                    if (e.cell == cell && e.target == node) ++incoming;
                if (incoming != 2)
                    throw space_error("s1 intermediate node must keep exactly 2 incoming edges");
            }
        }
    }
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            return parts;
        }
        parts.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace detail

// Inverse of canonical_key. Throws data_error on malformed keys, unknown
// operations, or keys that violate the space's structural invariants.
inline DiscreteArchitecture parse_key(const OperationSpace& space, std::string_view key) {
    DiscreteArchitecture arch;
    arch.space = &space;
    const auto fail = [&](const std::string& why) {
        throw data_error("invalid " + space.name + " key \"" + std::string(key) + "\": " + why);
    };

    if (space.name == "s2") {
        auto groups = detail::split(key, '+');
        if (groups.size() != 3) fail("expected 3 '+'-separated node groups");
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const int target = static_cast<int>(gi) + 1;
            std::string_view grp = groups[gi];
            if (grp.size() < 2 || grp.front() != '|' || grp.back() != '|')
                fail("node group must be delimited by '|'");
            auto tokens = detail::split(grp.substr(1, grp.size() - 2), '|');
            if (tokens.size() != static_cast<std::size_t>(target))
                fail("node " + std::to_string(target) + " must list " + std::to_string(target) +
                     " incoming edges");
            for (std::size_t ti = 0; ti < tokens.size(); ++ti) {
                auto parts = detail::split(tokens[ti], '~');
                if (parts.size() != 2) fail("edge token must be op~source");
                int op = space.op_index(parts[0]);
                if (op < 0) fail("unknown operation \"" + parts[0] + "\"");
                if (parts[1] != std::to_string(ti)) fail("edge sources must be 0..target-1 in order");
                arch.edges.push_back({0, static_cast<int>(ti), target, op});
            }
        }
    } else {
        std::string k(key);
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = k.find("//", start);
            if (pos == std::string::npos) {
                cells.push_back(k.substr(start));
                break;
            }
            cells.push_back(k.substr(start, pos - start));
            start = pos + 2;
        }
        if (cells.size() != static_cast<std::size_t>(space.cells_per_genotype))
            fail("expected " + std::to_string(space.cells_per_genotype) + " '//'-separated cells");
        for (std::size_t cell = 0; cell < cells.size(); ++cell) {
            for (const std::string& tuple : detail::split(cells[cell], ';')) {
                auto colon = tuple.find(':');
                if (colon == std::string::npos) fail("edge tuple must be src-dst:op");
                auto dash = tuple.find('-');
                if (dash == std::string::npos || dash > colon) fail("edge tuple must be src-dst:op");
                int src = 0, dst = 0;
                try {
                    src = std::stoi(tuple.substr(0, dash));
                    dst = std::stoi(tuple.substr(dash + 1, colon - dash - 1));
                } catch (const std::exception&) {
                    fail("edge endpoints must be integers");
                }
                int op = space.op_index(tuple.substr(colon + 1));
                if (op < 0) fail("unknown operation \"" + tuple.substr(colon + 1) + "\"");
                arch.edges.push_back({static_cast<int>(cell), src, dst, op});
            }
        }
    }

    try {
        validate_architecture(arch);
    } catch (const space_error& e) {
        fail(e.what());
    }
    arch.normalize();
    if (canonical_key(arch) != key) fail("edges are not in canonical order");
    return arch;
}

inline constexpr std::size_t kS2SpaceSize = 15625; // 5^6

// Architecture <-> enumeration index for s2 (op indices as base-5 digits,
// first edge most significant).
inline std::size_t arch_index(const DiscreteArchitecture& a) {
    const OperationSpace& space = *a.space;
    if (space.name != "s2") throw space_error("arch_index supports only s2");
    DiscreteArchitecture sorted = a;
    sorted.normalize(); // matches the space edge order for s2
    std::size_t idx = 0;
    for (const ArchEdge& e : sorted.edges) idx = idx * space.ops.size() + static_cast<std::size_t>(e.op);
    return idx;
}

inline DiscreteArchitecture arch_at(const OperationSpace& space, std::size_t index) {
    if (space.name != "s2") throw space_error("arch_at supports only s2");
    DiscreteArchitecture arch;
    arch.space = &space;
    const std::size_t n_ops = space.ops.size();
    std::size_t rem = index;
    std::size_t divisor = kS2SpaceSize / n_ops; // 5^5
    for (const auto& [src, dst] : space.edges) {
        arch.edges.push_back({0, src, dst, static_cast<int>(rem / divisor)});
        rem %= divisor;
        divisor /= n_ops;
    }
    return arch; // already in (cell, target, source) order
}

// Visits every s2 architecture exactly once, in enumeration-index order.
// s1 enumeration is rejected: the space is too large to enumerate.
inline void enumerate_space(const OperationSpace& space,
                            const std::function<void(const DiscreteArchitecture&)>& visit) {
    if (space.name != "s2")
        throw space_error("enumeration is only supported for s2 (s1 is infeasible)");
    for (std::size_t i = 0; i < kS2SpaceSize; ++i) visit(arch_at(space, i));
}

inline std::vector<DiscreteArchitecture> enumerate_space(const OperationSpace& space) {
    std::vector<DiscreteArchitecture> all;
    all.reserve(kS2SpaceSize);
    enumerate_space(space, [&](const DiscreteArchitecture& a) { all.push_back(a); });
    return all;
}

inline ContinuousGenotype random_genotype(const OperationSpace& space, RandomEngine& eng) {
    ContinuousGenotype g;
    g.space = &space;
    g.values.resize(space.genotype_length());
    for (double& v : g.values) v = uniform01(eng);
    return g;
}

inline ContinuousGenotype random_genotype(const OperationSpace& space, std::uint64_t rng_seed) {
    RandomEngine eng(splitmix64(rng_seed));
    return random_genotype(space, eng);
}

// One-hot genotype selecting exactly the given architecture (decode inverse
// on the discrete range).
inline ContinuousGenotype one_hot_genotype(const DiscreteArchitecture& a) {
    const OperationSpace& space = *a.space;
    ContinuousGenotype g;
    g.space = a.space;
    g.values.assign(space.genotype_length(), 0.0);
    for (const ArchEdge& e : a.edges) {
        for (std::size_t ei = 0; ei < space.edges.size(); ++ei) {
            if (space.edges[ei].first == e.source && space.edges[ei].second == e.target) {
                g.values[g.row_offset(e.cell, ei) + static_cast<std::size_t>(e.op)] = 1.0;
                break;
            }
        }
    }
    return g;
}

} // namespace novarch

#endif
