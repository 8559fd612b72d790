#ifndef NOVARCH_SERIALIZE_HPP
#define NOVARCH_SERIALIZE_HPP

// SearchResult persistence: a JSON document (schema "novarch-result-v1")
// and the per-individual telemetry CSV. Serialization is byte-deterministic
// for a given result: JSON keys are emitted in sorted order and doubles use
// shortest round-trip formatting. Infinite crowding distances are encoded
// as the string "inf" (JSON has no infinity literal).

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "novarch/error.hpp"
#include "novarch/search.hpp"

namespace novarch {

// Shortest decimal string that round-trips the value.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_telemetry_csv(const SearchResult& r, std::ostream& out) {
    out << "gen,key,f_acc,f_nov,rank,crowding\n";
    for (const GenerationRecord& rec : r.history) {
        for (const IndividualRecord& ind : rec.individuals) {
            out << rec.generation << ',' << ind.key << ',' << format_double(ind.f_acc) << ','
                << format_double(ind.f_nov) << ',' << ind.rank << ','
                << format_double(ind.crowding) << '\n';
        }
    }
}

namespace detail {

inline nlohmann::json crowding_to_json(double c) {
    if (std::isinf(c)) return "inf";
    return c;
}

inline double crowding_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw data_error("crowding must be a number or \"inf\"");
    }
    return j.get<double>();
}

} // namespace detail

inline nlohmann::json result_to_json(const SearchResult& r) {
    nlohmann::json j;
    j["schema"] = "novarch-result-v1";
    j["seed"] = r.seed;
    j["mode"] = to_string(r.mode);
    j["space"] = r.space_name;
    j["oracle"] = r.oracle_spec;
    j["noise_sigma"] = r.noise_sigma;
    j["config"] = {
        {"population_size", r.ea.population_size},
        {"generations", r.ea.generations},
        {"crossover_eta", r.ea.crossover_eta},
        {"crossover_prob", r.ea.crossover_prob},
        {"mutation_eta", r.ea.mutation_eta},
        {"mutation_prob", r.ea.mutation_prob},
        {"novelty_k", r.novelty.k},
        {"archive_cap", r.novelty.archive_cap},
    };
    const auto entry_to_json = [](const FrontEntry& e) {
        return nlohmann::json{{"key", e.key}, {"f_acc", e.f_acc}, {"f_nov", e.f_nov}};
    };
    j["best"] = entry_to_json(r.best);
    j["pareto_front"] = nlohmann::json::array();
    for (const FrontEntry& e : r.pareto_front) j["pareto_front"].push_back(entry_to_json(e));
    j["history"] = nlohmann::json::array();
    for (const GenerationRecord& rec : r.history) {
        nlohmann::json g;
        g["generation"] = rec.generation;
        g["unique_count"] = rec.unique_count;
        g["archive_size"] = rec.archive_size;
        g["cumulative_distinct"] = rec.cumulative_distinct;
        g["individuals"] = nlohmann::json::array();
        for (const IndividualRecord& ind : rec.individuals) {
            g["individuals"].push_back({{"key", ind.key},
                                        {"f_acc", ind.f_acc},
                                        {"f_nov", ind.f_nov},
                                        {"rank", ind.rank},
                                        {"crowding", detail::crowding_to_json(ind.crowding)}});
        }
        j["history"].push_back(std::move(g));
    }
    return j;
}

inline SearchResult result_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema").get<std::string>() != "novarch-result-v1")
            throw data_error("unsupported result schema: " + j.at("schema").dump());
        SearchResult r;
        r.seed = j.at("seed").get<std::uint64_t>();
        r.mode = parse_mode(j.at("mode").get<std::string>());
        r.space_name = j.at("space").get<std::string>();
        r.oracle_spec = j.at("oracle").get<std::string>();
        r.noise_sigma = j.at("noise_sigma").get<double>();
        const nlohmann::json& cfg = j.at("config");
        r.ea.population_size = cfg.at("population_size").get<std::size_t>();
        r.ea.generations = cfg.at("generations").get<std::size_t>();
        r.ea.crossover_eta = cfg.at("crossover_eta").get<double>();
        r.ea.crossover_prob = cfg.at("crossover_prob").get<double>();
        r.ea.mutation_eta = cfg.at("mutation_eta").get<double>();
        r.ea.mutation_prob = cfg.at("mutation_prob").get<double>();
        r.ea.rng_seed = r.seed;
        r.novelty.k = cfg.at("novelty_k").get<std::size_t>();
        r.novelty.archive_cap = cfg.at("archive_cap").get<std::size_t>();
        const auto entry_from_json = [](const nlohmann::json& e) {
            return FrontEntry{e.at("key").get<std::string>(), e.at("f_acc").get<double>(),
                              e.at("f_nov").get<double>()};
        };
        r.best = entry_from_json(j.at("best"));
        for (const nlohmann::json& e : j.at("pareto_front")) r.pareto_front.push_back(entry_from_json(e));
        for (const nlohmann::json& g : j.at("history")) {
            GenerationRecord rec;
            rec.generation = g.at("generation").get<std::size_t>();
            rec.unique_count = g.at("unique_count").get<std::size_t>();
            rec.archive_size = g.at("archive_size").get<std::size_t>();
            rec.cumulative_distinct = g.at("cumulative_distinct").get<std::size_t>();
            for (const nlohmann::json& ind : g.at("individuals")) {
                rec.individuals.push_back({ind.at("key").get<std::string>(),
                                           ind.at("f_acc").get<double>(),
                                           ind.at("f_nov").get<double>(),
                                           ind.at("rank").get<int>(),
                                           detail::crowding_from_json(ind.at("crowding"))});
            }
            r.history.push_back(std::move(rec));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("malformed result JSON: ") + e.what());
    }
}

inline SearchResult load_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open result file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(path + ": " + e.what());
    }
    return result_from_json(j);
}

} // namespace novarch

#endif
