// Command-line front end: run searches, enumerate the s2 space, generate
// synthetic benchmark tables, and post-process result files into plotting
// CSVs. Exit codes: 0 success, 1 configuration problem, 2 oracle or data
// problem, 3 runtime failure.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "novarch/novarch.hpp"

namespace fs = std::filesystem;
using namespace novarch;

namespace {

struct ResolvedConfig {
    std::size_t population_size = 20;
    std::size_t generations = 50;
    double crossover_eta = 15.0;
    double crossover_prob = 0.7;
    double mutation_eta = 20.0;
    double mutation_prob = 0.1;
    std::size_t novelty_k = 5;
    std::size_t archive_cap = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string space = "s2";
    std::string mode = "multi";
    std::string oracle; // "tabular:PATH" or "synthetic:SEED"
    double noise_sigma = 0.0;
    std::size_t workers = 0; // 0 = all available processors
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64_field(const std::string& field, const std::string& value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw config_error(field + " must be a non-negative integer, got \"" + value + "\"");
    return out;
}

double parse_double_field(const std::string& field, const std::string& value) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        throw config_error(field + " must be a number, got \"" + value + "\"");
    }
}

// `key = value` lines; blank lines and #-comments ignored
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": empty config key");
        if (kv.count(key))
            throw config_error(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
        kv[key] = value;
    }
    return kv;
}

void apply_config_entry(ResolvedConfig& rc, const std::string& key, const std::string& value) {
    if (key == "population_size")
        rc.population_size = parse_u64_field(key, value);
    else if (key == "generations")
        rc.generations = parse_u64_field(key, value);
    else if (key == "crossover_eta")
        rc.crossover_eta = parse_double_field(key, value);
    else if (key == "crossover_prob")
        rc.crossover_prob = parse_double_field(key, value);
    else if (key == "mutation_eta")
        rc.mutation_eta = parse_double_field(key, value);
    else if (key == "mutation_prob")
        rc.mutation_prob = parse_double_field(key, value);
    else if (key == "novelty_k")
        rc.novelty_k = parse_u64_field(key, value);
    else if (key == "archive_cap")
        rc.archive_cap = parse_u64_field(key, value);
    else if (key == "seed") {
        rc.seed = parse_u64_field(key, value);
        rc.seed_given = true;
    } else if (key == "space")
        rc.space = value;
    else if (key == "mode")
        rc.mode = value;
    else if (key == "oracle")
        rc.oracle = value;
    else if (key == "noise_sigma")
        rc.noise_sigma = parse_double_field(key, value);
    else if (key == "workers")
        rc.workers = parse_u64_field(key, value);
    else
        throw config_error("unknown config key: " + key);
}

// flags given on the command line; each overrides the config file
struct FlagOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode, space, oracle;
    std::optional<double> noise_sigma;
    std::optional<std::uint64_t> workers;
};

ResolvedConfig resolve_config(const FlagOverrides& flags) {
    ResolvedConfig rc;
    if (!flags.config_path.empty())
        for (const auto& [k, v] : read_config_file(flags.config_path))
            apply_config_entry(rc, k, v);
    if (flags.seed) {
        rc.seed = *flags.seed;
        rc.seed_given = true;
    }
    if (flags.mode) rc.mode = *flags.mode;
    if (flags.space) rc.space = *flags.space;
    if (flags.oracle) rc.oracle = *flags.oracle;
    if (flags.noise_sigma) rc.noise_sigma = *flags.noise_sigma;
    if (flags.workers) rc.workers = *flags.workers;
    if (rc.noise_sigma < 0.0) throw config_error("noise_sigma must be >= 0");
    return rc;
}

struct OracleSpec {
    enum class Kind { tabular, synthetic } kind;
    std::string path;       // tabular
    std::uint64_t seed = 0; // synthetic
};

OracleSpec parse_oracle_spec(const std::string& spec) {
    if (spec.empty())
        throw config_error("oracle not set (use --oracle tabular:PATH or synthetic:SEED)");
    if (spec.rfind("tabular:", 0) == 0) {
        OracleSpec o{OracleSpec::Kind::tabular, spec.substr(8), 0};
        if (o.path.empty()) throw config_error("oracle tabular: requires a file path");
        return o;
    }
    if (spec.rfind("synthetic:", 0) == 0)
        return {OracleSpec::Kind::synthetic, "", parse_u64_field("oracle", spec.substr(10))};
    throw config_error("oracle must be tabular:PATH or synthetic:SEED, got \"" + spec + "\"");
}

std::shared_ptr<const FitnessOracle> build_base_oracle(const OracleSpec& spec,
                                                       const OperationSpace& space) {
    if (spec.kind == OracleSpec::Kind::tabular)
        return std::make_shared<TabularOracle>(load_benchmark(spec.path, space, &std::cerr));
    return make_synthetic(space, spec.seed);
}

std::string iso_utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed to write " + path.string());
}

nlohmann::json resolved_to_json(const ResolvedConfig& rc) {
    return {
        {"population_size", rc.population_size},
        {"generations", rc.generations},
        {"crossover_eta", rc.crossover_eta},
        {"crossover_prob", rc.crossover_prob},
        {"mutation_eta", rc.mutation_eta},
        {"mutation_prob", rc.mutation_prob},
        {"novelty_k", rc.novelty_k},
        {"archive_cap", rc.archive_cap},
        {"seed", rc.seed},
        {"space", rc.space},
        {"mode", rc.mode},
        {"oracle", rc.oracle},
        {"noise_sigma", rc.noise_sigma},
        {"workers", rc.workers},
    };
}

int cmd_search(const FlagOverrides& flags, const std::string& out_dir) {
    const ResolvedConfig rc = resolve_config(flags);
    const OperationSpace& space = OperationSpace::by_name(rc.space);

    SearchConfig cfg;
    cfg.ea.population_size = rc.population_size;
    cfg.ea.generations = rc.generations;
    cfg.ea.crossover_eta = rc.crossover_eta;
    cfg.ea.crossover_prob = rc.crossover_prob;
    cfg.ea.mutation_eta = rc.mutation_eta;
    cfg.ea.mutation_prob = rc.mutation_prob;
    cfg.ea.rng_seed = rc.seed;
    cfg.novelty.k = rc.novelty_k;
    cfg.novelty.archive_cap = rc.archive_cap;
    cfg.space = &space;
    cfg.mode = parse_mode(rc.mode);
    cfg.workers = rc.workers;
    cfg.oracle_spec = rc.oracle;
    cfg.noise_sigma = rc.noise_sigma;

    const OracleSpec spec = parse_oracle_spec(rc.oracle);
    std::shared_ptr<const FitnessOracle> oracle = build_base_oracle(spec, space);
    if (rc.noise_sigma > 0.0)
        oracle = std::make_shared<NoisyOracle>(oracle, rc.noise_sigma,
                                               splitmix64(rc.seed ^ fnv1a64("noise-stream")));
    cfg.oracle = oracle;
    cfg.check(); // fail before touching the output directory

    fs::create_directories(out_dir);
    nlohmann::json manifest;
    manifest["schema"] = "novarch-manifest-v1";
    manifest["version"] = kVersion;
    manifest["timestamp"] = iso_utc_now();
    manifest["config_file"] = flags.config_path;
    manifest["output_dir"] = out_dir;
    manifest["resolved"] = resolved_to_json(rc);
    write_text_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");

    const SearchResult result = run_search(cfg);

    write_text_file(fs::path(out_dir) / "result.json", result_to_json(result).dump(2) + "\n");
    std::ostringstream csv;
    write_telemetry_csv(result, csv);
    write_text_file(fs::path(out_dir) / "telemetry.csv", csv.str());

    std::cout << "best " << result.best.key << " f_acc=" << format_double(result.best.f_acc)
              << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "result.json").string() << "\n";
    return 0;
}

int cmd_enumerate(const FlagOverrides& flags, const std::string& out_dir, bool out_given) {
    const ResolvedConfig rc = resolve_config(flags);
    const OperationSpace& space = OperationSpace::by_name(rc.space);

    std::shared_ptr<const FitnessOracle> oracle;
    if (!rc.oracle.empty()) oracle = build_base_oracle(parse_oracle_spec(rc.oracle), space);

    std::ofstream file;
    std::ostream* sink = &std::cout;
    if (out_given) {
        fs::create_directories(out_dir);
        file.open(fs::path(out_dir) / "keys.csv", std::ios::binary);
        if (!file) throw std::runtime_error("failed to open keys.csv under " + out_dir);
        sink = &file;
    }

    std::size_t count = 0;
    std::string argmax_key;
    double argmax_score = -1.0;
    enumerate_space(space, [&](const DiscreteArchitecture& a) { // throws for s1 -> exit 1
        ++count;
        const std::string key = canonical_key(a);
        if (oracle) {
            const double s = oracle->evaluate(a, 0);
            *sink << key << ',' << format_double(s) << '\n';
            if (s > argmax_score) {
                argmax_score = s;
                argmax_key = key;
            }
        } else {
            *sink << key << '\n';
        }
    });
    sink->flush();
    if (!*sink) throw std::runtime_error("failed while writing keys");

    std::cerr << "enumerated " << count << " architectures";
    if (oracle) std::cerr << "; argmax " << argmax_key << " score=" << format_double(argmax_score);
    std::cerr << "\n";
    return 0;
}

int cmd_gen_benchmark(const FlagOverrides& flags, const std::string& out_dir) {
    const ResolvedConfig rc = resolve_config(flags);
    if (!rc.seed_given) throw config_error("seed not set (use --seed N)");
    const OperationSpace& space = OperationSpace::by_name(rc.space);

    const SyntheticOracle oracle(space, rc.seed); // rejects s1
    fs::create_directories(out_dir);

    std::ostringstream csv;
    csv << "key,val_acc,test_acc\n";
    enumerate_space(space, [&](const DiscreteArchitecture& a) {
        const std::string pct = format_double(oracle.evaluate(a, 0) * 100.0);
        csv << canonical_key(a) << ',' << pct << ',' << pct << '\n';
    });
    write_text_file(fs::path(out_dir) / "benchmark.csv", csv.str());

    nlohmann::json meta;
    meta["schema"] = "novarch-benchmark-meta-v1";
    meta["seed"] = rc.seed;
    meta["rows"] = kS2SpaceSize;
    meta["optimum_key"] = oracle.optimum_key();
    meta["optimum_score"] = oracle.optimum_score();
    write_text_file(fs::path(out_dir) / "benchmark.meta.json", meta.dump(2) + "\n");

    std::cout << "wrote " << (fs::path(out_dir) / "benchmark.csv").string() << " ("
              << kS2SpaceSize << " rows)\n";
    std::cout << "optimum " << oracle.optimum_key() << " score="
              << format_double(oracle.optimum_score()) << "\n";
    return 0;
}

int cmd_analyze(const std::vector<std::string>& result_paths, const std::string& oracle_spec,
                const std::string& out_dir) {
    std::vector<SearchResult> runs;
    std::vector<std::string> stems;
    std::set<std::string> used_stems;
    for (const std::string& path : result_paths) {
        runs.push_back(load_result(path)); // data_error -> exit 2
        std::string stem = fs::path(path).stem().string();
        while (used_stems.count(stem)) stem += "_2";
        used_stems.insert(stem);
        stems.push_back(stem);
    }

    fs::create_directories(out_dir);

    // diversity.csv: one row per generation, one column per run
    std::size_t max_gens = 0;
    for (const SearchResult& r : runs) max_gens = std::max(max_gens, r.history.size());
    std::ostringstream div;
    div << "gen";
    for (const std::string& s : stems) div << ',' << s;
    div << '\n';
    for (std::size_t i = 0; i < max_gens; ++i) {
        std::size_t gen_label = i;
        for (const SearchResult& r : runs)
            if (i < r.history.size()) {
                gen_label = r.history[i].generation;
                break;
            }
        div << gen_label;
        for (const SearchResult& r : runs) {
            div << ',';
            if (i < r.history.size()) div << r.history[i].unique_count;
        }
        div << '\n';
    }
    write_text_file(fs::path(out_dir) / "diversity.csv", div.str());

    // exploration.csv: with an oracle, every architecture in the space with
    // its true score; otherwise the union of keys the runs discovered
    std::vector<std::set<std::string>> discovered;
    discovered.reserve(runs.size());
    for (const SearchResult& r : runs) discovered.push_back(exploration_set(r));

    std::ostringstream exp;
    exp << "key,true_score";
    for (const std::string& s : stems) exp << ',' << s;
    exp << '\n';
    const auto emit_row = [&](const std::string& key, const std::string& score) {
        exp << key << ',' << score;
        for (const auto& d : discovered) exp << ',' << (d.count(key) ? 1 : 0);
        exp << '\n';
    };
    if (!oracle_spec.empty()) {
        for (const SearchResult& r : runs)
            if (r.space_name != "s2")
                throw config_error(
                    "exploration scoring needs s2 results (run uses " + r.space_name + ")");
        const OperationSpace& s2 = OperationSpace::s2();
        const OracleSpec spec = parse_oracle_spec(oracle_spec);
        if (spec.kind == OracleSpec::Kind::synthetic) {
            const SyntheticOracle oracle(s2, spec.seed);
            enumerate_space(s2, [&](const DiscreteArchitecture& a) {
                emit_row(canonical_key(a), format_double(oracle.evaluate(a, 0)));
            });
        } else {
            const BenchmarkTable table = load_benchmark(spec.path, s2, &std::cerr);
            enumerate_space(s2, [&](const DiscreteArchitecture& a) {
                const std::string key = canonical_key(a);
                const auto it = table.records.find(key);
                if (it == table.records.end())
                    throw data_error("benchmark table is missing " + key);
                emit_row(key, format_double(it->second.test_acc / 100.0));
            });
        }
    } else {
        std::set<std::string> all_keys;
        for (const auto& d : discovered) all_keys.insert(d.begin(), d.end());
        for (const std::string& key : all_keys) emit_row(key, "");
    }
    write_text_file(fs::path(out_dir) / "exploration.csv", exp.str());

    double sum = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::cout << "run " << stems[i] << ": best " << runs[i].best.key
                  << " f_acc=" << format_double(runs[i].best.f_acc) << "\n";
        sum += runs[i].best.f_acc;
    }
    const double mean = sum / static_cast<double>(runs.size());
    double var = 0.0;
    for (const SearchResult& r : runs) var += (r.best.f_acc - mean) * (r.best.f_acc - mean);
    const double std_dev = std::sqrt(var / static_cast<double>(runs.size()));
    std::cout << "best f_acc over " << runs.size() << " runs: " << format_double(mean) << " +/- "
              << format_double(std_dev) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"novelty-driven neural architecture search"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    FlagOverrides flags;
    std::string out_dir = "novarch-out";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "key = value config file");
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* search = app.add_subcommand("search", "run an architecture search");
    add_common(search);
    search->add_option("--seed", flags.seed, "search RNG seed");
    search->add_option("--mode", flags.mode, "multi | accuracy-only | novelty-only");
    search->add_option("--space", flags.space, "s1 | s2");
    search->add_option("--oracle", flags.oracle, "tabular:PATH | synthetic:SEED");
    search->add_option("--noise-sigma", flags.noise_sigma, "gaussian noise on fitness estimates");
    search->add_option("--workers", flags.workers, "evaluation threads (0 = all processors)");

    CLI::App* enumerate = app.add_subcommand("enumerate", "list every s2 architecture key");
    add_common(enumerate);
    enumerate->add_option("--space", flags.space, "s1 | s2");
    enumerate->add_option("--oracle", flags.oracle, "score each key with this oracle");

    CLI::App* gen = app.add_subcommand("gen-benchmark", "materialize a synthetic benchmark CSV");
    add_common(gen);
    gen->add_option("--seed", flags.seed, "landscape seed");
    gen->add_option("--space", flags.space, "s1 | s2");

    std::vector<std::string> result_paths;
    std::string analyze_oracle;
    CLI::App* analyze = app.add_subcommand("analyze", "emit diversity/exploration CSVs");
    add_common(analyze);
    analyze->add_option("results", result_paths, "result.json files")->required();
    analyze->add_option("--oracle", analyze_oracle,
                        "true-score source for exploration.csv (tabular:PATH | synthetic:SEED)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*search) return cmd_search(flags, out_dir);
        if (*enumerate) return cmd_enumerate(flags, out_dir, enumerate->count("--out") > 0);
        if (*gen) return cmd_gen_benchmark(flags, out_dir);
        if (*analyze) return cmd_analyze(result_paths, analyze_oracle, out_dir);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const space_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
