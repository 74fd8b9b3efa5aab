// numeral-mdl: generate, measure and search recursive numeral systems.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "numeral/dataio.hpp"
#include "numeral/manifest.hpp"
#include "numeral/measures.hpp"
#include "numeral/search.hpp"

namespace fs = std::filesystem;
using namespace numeral;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

unsigned thread_budget() {
    if (const char* env = std::getenv("NUMERAL_MDL_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Index-based work stealing; results are slotted by index so the output
// order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned threads = static_cast<unsigned>(
        std::min<std::size_t>(thread_budget(), count ? count : 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= count) break;
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next.store(count);
                        break;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

Range parse_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InvalidParams("range must look like lo:hi, got '" + text + "'");
    }
    Range range;
    range.lo = std::stoll(text.substr(0, colon));
    range.hi = std::stoll(text.substr(colon + 1));
    range.validate();
    return range;
}

std::string join_numbers(const std::set<Number>& values) {
    std::string out;
    for (Number v : values) {
        if (!out.empty()) out += ' ';
        out += std::to_string(v);
    }
    return out;
}

fs::path with_infix(const fs::path& path, const std::string& infix) {
    fs::path out = path;
    out.replace_extension();
    out += infix;
    out += path.extension();
    return out;
}

std::vector<MeasureReport> measure_all(const std::vector<NumeralSystem>& systems,
                                       const Prior& prior) {
    std::vector<MeasureReport> reports(systems.size());
    parallel_for(systems.size(), [&](std::size_t i) {
        reports[i] = measure_system(systems[i], prior);
    });
    return reports;
}

const NumeralSystem& find_system(const std::vector<NumeralSystem>& systems,
                                 const std::string& label) {
    for (const NumeralSystem& system : systems) {
        if (system.label == label) return system;
    }
    throw DataError("unknown system '" + label + "'");
}

// --- subcommand configurations ----------------------------------------------

struct MeasureArgs {
    std::string input, out;
    std::string prior = "power2";
    std::string range = "1:99";
};

struct BaselineArgs {
    int batches = 100;
    int per_batch = 100;
    int max_depth = 5;
    std::uint64_t seed = 0;
    std::string attested, out;
    std::string prior = "power2";
    std::string range = "1:99";
};

struct GaArgs {
    std::string prior = "power2";
    int generations = 50;
    int pop = 100;
    std::uint64_t seed = 0;
    std::string constraints;
    std::string attested, out;
    std::string range = "1:99";
};

struct LocalArgs {
    std::string input, system, out;
    int beta = 30;
    int gamma = 3;
    int depth = 5;
    std::string direction = "both";
    std::string prior = "power2";
    std::uint64_t seed = 0;
    std::string range = "1:99";
};

struct DfaArgs {
    std::string input, system, dot, json;
    std::string range = "1:99";
};

int cmd_measure(const MeasureArgs& args) {
    Range range = parse_range(args.range);
    Prior prior = prior_from_descriptor(args.prior, range);
    auto systems = load_systems(args.input, range);
    export_measures(measure_all(systems, prior), args.out);

    RunManifest manifest;
    manifest.command = "measure";
    manifest.config = {{"input", args.input}, {"prior", args.prior},
                       {"range", args.range}, {"out", args.out}};
    manifest.input_hashes = {{args.input, file_content_hash(args.input)}};
    manifest.write_next_to(args.out);
    return kExitOk;
}

int cmd_sample_baselines(const BaselineArgs& args) {
    BaselineConfig config;
    config.batches = args.batches;
    config.per_batch = args.per_batch;
    config.max_depth = args.max_depth;
    config.seed = args.seed;
    config.range = parse_range(args.range);
    config.pools = load_attested_pools(args.attested);

    BaselineSample sample = sample_baselines(config);
    export_systems(sample.systems, args.out);

    Prior prior = prior_from_descriptor(args.prior, config.range);
    fs::path measures_path = with_infix(args.out, ".measures");
    export_measures(measure_all(sample.systems, prior), measures_path);

    RunManifest manifest;
    manifest.command = "sample-baselines";
    manifest.seed = args.seed;
    manifest.config = {{"batches", std::to_string(args.batches)},
                       {"per_batch", std::to_string(args.per_batch)},
                       {"max_depth", std::to_string(args.max_depth)},
                       {"attested", args.attested},
                       {"prior", args.prior},
                       {"range", args.range},
                       {"out", args.out},
                       {"measures_out", measures_path.string()}};
    manifest.input_hashes = {{args.attested, file_content_hash(args.attested)}};
    manifest.write_next_to(args.out);
    return kExitOk;
}

int cmd_ga(const GaArgs& args) {
    if (!args.constraints.empty() && args.constraints != "sequential-digits") {
        throw ConfigError("unknown constraint '" + args.constraints + "'");
    }
    GaConfig config;
    config.population_size = args.pop;
    config.max_generations = args.generations;
    config.seed = args.seed;
    Range range = parse_range(args.range);
    config.prior = prior_from_descriptor(args.prior, range);
    config.pools = load_attested_pools(args.attested);
    config.sequential_digits = args.constraints == "sequential-digits";

    GaResult result = run_ga(config);

    std::vector<std::size_t> order(result.frontier.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const GaEntry& ea = result.frontier[a];
        const GaEntry& eb = result.frontier[b];
        if (ea.lexicon != eb.lexicon) return ea.lexicon < eb.lexicon;
        if (ea.avg_morph != eb.avg_morph) return ea.avg_morph < eb.avg_morph;
        return a < b;
    });
    std::vector<MeasureReport> reports(result.frontier.size());
    parallel_for(result.frontier.size(), [&](std::size_t i) {
        reports[i] = measure_system(result.frontier[i].system, config.prior);
    });
    std::string out =
        "system_id,source,prior,digits,multipliers,lexicon_size,avg_morph_complexity,"
        "irregularity_bits,processing_bits\n";
    char buf[128];
    for (std::size_t i : order) {
        const GaEntry& entry = result.frontier[i];
        std::snprintf(buf, sizeof(buf), "%lld,%.6f,%.6f,%.6f",
                      static_cast<long long>(entry.lexicon), entry.avg_morph,
                      reports[i].irregularity_bits, reports[i].processing_bits);
        out += entry.system.label + ",ga," + config.prior.descriptor() + "," +
               join_numbers(entry.params.digits) + "," + join_numbers(entry.params.multipliers) +
               "," + buf + "\n";
    }
    write_file_atomic(args.out, out);

    RunManifest manifest;
    manifest.command = "ga";
    manifest.seed = args.seed;
    manifest.config = {{"prior", args.prior},
                       {"generations", std::to_string(args.generations)},
                       {"pop", std::to_string(args.pop)},
                       {"constraints", args.constraints},
                       {"attested", args.attested},
                       {"range", args.range},
                       {"out", args.out}};
    manifest.input_hashes = {{args.attested, file_content_hash(args.attested)}};
    manifest.write_next_to(args.out);
    return kExitOk;
}

int cmd_local_frontier(const LocalArgs& args) {
    if (args.direction != "best" && args.direction != "worst" && args.direction != "both") {
        throw ConfigError("direction must be best, worst or both");
    }
    Range range = parse_range(args.range);
    Prior prior = prior_from_descriptor(args.prior, range);
    auto systems = load_systems(args.input, range);
    const NumeralSystem& seed_system = find_system(systems, args.system);

    std::vector<LocalDirection> directions;
    if (args.direction != "worst") directions.push_back(LocalDirection::best);
    if (args.direction != "best") directions.push_back(LocalDirection::worst);

    // Runs from both directions can rediscover the same system; keep one row.
    std::vector<NumeralSystem> neighbours;
    std::vector<std::string> neighbour_direction;
    std::map<std::string, std::size_t> seen;
    for (LocalDirection direction : directions) {
        LocalSearchConfig config;
        config.beta = args.beta;
        config.gamma = args.gamma;
        config.depth = args.depth;
        config.direction = direction;
        config.seed = args.seed;
        const char* tag = direction == LocalDirection::best ? "best" : "worst";
        for (NumeralSystem& system : local_frontier(seed_system, config, prior)) {
            std::string fingerprint;
            for (Number n = range.lo; n <= range.hi; ++n) {
                fingerprint += token_string(system.tokens(n));
                fingerprint += ';';
            }
            auto [it, inserted] = seen.emplace(std::move(fingerprint), neighbours.size());
            if (inserted) {
                neighbours.push_back(std::move(system));
                neighbour_direction.push_back(tag);
            } else if (neighbour_direction[it->second] != tag) {
                neighbour_direction[it->second] = "both";
            }
        }
    }

    std::string out =
        "system_id,is_seed,direction,prior,irregularity_bits,processing_bits,lexicon_size,"
        "avg_morph_complexity\n";
    char buf[128];
    auto append_row = [&](const MeasureReport& report, bool is_seed, const std::string& direction) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%lld,%.6f", report.irregularity_bits,
                      report.processing_bits, static_cast<long long>(report.lexicon_size),
                      report.avg_morph_complexity);
        out += report.system_id + "," + (is_seed ? "1" : "0") + "," + direction + "," +
               report.prior_descriptor + "," + buf + "\n";
    };
    append_row(measure_system(seed_system, prior), true, "seed");
    for (std::size_t i = 0; i < neighbours.size(); ++i) {
        append_row(measure_system(neighbours[i], prior), false, neighbour_direction[i]);
    }
    write_file_atomic(args.out, out);
    export_systems(neighbours, with_infix(args.out, ".systems"));

    RunManifest manifest;
    manifest.command = "local-frontier";
    manifest.seed = args.seed;
    manifest.config = {{"input", args.input},
                       {"system", args.system},
                       {"beta", std::to_string(args.beta)},
                       {"gamma", std::to_string(args.gamma)},
                       {"depth", std::to_string(args.depth)},
                       {"direction", args.direction},
                       {"prior", args.prior},
                       {"range", args.range},
                       {"out", args.out}};
    manifest.input_hashes = {{args.input, file_content_hash(args.input)}};
    manifest.write_next_to(args.out);
    return kExitOk;
}

int cmd_dfa(const DfaArgs& args) {
    Range range = parse_range(args.range);
    auto systems = load_systems(args.input, range);
    const NumeralSystem& system = find_system(systems, args.system);
    Automaton dfa = build_minimal_dfa(system);
    write_file_atomic(args.dot, dfa.to_dot());
    if (!args.json.empty()) {
        write_file_atomic(args.json, dfa.to_json() + "\n");
    }

    RunManifest manifest;
    manifest.command = "dfa";
    manifest.config = {{"input", args.input},
                       {"system", args.system},
                       {"range", args.range},
                       {"dot", args.dot},
                       {"json", args.json}};
    manifest.input_hashes = {{args.input, file_content_hash(args.input)}};
    manifest.write_next_to(args.dot);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recursive numeral systems: generation, DFA-based measures and search"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    MeasureArgs measure_args;
    CLI::App* measure = app.add_subcommand("measure", "Score systems from a dataset CSV");
    measure->add_option("--input", measure_args.input, "dataset CSV (language,number,tokens)")
        ->required();
    measure->add_option("--prior", measure_args.prior, "power2 | uniform | power<alpha>");
    measure->add_option("--out", measure_args.out, "measures CSV")->required();
    measure->add_option("--range", measure_args.range, "number range lo:hi");

    BaselineArgs baseline_args;
    CLI::App* baselines =
        app.add_subcommand("sample-baselines", "Sample random Hurford-grammar systems");
    baselines->add_option("--batches", baseline_args.batches, "number of grammar batches");
    baselines->add_option("--per-batch", baseline_args.per_batch, "systems per batch");
    baselines->add_option("--max-depth", baseline_args.max_depth, "atom budget per numeral");
    baselines->add_option("--seed", baseline_args.seed, "rng seed");
    baselines
        ->add_option("--attested", baseline_args.attested,
                     "pools CSV (role,value) or dataset CSV to derive them from")
        ->required();
    baselines->add_option("--out", baseline_args.out, "systems CSV; measures land next to it")
        ->required();
    baselines->add_option("--prior", baseline_args.prior, "prior for the measures file");
    baselines->add_option("--range", baseline_args.range, "number range lo:hi");

    GaArgs ga_args;
    CLI::App* ga = app.add_subcommand("ga", "Pareto genetic algorithm over (D, M) pairs");
    ga->add_option("--prior", ga_args.prior, "power2 | uniform | power<alpha>");
    ga->add_option("--generations", ga_args.generations, "generation count");
    ga->add_option("--pop", ga_args.pop, "population size");
    ga->add_option("--seed", ga_args.seed, "rng seed");
    ga->add_option("--constraints", ga_args.constraints, "optional: sequential-digits");
    ga->add_option("--attested", ga_args.attested, "pools CSV or dataset CSV")->required();
    ga->add_option("--out", ga_args.out, "frontier CSV")->required();
    ga->add_option("--range", ga_args.range, "number range lo:hi");

    LocalArgs local_args;
    CLI::App* local =
        app.add_subcommand("local-frontier", "Greedy frontier of a system's local neighbourhood");
    local->add_option("--input", local_args.input, "dataset CSV")->required();
    local->add_option("--system", local_args.system, "system label from the dataset")->required();
    local->add_option("--beta", local_args.beta, "max archive size");
    local->add_option("--gamma", local_args.gamma, "numbers expanded per step");
    local->add_option("--depth", local_args.depth, "atom budget per numeral");
    local->add_option("--direction", local_args.direction, "best | worst | both");
    local->add_option("--prior", local_args.prior, "power2 | uniform | power<alpha>");
    local->add_option("--seed", local_args.seed, "rng seed for archive overflow sampling");
    local->add_option("--out", local_args.out, "frontier scores CSV")->required();
    local->add_option("--range", local_args.range, "number range lo:hi");

    DfaArgs dfa_args;
    CLI::App* dfa = app.add_subcommand("dfa", "Export a system's minimal partial DFA");
    dfa->add_option("--input", dfa_args.input, "dataset CSV")->required();
    dfa->add_option("--system", dfa_args.system, "system label from the dataset")->required();
    dfa->add_option("--dot", dfa_args.dot, "DOT output path")->required();
    dfa->add_option("--json", dfa_args.json, "optional JSON dump path");
    dfa->add_option("--range", dfa_args.range, "number range lo:hi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (measure->parsed()) return cmd_measure(measure_args);
        if (baselines->parsed()) return cmd_sample_baselines(baseline_args);
        if (ga->parsed()) return cmd_ga(ga_args);
        if (local->parsed()) return cmd_local_frontier(local_args);
        if (dfa->parsed()) return cmd_dfa(dfa_args);
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResampleExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EmptyNeighbourhood& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IncompleteSystem& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
