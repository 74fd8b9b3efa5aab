#include "numeral/search.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>

#include "numeral/automaton.hpp"
#include "numeral/measures.hpp"

namespace numeral {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ConfigError("uniform draw from empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw ConfigError("uniform draw from empty range");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

double Rng::unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<Number> Rng::sample_without_replacement(std::vector<Number> pool, std::size_t k) {
    if (k > pool.size()) throw ConfigError("sample larger than pool");
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

std::vector<ScoredPoint> pareto_front(const std::vector<ScoredPoint>& points) {
    std::vector<ScoredPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const ScoredPoint& a, const ScoredPoint& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.payload < b.payload;
    });
    std::vector<ScoredPoint> front;
    double best_y = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].x == sorted[i].x) ++j;
        // Within equal x only the minimal y survives (ties kept); the group
        // survives at all only if it strictly improves on smaller-x points.
        double group_y = sorted[i].y;
        if (group_y < best_y) {
            for (std::size_t k = i; k < j && sorted[k].y == group_y; ++k) {
                front.push_back(sorted[k]);
            }
            best_y = group_y;
        }
        i = j;
    }
    return front;
}

// --- genetic algorithm ------------------------------------------------------

namespace {

std::string params_key(const GrammarParams& params) {
    return params.str();
}

// Largest k with {1..k} contained in the sorted pool.
Number sequential_run(const std::vector<Number>& pool) {
    Number expect = 1;
    for (Number v : pool) {
        if (v == expect) ++expect;
        if (v > expect) break;
    }
    return expect - 1;
}

bool is_sequential(const std::set<Number>& digits, Number max_k) {
    if (digits.empty() || *digits.rbegin() > max_k) return false;
    Number expect = 1;
    for (Number d : digits) {
        if (d != expect++) return false;
    }
    return true;
}

void validate_pools(const AttestedPools& pools) {
    if (pools.digits.empty()) throw ConfigError("attested digit pool is empty");
    if (pools.multipliers.empty()) throw ConfigError("attested multiplier pool is empty");
}

} // namespace

GrammarParams draw_grammar_candidate(Rng& rng, const AttestedPools& pools, double minus_prob,
                                     int max_depth) {
    validate_pools(pools);
    if (pools.digits.size() < 3) {
        throw ConfigError("attested digit pool smaller than the minimum draw of 3");
    }
    GrammarParams params;
    params.max_depth = max_depth;
    auto nd = static_cast<std::size_t>(
        rng.uniform(3, std::min<std::int64_t>(12, static_cast<std::int64_t>(pools.digits.size()))));
    for (Number d : rng.sample_without_replacement(pools.digits, nd)) {
        params.digits.insert(d);
    }
    auto nm = static_cast<std::size_t>(rng.uniform(
        1, std::min<std::int64_t>(3, static_cast<std::int64_t>(pools.multipliers.size()))));
    for (Number m : rng.sample_without_replacement(pools.multipliers, nm)) {
        params.multipliers.insert(m);
    }
    params.allow_minus = minus_prob > 0.0 && rng.unit() < minus_prob;
    return params;
}

namespace {

struct GaState {
    const GaConfig& config;
    Rng rng;
    Range range;
    std::unordered_map<std::string, GaEvaluation> cache;
    std::vector<GaEvaluation> log;

    explicit GaState(const GaConfig& cfg) : config(cfg), rng(cfg.seed), range(cfg.prior.range) {}

    const GaEvaluation& evaluate(const GrammarParams& params) {
        std::string key = params_key(params);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        GaEvaluation eval;
        eval.params = params;
        eval.lexicon = lexicon_size(params);
        NumeralSystem system = shortest_system(params, range, key, SystemSource::ga);
        eval.avg_morph = avg_morph_complexity(system, config.prior);
        log.push_back(eval);
        return cache.emplace(std::move(key), std::move(eval)).first->second;
    }

    bool valid(const GrammarParams& params) {
        if (params.digits.empty() || params.multipliers.empty()) return false;
        if (config.sequential_digits && !is_sequential(params.digits, config.sequential_max)) {
            return false;
        }
        return expressible(params, range);
    }

    GrammarParams sample_valid_params() {
        for (int attempt = 0; attempt < config.mutation_retries * 10; ++attempt) {
            GrammarParams params;
            params.max_depth = config.max_depth;
            if (config.sequential_digits) {
                Number run = std::min(sequential_run(config.pools.digits), config.sequential_max);
                if (run < 3) throw ConfigError("digit pool lacks a sequential run of 3");
                Number k = rng.uniform(3, std::min<Number>(12, run));
                for (Number d = 1; d <= k; ++d) params.digits.insert(d);
            } else {
                if (config.pools.digits.size() < 3) {
                    throw ConfigError("attested digit pool smaller than the minimum draw of 3");
                }
                auto nd = static_cast<std::size_t>(rng.uniform(
                    3, std::min<std::int64_t>(12, static_cast<std::int64_t>(config.pools.digits.size()))));
                for (Number d : rng.sample_without_replacement(config.pools.digits, nd)) {
                    params.digits.insert(d);
                }
            }
            auto nm = static_cast<std::size_t>(rng.uniform(
                1,
                std::min<std::int64_t>(3, static_cast<std::int64_t>(config.pools.multipliers.size()))));
            for (Number m : rng.sample_without_replacement(config.pools.multipliers, nm)) {
                params.multipliers.insert(m);
            }
            if (valid(params)) return params;
        }
        throw ResampleExhausted("could not sample a valid initial (D, M) pair");
    }

    // add/remove/replace one element of D or M, drawn from the pools.
    bool mutate_once(GrammarParams& params) {
        bool on_digits = rng.below(2) == 0;
        std::set<Number>& target = on_digits ? params.digits : params.multipliers;
        const std::vector<Number>& pool = on_digits ? config.pools.digits : config.pools.multipliers;
        int op;
        if (on_digits && config.sequential_digits) {
            op = static_cast<int>(rng.below(2)); // add or remove keeps D sequential
        } else {
            op = static_cast<int>(rng.below(3));
        }
        auto random_absent = [&]() -> std::optional<Number> {
            std::vector<Number> absent;
            for (Number v : pool) {
                if (!target.count(v)) absent.push_back(v);
            }
            if (on_digits && config.sequential_digits) {
                Number want = params.digits.empty() ? 1 : *params.digits.rbegin() + 1;
                if (want > config.sequential_max || !std::binary_search(pool.begin(), pool.end(), want)) {
                    return std::nullopt;
                }
                return want;
            }
            if (absent.empty()) return std::nullopt;
            return absent[static_cast<std::size_t>(rng.below(absent.size()))];
        };
        auto random_member = [&]() -> std::optional<Number> {
            if (target.size() <= 1) return std::nullopt;
            if (on_digits && config.sequential_digits) return *params.digits.rbegin();
            auto it = target.begin();
            std::advance(it, static_cast<std::ptrdiff_t>(rng.below(target.size())));
            return *it;
        };
        switch (op) {
        case 0: { // add
            auto v = random_absent();
            if (!v) return false;
            target.insert(*v);
            return true;
        }
        case 1: { // remove
            auto v = random_member();
            if (!v) return false;
            target.erase(*v);
            return true;
        }
        default: { // replace
            auto r = random_member();
            if (!r) return false;
            target.erase(*r);
            auto a = random_absent();
            if (!a) {
                target.insert(*r);
                return false;
            }
            target.insert(*a);
            return true;
        }
        }
    }

    GrammarParams mutate(const GrammarParams& parent) {
        for (int attempt = 0; attempt < config.mutation_retries; ++attempt) {
            GrammarParams child = parent;
            int mutations = static_cast<int>(rng.uniform(1, 3));
            bool applied = true;
            for (int i = 0; i < mutations && applied; ++i) {
                applied = mutate_once(child);
            }
            if (applied && valid(child)) return child;
        }
        return parent; // elitism keeps the parent anyway
    }
};

} // namespace

GaResult run_ga(const GaConfig& config) {
    validate_pools(config.pools);
    if (config.population_size < 1) throw ConfigError("population size must be positive");
    if (config.max_generations < 0) throw ConfigError("generation count must be non-negative");
    GaState state(config);

    std::vector<GrammarParams> population;
    population.reserve(static_cast<std::size_t>(config.population_size));
    for (int i = 0; i < config.population_size; ++i) {
        population.push_back(state.sample_valid_params());
    }

    GaResult result;
    std::map<std::string, GaEvaluation> archive; // keyed for dedup, ordered for determinism
    for (int gen = 0; gen <= config.max_generations; ++gen) {
        for (const GrammarParams& params : population) {
            const GaEvaluation& eval = state.evaluate(params);
            archive.emplace(params_key(params), eval);
        }
        std::vector<const GaEvaluation*> members;
        members.reserve(archive.size());
        for (const auto& [key, eval] : archive) {
            members.push_back(&eval);
        }
        std::vector<ScoredPoint> points;
        points.reserve(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            points.push_back({static_cast<double>(members[i]->lexicon), members[i]->avg_morph, i});
        }
        std::vector<ScoredPoint> front = pareto_front(points);
        std::map<std::string, GaEvaluation> next_archive;
        for (const ScoredPoint& p : front) {
            next_archive.emplace(params_key(members[p.payload]->params), *members[p.payload]);
        }
        archive = std::move(next_archive);
        result.generation_archives.push_back(std::move(front));

        if (gen == config.max_generations) break;
        population.clear();
        std::vector<const GaEvaluation*> parents;
        for (const auto& [key, eval] : archive) parents.push_back(&eval);
        for (int i = 0; i < config.population_size; ++i) {
            const GrammarParams& parent = parents[static_cast<std::size_t>(i) % parents.size()]->params;
            population.push_back(state.mutate(parent));
        }
    }

    int index = 0;
    for (const auto& [key, eval] : archive) {
        GaEntry entry;
        entry.params = eval.params;
        entry.lexicon = eval.lexicon;
        entry.avg_morph = eval.avg_morph;
        entry.system = shortest_system(eval.params, state.range, "ga_" + std::to_string(index),
                                       SystemSource::ga);
        result.frontier.push_back(std::move(entry));
        ++index;
    }
    result.evaluations = std::move(state.log);
    return result;
}

// --- baseline sampling ------------------------------------------------------

GrammarParams sample_batch_params(Rng& rng, const BaselineConfig& config) {
    validate_pools(config.pools);
    for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
        GrammarParams params = draw_grammar_candidate(rng, config.pools, 0.2, config.max_depth);
        if (expressible(params, config.range)) return params;
    }
    throw ResampleExhausted("no expressible grammar after " + std::to_string(config.retry_budget) +
                            " draws; degenerate attested pools?");
}

BaselineSample sample_baselines(const BaselineConfig& config) {
    config.range.validate();
    if (config.batches < 0 || config.per_batch < 0) {
        throw ConfigError("batch counts must be non-negative");
    }
    Rng rng(config.seed);
    BaselineSample sample;
    sample.batch_params.reserve(static_cast<std::size_t>(config.batches));
    for (int batch = 0; batch < config.batches; ++batch) {
        GrammarParams params = sample_batch_params(rng, config);
        sample.batch_params.push_back(params);

        Enumerator enumerator(params, config.range.hi);
        std::vector<std::vector<ExprPtr>> candidates;
        candidates.reserve(static_cast<std::size_t>(config.range.size()));
        for (Number n = config.range.lo; n <= config.range.hi; ++n) {
            candidates.push_back(enumerator.enumerate(n).candidates);
            assert(!candidates.back().empty()); // guaranteed by expressibility
        }
        for (int i = 0; i < config.per_batch; ++i) {
            NumeralSystem system;
            system.range = config.range;
            system.label = "baseline_b" + std::to_string(batch) + "_s" + std::to_string(i);
            system.source = SystemSource::baseline;
            for (Number n = config.range.lo; n <= config.range.hi; ++n) {
                const auto& options = candidates[static_cast<std::size_t>(n - config.range.lo)];
                system.entries.emplace(n, options[static_cast<std::size_t>(rng.below(options.size()))]);
            }
            sample.systems.push_back(std::move(system));
        }
    }
    return sample;
}

// --- local neighbourhood ----------------------------------------------------

LocalNeighbourhoodKey neighbourhood_key(const NumeralSystem& system, int depth) {
    LocalNeighbourhoodKey key;
    key.params = extract_grammar(system, depth);
    key.range = system.range;
    for (Number n = system.range.lo; n <= system.range.hi; ++n) {
        key.required_length.emplace(n, system.entry(n)->morpheme_count());
    }
    return key;
}

std::map<Number, std::vector<ExprPtr>> neighbourhood_alternatives(const LocalNeighbourhoodKey& key) {
    Enumerator enumerator(key.params, key.range.hi);
    std::map<Number, std::vector<ExprPtr>> alternatives;
    for (const auto& [n, length] : key.required_length) {
        std::vector<ExprPtr> matching;
        for (ExprPtr& candidate : enumerator.enumerate(n).candidates) {
            if (candidate->morpheme_count() == length) {
                matching.push_back(std::move(candidate));
            }
        }
        if (matching.empty()) throw EmptyNeighbourhood(n);
        alternatives.emplace(n, std::move(matching));
    }
    return alternatives;
}

namespace {

using Partial = std::map<Number, ExprPtr>;

std::pair<double, double> score_partial(const Partial& partial, const Prior& prior) {
    std::vector<TokenSeq> words;
    words.reserve(partial.size());
    for (const auto& [n, expr] : partial) {
        words.push_back(linearize(expr));
    }
    Automaton dfa = build_minimal_dfa(words);
    double processing = 0.0;
    for (const auto& [n, expr] : partial) {
        processing += prior.weight(n) * path_cost(dfa.parse(linearize(expr)));
    }
    return {irregularity(dfa), processing};
}

} // namespace

std::vector<NumeralSystem> local_frontier(const NumeralSystem& natural,
                                          const LocalSearchConfig& config, const Prior& prior) {
    if (config.beta < 1 || config.gamma < 1) {
        throw ConfigError("beta and gamma must be at least 1");
    }
    LocalNeighbourhoodKey key = neighbourhood_key(natural, config.depth);
    auto alternatives = neighbourhood_alternatives(key);

    Partial fixed;
    std::vector<Number> pending; // numbers with a choice, largest first
    for (const auto& [n, options] : alternatives) {
        if (options.size() == 1) {
            fixed.emplace(n, options.front());
        } else {
            pending.push_back(n);
        }
    }
    std::sort(pending.rbegin(), pending.rend());

    Rng rng(config.seed);
    const bool worst = config.direction == LocalDirection::worst;
    std::vector<Partial> archive{fixed};
    std::size_t next = 0;
    while (next < pending.size()) {
        std::vector<Number> group;
        for (int i = 0; i < config.gamma && next < pending.size(); ++i) {
            group.push_back(pending[next++]);
        }
        std::vector<Partial> extended;
        std::vector<std::size_t> combo(group.size(), 0);
        bool done = false;
        while (!done) {
            for (const Partial& base : archive) {
                Partial candidate = base;
                for (std::size_t g = 0; g < group.size(); ++g) {
                    candidate.emplace(group[g], alternatives.at(group[g])[combo[g]]);
                }
                extended.push_back(std::move(candidate));
            }
            // next combination, mixed radix over the group's alternatives
            std::size_t g = 0;
            for (; g < group.size(); ++g) {
                if (++combo[g] < alternatives.at(group[g]).size()) break;
                combo[g] = 0;
            }
            done = g == group.size();
        }
        std::vector<ScoredPoint> points;
        points.reserve(extended.size());
        for (std::size_t i = 0; i < extended.size(); ++i) {
            auto [lg, lng] = score_partial(extended[i], prior);
            points.push_back({worst ? -lg : lg, worst ? -lng : lng, i});
        }
        std::vector<ScoredPoint> front = pareto_front(points);
        if (front.size() > static_cast<std::size_t>(config.beta)) {
            std::vector<Number> indices(front.size());
            for (std::size_t i = 0; i < front.size(); ++i) indices[i] = static_cast<Number>(i);
            std::vector<Number> chosen =
                rng.sample_without_replacement(indices, static_cast<std::size_t>(config.beta));
            std::sort(chosen.begin(), chosen.end());
            std::vector<ScoredPoint> sampled;
            sampled.reserve(chosen.size());
            for (Number i : chosen) sampled.push_back(front[static_cast<std::size_t>(i)]);
            front = std::move(sampled);
        }
        std::vector<Partial> kept;
        kept.reserve(front.size());
        for (const ScoredPoint& p : front) {
            kept.push_back(std::move(extended[p.payload]));
        }
        archive = std::move(kept);
    }

    std::vector<NumeralSystem> result;
    result.reserve(archive.size());
    const char* tag = worst ? "worst" : "best";
    for (std::size_t i = 0; i < archive.size(); ++i) {
        NumeralSystem system;
        system.range = natural.range;
        system.entries = std::move(archive[i]);
        system.label = natural.label + "_local_" + tag + "_" + std::to_string(i);
        system.source = SystemSource::local;
        result.push_back(std::move(system));
    }
    return result;
}

} // namespace numeral
