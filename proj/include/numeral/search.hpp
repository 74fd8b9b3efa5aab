#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "numeral/core.hpp"
#include "numeral/hurford.hpp"

namespace numeral {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResampleExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyNeighbourhood : std::runtime_error {
    explicit EmptyNeighbourhood(Number n)
        : std::runtime_error("no length-matching alternative for " + std::to_string(n)),
          number(n) {}
    Number number;
};

/// Deterministic random source. All distributions are implemented on top of
/// the raw mt19937_64 stream so results are bit-for-bit reproducible across
/// platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Unbiased uniform draw from [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Uniform draw from [lo, hi], inclusive.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);

    /// Uniform double in [0, 1).
    double unit();

    /// k distinct elements drawn uniformly from the pool, in draw order.
    std::vector<Number> sample_without_replacement(std::vector<Number> pool, std::size_t k);

private:
    std::mt19937_64 engine_;
};

struct ScoredPoint {
    double x = 0.0;
    double y = 0.0;
    std::size_t payload = 0;
};

/// Points not strictly dominated under minimization of both coordinates
/// (ties survive), in ascending (x, y) order.
std::vector<ScoredPoint> pareto_front(const std::vector<ScoredPoint>& points);

/// Digit and multiplier values attested somewhere in a reference dataset;
/// the sampling pools for baselines and the genetic algorithm.
struct AttestedPools {
    std::vector<Number> digits;      // sorted, unique
    std::vector<Number> multipliers; // sorted, unique
};

// --- genetic algorithm ------------------------------------------------------

struct GaConfig {
    int population_size = 100;
    int max_generations = 50;
    std::uint64_t seed = 0;
    Prior prior;                    // also fixes the number range
    AttestedPools pools;
    bool sequential_digits = false; // constrain D to {1..k}, k <= sequential_max
    Number sequential_max = 20;
    int max_depth = 5;
    int mutation_retries = 200;
};

struct GaEvaluation {
    GrammarParams params;
    Number lexicon = 0;
    double avg_morph = 0.0;
};

struct GaEntry {
    GrammarParams params;
    NumeralSystem system;
    Number lexicon = 0;
    double avg_morph = 0.0;
};

struct GaResult {
    std::vector<GaEntry> frontier;                          // final archive
    std::vector<std::vector<ScoredPoint>> generation_archives; // per generation, (x, y) sorted
    std::vector<GaEvaluation> evaluations;                  // every distinct (D, M) scored
};

/// Pareto GA over (D, M) pairs with objectives (lexicon size, average
/// morphosyntactic complexity under the configured prior). Systems are built
/// with the shortest-numeral policy. Elitist: the archive is carried over
/// whole between generations.
GaResult run_ga(const GaConfig& config);

// --- baseline sampling ------------------------------------------------------

struct BaselineConfig {
    int batches = 100;
    int per_batch = 100;
    int max_depth = 5;
    std::uint64_t seed = 0;
    AttestedPools pools;
    Range range;
    int retry_budget = 1000;
};

struct BaselineSample {
    std::vector<NumeralSystem> systems;
    std::vector<GrammarParams> batch_params; // one per batch
};

/// One raw (D, M, C) draw: 3-12 digits, 1-3 multipliers (clamped to the pool
/// sizes), subtraction with the given probability. No expressibility check.
GrammarParams draw_grammar_candidate(Rng& rng, const AttestedPools& pools, double minus_prob,
                                     int max_depth);

/// Draws batch params, resampling until the grammar expresses the whole
/// range. Throws ResampleExhausted after retry_budget failures.
GrammarParams sample_batch_params(Rng& rng, const BaselineConfig& config);

/// Random baseline systems: per batch one grammar, then per system one
/// uniformly random derivation per number.
BaselineSample sample_baselines(const BaselineConfig& config);

// --- local neighbourhood ----------------------------------------------------

enum class LocalDirection : std::uint8_t { best, worst };

struct LocalSearchConfig {
    int beta = 30;  // max archive size
    int gamma = 3;  // numbers expanded per step
    int depth = 5;
    LocalDirection direction = LocalDirection::best;
    std::uint64_t seed = 0;
};

/// What every member of a system's local neighbourhood shares: the grammar
/// pieces and the per-number numeral lengths.
struct LocalNeighbourhoodKey {
    GrammarParams params;
    Range range;
    std::map<Number, int> required_length; // morpheme count per number
};

LocalNeighbourhoodKey neighbourhood_key(const NumeralSystem& system, int depth = 5);

/// Per-number derivations whose length matches the key exactly. Throws
/// EmptyNeighbourhood when some number has none.
std::map<Number, std::vector<ExprPtr>> neighbourhood_alternatives(const LocalNeighbourhoodKey& key);

/// Greedy frontier estimation over the local neighbourhood: fix the numbers
/// without alternatives, then expand gamma numbers at a time from the
/// largest down, keeping the Pareto-dominant partial systems by
/// (irregularity, processing complexity), negated when direction = worst,
/// and sampling beta when the archive overflows.
std::vector<NumeralSystem> local_frontier(const NumeralSystem& natural,
                                          const LocalSearchConfig& config, const Prior& prior);

} // namespace numeral
