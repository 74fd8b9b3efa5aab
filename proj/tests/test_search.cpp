#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "numeral/measures.hpp"
#include "numeral/search.hpp"
#include "oracles.hpp"

using namespace numeral;

namespace {

NumeralSystem karo_batak() {
    NumeralSystem system;
    system.range = {1, 99};
    system.label = "karo_batak";
    for (Number n = 1; n <= 9; ++n) system.entries[n] = Expr::atom(n);
    for (Number n = 10; n <= 99; ++n) {
        ExprPtr tens = Expr::combine(Combinator::times, Expr::atom(n / 10), Expr::atom(10));
        system.entries[n] =
            n % 10 == 0 ? tens : Expr::combine(Combinator::plus, tens, Expr::atom(n % 10));
    }
    return system;
}

NumeralSystem drehu() {
    NumeralSystem system;
    system.range = {1, 99};
    system.label = "drehu";
    auto rest = [](Number r) -> std::string {
        if (r == 0) return "";
        if (r <= 4) return " + " + std::to_string(r);
        Number base = r <= 9 ? 5 : r <= 14 ? 10 : 15;
        Number d = r - base;
        std::string out = " + " + std::to_string(base);
        if (d) out += " + " + std::to_string(d);
        return out;
    };
    for (Number n = 1; n <= 99; ++n) {
        std::string text;
        if (n <= 4 || n == 5 || n == 10 || n == 15) {
            text = std::to_string(n);
        } else if (n < 20) {
            Number base = n <= 9 ? 5 : n <= 14 ? 10 : 15;
            text = std::to_string(base) + " + " + std::to_string(n - base);
        } else {
            text = std::to_string(n / 20) + " * 20" + rest(n % 20);
        }
        system.entries[n] = parse_tokens(text);
    }
    system.validate();
    return system;
}

AttestedPools small_pools() {
    AttestedPools pools;
    pools.digits = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    pools.multipliers = {5, 10, 12};
    return pools;
}

std::string frontier_fingerprint(const GaResult& result) {
    std::string s;
    for (const GaEntry& entry : result.frontier) {
        s += entry.params.str() + "|" + std::to_string(entry.lexicon) + "|" +
             std::to_string(entry.avg_morph) + ";";
    }
    return s;
}

} // namespace

TEST_CASE("pareto front keeps exactly the non-dominated points") {
    std::vector<ScoredPoint> pts = {{1, 2, 0}, {2, 1, 1}, {2, 2, 2}};
    auto front = pareto_front(pts);
    REQUIRE(front.size() == 2);
    CHECK(front[0].x == 1);
    CHECK(front[0].y == 2);
    CHECK(front[1].x == 2);
    CHECK(front[1].y == 1);

    auto singleton = pareto_front({{5, 5, 0}});
    CHECK(singleton.size() == 1);

    // non-strict domination keeps duplicates
    auto dup = pareto_front({{1, 1, 0}, {1, 1, 1}});
    CHECK(dup.size() == 2);
}

TEST_CASE("pareto front agrees with the quadratic oracle") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ScoredPoint> pts;
        std::size_t n = 1 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i) {
            pts.push_back({static_cast<double>(rng() % 8), static_cast<double>(rng() % 8), i});
        }
        auto front = pareto_front(pts);
        auto expected = numeral::testing::pareto_oracle(pts);
        std::set<std::size_t> got;
        for (const ScoredPoint& p : front) got.insert(p.payload);
        CHECK(got == std::set<std::size_t>(expected.begin(), expected.end()));
        // output is sorted by (x, y)
        for (std::size_t i = 1; i < front.size(); ++i) {
            CHECK((front[i - 1].x < front[i].x ||
                   (front[i - 1].x == front[i].x && front[i - 1].y <= front[i].y)));
        }
    }
}

TEST_CASE("rng draws are in range, distinct and reproducible") {
    Rng a(9), b(9);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next() == b.next());
    }
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        std::int64_t v = rng.uniform(3, 12);
        CHECK(v >= 3);
        CHECK(v <= 12);
        double u = rng.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    auto sample = rng.sample_without_replacement({1, 2, 3, 4, 5, 6, 7, 8}, 5);
    CHECK(sample.size() == 5);
    CHECK(std::set<Number>(sample.begin(), sample.end()).size() == 5);
    CHECK_THROWS_AS(rng.sample_without_replacement({1}, 2), ConfigError);
}

TEST_CASE("raw grammar draws follow the stated distribution") {
    AttestedPools pools;
    pools.digits = {1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 16};
    pools.multipliers = {5, 10, 15, 20};
    Rng rng(20260809);
    int with_minus = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        GrammarParams params = draw_grammar_candidate(rng, pools, 0.2, 5);
        CHECK(params.digits.size() >= 3);
        CHECK(params.digits.size() <= 12);
        CHECK(params.multipliers.size() >= 1);
        CHECK(params.multipliers.size() <= 3);
        if (params.allow_minus) ++with_minus;
    }
    double fraction = static_cast<double>(with_minus) / draws;
    CHECK(fraction > 0.18);
    CHECK(fraction < 0.22);
}

TEST_CASE("batch params are always expressible") {
    BaselineConfig config;
    config.pools = small_pools();
    config.range = {1, 99};
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        GrammarParams params = sample_batch_params(rng, config);
        CHECK(expressible(params, config.range));
    }
}

TEST_CASE("baseline sampling emits valid, reproducible systems") {
    BaselineConfig config;
    config.batches = 2;
    config.per_batch = 3;
    config.seed = 99;
    config.pools = small_pools();
    config.range = {1, 99};

    BaselineSample sample = sample_baselines(config);
    REQUIRE(sample.systems.size() == 6);
    REQUIRE(sample.batch_params.size() == 2);
    CHECK(sample.systems[0].label == "baseline_b0_s0");
    CHECK(sample.systems[5].label == "baseline_b1_s2");
    for (const NumeralSystem& system : sample.systems) {
        CHECK(system.source == SystemSource::baseline);
        system.validate();
    }

    BaselineSample again = sample_baselines(config);
    for (std::size_t i = 0; i < sample.systems.size(); ++i) {
        for (Number n = 1; n <= 99; ++n) {
            CHECK(token_string(sample.systems[i].tokens(n)) ==
                  token_string(again.systems[i].tokens(n)));
        }
    }
}

TEST_CASE("degenerate pools exhaust the resample budget") {
    BaselineConfig config;
    config.pools.digits = {7, 8, 9};
    config.pools.multipliers = {50};
    config.range = {1, 99};
    config.retry_budget = 30;
    config.batches = 1;
    config.per_batch = 1;
    CHECK_THROWS_AS(sample_baselines(config), ResampleExhausted);

    BaselineConfig tiny;
    tiny.pools.digits = {1, 2};
    tiny.pools.multipliers = {10};
    CHECK_THROWS_AS(sample_baselines(tiny), ConfigError); // digit pool below 3
}

TEST_CASE("genetic algorithm invariants") {
    GaConfig config;
    config.population_size = 16;
    config.max_generations = 8;
    config.seed = 1;
    config.prior = make_prior(PriorKind::power_law, {1, 99});
    config.pools = small_pools();

    GaResult result = run_ga(config);
    REQUIRE(!result.frontier.empty());
    REQUIRE(result.generation_archives.size() == 9);

    // archives are mutually non-dominated
    for (const auto& archive : result.generation_archives) {
        auto oracle = numeral::testing::pareto_oracle(archive);
        CHECK(oracle.size() == archive.size());
    }
    // elitism: no later archive point is strictly dominated by an earlier one
    for (std::size_t g = 1; g < result.generation_archives.size(); ++g) {
        for (const ScoredPoint& p : result.generation_archives[g]) {
            for (const ScoredPoint& q : result.generation_archives[g - 1]) {
                bool dominated =
                    q.x <= p.x && q.y <= p.y && (q.x < p.x || q.y < p.y);
                CHECK(!dominated);
            }
        }
    }
    // hypervolume never shrinks
    double previous = -1.0;
    for (const auto& archive : result.generation_archives) {
        double hv = numeral::testing::hypervolume(archive, 50.0, 50.0);
        CHECK(hv >= previous - 1e-9);
        previous = hv;
    }
    // frontier members are valid expressible grammars with matching systems
    for (const GaEntry& entry : result.frontier) {
        entry.params.validate();
        CHECK(expressible(entry.params, {1, 99}));
        entry.system.validate();
        CHECK(entry.lexicon == lexicon_size(entry.params));
    }
    // deterministic given (seed, config)
    CHECK(frontier_fingerprint(result) == frontier_fingerprint(run_ga(config)));
}

TEST_CASE("sequential digit constraint holds across the run") {
    GaConfig config;
    config.population_size = 12;
    config.max_generations = 6;
    config.seed = 3;
    config.prior = make_prior(PriorKind::power_law, {1, 99});
    config.pools.digits = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    config.pools.multipliers = {5, 10, 12, 20};
    config.sequential_digits = true;

    GaResult result = run_ga(config);
    for (const GaEvaluation& eval : result.evaluations) {
        REQUIRE(!eval.params.digits.empty());
        Number k = *eval.params.digits.rbegin();
        CHECK(k <= 20);
        CHECK(static_cast<Number>(eval.params.digits.size()) == k); // {1..k}
    }
}

TEST_CASE("ga rejects empty pools") {
    GaConfig config;
    config.prior = make_prior(PriorKind::power_law, {1, 99});
    CHECK_THROWS_AS(run_ga(config), ConfigError);
}

TEST_CASE("Drehu 24 alternatives match the brute-force oracle") {
    LocalNeighbourhoodKey key = neighbourhood_key(drehu());
    CHECK(key.params.digits == std::set<Number>{1, 2, 3, 4});
    CHECK(key.params.multipliers == std::set<Number>{5, 10, 15, 20});
    CHECK(!key.params.allow_minus);
    CHECK(key.required_length.at(24) == 5);

    auto alternatives = neighbourhood_alternatives(key);
    std::set<std::string> forms;
    for (const ExprPtr& e : alternatives.at(24)) {
        forms.insert(token_string(linearize(e)));
    }
    for (const char* form : {"1 * 20 + 4", "4 * 5 + 4", "5 + 15 + 4", "15 + 5 + 4", "10 + 10 + 4"}) {
        CAPTURE(form);
        CHECK(forms.count(form) == 1);
    }
    // the full set per the brute-force oracle: those five plus 2 * 10 + 4
    auto oracle = numeral::testing::oracle_enumerate(key.params, 3);
    std::set<std::string> expected;
    for (const ExprPtr& e : oracle.at(24)) {
        if (e->morpheme_count() == 5) expected.insert(token_string(linearize(e)));
    }
    CHECK(forms == expected);
    CHECK(forms.count("2 * 10 + 4") == 1);
}

TEST_CASE("local frontier neighbours satisfy the key") {
    NumeralSystem seed = karo_batak();
    Prior prior = make_prior(PriorKind::power_law, seed.range);
    LocalNeighbourhoodKey key = neighbourhood_key(seed);

    std::vector<MeasureReport> best_reports, worst_reports;
    for (LocalDirection direction : {LocalDirection::best, LocalDirection::worst}) {
        LocalSearchConfig config;
        config.direction = direction;
        std::vector<NumeralSystem> frontier = local_frontier(seed, config, prior);
        REQUIRE(!frontier.empty());
        for (const NumeralSystem& neighbour : frontier) {
            (direction == LocalDirection::best ? best_reports : worst_reports)
                .push_back(measure_system(neighbour, prior));
            neighbour.validate();
            CHECK(neighbour.source == SystemSource::local);
            CHECK(lexicon_size(neighbour) == lexicon_size(seed));
            CHECK(avg_morph_complexity(neighbour, prior) ==
                  doctest::Approx(avg_morph_complexity(seed, prior)).epsilon(1e-15));
            for (Number n = 1; n <= 99; ++n) {
                CHECK(neighbour.entry(n)->morpheme_count() == key.required_length.at(n));
            }
            GrammarParams used = extract_grammar(neighbour);
            for (Number d : used.digits) {
                CHECK((key.params.digits.count(d) || key.params.multipliers.count(d)));
            }
            for (Number m : used.multipliers) {
                CHECK(key.params.multipliers.count(m));
            }
        }
    }
    // on this neighbourhood's extremes, worst scores at least as high as best
    for (const MeasureReport& worst : worst_reports) {
        for (const MeasureReport& best : best_reports) {
            CHECK(worst.irregularity_bits >= best.irregularity_bits);
            CHECK(worst.processing_bits >= best.processing_bits);
        }
    }
}

TEST_CASE("local frontier is deterministic") {
    NumeralSystem seed = drehu();
    Prior prior = make_prior(PriorKind::power_law, seed.range);
    LocalSearchConfig config;
    config.beta = 5; // force overflow sampling
    config.gamma = 2;
    config.seed = 42;
    auto a = local_frontier(seed, config, prior);
    auto b = local_frontier(seed, config, prior);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (Number n = 1; n <= 99; ++n) {
            CHECK(token_string(a[i].tokens(n)) == token_string(b[i].tokens(n)));
        }
    }
}

TEST_CASE("lengths beyond the depth budget empty the neighbourhood") {
    NumeralSystem system;
    system.range = {1, 7};
    system.label = "ones";
    system.entries[1] = Expr::atom(1);
    for (Number n = 2; n <= 7; ++n) {
        system.entries[n] = Expr::combine(Combinator::plus, Expr::atom(1), system.entries[n - 1]);
    }
    system.validate(); // 7 = seven atoms chained, length 13
    LocalSearchConfig config;
    Prior prior = make_prior(PriorKind::uniform, system.range);
    CHECK_THROWS_AS(local_frontier(system, config, prior), EmptyNeighbourhood);
}
