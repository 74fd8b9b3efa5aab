// Acceptance suite: one pass/fail line per criterion, run against the
// bundled dataset. Usage: acceptance <data-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>

#include "numeral/dataio.hpp"
#include "numeral/measures.hpp"
#include "numeral/search.hpp"
#include "oracles.hpp"

using namespace numeral;

namespace {

int failures = 0;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

void criterion(int id, const std::string& description, const std::function<void(Check&)>& body) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.ok = false;
        check.detail = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::printf("[%s] criterion %2d: %s (%lld ms)%s%s\n", check.ok ? "PASS" : "FAIL", id,
                description.c_str(), static_cast<long long>(ms), check.ok ? "" : " -- ",
                check.ok ? "" : check.detail.c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
}

bool near(double value, double expected, double tolerance) {
    return std::abs(value - expected) <= tolerance;
}

NumeralSystem flat_system(Number k) {
    NumeralSystem system;
    system.range = {1, k};
    system.label = "flat" + std::to_string(k);
    for (Number n = 1; n <= k; ++n) system.entries[n] = Expr::atom(n);
    return system;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <data-dir>\n");
        return 2;
    }
    const std::filesystem::path data_dir = argv[1];

    const auto naturals = load_systems(data_dir / "natural_systems.csv");
    const NumeralSystem* karo = nullptr;
    for (const NumeralSystem& s : naturals) {
        if (s.label == "karo_batak") karo = &s;
    }
    if (!karo) {
        std::fprintf(stderr, "dataset lacks karo_batak\n");
        return 2;
    }
    const Prior power2 = make_prior(PriorKind::power_law, {1, 99});
    const Prior uniform = make_prior(PriorKind::uniform, {1, 99});

    criterion(1, "worked path costs on Karo Batak", [&](Check& c) {
        Automaton dfa = build_minimal_dfa(*karo);
        double twenty = path_cost(dfa.parse(tokens_from_string("2 * 10")));
        c.expect(near(twenty, std::log2(9.0) + 2.0, 1e-6), "2*10 != log2(9)+2");
        c.expect(near(twenty, 5.1699, 1e-4), "2*10 != 5.1699");
        double ninety_six = path_cost(dfa.parse(tokens_from_string("9 * 10 + 6")));
        c.expect(near(ninety_six, 9.3399, 1e-3), "9*10+6 != 9.3399");
    });

    criterion(2, "flat 99-word system costs log2(99)+1 under both priors", [&](Check& c) {
        NumeralSystem flat = flat_system(99);
        Automaton dfa = build_minimal_dfa(flat);
        for (const Prior& prior : {power2, uniform}) {
            double bits = processing_complexity(flat, dfa, prior);
            c.expect(near(bits, std::log2(99.0) + 1.0, 1e-9), "mismatch vs closed form");
            c.expect(near(bits, 7.6294, 1e-3), "not within 1e-3 of 7.6294");
        }
    });

    criterion(3, "power-law prior mass concentrates on small numbers", [&](Check& c) {
        long double total = 0.0L;
        for (int n = 1; n <= 99; ++n) total += 1.0L / (static_cast<long double>(n) * n);
        double oracle_p1 = static_cast<double>(1.0L / total);
        c.expect(near(power2.weight(1), oracle_p1, 1e-12), "P(1) disagrees with oracle");
        c.expect(near(power2.weight(1), 0.6116, 1e-3), "P(1) not 0.6116 +- 1e-3");
        c.expect(power2.weight(1) + power2.weight(2) > 0.75, "P(1)+P(2) <= 0.75");
        double mass6 = 0.0;
        for (Number n = 1; n <= 6; ++n) mass6 += power2.weight(n);
        c.expect(mass6 > 0.90, "P(1..6) <= 0.90");
    });

    criterion(4, "Karo Batak minimal DFA sizes and irregularity", [&](Check& c) {
        Automaton dfa = build_minimal_dfa(*karo);
        c.expect(dfa.state_count() == 6, "|S| != 6");
        c.expect(dfa.alphabet().size() == 12, "|Sigma| != 12");
        std::size_t hand_count = 9 + 1 + 1 + 1 + 9; // digit fan-out, *, 10, +, digit fan-in
        c.expect(dfa.transition_count() == hand_count, "|Z| != 21");
        double bits = irregularity(dfa);
        double plug_in = 21.0 * (2.0 * std::log2(6.0) + std::log2(12.0)) + std::log2(6.0) + 6.0;
        c.expect(near(bits, plug_in, 1e-9), "irregularity != plug-in value");
        c.expect(near(bits, 192.44, 0.01), "irregularity not 192.44 +- 0.01");
    });

    criterion(5, "morphosyntactic complexity of 43 and the depth-8 numeral", [&](Check& c) {
        c.expect(karo->entry(43)->morpheme_count() == 5, "43 != 5 morphemes");
        std::string text = "( ( ( 2 * 2 + 1 ) * 2 + 1 ) * 2 + 1 ) * 2";
        ExprPtr deep = parse_tokens(text);
        c.expect(evaluate(deep) == 46, "numeral does not evaluate to 46");
        int token_count_oracle = 0;
        for (const Morpheme& m : tokens_from_string(text)) {
            if (!m.is_paren()) ++token_count_oracle;
        }
        c.expect(token_count_oracle == 15, "token-count oracle != 15");
        c.expect(deep->morpheme_count() == token_count_oracle, "morpheme_count != token count");
    });

    criterion(6, "Hurford enumeration of 12 under D={1,2}, M={5,10,12}", [&](Check& c) {
        GrammarParams params;
        params.digits = {1, 2};
        params.multipliers = {5, 10, 12};
        params.max_depth = 5;
        Enumerator enumerator(params, 99);
        auto forms_of = [&](int depth) {
            std::set<std::string> forms;
            for (const ExprPtr& e : enumerator.enumerate(12, depth).candidates) {
                forms.insert(token_string(linearize(e)));
            }
            return forms;
        };
        std::set<std::string> shallow = forms_of(3);
        std::set<std::string> deep = forms_of(5);
        for (const char* form : {"12", "1 * 12", "10 + 2", "1 * 10 + 2", "2 * 5 + 2"}) {
            c.expect(shallow.count(form) == 1, std::string("missing at depth 3: ") + form);
            c.expect(deep.count(form) == 1, std::string("missing at depth 5: ") + form);
        }
        for (const std::string& form : shallow) {
            c.expect(deep.count(form) == 1, "depth-5 set lost a depth-3 form");
        }
        c.expect(token_string(linearize(enumerator.shortest(12))) == "12", "shortest(12) != 12");
    });

    criterion(7, "incremental = trie+Hopcroft on 200 random systems (1-30)", [&](Check& c) {
        std::mt19937_64 rng(20260809);
        int built = 0;
        while (built < 200) {
            GrammarParams params = numeral::testing::random_params(rng, 5, 2, 4);
            if (!expressible(params, {1, 30})) continue;
            Enumerator enumerator(params, 30);
            std::vector<TokenSeq> words;
            for (Number n = 1; n <= 30; ++n) {
                const auto& candidates = enumerator.enumerate(n).candidates;
                words.push_back(linearize(candidates[rng() % candidates.size()]));
            }
            Automaton incremental = build_minimal_dfa(words);
            Automaton classical = minimize(build_trie(words));
            c.expect(isomorphic(incremental, classical), "construction routes disagree");
            c.expect(incremental.state_count() == classical.state_count(), "|S| differs");
            c.expect(incremental.transition_count() == classical.transition_count(), "|Z| differs");
            c.expect(incremental.accepting_count() == classical.accepting_count(),
                     "accept structure differs");
            if (!c.ok) break;
            ++built;
        }
    });

    criterion(8, "no baseline dominates any natural system (1,000 sampled)", [&](Check& c) {
        BaselineConfig config;
        config.batches = 10;
        config.per_batch = 100;
        config.seed = 20260809;
        config.pools = load_attested_pools(data_dir / "attested_pools.csv");
        config.range = {1, 99};
        BaselineSample sample = sample_baselines(config);
        c.expect(sample.systems.size() >= 1000, "fewer than 1,000 baselines");

        std::vector<MeasureReport> natural_reports;
        for (const NumeralSystem& s : naturals) {
            natural_reports.push_back(measure_system(s, power2));
        }
        int dominating = 0;
        for (const NumeralSystem& baseline : sample.systems) {
            MeasureReport rb = measure_system(baseline, power2);
            for (const MeasureReport& rn : natural_reports) {
                bool dominates = rb.irregularity_bits <= rn.irregularity_bits &&
                                 rb.processing_bits <= rn.processing_bits &&
                                 (rb.irregularity_bits < rn.irregularity_bits ||
                                  rb.processing_bits < rn.processing_bits);
                if (dominates) ++dominating;
            }
        }
        c.expect(dominating == 0,
                 std::to_string(dominating) + " baseline/natural dominations found");
    });

    criterion(9, "Karo Batak local neighbourhood holds exactly 2 systems", [&](Check& c) {
        std::set<std::string> distinct;
        double seed_avg = avg_morph_complexity(*karo, power2);
        Number seed_lexicon = lexicon_size(*karo);
        for (LocalDirection direction : {LocalDirection::best, LocalDirection::worst}) {
            LocalSearchConfig config;
            config.direction = direction;
            config.seed = 20260809;
            for (const NumeralSystem& neighbour : local_frontier(*karo, config, power2)) {
                std::string fingerprint;
                for (Number n = 1; n <= 99; ++n) {
                    fingerprint += token_string(neighbour.tokens(n)) + ";";
                }
                distinct.insert(fingerprint);
                c.expect(lexicon_size(neighbour) == seed_lexicon, "lexicon size differs");
                c.expect(avg_morph_complexity(neighbour, power2) == seed_avg,
                         "avg morph complexity differs");
            }
        }
        c.expect(distinct.size() == 2,
                 "neighbourhood has " + std::to_string(distinct.size()) + " systems, not 2");
    });

    criterion(10, "GA invariants over 50 generations, population 100", [&](Check& c) {
        GaConfig config;
        config.population_size = 100;
        config.max_generations = 50;
        config.seed = 20260809;
        config.prior = power2;
        config.pools = load_attested_pools(data_dir / "attested_pools.csv");
        GaResult result = run_ga(config);
        c.expect(result.generation_archives.size() == 51, "unexpected generation count");
        c.expect(!result.frontier.empty(), "empty frontier");

        double previous_hv = -1.0;
        for (std::size_t g = 0; g < result.generation_archives.size(); ++g) {
            const auto& archive = result.generation_archives[g];
            c.expect(numeral::testing::pareto_oracle(archive).size() == archive.size(),
                     "archive not mutually non-dominated at generation " + std::to_string(g));
            if (g > 0) {
                for (const ScoredPoint& p : archive) {
                    for (const ScoredPoint& q : result.generation_archives[g - 1]) {
                        bool dominated = q.x <= p.x && q.y <= p.y && (q.x < p.x || q.y < p.y);
                        c.expect(!dominated, "archive regressed at generation " + std::to_string(g));
                        if (!c.ok) break;
                    }
                    if (!c.ok) break;
                }
            }
            double hv = numeral::testing::hypervolume(archive, 64.0, 64.0);
            c.expect(hv >= previous_hv - 1e-9, "hypervolume shrank at generation " + std::to_string(g));
            previous_hv = hv;
            if (!c.ok) break;
        }
    });

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
