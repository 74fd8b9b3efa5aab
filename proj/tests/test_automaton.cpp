#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "numeral/automaton.hpp"
#include "numeral/hurford.hpp"
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

NumeralSystem one_word_system() {
    NumeralSystem system;
    system.range = {1, 1};
    system.label = "one";
    system.entries[1] = Expr::atom(1);
    return system;
}

std::vector<TokenSeq> random_word_sample(std::mt19937_64& rng, Range range) {
    GrammarParams params = numeral::testing::random_params(rng, 5, 2, 4);
    if (!expressible(params, range)) return {};
    Enumerator enumerator(params, range.hi);
    std::vector<TokenSeq> words;
    for (Number n = range.lo; n <= range.hi; ++n) {
        const auto& candidates = enumerator.enumerate(n).candidates;
        words.push_back(linearize(candidates[rng() % candidates.size()]));
    }
    return words;
}

} // namespace

TEST_CASE("one-word system: two states, one transition") {
    Automaton dfa = build_minimal_dfa(one_word_system());
    CHECK(dfa.state_count() == 2);
    CHECK(dfa.transition_count() == 1);
    CHECK(dfa.accepting_count() == 1);
    CHECK(dfa.alphabet().size() == 1);
}

TEST_CASE("Karo Batak machine has 6 states, 21 transitions, 12 symbols") {
    Automaton dfa = build_minimal_dfa(karo_batak());
    CHECK(dfa.state_count() == 6);
    CHECK(dfa.transition_count() == 21);
    CHECK(dfa.alphabet().size() == 12);
}

TEST_CASE("parse returns the visited states and accepting flags") {
    Automaton dfa = build_minimal_dfa(karo_batak());
    ParseTrace trace = dfa.parse(tokens_from_string("2 * 10"));
    REQUIRE(trace.states.size() == 4);
    CHECK(trace.symbols.size() == 3);
    CHECK(trace.states.front() == dfa.initial());
    CHECK(!trace.accept_flags.front()); // λ rejects the empty word here
    CHECK(trace.accept_flags[1]);       // "2" is a numeral
    CHECK(!trace.accept_flags[2]);      // "2 *" is not
    CHECK(trace.accept_flags[3]);       // "2 * 10" is
    CHECK(trace.out_degrees.front() == 9);
}

TEST_CASE("parse rejections") {
    Automaton dfa = build_minimal_dfa(karo_batak());
    CHECK_THROWS_AS(dfa.parse(tokens_from_string("10 + 2")), NotAccepted);
    CHECK_THROWS_AS(dfa.parse(TokenSeq{}), NotAccepted);
    CHECK_THROWS_AS(dfa.parse(tokens_from_string("2 *")), NotAccepted);
    CHECK(!dfa.accepts(tokens_from_string("2 * 10 + 10")));
    CHECK(dfa.accepts(tokens_from_string("9 * 10 + 6")));
}

TEST_CASE("exactness: accepts each numeral, rejects near misses") {
    std::mt19937_64 rng(2024);
    NumeralSystem system = karo_batak();
    Automaton dfa = build_minimal_dfa(system);
    std::set<std::string> language;
    std::vector<TokenSeq> words;
    for (Number n = 1; n <= 99; ++n) {
        words.push_back(system.tokens(n));
        language.insert(token_string(words.back()));
        CHECK(dfa.accepts(words.back()));
    }
    const auto& alphabet = dfa.alphabet();
    int tried = 0;
    while (tried < 1000) {
        TokenSeq mutated = words[rng() % words.size()];
        switch (rng() % 3) {
        case 0: { // swap two positions
            if (mutated.size() < 2) continue;
            std::size_t i = rng() % mutated.size(), j = rng() % mutated.size();
            if (i == j) continue;
            std::swap(mutated[i], mutated[j]);
            break;
        }
        case 1: // drop one token
            mutated.erase(mutated.begin() + static_cast<std::ptrdiff_t>(rng() % mutated.size()));
            break;
        default: // insert a random alphabet symbol
            mutated.insert(mutated.begin() + static_cast<std::ptrdiff_t>(rng() % (mutated.size() + 1)),
                           alphabet[rng() % alphabet.size()]);
            break;
        }
        if (mutated.empty() || language.count(token_string(mutated))) continue;
        CAPTURE(token_string(mutated));
        CHECK(!dfa.accepts(mutated));
        ++tried;
    }
}

TEST_CASE("state ids are topological and the initial state is 0") {
    Automaton dfa = build_minimal_dfa(karo_batak());
    CHECK(dfa.initial() == 0);
    for (std::size_t s = 0; s < dfa.state_count(); ++s) {
        for (const auto& [symbol, target] : dfa.edges(static_cast<int>(s))) {
            CHECK(target > static_cast<int>(s));
        }
    }
}

TEST_CASE("incremental construction matches trie plus Hopcroft") {
    std::mt19937_64 rng(77);
    int done = 0;
    while (done < 40) {
        std::vector<TokenSeq> words = random_word_sample(rng, {1, 25});
        if (words.empty()) continue;
        Automaton incremental = build_minimal_dfa(words);
        Automaton minimized = minimize(build_trie(words));
        CHECK(isomorphic(incremental, minimized));
        for (const TokenSeq& w : words) {
            CHECK(incremental.accepts(w));
        }
        ++done;
    }
}

TEST_CASE("state count equals the Myhill-Nerode class count") {
    std::mt19937_64 rng(11);
    int done = 0;
    while (done < 25) {
        std::vector<TokenSeq> words = random_word_sample(rng, {1, 20});
        if (words.empty()) continue;
        Automaton dfa = build_minimal_dfa(words);
        auto oracle = numeral::testing::myhill_nerode(words);
        CHECK(dfa.state_count() == oracle.classes);
        CHECK(dfa.transition_count() == oracle.transitions);
        ++done;
    }
    // and on the hand-built machine
    auto oracle = numeral::testing::myhill_nerode(sorted_words(karo_batak()));
    CHECK(oracle.classes == 6);
    CHECK(oracle.transitions == 21);
}

TEST_CASE("insertion order does not matter") {
    std::mt19937_64 rng(3);
    NumeralSystem system = karo_batak();
    std::vector<TokenSeq> words;
    for (Number n = 1; n <= 99; ++n) words.push_back(system.tokens(n));
    Automaton reference = build_minimal_dfa(words);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(words.begin(), words.end(), rng);
        Automaton shuffled = build_minimal_dfa(words);
        CHECK(isomorphic(reference, shuffled));
        CHECK(reference.transition_count() == shuffled.transition_count());
    }
}

TEST_CASE("DOT export") {
    Automaton tiny = build_minimal_dfa(one_word_system());
    std::string dot = tiny.to_dot();
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot.find("λ") != std::string::npos);
    CHECK(dot.find("q0 -> q1") != std::string::npos);
    CHECK(std::count(dot.begin(), dot.end(), '{') == std::count(dot.begin(), dot.end(), '}'));

    std::string karo_dot = build_minimal_dfa(karo_batak()).to_dot();
    CHECK(std::count(karo_dot.begin(), karo_dot.end(), '>') == 21); // one per edge line
}

TEST_CASE("JSON export carries the structure") {
    Automaton dfa = build_minimal_dfa(karo_batak());
    std::string json = dfa.to_json();
    CHECK(json.find("\"states\": 6") != std::string::npos);
    CHECK(json.find("\"alphabet\"") != std::string::npos);
    CHECK(json.find("\"transitions\"") != std::string::npos);
}

TEST_CASE("constructor validates structure") {
    using Edges = std::vector<std::vector<Automaton::Edge>>;
    Morpheme one = Morpheme::number(1);
    // self-loop -> cycle
    CHECK_THROWS_AS(Automaton(0, {true}, Edges{{{one, 0}}}), InvalidParams);
    // duplicate symbol -> nondeterminism
    CHECK_THROWS_AS(Automaton(0, {false, true, true}, Edges{{{one, 1}, {one, 2}}, {}, {}}),
                    InvalidParams);
    // state that cannot reach an accepting state
    Morpheme two = Morpheme::number(2);
    CHECK_THROWS_AS(Automaton(0, {false, true, false}, Edges{{{one, 1}, {two, 2}}, {}, {}}),
                    InvalidParams);
    // fine: diamond
    Morpheme three = Morpheme::number(3);
    CHECK_NOTHROW(Automaton(0, {false, false, true}, Edges{{{one, 1}, {two, 2}}, {{three, 2}}, {}}));
}
