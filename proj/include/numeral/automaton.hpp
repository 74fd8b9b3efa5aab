#pragma once

#include <optional>
#include <string>
#include <vector>

#include "numeral/core.hpp"

namespace numeral {

struct NotAccepted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The unique path of an accepted token sequence through an automaton.
/// Self-contained: carries the visited states, their accepting flags and
/// their out-degrees, which is all the bit-cost accounting needs.
struct ParseTrace {
    std::vector<int> states;        // visited states, initial through final
    TokenSeq symbols;               // taken transitions; |symbols| = |states| - 1
    std::vector<bool> accept_flags; // per visited state
    std::vector<int> out_degrees;   // per visited state
};

/// Immutable partial deterministic finite automaton over morpheme symbols.
/// States carry stable integer ids in topological order (initial = 0); two
/// automata are isomorphic exactly when they compare equal.
class Automaton {
public:
    using Edge = std::pair<Morpheme, int>;

    /// Validates determinism, acyclicity, reachability from the initial
    /// state and that every state reaches an accepting state, then renumbers
    /// states canonically.
    Automaton(int initial, std::vector<bool> accepting, std::vector<std::vector<Edge>> edges);

    int initial() const { return 0; }
    std::size_t state_count() const { return edges_.size(); }
    std::size_t transition_count() const { return transition_count_; }
    std::size_t accepting_count() const;
    const std::vector<Morpheme>& alphabet() const { return alphabet_; }

    bool is_accepting(int state) const { return accepting_[static_cast<std::size_t>(state)]; }
    int out_degree(int state) const;
    const std::vector<Edge>& edges(int state) const { return edges_[static_cast<std::size_t>(state)]; }
    std::optional<int> step(int state, const Morpheme& symbol) const;

    /// Unique trace of an accepted sequence; throws NotAccepted otherwise.
    ParseTrace parse(const TokenSeq& tokens) const;
    bool accepts(const TokenSeq& tokens) const;

    /// GraphViz DOT rendering: accepting states doubly circled, initial
    /// state labeled λ.
    std::string to_dot() const;
    /// JSON dump of (states, accepting, transitions, alphabet).
    std::string to_json() const;

    bool operator==(const Automaton&) const = default;

private:
    std::vector<bool> accepting_;
    std::vector<std::vector<Edge>> edges_; // sorted by symbol per state
    std::vector<Morpheme> alphabet_;
    std::size_t transition_count_ = 0;
};

/// Minimal partial DFA accepting exactly the given words (sorted and
/// deduplicated internally), built with the incremental algorithm for
/// sorted input.
Automaton build_minimal_dfa(std::vector<TokenSeq> words);

/// Minimal partial DFA accepting exactly the system's linearized numerals.
Automaton build_minimal_dfa(const NumeralSystem& system);

/// Plain prefix-tree acceptor for the words; no merging.
Automaton build_trie(const std::vector<TokenSeq>& words);

/// Classical minimization: complete with a sink, refine partitions
/// (Hopcroft), strip the sink. Kept as an independent construction route.
Automaton minimize(const Automaton& automaton);

inline bool isomorphic(const Automaton& a, const Automaton& b) { return a == b; }

} // namespace numeral
