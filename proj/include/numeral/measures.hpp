#pragma once

#include <string>

#include "numeral/automaton.hpp"
#include "numeral/core.hpp"

namespace numeral {

struct MeasureReport {
    std::string system_id;
    SystemSource source = SystemSource::manual;
    std::string prior_descriptor;
    double irregularity_bits = 0.0;
    double processing_bits = 0.0;
    Number lexicon_size = 0;
    double avg_morph_complexity = 0.0;
};

/// Description length in bits of the automaton:
/// |Z|(2·log2|S| + log2|Σ|) + log2|S| + |S|.
double irregularity(const Automaton& automaton);

/// Bits to single out one path: log2 of the source out-degree per taken
/// transition, plus one bit per visited accepting state (final included).
double path_cost(const ParseTrace& trace);

/// Prior-weighted average path cost over all entries. Throws NotAccepted on
/// any entry the automaton rejects (automaton/system mismatch).
double processing_complexity(const NumeralSystem& system, const Automaton& automaton,
                             const Prior& prior);

/// |D ∪ M|.
Number lexicon_size(const GrammarParams& params);
/// Distinct atom values appearing across the system's entries.
Number lexicon_size(const NumeralSystem& system);

/// Prior-weighted average morpheme count (atoms + combinators, no parens).
double avg_morph_complexity(const NumeralSystem& system, const Prior& prior);

/// All four scores for one system; builds the minimal DFA internally.
MeasureReport measure_system(const NumeralSystem& system, const Prior& prior);

} // namespace numeral
