#include "numeral/measures.hpp"

#include <cmath>
#include <set>

namespace numeral {

double irregularity(const Automaton& automaton) {
    const double states = static_cast<double>(automaton.state_count());
    const double transitions = static_cast<double>(automaton.transition_count());
    const double symbols = static_cast<double>(automaton.alphabet().size());
    return transitions * (2.0 * std::log2(states) + std::log2(symbols)) + std::log2(states) +
           states;
}

double path_cost(const ParseTrace& trace) {
    double bits = 0.0;
    // One choice among the source's outgoing transitions per step.
    for (std::size_t i = 0; i + 1 < trace.states.size(); ++i) {
        bits += std::log2(static_cast<double>(trace.out_degrees[i]));
    }
    // One stop-or-continue bit at every accepting state on the path.
    for (bool accepting : trace.accept_flags) {
        if (accepting) bits += 1.0;
    }
    return bits;
}

double processing_complexity(const NumeralSystem& system, const Automaton& automaton,
                             const Prior& prior) {
    double bits = 0.0;
    for (Number n = system.range.lo; n <= system.range.hi; ++n) {
        bits += prior.weight(n) * path_cost(automaton.parse(system.tokens(n)));
    }
    return bits;
}

Number lexicon_size(const GrammarParams& params) {
    std::set<Number> atoms = params.digits;
    atoms.insert(params.multipliers.begin(), params.multipliers.end());
    return static_cast<Number>(atoms.size());
}

namespace {

void collect_atoms(const Expr& e, std::set<Number>& atoms) {
    if (e.is_atom()) {
        atoms.insert(e.value());
        return;
    }
    collect_atoms(*e.left(), atoms);
    collect_atoms(*e.right(), atoms);
}

} // namespace

Number lexicon_size(const NumeralSystem& system) {
    std::set<Number> atoms;
    for (const auto& [n, expr] : system.entries) {
        collect_atoms(*expr, atoms);
    }
    return static_cast<Number>(atoms.size());
}

double avg_morph_complexity(const NumeralSystem& system, const Prior& prior) {
    double total = 0.0;
    for (Number n = system.range.lo; n <= system.range.hi; ++n) {
        total += prior.weight(n) * static_cast<double>(system.entry(n)->morpheme_count());
    }
    return total;
}

MeasureReport measure_system(const NumeralSystem& system, const Prior& prior) {
    Automaton dfa = build_minimal_dfa(system);
    MeasureReport report;
    report.system_id = system.label;
    report.source = system.source;
    report.prior_descriptor = prior.descriptor();
    report.irregularity_bits = irregularity(dfa);
    report.processing_bits = processing_complexity(system, dfa, prior);
    report.lexicon_size = lexicon_size(system);
    report.avg_morph_complexity = avg_morph_complexity(system, prior);
    return report;
}

} // namespace numeral
