#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "numeral/core.hpp"

namespace numeral {

/// Raised when a grammar cannot express some number in the requested range.
struct IncompleteSystem : std::runtime_error {
    explicit IncompleteSystem(Number n)
        : std::runtime_error("grammar cannot express " + std::to_string(n)), missing(n) {}
    Number missing;
};

struct EnumerationResult {
    Number number = 0;
    int depth_limit = 0;
    std::vector<ExprPtr> candidates; // distinct trees, sorted by (atoms, token order)
};

/// Enumerates the derivations a grammar assigns to each number, up to the
/// grammar's atom budget. Counting tables are built bottom-up per atom count;
/// trees are materialized lazily and memoized, with subtrees shared.
///
/// Values explored are capped at max_target when the grammar has no minus
/// (larger intermediates cannot contribute) and at kMaxIntermediate
/// otherwise. Instances are cheap to create and not thread-safe; use one per
/// thread.
class Enumerator {
public:
    Enumerator(GrammarParams params, Number max_target);

    const GrammarParams& params() const { return params_; }

    /// Distinct derivations of n with at most `depth` atoms (default: the
    /// grammar's max_depth).
    EnumerationResult enumerate(Number n);
    EnumerationResult enumerate(Number n, int depth);

    /// Number of distinct derivations with at most `depth` atoms.
    std::uint64_t candidate_count(Number n, int depth);

    /// Shortest derivation of n: fewest morphemes, ties broken by the
    /// lexicographically smallest token sequence. Null when none exists.
    ExprPtr shortest(Number n);

    bool expressible(Range range);

private:
    using CountRow = std::vector<std::pair<Number, std::uint64_t>>; // sorted by value

    void ensure_levels(int depth);
    static std::uint64_t lookup(const CountRow& row, Number value);
    const std::vector<ExprPtr>& nums(Number value, int atoms);
    const std::vector<ExprPtr>& phrases(Number value, int atoms);
    ExprPtr leaf(Number value);

    GrammarParams params_;
    Number cap_;
    std::vector<Number> sorted_multipliers_;
    std::set<Number> atoms_; // digits ∪ multipliers

    std::vector<CountRow> num_counts_;    // index = atom count, slot 0 unused
    std::vector<CountRow> phrase_counts_; // index = atom count, slot 0 unused
    int built_levels_ = 0;

    std::unordered_map<std::uint64_t, std::vector<ExprPtr>> memo_;
    std::unordered_map<Number, ExprPtr> leaves_;
};

/// All distinct derivations of n under the grammar, up to params.max_depth
/// atoms. An empty candidate list is a valid result.
EnumerationResult enumerate(const GrammarParams& params, Number n);

/// Builds the system that picks the shortest numeral for every number.
/// Throws IncompleteSystem when some number has no derivation.
NumeralSystem shortest_system(const GrammarParams& params, Range range,
                              std::string label = "shortest",
                              SystemSource source = SystemSource::manual);

/// True iff every number in the range has at least one derivation.
bool expressible(const GrammarParams& params, Range range);

/// Recovers (D, M, C) from an annotated system. Atoms observed in multiplier
/// positions (right of *, or any leaf in phrase position left of +/-) form M;
/// atoms seen only in Num positions form D.
GrammarParams extract_grammar(const NumeralSystem& system, int max_depth = 5);

} // namespace numeral
