#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace numeral {

using Number = std::int64_t;

/// Hard ceiling on any value an expression may take, including intermediates.
inline constexpr Number kMaxIntermediate = 1'000'000;

struct InvalidExpression : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Combinator : std::uint8_t { plus, minus, times };

char combinator_symbol(Combinator op);

/// One surface token: a number atom, an arithmetic combinator, or a
/// parenthesis. Parentheses are alphabet symbols but not morphemes proper;
/// they never count toward morphosyntactic complexity.
class Morpheme {
public:
    enum class Kind : std::uint8_t { number, combinator, open_paren, close_paren };

    static Morpheme number(Number value);
    static Morpheme combinator(Combinator op);
    static Morpheme open_paren() { return Morpheme(Kind::open_paren, 0, Combinator::plus); }
    static Morpheme close_paren() { return Morpheme(Kind::close_paren, 0, Combinator::plus); }

    Kind kind() const { return kind_; }
    bool is_number() const { return kind_ == Kind::number; }
    bool is_paren() const { return kind_ == Kind::open_paren || kind_ == Kind::close_paren; }
    Number value() const;
    Combinator op() const;

    bool operator==(const Morpheme&) const = default;
    // Total order: number atoms ascending by value, then + < - < *, then parens.
    std::strong_ordering operator<=>(const Morpheme& other) const;

    std::string str() const;
    /// Parses one whitespace-free token; throws ParseError on anything else.
    static Morpheme from_token(std::string_view token);

private:
    Morpheme(Kind kind, Number value, Combinator op) : kind_(kind), value_(value), op_(op) {}

    Kind kind_;
    Number value_;  // meaningful for number atoms only, zeroed otherwise
    Combinator op_; // meaningful for combinators only, plus otherwise
};

struct MorphemeHash {
    std::size_t operator()(const Morpheme& m) const;
};

using TokenSeq = std::vector<Morpheme>;

std::string token_string(const TokenSeq& tokens);
/// Splits a whitespace-separated token string. Throws ParseError on bad tokens.
TokenSeq tokens_from_string(std::string_view text);

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Leaves are number atoms; internal nodes apply a
/// combinator to two children. Subtrees are shared freely.
class Expr {
public:
    static ExprPtr atom(Number value);
    static ExprPtr combine(Combinator op, ExprPtr left, ExprPtr right);

    bool is_atom() const { return !left_; }
    Number value() const;
    Combinator op() const;
    const ExprPtr& left() const { return left_; }
    const ExprPtr& right() const { return right_; }

    int atom_count() const { return atom_count_; }
    /// Number atoms plus combinators; parentheses excluded.
    int morpheme_count() const { return 2 * atom_count_ - 1; }

private:
    Expr() = default;

    Number value_ = 0;
    Combinator op_ = Combinator::plus;
    ExprPtr left_, right_;
    int atom_count_ = 1;
};

/// Arithmetic reading of an expression. Throws InvalidExpression when any
/// intermediate or final value leaves [1, kMaxIntermediate].
Number evaluate(const Expr& expr);
inline Number evaluate(const ExprPtr& expr) { return evaluate(*expr); }

/// Emits tokens in infix order, inserting parentheses only where needed to
/// survive the parse conventions of parse_tokens (times over plus/minus,
/// plus/minus right-associative, times left-associative).
TokenSeq linearize(const Expr& expr);
inline TokenSeq linearize(const ExprPtr& expr) { return linearize(*expr); }

/// Inverse of linearize: parse_tokens(linearize(e)) is structurally equal
/// to e. Throws ParseError on malformed input.
ExprPtr parse_tokens(const TokenSeq& tokens);
ExprPtr parse_tokens(std::string_view text);

/// True when the tree has Hurford grammar shape: a times node multiplies a
/// Num by an atom on the right; a plus/minus node has an atom or times node
/// on the left.
bool conforms_to_hurford(const Expr& expr);
inline bool conforms_to_hurford(const ExprPtr& expr) { return conforms_to_hurford(*expr); }

bool expr_equal(const Expr& a, const Expr& b);
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) { return expr_equal(*a, *b); }

/// Lexicographic comparison of the linearized token sequences.
int compare_tokens(const TokenSeq& a, const TokenSeq& b);

struct Range {
    Number lo = 1;
    Number hi = 99;

    Number size() const { return hi - lo + 1; }
    bool contains(Number n) const { return n >= lo && n <= hi; }
    bool operator==(const Range&) const = default;
    void validate() const;
};

enum class PriorKind : std::uint8_t { power_law, uniform };

/// Need distribution over a number range. Weights are normalized to sum to 1.
struct Prior {
    PriorKind kind = PriorKind::power_law;
    double exponent = 2.0; // power-law only
    Range range;
    std::vector<double> weights; // indexed by n - range.lo

    double weight(Number n) const;
    std::string descriptor() const; // "power2", "power1.5", "uniform"
};

Prior make_prior(PriorKind kind, Range range, double exponent = 2.0);
/// Builds a prior from a descriptor such as "uniform", "power2" or "power2.5".
Prior prior_from_descriptor(std::string_view descriptor, Range range);

/// A Hurford grammar instance: digit set D, multiplier set M, the optional
/// subtraction combinator (plus and times are always available) and the
/// maximum number of atoms per numeral.
struct GrammarParams {
    std::set<Number> digits;
    std::set<Number> multipliers;
    bool allow_minus = false;
    int max_depth = 5;

    void validate() const; // throws InvalidParams
    bool operator==(const GrammarParams&) const = default;
    std::string str() const;
};

enum class SystemSource : std::uint8_t { natural, baseline, ga, local, manual };

std::string_view source_name(SystemSource source);
SystemSource source_from_name(std::string_view name);

/// Total mapping from every number in a range to one expression.
struct NumeralSystem {
    Range range;
    std::map<Number, ExprPtr> entries;
    std::string label;
    SystemSource source = SystemSource::manual;

    const ExprPtr& entry(Number n) const;
    TokenSeq tokens(Number n) const { return linearize(entry(n)); }
    /// Checks totality, per-entry evaluation and Hurford shape.
    void validate() const;
};

/// All linearized numerals of a system, sorted by token order.
std::vector<TokenSeq> sorted_words(const NumeralSystem& system);

} // namespace numeral
