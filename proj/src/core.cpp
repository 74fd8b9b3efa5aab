#include "numeral/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace numeral {

char combinator_symbol(Combinator op) {
    switch (op) {
    case Combinator::plus: return '+';
    case Combinator::minus: return '-';
    case Combinator::times: return '*';
    }
    return '?';
}

Morpheme Morpheme::number(Number value) {
    if (value < 1) {
        throw InvalidExpression("number atom must be positive, got " + std::to_string(value));
    }
    return Morpheme(Kind::number, value, Combinator::plus);
}

Morpheme Morpheme::combinator(Combinator op) {
    return Morpheme(Kind::combinator, 0, op);
}

Number Morpheme::value() const {
    if (kind_ != Kind::number) {
        throw InvalidExpression("morpheme has no number value");
    }
    return value_;
}

Combinator Morpheme::op() const {
    if (kind_ != Kind::combinator) {
        throw InvalidExpression("morpheme has no combinator");
    }
    return op_;
}

namespace {

int morpheme_rank(const Morpheme& m) {
    switch (m.kind()) {
    case Morpheme::Kind::number: return 0;
    case Morpheme::Kind::combinator:
        switch (m.op()) {
        case Combinator::plus: return 1;
        case Combinator::minus: return 2;
        case Combinator::times: return 3;
        }
        return 3;
    case Morpheme::Kind::open_paren: return 4;
    case Morpheme::Kind::close_paren: return 5;
    }
    return 6;
}

} // namespace

std::strong_ordering Morpheme::operator<=>(const Morpheme& other) const {
    int ra = morpheme_rank(*this);
    int rb = morpheme_rank(other);
    if (ra != rb) {
        return ra <=> rb;
    }
    if (kind_ == Kind::number) {
        return value_ <=> other.value_;
    }
    return std::strong_ordering::equal;
}

std::string Morpheme::str() const {
    switch (kind_) {
    case Kind::number: return std::to_string(value_);
    case Kind::combinator: return std::string(1, combinator_symbol(op_));
    case Kind::open_paren: return "(";
    case Kind::close_paren: return ")";
    }
    return "?";
}

Morpheme Morpheme::from_token(std::string_view token) {
    if (token.empty()) {
        throw ParseError("empty token");
    }
    if (token == "+") return combinator(Combinator::plus);
    if (token == "-") return combinator(Combinator::minus);
    if (token == "*") return combinator(Combinator::times);
    if (token == "(") return open_paren();
    if (token == ")") return close_paren();
    Number value = 0;
    for (char c : token) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("unrecognized token '" + std::string(token) + "'");
        }
        value = value * 10 + (c - '0');
        if (value > kMaxIntermediate) {
            throw ParseError("number token out of range: '" + std::string(token) + "'");
        }
    }
    if (value < 1) {
        throw ParseError("number token must be positive: '" + std::string(token) + "'");
    }
    return number(value);
}

std::size_t MorphemeHash::operator()(const Morpheme& m) const {
    std::size_t h = static_cast<std::size_t>(m.kind()) * 0x9e3779b97f4a7c15ull;
    if (m.is_number()) {
        h ^= std::hash<Number>()(m.value()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    } else if (m.kind() == Morpheme::Kind::combinator) {
        h ^= static_cast<std::size_t>(m.op()) + 0x517cc1b727220a95ull;
    }
    return h;
}

std::string token_string(const TokenSeq& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += tokens[i].str();
    }
    return out;
}

TokenSeq tokens_from_string(std::string_view text) {
    TokenSeq tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        tokens.push_back(Morpheme::from_token(text.substr(i, j - i)));
        i = j;
    }
    return tokens;
}

ExprPtr Expr::atom(Number value) {
    if (value < 1 || value > kMaxIntermediate) {
        throw InvalidExpression("atom value out of range: " + std::to_string(value));
    }
    auto node = std::shared_ptr<Expr>(new Expr());
    node->value_ = value;
    node->atom_count_ = 1;
    return node;
}

ExprPtr Expr::combine(Combinator op, ExprPtr left, ExprPtr right) {
    if (!left || !right) {
        throw InvalidExpression("combine requires two children");
    }
    auto node = std::shared_ptr<Expr>(new Expr());
    node->op_ = op;
    node->atom_count_ = left->atom_count_ + right->atom_count_;
    node->left_ = std::move(left);
    node->right_ = std::move(right);
    return node;
}

Number Expr::value() const {
    if (!is_atom()) {
        throw InvalidExpression("internal node has no atom value");
    }
    return value_;
}

Combinator Expr::op() const {
    if (is_atom()) {
        throw InvalidExpression("leaf node has no combinator");
    }
    return op_;
}

Number evaluate(const Expr& expr) {
    if (expr.is_atom()) {
        return expr.value();
    }
    Number l = evaluate(*expr.left());
    Number r = evaluate(*expr.right());
    Number v = 0;
    switch (expr.op()) {
    case Combinator::plus: v = l + r; break;
    case Combinator::minus: v = l - r; break;
    case Combinator::times: v = l * r; break;
    }
    if (v < 1 || v > kMaxIntermediate) {
        throw InvalidExpression("expression value out of range: " + std::to_string(v));
    }
    return v;
}

namespace {

bool is_additive(const Expr& e) {
    return !e.is_atom() && e.op() != Combinator::times;
}

void linearize_rec(const Expr& e, TokenSeq& out) {
    if (e.is_atom()) {
        out.push_back(Morpheme::number(e.value()));
        return;
    }
    const Expr& left = *e.left();
    const Expr& right = *e.right();
    bool left_parens, right_parens;
    if (e.op() == Combinator::times) {
        // Precedence forces parens around an additive left factor; a
        // non-atom right factor (outside Hurford shape) also needs them.
        left_parens = is_additive(left);
        right_parens = !right.is_atom();
    } else {
        // Right-associativity: only an additive left operand needs parens.
        left_parens = is_additive(left);
        right_parens = false;
    }
    if (left_parens) out.push_back(Morpheme::open_paren());
    linearize_rec(left, out);
    if (left_parens) out.push_back(Morpheme::close_paren());
    out.push_back(Morpheme::combinator(e.op()));
    if (right_parens) out.push_back(Morpheme::open_paren());
    linearize_rec(right, out);
    if (right_parens) out.push_back(Morpheme::close_paren());
}

class TokenParser {
public:
    explicit TokenParser(const TokenSeq& tokens) : tokens_(tokens) {}

    ExprPtr run() {
        if (tokens_.empty()) {
            throw ParseError("empty token sequence");
        }
        ExprPtr e = parse_expr();
        if (pos_ != tokens_.size()) {
            throw ParseError("unexpected token '" + tokens_[pos_].str() + "' at position " +
                             std::to_string(pos_));
        }
        return e;
    }

private:
    // expr   := term (('+'|'-') expr)?       right-associative
    // term   := factor ('*' factor)*         left-associative
    // factor := NUMBER | '(' expr ')'
    ExprPtr parse_expr() {
        ExprPtr left = parse_term();
        if (pos_ < tokens_.size() && tokens_[pos_].kind() == Morpheme::Kind::combinator &&
            tokens_[pos_].op() != Combinator::times) {
            Combinator op = tokens_[pos_].op();
            ++pos_;
            ExprPtr right = parse_expr();
            return Expr::combine(op, std::move(left), std::move(right));
        }
        return left;
    }

    ExprPtr parse_term() {
        ExprPtr left = parse_factor();
        while (pos_ < tokens_.size() && tokens_[pos_].kind() == Morpheme::Kind::combinator &&
               tokens_[pos_].op() == Combinator::times) {
            ++pos_;
            ExprPtr right = parse_factor();
            left = Expr::combine(Combinator::times, std::move(left), std::move(right));
        }
        return left;
    }

    ExprPtr parse_factor() {
        if (pos_ >= tokens_.size()) {
            throw ParseError("unexpected end of tokens");
        }
        const Morpheme& tok = tokens_[pos_];
        if (tok.is_number()) {
            ++pos_;
            return Expr::atom(tok.value());
        }
        if (tok.kind() == Morpheme::Kind::open_paren) {
            ++pos_;
            ExprPtr inner = parse_expr();
            if (pos_ >= tokens_.size() || tokens_[pos_].kind() != Morpheme::Kind::close_paren) {
                throw ParseError("missing closing parenthesis");
            }
            ++pos_;
            return inner;
        }
        throw ParseError("unexpected token '" + tok.str() + "' at position " + std::to_string(pos_));
    }

    const TokenSeq& tokens_;
    std::size_t pos_ = 0;
};

} // namespace

TokenSeq linearize(const Expr& expr) {
    TokenSeq out;
    out.reserve(static_cast<std::size_t>(expr.morpheme_count()));
    linearize_rec(expr, out);
    return out;
}

ExprPtr parse_tokens(const TokenSeq& tokens) {
    return TokenParser(tokens).run();
}

ExprPtr parse_tokens(std::string_view text) {
    return parse_tokens(tokens_from_string(text));
}

bool conforms_to_hurford(const Expr& expr) {
    if (expr.is_atom()) {
        return true;
    }
    const Expr& left = *expr.left();
    const Expr& right = *expr.right();
    if (expr.op() == Combinator::times) {
        // Num * M: the multiplier slot holds a single atom.
        if (!right.is_atom()) return false;
        return conforms_to_hurford(left);
    }
    // Phrase +/- Num: the phrase slot is an atom or a times node.
    if (is_additive(left)) return false;
    return conforms_to_hurford(left) && conforms_to_hurford(right);
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (&a == &b) return true;
    if (a.is_atom() != b.is_atom()) return false;
    if (a.is_atom()) return a.value() == b.value();
    if (a.op() != b.op()) return false;
    return expr_equal(*a.left(), *b.left()) && expr_equal(*a.right(), *b.right());
}

int compare_tokens(const TokenSeq& a, const TokenSeq& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto c = a[i] <=> b[i];
        if (c < 0) return -1;
        if (c > 0) return 1;
    }
    if (a.size() < b.size()) return -1;
    if (a.size() > b.size()) return 1;
    return 0;
}

void Range::validate() const {
    if (lo < 1 || hi < lo || hi > kMaxIntermediate) {
        throw InvalidParams("invalid range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

double Prior::weight(Number n) const {
    if (!range.contains(n)) {
        throw InvalidParams("prior weight requested outside range: " + std::to_string(n));
    }
    return weights[static_cast<std::size_t>(n - range.lo)];
}

std::string Prior::descriptor() const {
    if (kind == PriorKind::uniform) {
        return "uniform";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "power%g", exponent);
    return buf;
}

Prior make_prior(PriorKind kind, Range range, double exponent) {
    range.validate();
    Prior prior;
    prior.kind = kind;
    prior.exponent = exponent;
    prior.range = range;
    prior.weights.resize(static_cast<std::size_t>(range.size()));
    double total = 0.0;
    for (Number n = range.lo; n <= range.hi; ++n) {
        double w = kind == PriorKind::uniform ? 1.0 : std::pow(static_cast<double>(n), -exponent);
        prior.weights[static_cast<std::size_t>(n - range.lo)] = w;
        total += w;
    }
    for (double& w : prior.weights) {
        w /= total;
    }
    return prior;
}

Prior prior_from_descriptor(std::string_view descriptor, Range range) {
    if (descriptor == "uniform") {
        return make_prior(PriorKind::uniform, range);
    }
    if (descriptor.rfind("power", 0) == 0) {
        std::string tail(descriptor.substr(5));
        try {
            std::size_t used = 0;
            double exponent = std::stod(tail, &used);
            if (used == tail.size() && exponent > 0.0) {
                return make_prior(PriorKind::power_law, range, exponent);
            }
        } catch (const std::exception&) {
            // fall through to the error below
        }
    }
    throw InvalidParams("unknown prior descriptor '" + std::string(descriptor) + "'");
}

void GrammarParams::validate() const {
    if (digits.empty()) throw InvalidParams("digit set D must be non-empty");
    if (multipliers.empty()) throw InvalidParams("multiplier set M must be non-empty");
    if (max_depth < 1) throw InvalidParams("max depth must be at least 1");
    for (Number d : digits) {
        if (d < 1 || d > kMaxIntermediate) throw InvalidParams("digit out of range");
    }
    for (Number m : multipliers) {
        if (m < 1 || m > kMaxIntermediate) throw InvalidParams("multiplier out of range");
    }
}

std::string GrammarParams::str() const {
    std::ostringstream os;
    os << "D={";
    bool first = true;
    for (Number d : digits) {
        if (!first) os << ",";
        os << d;
        first = false;
    }
    os << "} M={";
    first = true;
    for (Number m : multipliers) {
        if (!first) os << ",";
        os << m;
        first = false;
    }
    os << "} C={+,*" << (allow_minus ? ",-" : "") << "} d=" << max_depth;
    return os.str();
}

std::string_view source_name(SystemSource source) {
    switch (source) {
    case SystemSource::natural: return "natural";
    case SystemSource::baseline: return "baseline";
    case SystemSource::ga: return "ga";
    case SystemSource::local: return "local";
    case SystemSource::manual: return "manual";
    }
    return "manual";
}

SystemSource source_from_name(std::string_view name) {
    if (name == "natural") return SystemSource::natural;
    if (name == "baseline") return SystemSource::baseline;
    if (name == "ga") return SystemSource::ga;
    if (name == "local") return SystemSource::local;
    if (name == "manual") return SystemSource::manual;
    throw InvalidParams("unknown system source '" + std::string(name) + "'");
}

const ExprPtr& NumeralSystem::entry(Number n) const {
    auto it = entries.find(n);
    if (it == entries.end()) {
        throw InvalidParams("system '" + label + "' has no entry for " + std::to_string(n));
    }
    return it->second;
}

void NumeralSystem::validate() const {
    range.validate();
    for (Number n = range.lo; n <= range.hi; ++n) {
        auto it = entries.find(n);
        if (it == entries.end()) {
            throw InvalidParams("system '" + label + "' missing entry for " + std::to_string(n));
        }
        if (evaluate(*it->second) != n) {
            throw InvalidExpression("entry for " + std::to_string(n) + " in '" + label +
                                    "' evaluates to " + std::to_string(evaluate(*it->second)));
        }
        if (!conforms_to_hurford(*it->second)) {
            throw InvalidExpression("entry for " + std::to_string(n) + " in '" + label +
                                    "' is not Hurford-shaped");
        }
    }
}

std::vector<TokenSeq> sorted_words(const NumeralSystem& system) {
    std::vector<TokenSeq> words;
    words.reserve(system.entries.size());
    for (Number n = system.range.lo; n <= system.range.hi; ++n) {
        words.push_back(system.tokens(n));
    }
    std::sort(words.begin(), words.end(),
              [](const TokenSeq& a, const TokenSeq& b) { return compare_tokens(a, b) < 0; });
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
}

} // namespace numeral
