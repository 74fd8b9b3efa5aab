#include "numeral/hurford.hpp"

#include <algorithm>
#include <cassert>

namespace numeral {

namespace {

constexpr std::uint64_t memo_key(bool phrase, int atoms, Number value) {
    return (phrase ? (1ull << 60) : 0) | (static_cast<std::uint64_t>(atoms) << 44) |
           static_cast<std::uint64_t>(value);
}

const std::vector<ExprPtr> kNoTrees;

} // namespace

Enumerator::Enumerator(GrammarParams params, Number max_target) : params_(std::move(params)) {
    params_.validate();
    if (max_target < 1 || max_target > kMaxIntermediate) {
        throw InvalidParams("max target out of range: " + std::to_string(max_target));
    }
    // Without subtraction, every subexpression value is bounded by the root
    // value, so nothing above the largest target can ever contribute.
    cap_ = params_.allow_minus ? kMaxIntermediate : max_target;
    atoms_ = params_.digits;
    atoms_.insert(params_.multipliers.begin(), params_.multipliers.end());
    sorted_multipliers_.assign(params_.multipliers.begin(), params_.multipliers.end());
    num_counts_.resize(1);
    phrase_counts_.resize(1);
}

void Enumerator::ensure_levels(int depth) {
    for (int j = built_levels_ + 1; j <= depth; ++j) {
        std::unordered_map<Number, std::uint64_t> phrase_acc;
        std::unordered_map<Number, std::uint64_t> num_acc;
        if (j == 1) {
            for (Number a : atoms_) {
                if (a <= cap_) num_acc[a] = 1;
            }
            for (Number m : sorted_multipliers_) {
                if (m <= cap_) phrase_acc[m] = 1;
            }
        } else {
            for (const auto& [q, cq] : num_counts_[static_cast<std::size_t>(j - 1)]) {
                for (Number m : sorted_multipliers_) {
                    Number v = q * m;
                    if (v <= cap_) phrase_acc[v] += cq;
                }
            }
            num_acc = phrase_acc; // Num -> Phrase carries every phrase tree over
            for (int a = 1; a <= j - 1; ++a) {
                const CountRow& P = phrase_counts_[static_cast<std::size_t>(a)];
                const CountRow& N = num_counts_[static_cast<std::size_t>(j - a)];
                for (const auto& [p, cp] : P) {
                    for (const auto& [q, cq] : N) {
                        if (p + q > cap_) break; // N is sorted ascending
                        num_acc[p + q] += cp * cq;
                    }
                    if (params_.allow_minus) {
                        for (const auto& [q, cq] : N) {
                            if (q >= p) break;
                            num_acc[p - q] += cp * cq;
                        }
                    }
                }
            }
        }
        auto freeze = [](std::unordered_map<Number, std::uint64_t>& acc) {
            CountRow row(acc.begin(), acc.end());
            std::sort(row.begin(), row.end());
            return row;
        };
        phrase_counts_.push_back(freeze(phrase_acc));
        num_counts_.push_back(freeze(num_acc));
        built_levels_ = j;
    }
}

std::uint64_t Enumerator::lookup(const CountRow& row, Number value) {
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(value, std::uint64_t{0}));
    if (it != row.end() && it->first == value) return it->second;
    return 0;
}

ExprPtr Enumerator::leaf(Number value) {
    auto it = leaves_.find(value);
    if (it != leaves_.end()) return it->second;
    ExprPtr node = Expr::atom(value);
    leaves_.emplace(value, node);
    return node;
}

const std::vector<ExprPtr>& Enumerator::phrases(Number value, int atoms) {
    const std::uint64_t key = memo_key(true, atoms, value);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<ExprPtr> out;
    if (atoms == 1) {
        if (params_.multipliers.count(value)) out.push_back(leaf(value));
    } else {
        for (Number m : sorted_multipliers_) {
            if (value % m != 0) continue;
            Number q = value / m;
            if (lookup(num_counts_[static_cast<std::size_t>(atoms - 1)], q) == 0) continue;
            ExprPtr mult = leaf(m);
            for (const ExprPtr& left : nums(q, atoms - 1)) {
                out.push_back(Expr::combine(Combinator::times, left, mult));
            }
        }
    }
    return memo_.emplace(key, std::move(out)).first->second;
}

const std::vector<ExprPtr>& Enumerator::nums(Number value, int atoms) {
    const std::uint64_t key = memo_key(false, atoms, value);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<ExprPtr> out;
    if (atoms == 1) {
        if (atoms_.count(value)) out.push_back(leaf(value));
    } else {
        out = phrases(value, atoms);
        for (int a = 1; a <= atoms - 1; ++a) {
            const CountRow& P = phrase_counts_[static_cast<std::size_t>(a)];
            const CountRow& N = num_counts_[static_cast<std::size_t>(atoms - a)];
            for (const auto& [p, cp] : P) {
                if (p >= value) break;
                if (lookup(N, value - p) == 0) continue;
                for (const ExprPtr& left : phrases(p, a)) {
                    for (const ExprPtr& right : nums(value - p, atoms - a)) {
                        out.push_back(Expr::combine(Combinator::plus, left, right));
                    }
                }
            }
            if (params_.allow_minus) {
                auto it = std::upper_bound(P.begin(), P.end(),
                                           std::make_pair(value, ~std::uint64_t{0}));
                for (; it != P.end(); ++it) {
                    Number p = it->first;
                    if (lookup(N, p - value) == 0) continue;
                    for (const ExprPtr& left : phrases(p, a)) {
                        for (const ExprPtr& right : nums(p - value, atoms - a)) {
                            out.push_back(Expr::combine(Combinator::minus, left, right));
                        }
                    }
                }
            }
        }
    }
    return memo_.emplace(key, std::move(out)).first->second;
}

EnumerationResult Enumerator::enumerate(Number n) {
    return enumerate(n, params_.max_depth);
}

EnumerationResult Enumerator::enumerate(Number n, int depth) {
    if (n < 1) throw InvalidParams("cannot enumerate non-positive number");
    if (n > cap_) {
        throw InvalidParams("enumerator built for targets up to " + std::to_string(cap_));
    }
    ensure_levels(depth);
    EnumerationResult result;
    result.number = n;
    result.depth_limit = depth;
    for (int j = 1; j <= depth; ++j) {
        if (lookup(num_counts_[static_cast<std::size_t>(j)], n) == 0) continue;
        const auto& trees = nums(n, j);
        result.candidates.insert(result.candidates.end(), trees.begin(), trees.end());
    }
    std::vector<std::pair<TokenSeq, ExprPtr>> keyed;
    keyed.reserve(result.candidates.size());
    for (ExprPtr& e : result.candidates) {
        keyed.emplace_back(linearize(e), std::move(e));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        int ca = a.second->atom_count(), cb = b.second->atom_count();
        if (ca != cb) return ca < cb;
        return compare_tokens(a.first, b.first) < 0;
    });
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        result.candidates[i] = std::move(keyed[i].second);
    }
    return result;
}

std::uint64_t Enumerator::candidate_count(Number n, int depth) {
    if (n < 1 || n > cap_) return 0;
    ensure_levels(depth);
    std::uint64_t total = 0;
    for (int j = 1; j <= depth; ++j) {
        total += lookup(num_counts_[static_cast<std::size_t>(j)], n);
    }
    return total;
}

ExprPtr Enumerator::shortest(Number n) {
    if (n < 1 || n > cap_) return nullptr;
    for (int j = 1; j <= params_.max_depth; ++j) {
        ensure_levels(j);
        if (lookup(num_counts_[static_cast<std::size_t>(j)], n) == 0) continue;
        const auto& trees = nums(n, j);
        assert(!trees.empty());
        const ExprPtr* best = &trees.front();
        TokenSeq best_tokens = linearize(*best);
        for (std::size_t i = 1; i < trees.size(); ++i) {
            TokenSeq tokens = linearize(trees[i]);
            if (compare_tokens(tokens, best_tokens) < 0) {
                best = &trees[i];
                best_tokens = std::move(tokens);
            }
        }
        return *best;
    }
    return nullptr;
}

bool Enumerator::expressible(Range range) {
    range.validate();
    if (range.hi > cap_) {
        throw InvalidParams("enumerator built for targets up to " + std::to_string(cap_));
    }
    ensure_levels(params_.max_depth);
    for (Number n = range.lo; n <= range.hi; ++n) {
        bool found = false;
        for (int j = 1; j <= params_.max_depth && !found; ++j) {
            found = lookup(num_counts_[static_cast<std::size_t>(j)], n) > 0;
        }
        if (!found) return false;
    }
    return true;
}

EnumerationResult enumerate(const GrammarParams& params, Number n) {
    Enumerator enumerator(params, n);
    return enumerator.enumerate(n);
}

NumeralSystem shortest_system(const GrammarParams& params, Range range, std::string label,
                              SystemSource source) {
    range.validate();
    Enumerator enumerator(params, range.hi);
    NumeralSystem system;
    system.range = range;
    system.label = std::move(label);
    system.source = source;
    for (Number n = range.lo; n <= range.hi; ++n) {
        ExprPtr e = enumerator.shortest(n);
        if (!e) throw IncompleteSystem(n);
        system.entries.emplace(n, std::move(e));
    }
    return system;
}

bool expressible(const GrammarParams& params, Range range) {
    Enumerator enumerator(params, range.hi);
    return enumerator.expressible(range);
}

namespace {

void collect_roles(const Expr& e, bool phrase_position, std::set<Number>& num_leaves,
                   std::set<Number>& multiplier_roles, bool& saw_minus) {
    if (e.is_atom()) {
        (phrase_position ? multiplier_roles : num_leaves).insert(e.value());
        return;
    }
    if (e.op() == Combinator::times) {
        collect_roles(*e.left(), false, num_leaves, multiplier_roles, saw_minus);
        multiplier_roles.insert(e.right()->value()); // Num * M
        return;
    }
    if (e.op() == Combinator::minus) saw_minus = true;
    collect_roles(*e.left(), true, num_leaves, multiplier_roles, saw_minus);
    collect_roles(*e.right(), false, num_leaves, multiplier_roles, saw_minus);
}

} // namespace

GrammarParams extract_grammar(const NumeralSystem& system, int max_depth) {
    std::set<Number> num_leaves;
    std::set<Number> multiplier_roles;
    bool saw_minus = false;
    for (const auto& [n, expr] : system.entries) {
        collect_roles(*expr, false, num_leaves, multiplier_roles, saw_minus);
    }
    GrammarParams params;
    params.multipliers = multiplier_roles;
    for (Number v : num_leaves) {
        if (!multiplier_roles.count(v)) params.digits.insert(v);
    }
    if (params.digits.empty()) params.digits = num_leaves; // everything dual-role
    if (params.multipliers.empty() && !params.digits.empty()) {
        // Degenerate single-word-ish system: reuse the largest digit so the
        // params stay valid; it adds no derivations that matter.
        params.multipliers.insert(*params.digits.rbegin());
    }
    params.allow_minus = saw_minus;
    params.max_depth = max_depth;
    params.validate();
    return params;
}

} // namespace numeral
