#include "numeral/automaton.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace numeral {

namespace {

// Deterministic canonical order: DFS from the initial state with edges in
// symbol order, reverse postorder. Topological for acyclic automata, and
// identical for isomorphic machines.
std::vector<int> canonical_order(int initial, const std::vector<std::vector<Automaton::Edge>>& edges) {
    std::vector<int> order;
    std::vector<int> color(edges.size(), 0); // 0 new, 1 open, 2 done
    struct Frame {
        int state;
        std::size_t next_edge;
    };
    std::vector<Frame> stack;
    stack.push_back({initial, 0});
    color[static_cast<std::size_t>(initial)] = 1;
    while (!stack.empty()) {
        Frame& frame = stack.back();
        const auto& out = edges[static_cast<std::size_t>(frame.state)];
        if (frame.next_edge < out.size()) {
            int target = out[frame.next_edge].second;
            ++frame.next_edge;
            int& c = color[static_cast<std::size_t>(target)];
            if (c == 1) {
                throw InvalidParams("automaton contains a cycle");
            }
            if (c == 0) {
                c = 1;
                stack.push_back({target, 0});
            }
        } else {
            color[static_cast<std::size_t>(frame.state)] = 2;
            order.push_back(frame.state);
            stack.pop_back();
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

} // namespace

Automaton::Automaton(int initial, std::vector<bool> accepting,
                     std::vector<std::vector<Edge>> edges) {
    const std::size_t n = edges.size();
    if (accepting.size() != n) {
        throw InvalidParams("accepting vector size mismatch");
    }
    if (initial < 0 || static_cast<std::size_t>(initial) >= n) {
        throw InvalidParams("initial state out of range");
    }
    for (auto& out : edges) {
        std::sort(out.begin(), out.end());
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i > 0 && out[i].first == out[i - 1].first) {
                throw InvalidParams("non-deterministic transitions");
            }
            int t = out[i].second;
            if (t < 0 || static_cast<std::size_t>(t) >= n) {
                throw InvalidParams("transition target out of range");
            }
        }
    }
    // Canonical renumber over the reachable part; checks acyclicity too.
    std::vector<int> order = canonical_order(initial, edges);
    std::vector<int> new_id(n, -1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        new_id[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    }
    accepting_.assign(order.size(), false);
    edges_.assign(order.size(), {});
    for (std::size_t i = 0; i < order.size(); ++i) {
        int old = order[i];
        accepting_[i] = accepting[static_cast<std::size_t>(old)];
        for (const Edge& e : edges[static_cast<std::size_t>(old)]) {
            edges_[i].emplace_back(e.first, new_id[static_cast<std::size_t>(e.second)]);
        }
        transition_count_ += edges_[i].size();
    }
    // Partiality: every state must reach an accepting state.
    std::vector<bool> productive = accepting_;
    for (std::size_t i = edges_.size(); i-- > 0;) { // targets have larger ids
        for (const Edge& e : edges_[i]) {
            if (productive[static_cast<std::size_t>(e.second)]) productive[i] = true;
        }
    }
    for (std::size_t i = 0; i < productive.size(); ++i) {
        if (!productive[i]) {
            throw InvalidParams("state " + std::to_string(i) + " cannot reach an accepting state");
        }
    }
    std::set<Morpheme> symbols;
    for (const auto& out : edges_) {
        for (const Edge& e : out) symbols.insert(e.first);
    }
    alphabet_.assign(symbols.begin(), symbols.end());
}

std::size_t Automaton::accepting_count() const {
    std::size_t count = 0;
    for (bool a : accepting_) count += a ? 1 : 0;
    return count;
}

int Automaton::out_degree(int state) const {
    return static_cast<int>(edges_[static_cast<std::size_t>(state)].size());
}

std::optional<int> Automaton::step(int state, const Morpheme& symbol) const {
    const auto& out = edges_[static_cast<std::size_t>(state)];
    auto it = std::lower_bound(out.begin(), out.end(), symbol,
                               [](const Edge& e, const Morpheme& s) { return e.first < s; });
    if (it != out.end() && it->first == symbol) return it->second;
    return std::nullopt;
}

ParseTrace Automaton::parse(const TokenSeq& tokens) const {
    ParseTrace trace;
    int state = initial();
    trace.states.push_back(state);
    for (const Morpheme& symbol : tokens) {
        std::optional<int> next = step(state, symbol);
        if (!next) {
            throw NotAccepted("no transition on '" + symbol.str() + "' from state " +
                              std::to_string(state));
        }
        state = *next;
        trace.states.push_back(state);
        trace.symbols.push_back(symbol);
    }
    if (!is_accepting(state)) {
        throw NotAccepted("final state " + std::to_string(state) + " is not accepting");
    }
    trace.accept_flags.reserve(trace.states.size());
    trace.out_degrees.reserve(trace.states.size());
    for (int s : trace.states) {
        trace.accept_flags.push_back(is_accepting(s));
        trace.out_degrees.push_back(out_degree(s));
    }
    return trace;
}

bool Automaton::accepts(const TokenSeq& tokens) const {
    int state = initial();
    for (const Morpheme& symbol : tokens) {
        std::optional<int> next = step(state, symbol);
        if (!next) return false;
        state = *next;
    }
    return is_accepting(state);
}

std::string Automaton::to_dot() const {
    std::ostringstream os;
    os << "digraph automaton {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle];\n";
    for (std::size_t s = 0; s < edges_.size(); ++s) {
        os << "  q" << s << " [label=\"" << (static_cast<int>(s) == initial() ? "λ" : "q" + std::to_string(s))
           << "\"";
        if (accepting_[s]) os << ", shape=doublecircle";
        os << "];\n";
    }
    for (std::size_t s = 0; s < edges_.size(); ++s) {
        for (const Edge& e : edges_[s]) {
            os << "  q" << s << " -> q" << e.second << " [label=\"" << e.first.str() << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string Automaton::to_json() const {
    nlohmann::json j;
    j["states"] = state_count();
    j["initial"] = initial();
    std::vector<int> accepting;
    for (std::size_t s = 0; s < accepting_.size(); ++s) {
        if (accepting_[s]) accepting.push_back(static_cast<int>(s));
    }
    j["accepting"] = accepting;
    nlohmann::json transitions = nlohmann::json::array();
    for (std::size_t s = 0; s < edges_.size(); ++s) {
        for (const Edge& e : edges_[s]) {
            transitions.push_back({static_cast<int>(s), e.first.str(), e.second});
        }
    }
    j["transitions"] = transitions;
    std::vector<std::string> alphabet;
    for (const Morpheme& m : alphabet_) alphabet.push_back(m.str());
    j["alphabet"] = alphabet;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Incremental construction of the minimal acyclic DFA from sorted words.
// States created for the most recent word stay mutable; once the next word
// diverges, the hanging suffix is folded into the register of canonical
// states, so the register always maps right-language signatures to a single
// representative.

namespace {

class IncrementalBuilder {
public:
    IncrementalBuilder() { nodes_.emplace_back(); }

    void add(const TokenSeq& word) {
        std::size_t prefix = 0;
        while (prefix < word.size() && prefix < prev_.size() && word[prefix] == prev_[prefix]) {
            ++prefix;
        }
        int last = 0;
        for (std::size_t i = 0; i < prefix; ++i) {
            last = nodes_[static_cast<std::size_t>(last)].edges.back().second;
        }
        if (!nodes_[static_cast<std::size_t>(last)].edges.empty()) {
            replace_or_register(last);
        }
        for (std::size_t i = prefix; i < word.size(); ++i) {
            int child = static_cast<int>(nodes_.size());
            nodes_.emplace_back();
            nodes_[static_cast<std::size_t>(last)].edges.emplace_back(word[i], child);
            last = child;
        }
        nodes_[static_cast<std::size_t>(last)].accepting = true;
        prev_ = word;
    }

    Automaton finish() {
        if (!nodes_.front().edges.empty()) {
            replace_or_register(0);
        }
        std::vector<std::vector<Automaton::Edge>> edges;
        std::vector<bool> accepting;
        edges.reserve(nodes_.size());
        for (const Node& node : nodes_) {
            edges.push_back(node.edges);
            accepting.push_back(node.accepting);
        }
        return Automaton(0, std::move(accepting), std::move(edges));
    }

private:
    struct Node {
        std::vector<Automaton::Edge> edges; // appended in increasing symbol order
        bool accepting = false;
        bool registered = false;
    };

    void replace_or_register(int state) {
        Automaton::Edge& last_edge = nodes_[static_cast<std::size_t>(state)].edges.back();
        int child = last_edge.second;
        Node& child_node = nodes_[static_cast<std::size_t>(child)];
        if (child_node.registered) return;
        if (!child_node.edges.empty()) {
            replace_or_register(child);
        }
        std::string sig = signature(child);
        auto [it, inserted] = register_.emplace(std::move(sig), child);
        if (inserted) {
            child_node.registered = true;
        } else {
            last_edge.second = it->second; // child becomes unreachable
        }
    }

    std::string signature(int state) const {
        const Node& node = nodes_[static_cast<std::size_t>(state)];
        std::string sig = node.accepting ? "A" : "r";
        for (const auto& [symbol, target] : node.edges) {
            sig += symbol.str();
            sig += '>';
            sig += std::to_string(target);
            sig += ';';
        }
        return sig;
    }

    std::vector<Node> nodes_;
    std::unordered_map<std::string, int> register_;
    TokenSeq prev_;
};

} // namespace

Automaton build_minimal_dfa(std::vector<TokenSeq> words) {
    std::sort(words.begin(), words.end(),
              [](const TokenSeq& a, const TokenSeq& b) { return compare_tokens(a, b) < 0; });
    words.erase(std::unique(words.begin(), words.end()), words.end());
    if (words.empty()) {
        throw InvalidParams("cannot build an automaton from an empty word list");
    }
    IncrementalBuilder builder;
    for (const TokenSeq& word : words) {
        builder.add(word);
    }
    return builder.finish();
}

Automaton build_minimal_dfa(const NumeralSystem& system) {
    return build_minimal_dfa(sorted_words(system));
}

Automaton build_trie(const std::vector<TokenSeq>& words) {
    if (words.empty()) {
        throw InvalidParams("cannot build an automaton from an empty word list");
    }
    std::vector<std::vector<Automaton::Edge>> edges(1);
    std::vector<bool> accepting(1, false);
    for (const TokenSeq& word : words) {
        int state = 0;
        for (const Morpheme& symbol : word) {
            const auto& out = edges[static_cast<std::size_t>(state)];
            auto it = std::find_if(out.begin(), out.end(),
                                   [&](const Automaton::Edge& e) { return e.first == symbol; });
            if (it != out.end()) {
                state = it->second;
            } else {
                int child = static_cast<int>(edges.size());
                edges[static_cast<std::size_t>(state)].emplace_back(symbol, child);
                edges.emplace_back();
                accepting.push_back(false);
                state = child;
            }
        }
        accepting[static_cast<std::size_t>(state)] = true;
    }
    return Automaton(0, std::move(accepting), std::move(edges));
}

// Hopcroft partition refinement over the sink-completed automaton.
Automaton minimize(const Automaton& automaton) {
    const int n = static_cast<int>(automaton.state_count());
    const auto& alphabet = automaton.alphabet();
    const int k = static_cast<int>(alphabet.size());
    const int sink = n;
    const int total = n + 1;

    // delta over the completed automaton; inverse lists per symbol.
    std::vector<std::vector<int>> delta(static_cast<std::size_t>(total),
                                        std::vector<int>(static_cast<std::size_t>(k), sink));
    std::vector<std::vector<std::vector<int>>> inverse(
        static_cast<std::size_t>(k), std::vector<std::vector<int>>(static_cast<std::size_t>(total)));
    for (int s = 0; s < n; ++s) {
        for (int c = 0; c < k; ++c) {
            if (auto t = automaton.step(s, alphabet[static_cast<std::size_t>(c)])) {
                delta[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] = *t;
            }
        }
    }
    for (int s = 0; s < total; ++s) {
        for (int c = 0; c < k; ++c) {
            inverse[static_cast<std::size_t>(c)][static_cast<std::size_t>(
                delta[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)])].push_back(s);
        }
    }

    std::vector<std::vector<int>> blocks;
    std::vector<int> block_of(static_cast<std::size_t>(total), -1);
    std::vector<int> accepting_states, rejecting_states;
    for (int s = 0; s < n; ++s) {
        (automaton.is_accepting(s) ? accepting_states : rejecting_states).push_back(s);
    }
    rejecting_states.push_back(sink);
    auto add_block = [&](std::vector<int> members) {
        int idx = static_cast<int>(blocks.size());
        for (int s : members) block_of[static_cast<std::size_t>(s)] = idx;
        blocks.push_back(std::move(members));
        return idx;
    };
    std::deque<int> worklist;
    std::vector<bool> queued;
    auto enqueue = [&](int idx) {
        if (static_cast<std::size_t>(idx) >= queued.size()) queued.resize(static_cast<std::size_t>(idx) + 1, false);
        if (!queued[static_cast<std::size_t>(idx)]) {
            queued[static_cast<std::size_t>(idx)] = true;
            worklist.push_back(idx);
        }
    };
    enqueue(add_block(std::move(accepting_states)));
    if (!rejecting_states.empty()) {
        enqueue(add_block(std::move(rejecting_states)));
    }

    while (!worklist.empty()) {
        int splitter_idx = worklist.front();
        worklist.pop_front();
        queued[static_cast<std::size_t>(splitter_idx)] = false;
        std::vector<int> splitter = blocks[static_cast<std::size_t>(splitter_idx)];
        for (int c = 0; c < k; ++c) {
            // X = states whose c-transition lands in the splitter.
            std::vector<int> hits;
            for (int t : splitter) {
                const auto& sources = inverse[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
                hits.insert(hits.end(), sources.begin(), sources.end());
            }
            if (hits.empty()) continue;
            std::unordered_map<int, std::vector<int>> hits_by_block;
            for (int s : hits) {
                hits_by_block[block_of[static_cast<std::size_t>(s)]].push_back(s);
            }
            for (auto& [y_idx, in_x] : hits_by_block) {
                auto& y = blocks[static_cast<std::size_t>(y_idx)];
                if (in_x.size() == y.size()) continue; // no split
                std::vector<int> stay;
                std::set<int> moving(in_x.begin(), in_x.end());
                stay.reserve(y.size() - in_x.size());
                for (int s : y) {
                    if (!moving.count(s)) stay.push_back(s);
                }
                y = std::move(stay);
                int new_idx = add_block(std::move(in_x));
                if (queued[static_cast<std::size_t>(y_idx)]) {
                    enqueue(new_idx);
                } else {
                    enqueue(blocks[static_cast<std::size_t>(y_idx)].size() <
                                    blocks[static_cast<std::size_t>(new_idx)].size()
                                ? y_idx
                                : new_idx);
                }
            }
        }
    }

    const int sink_block = block_of[static_cast<std::size_t>(sink)];
    if (blocks[static_cast<std::size_t>(sink_block)].size() != 1) {
        throw InvalidParams("partial automaton has a state equivalent to the sink");
    }
    // Quotient without the sink block; block indices shift past it.
    auto quotient_id = [&](int block_idx) {
        return block_idx < sink_block ? block_idx : block_idx - 1;
    };
    std::vector<std::vector<Automaton::Edge>> q_edges(blocks.size() - 1);
    std::vector<bool> q_accepting(blocks.size() - 1, false);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (static_cast<int>(b) == sink_block) continue;
        int rep = blocks[b].front();
        int qb = quotient_id(static_cast<int>(b));
        q_accepting[static_cast<std::size_t>(qb)] = automaton.is_accepting(rep);
        for (int c = 0; c < k; ++c) {
            int t = delta[static_cast<std::size_t>(rep)][static_cast<std::size_t>(c)];
            int tb = block_of[static_cast<std::size_t>(t)];
            if (tb == sink_block) continue;
            q_edges[static_cast<std::size_t>(qb)].emplace_back(alphabet[static_cast<std::size_t>(c)],
                                                               quotient_id(tb));
        }
    }
    return Automaton(quotient_id(block_of[static_cast<std::size_t>(automaton.initial())]),
                     std::move(q_accepting), std::move(q_edges));
}

} // namespace numeral
