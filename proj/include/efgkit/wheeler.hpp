#pragma once

// Repeat-free founder graphs as automata: a character NFA, its reachable
// subset DFA, the expansion that turns every block into a forest hanging off
// the previous block's end states, and the colexicographic (Wheeler) order
// of the result.
//
// All automata are node-labelled: a state carries the character of every
// edge entering it, and state 0 is the initial state with no label.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "efgkit/efg.hpp"
#include "efgkit/efg_io.hpp"
#include "efgkit/error.hpp"
#include "efgkit/graph_validity.hpp"

namespace efgkit {

struct AutomatonState {
    char label = 0;
    bool block_end = false;
    bool accepting = false;

    friend bool operator==(const AutomatonState&, const AutomatonState&) = default;
};

class Automaton {
public:
    static constexpr std::size_t kInitial = 0;

    std::vector<AutomatonState> states;
    std::vector<std::vector<std::size_t>> out;

    std::size_t size() const noexcept { return states.size(); }

    std::size_t add_state(AutomatonState s) {
        states.push_back(s);
        out.emplace_back();
        return states.size() - 1;
    }

    void add_edge(std::size_t from, std::size_t to) { out[from].push_back(to); }

    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& o : out) e += o.size();
        return e;
    }

    std::vector<std::vector<std::size_t>> in_lists() const {
        std::vector<std::vector<std::size_t>> in(size());
        for (std::size_t u = 0; u < size(); ++u)
            for (std::size_t v : out[u]) in[v].push_back(u);
        return in;
    }

    // Kahn order; nullopt if the automaton has a cycle.
    std::optional<std::vector<std::size_t>> topological_order() const {
        std::vector<std::size_t> indeg(size(), 0), order;
        for (const auto& o : out)
            for (std::size_t v : o) ++indeg[v];
        for (std::size_t v = 0; v < size(); ++v)
            if (indeg[v] == 0) order.push_back(v);
        for (std::size_t k = 0; k < order.size(); ++k)
            for (std::size_t w : out[order[k]])
                if (--indeg[w] == 0) order.push_back(w);
        if (order.size() != size()) return std::nullopt;
        return order;
    }

    // Number of edges on the longest path from the initial state.
    std::size_t depth() const {
        const auto order = topological_order();
        if (!order) throw invalid_input("automaton has a cycle");
        std::vector<std::size_t> d(size(), 0);
        std::size_t best = 0;
        for (std::size_t u : *order)
            for (std::size_t v : out[u]) {
                d[v] = std::max(d[v], d[u] + 1);
                best = std::max(best, d[v]);
            }
        return best;
    }

    // Renames state s to perm[s]; perm[kInitial] must stay kInitial.
    void renumber(const std::vector<std::size_t>& perm) {
        std::vector<AutomatonState> s(size());
        std::vector<std::vector<std::size_t>> o(size());
        for (std::size_t v = 0; v < size(); ++v) {
            s[perm[v]] = states[v];
            for (std::size_t w : out[v]) o[perm[v]].push_back(perm[w]);
        }
        states = std::move(s);
        out = std::move(o);
        sort_edges();
    }

    void sort_edges() {
        for (auto& o : out)
            std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) {
                return std::pair(static_cast<unsigned char>(states[a].label), a) <
                       std::pair(static_cast<unsigned char>(states[b].label), b);
            });
    }

    bool deterministic() const {
        for (const auto& o : out)
            for (std::size_t k = 1; k < o.size(); ++k)
                if (states[o[k]].label == states[o[k - 1]].label) return false;
        return true;
    }
};

struct CharNfa : Automaton {
    // (graph node, offset in its label) behind each state; the initial state has none
    std::vector<std::pair<std::size_t, std::size_t>> origin;
};

struct Dfa : Automaton {
    std::vector<std::vector<std::size_t>> subsets;  // sorted NFA states
};

struct WheelerAutomaton : Automaton {
    std::vector<std::size_t> dfa_state;  // the DFA state each state copies
    std::vector<std::size_t> pmin_parent;
    bool ordered = false;

    // Colexicographically smallest label of a path from the initial state.
    std::string p_min(std::size_t v) const {
        std::string s;
        for (; v != kInitial; v = pmin_parent[v]) s += states[v].label;
        std::reverse(s.begin(), s.end());
        return s;
    }

    void swap_states(std::size_t a, std::size_t b) {
        std::vector<std::size_t> perm(size());
        for (std::size_t v = 0; v < size(); ++v) perm[v] = v;
        std::swap(perm[a], perm[b]);
        apply(perm);
    }

    void apply(const std::vector<std::size_t>& perm) {
        std::vector<std::size_t> ds(size()), pp(size());
        for (std::size_t v = 0; v < size(); ++v) {
            ds[perm[v]] = dfa_state[v];
            if (!pmin_parent.empty()) pp[perm[v]] = perm[pmin_parent[v]];
        }
        dfa_state = std::move(ds);
        if (!pmin_parent.empty()) pmin_parent = std::move(pp);
        renumber(perm);
    }
};

inline CharNfa efg_to_nfa(const Efg& g) {
    if (auto w = find_repeat(g, Mode::repeat_free))
        throw not_indexable("Wheeler conversion needs a repeat-free graph: " + w->describe(g), w->label, w->at_node,
                            w->offset);
    CharNfa nfa;
    nfa.add_state({});
    nfa.origin.emplace_back(static_cast<std::size_t>(-1), 0);
    std::vector<std::size_t> first(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        const std::string& l = g.label(v);
        first[v] = nfa.size();
        for (std::size_t k = 0; k < l.size(); ++k) {
            const bool end = k + 1 == l.size();
            const std::size_t s = nfa.add_state({l[k], end, end && g.node(v).block + 1 == g.block_count()});
            nfa.origin.emplace_back(v, k);
            if (k > 0) nfa.add_edge(s - 1, s);
        }
    }
    if (g.block_count() > 0)
        for (std::size_t v : g.block(0)) nfa.add_edge(Automaton::kInitial, first[v]);
    for (const auto& [v, w] : g.edges()) nfa.add_edge(first[v] + g.label(v).size() - 1, first[w]);
    nfa.sort_edges();
    return nfa;
}

inline Dfa determinize(const CharNfa& nfa) {
    Dfa dfa;
    std::map<std::vector<std::size_t>, std::size_t> id;
    auto intern = [&](std::vector<std::size_t> subset, char c) {
        auto [it, fresh] = id.emplace(subset, dfa.size());
        if (fresh) {
            AutomatonState s{c, false, false};
            for (std::size_t q : subset) {
                s.block_end = s.block_end || nfa.states[q].block_end;
                s.accepting = s.accepting || nfa.states[q].accepting;
            }
            dfa.add_state(s);
            dfa.subsets.push_back(std::move(subset));
        }
        return it->second;
    };
    intern({Automaton::kInitial}, 0);
    for (std::size_t k = 0; k < dfa.size(); ++k) {
        std::map<char, std::set<std::size_t>> moves;
        for (std::size_t q : dfa.subsets[k])
            for (std::size_t r : nfa.out[q]) moves[nfa.states[r].label].insert(r);
        for (auto& [c, targets] : moves) {
            const std::size_t t = intern(std::vector<std::size_t>(targets.begin(), targets.end()), c);
            dfa.add_edge(k, t);
        }
    }
    dfa.sort_edges();
    return dfa;
}

// Distributes the in-edges of every state that does not end a block over
// copies of it, duplicating its out-edges.
inline WheelerAutomaton wheeler_expand(const Dfa& dfa) {
    const auto order = dfa.topological_order();
    if (!order) throw invalid_input("automaton has a cycle; cannot expand it");
    WheelerAutomaton w;
    w.states = dfa.states;
    w.out = dfa.out;
    w.dfa_state.resize(dfa.size());
    for (std::size_t v = 0; v < dfa.size(); ++v) w.dfa_state[v] = v;
    auto in = dfa.in_lists();
    for (std::size_t v : *order) {
        if (v == Automaton::kInitial || w.states[v].block_end || in[v].size() <= 1) continue;
        const std::vector<std::size_t> preds = in[v];
        in[v] = {preds[0]};
        for (std::size_t i = 1; i < preds.size(); ++i) {
            const std::size_t c = w.add_state(w.states[v]);
            w.dfa_state.push_back(v);
            in.push_back({preds[i]});
            w.out[c] = w.out[v];
            for (std::size_t t : w.out[c]) in[t].push_back(c);
            for (std::size_t& t : w.out[preds[i]])
                if (t == v) t = c;
        }
    }
    w.sort_edges();
    return w;
}

namespace detail {

// Colex comparison of P_min(a) and P_min(b) through the parent chains.
inline int compare_pmin(const WheelerAutomaton& w, std::size_t a, std::size_t b) {
    while (a != b) {
        if (a == Automaton::kInitial) return -1;
        if (b == Automaton::kInitial) return 1;
        const auto ca = static_cast<unsigned char>(w.states[a].label), cb = static_cast<unsigned char>(w.states[b].label);
        if (ca != cb) return ca < cb ? -1 : 1;
        a = w.pmin_parent[a];
        b = w.pmin_parent[b];
    }
    return 0;
}

}  // namespace detail

// Orders states by P_min; afterwards state ids are Wheeler ranks.
inline WheelerAutomaton wheeler_sort(WheelerAutomaton w) {
    const auto order = w.topological_order();
    if (!order) throw invalid_input("automaton has a cycle; cannot sort it");
    const auto in = w.in_lists();
    w.pmin_parent.assign(w.size(), Automaton::kInitial);
    std::vector<bool> reachable(w.size(), false);
    reachable[Automaton::kInitial] = true;
    for (std::size_t v : *order) {
        if (v == Automaton::kInitial) continue;
        std::optional<std::size_t> best;
        for (std::size_t u : in[v])
            if (reachable[u] && (!best || detail::compare_pmin(w, u, *best) < 0)) best = u;
        if (!best) throw invalid_input("state " + std::to_string(v) + " is unreachable from the initial state");
        reachable[v] = true;
        w.pmin_parent[v] = *best;
    }
    std::vector<std::size_t> by_rank(w.size());
    for (std::size_t v = 0; v < w.size(); ++v) by_rank[v] = v;
    std::sort(by_rank.begin(), by_rank.end(),
              [&](std::size_t a, std::size_t b) { return detail::compare_pmin(w, a, b) < 0; });
    for (std::size_t k = 1; k < by_rank.size(); ++k)
        if (detail::compare_pmin(w, by_rank[k - 1], by_rank[k]) == 0)
            throw invalid_input("states " + std::to_string(by_rank[k - 1]) + " and " + std::to_string(by_rank[k]) +
                                " share P_min '" + w.p_min(by_rank[k]) + "': not atomic / not deterministic");
    std::vector<std::size_t> perm(w.size());
    for (std::size_t k = 0; k < by_rank.size(); ++k) perm[by_rank[k]] = k;
    w.apply(perm);
    w.ordered = true;
    return w;
}

struct WheelerPipeline {
    CharNfa nfa;
    Dfa dfa;
    WheelerAutomaton automaton;
    std::size_t total_length = 0;  // N
    std::size_t max_height = 0;    // W

    std::size_t size_bound() const { return total_length * max_height + total_length + 1; }
};

inline WheelerPipeline wheeler_pipeline(const Efg& g) {
    WheelerPipeline p;
    p.nfa = efg_to_nfa(g);
    p.dfa = determinize(p.nfa);
    p.automaton = wheeler_sort(wheeler_expand(p.dfa));
    const EfgStats s = efg_stats(g);
    p.total_length = s.total_length;
    p.max_height = s.max_height;
    return p;
}

struct WheelerViolation {
    std::size_t state;
    std::string label;  // an incoming path label of `state` that breaks the order
    std::string reason;
};

// Labels of paths of at most `depth` edges from the initial state, with
// their end states.
inline std::vector<std::pair<std::string, std::size_t>> path_labels(const Automaton& a, std::size_t depth) {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::vector<std::pair<std::string, std::size_t>> stack{{"", Automaton::kInitial}};
    while (!stack.empty()) {
        auto [label, v] = std::move(stack.back());
        stack.pop_back();
        if (label.size() < depth)
            for (std::size_t w : a.out[v]) stack.emplace_back(label + a.states[w].label, w);
        out.emplace_back(std::move(label), v);
    }
    return out;
}

struct Language {
    std::set<std::string> prefixes;  // labels of all paths from the initial state
    std::set<std::string> words;     // those ending in an accepting state

    friend bool operator==(const Language&, const Language&) = default;
};

inline Language language(const Automaton& a, std::size_t depth) {
    Language l;
    for (auto& [label, v] : path_labels(a, depth)) {
        if (a.states[v].accepting) l.words.insert(label);
        l.prefixes.insert(std::move(label));
    }
    return l;
}

// Checks determinism, then that sorting every path label of at most `depth`
// edges colexicographically lists their end states in non-decreasing order
// (so each state's labels form an interval and the intervals follow the
// state order). Exact on DAGs when depth covers the longest path.
inline std::optional<WheelerViolation> verify_wheeler(const WheelerAutomaton& w, std::size_t depth) {
    for (std::size_t u = 0; u < w.size(); ++u) {
        std::set<char> seen;
        for (std::size_t v : w.out[u])
            if (!seen.insert(w.states[v].label).second)
                return WheelerViolation{u, std::string(1, w.states[v].label), "two out-edges share a label"};
    }
    for (std::size_t u = 0; u < w.size(); ++u)
        for (std::size_t v : w.out[u])
            if (v == Automaton::kInitial) return WheelerViolation{u, "", "edge into the initial state"};
    auto labels = path_labels(w, depth);
    for (auto& [label, v] : labels) std::reverse(label.begin(), label.end());
    std::sort(labels.begin(), labels.end());
    for (std::size_t k = 1; k < labels.size(); ++k) {
        const auto& [prev, u] = labels[k - 1];
        const auto& [cur, v] = labels[k];
        if (v >= u && !(prev == cur && v != u)) continue;
        std::string forward(cur.rbegin(), cur.rend());
        if (prev == cur)
            return WheelerViolation{v, forward, "label reaches states " + std::to_string(u) + " and " + std::to_string(v)};
        return WheelerViolation{v, forward,
                                "label of state " + std::to_string(v) + " sorts after one of state " + std::to_string(u)};
    }
    return std::nullopt;
}

namespace detail {

inline std::string char_text(char c) { return c == 0 ? "" : std::string(1, c); }

}  // namespace detail

// States in Wheeler order; edges as [from, to, label] triples.
inline std::string wheeler_to_json(const WheelerAutomaton& w) {
    nlohmann::ordered_json j;
    j["version"] = kEfgFormatVersion;
    j["ordered"] = w.ordered;
    j["states"] = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < w.size(); ++v) {
        nlohmann::ordered_json s;
        s["id"] = v;
        s["label"] = detail::char_text(w.states[v].label);
        if (w.ordered) s["p_min"] = w.p_min(v);
        s["block_end"] = w.states[v].block_end;
        s["accepting"] = w.states[v].accepting;
        j["states"].push_back(std::move(s));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (std::size_t u = 0; u < w.size(); ++u)
        for (std::size_t v : w.out[u]) j["edges"].push_back(nlohmann::ordered_json::array({u, v, detail::char_text(w.states[v].label)}));
    return j.dump(1) + "\n";
}

inline std::string wheeler_to_dot(const WheelerAutomaton& w) {
    std::ostringstream os;
    os << "digraph wheeler {\n  rankdir=LR;\n";
    for (std::size_t v = 0; v < w.size(); ++v) {
        os << "  s" << v << " [label=\"" << v;
        if (w.ordered) os << ":" << w.p_min(v);
        os << "\"";
        if (w.states[v].accepting) os << ", shape=doublecircle";
        else if (w.states[v].block_end) os << ", shape=box";
        os << "];\n";
    }
    for (std::size_t u = 0; u < w.size(); ++u)
        for (std::size_t v : w.out[u]) os << "  s" << u << " -> s" << v << " [label=\"" << w.states[v].label << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace efgkit
