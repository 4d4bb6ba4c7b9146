#pragma once

// Repeat-freeness of a graph, checked directly on its labels: every occurrence
// of a node label on some path must start at offset 0 of that node (repeat-free)
// or of a node in the same block (semi-repeat-free).

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "efgkit/efg.hpp"
#include "efgkit/validity.hpp"

namespace efgkit {

// A label of `node` that also occurs on a path starting at offset `offset` of
// `at_node`.
struct RepeatWitness {
    std::size_t node = 0;
    std::string label;
    std::size_t at_node = 0;
    std::size_t offset = 0;

    std::string describe(const Efg& g) const {
        return "label '" + label + "' of node " + std::to_string(node) + " (block " + std::to_string(g.node(node).block) +
               ") also occurs at node " + std::to_string(at_node) + " (block " + std::to_string(g.node(at_node).block) +
               "), offset " + std::to_string(offset);
    }
};

namespace detail {

struct LabelTrie {
    std::vector<std::map<char, std::size_t>> child{1};
    std::vector<std::vector<std::size_t>> ends{1};

    void add(const std::string& s, std::size_t id) {
        std::size_t t = 0;
        for (char c : s) {
            auto it = child[t].find(c);
            if (it == child[t].end()) {
                it = child[t].emplace(c, child.size()).first;
                child.emplace_back();
                ends.emplace_back();
            }
            t = it->second;
        }
        ends[t].push_back(id);
    }
};

}  // namespace detail

// All label occurrences are found by walking the label trie along the graph
// from every (node, offset) position; the walk dies as soon as no label
// continues, so typical graphs are checked in near-linear time.
inline std::optional<RepeatWitness> find_repeat(const Efg& g, Mode mode) {
    detail::LabelTrie trie;
    for (std::size_t v = 0; v < g.node_count(); ++v) trie.add(g.label(v), v);

    using Pos = std::pair<std::size_t, std::size_t>;  // node, offset
    for (std::size_t u = 0; u < g.node_count(); ++u)
        for (std::size_t p = 0; p < g.label(u).size(); ++p) {
            std::set<std::pair<std::size_t, Pos>> seen;
            std::vector<std::pair<std::size_t, Pos>> stack{{0, {u, p}}};
            while (!stack.empty()) {
                const auto [t, pos] = stack.back();
                stack.pop_back();
                const auto& lab = g.label(pos.first);
                const auto it = trie.child[t].find(lab[pos.second]);
                if (it == trie.child[t].end()) continue;
                const std::size_t nt = it->second;
                for (std::size_t v : trie.ends[nt]) {
                    const bool ok = mode == Mode::repeat_free ? (u == v && p == 0)
                                                              : (p == 0 && g.node(u).block == g.node(v).block);
                    if (!ok) return RepeatWitness{v, g.label(v), u, p};
                }
                if (trie.child[nt].empty()) continue;
                std::vector<Pos> next;
                if (pos.second + 1 < lab.size())
                    next.push_back({pos.first, pos.second + 1});
                else
                    for (std::size_t w : g.out(pos.first)) next.push_back({w, 0});
                for (const Pos& q : next)
                    if (seen.insert({nt, q}).second) stack.push_back({nt, q});
            }
        }
    return std::nullopt;
}

inline bool graph_is_repeat_free(const Efg& g) { return !find_repeat(g, Mode::repeat_free); }
inline bool graph_is_semi_repeat_free(const Efg& g) { return !find_repeat(g, Mode::semi_repeat_free); }

}  // namespace efgkit
