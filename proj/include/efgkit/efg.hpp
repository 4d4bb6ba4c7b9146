#pragma once

// Elastic founder graphs: blocks of distinct non-empty labels, edges only
// between consecutive blocks. Node ids are canonical: blocks in order, labels
// sorted within a block, so two graphs with the same content compare equal.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "efgkit/error.hpp"
#include "efgkit/msa.hpp"
#include "efgkit/segmentation.hpp"

namespace efgkit {

struct EfgNode {
    std::size_t block;
    std::string label;

    friend bool operator==(const EfgNode&, const EfgNode&) = default;
};

using EfgEdge = std::pair<std::size_t, std::size_t>;

class Efg {
public:
    Efg() = default;

    // Nodes may come in any order; edges refer to positions in `nodes`.
    // support, when given, lists the MSA rows behind each edge.
    Efg(std::vector<EfgNode> nodes, std::vector<EfgEdge> edges, std::vector<std::vector<std::size_t>> support = {}) {
        if (!support.empty() && support.size() != edges.size()) throw invalid_input("edge support must match the edge list");
        std::size_t blocks = 0;
        for (const auto& v : nodes) {
            if (v.label.empty()) throw invalid_input("empty node label in block " + std::to_string(v.block));
            blocks = std::max(blocks, v.block + 1);
        }
        std::vector<std::size_t> order(nodes.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::tie(nodes[a].block, nodes[a].label) < std::tie(nodes[b].block, nodes[b].label);
        });
        std::vector<std::size_t> remap(nodes.size());
        blocks_.assign(blocks, {});
        for (std::size_t k = 0; k < order.size(); ++k) {
            const EfgNode& v = nodes[order[k]];
            if (k > 0 && nodes_.back() == v)
                throw invalid_input("duplicate label '" + v.label + "' in block " + std::to_string(v.block));
            remap[order[k]] = nodes_.size();
            blocks_[v.block].push_back(nodes_.size());
            nodes_.push_back(v);
        }
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            if (blocks_[k].empty()) throw invalid_input("block " + std::to_string(k) + " has no nodes");

        std::vector<std::pair<EfgEdge, std::vector<std::size_t>>> tagged;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            auto [from, to] = edges[e];
            if (from >= nodes.size() || to >= nodes.size()) throw invalid_input("edge refers to a missing node");
            from = remap[from];
            to = remap[to];
            if (nodes_[to].block != nodes_[from].block + 1)
                throw invalid_input("edge " + std::to_string(from) + " -> " + std::to_string(to) +
                                    " does not connect consecutive blocks");
            std::vector<std::size_t> rows = support.empty() ? std::vector<std::size_t>{} : support[e];
            std::sort(rows.begin(), rows.end());
            tagged.push_back({{from, to}, std::move(rows)});
        }
        std::sort(tagged.begin(), tagged.end());
        for (std::size_t e = 0; e < tagged.size(); ++e) {
            if (e > 0 && tagged[e].first == tagged[e - 1].first) throw invalid_input("duplicate edge");
            edges_.push_back(tagged[e].first);
            if (!support.empty()) support_.push_back(std::move(tagged[e].second));
        }
        out_.assign(nodes_.size(), {});
        in_.assign(nodes_.size(), {});
        for (const auto& [from, to] : edges_) {
            out_[from].push_back(to);
            in_[to].push_back(from);
        }
        std::set<char> chars;
        for (const auto& v : nodes_) chars.insert(v.label.begin(), v.label.end());
        alphabet_ = Alphabet(std::string(chars.begin(), chars.end()));
    }

    std::size_t block_count() const noexcept { return blocks_.size(); }
    const std::vector<std::size_t>& block(std::size_t k) const { return blocks_.at(k); }
    const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    const EfgNode& node(std::size_t id) const { return nodes_.at(id); }
    const std::vector<EfgNode>& nodes() const noexcept { return nodes_; }
    const std::string& label(std::size_t id) const { return nodes_.at(id).label; }
    const std::vector<EfgEdge>& edges() const noexcept { return edges_; }
    const std::vector<std::vector<std::size_t>>& edge_support() const noexcept { return support_; }
    bool has_support() const noexcept { return !support_.empty(); }
    const std::vector<std::size_t>& out(std::size_t id) const { return out_.at(id); }
    const std::vector<std::size_t>& in(std::size_t id) const { return in_.at(id); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }

    std::optional<std::size_t> find(std::size_t block, const std::string& label) const {
        const auto& ids = blocks_.at(block);
        auto it = std::lower_bound(ids.begin(), ids.end(), label,
                                   [&](std::size_t id, const std::string& l) { return nodes_[id].label < l; });
        if (it == ids.end() || nodes_[*it].label != label) return std::nullopt;
        return *it;
    }

    // Content equality; edge support is provenance and is not compared.
    friend bool operator==(const Efg& a, const Efg& b) { return a.nodes_ == b.nodes_ && a.edges_ == b.edges_; }

private:
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<EfgNode> nodes_;
    std::vector<EfgEdge> edges_;
    std::vector<std::vector<std::size_t>> support_;
    std::vector<std::vector<std::size_t>> out_, in_;
    Alphabet alphabet_;
};

// Graph induced by a segmentation: one node per distinct spelled row-string of
// each segment, an edge wherever a row passes from one node to the next.
inline Efg build_efg(const Msa& msa, const std::vector<Segment>& segments) {
    if (segments.empty() || segments.front().first != 1 || segments.back().last != msa.columns())
        throw invalid_input("segmentation does not cover the MSA columns");
    for (std::size_t k = 1; k < segments.size(); ++k)
        if (segments[k].first != segments[k - 1].last + 1 || segments[k].first > segments[k].last)
            throw invalid_input("segments are not contiguous");
    std::vector<EfgNode> nodes;
    std::map<std::pair<std::size_t, std::string>, std::size_t> ids;
    std::vector<std::vector<std::size_t>> row_node(msa.rows(), std::vector<std::size_t>(segments.size()));
    for (std::size_t k = 0; k < segments.size(); ++k)
        for (std::size_t i = 0; i < msa.rows(); ++i) {
            std::string s = msa.spell_range(i, segments[k].first, segments[k].last);
            if (s.empty())
                throw invalid_input("row " + std::to_string(i + 1) + " (" + msa.name(i) + ") spells nothing in segment " +
                                    std::to_string(k + 1) + " [" + std::to_string(segments[k].first) + ".." +
                                    std::to_string(segments[k].last) + "]");
            auto [it, fresh] = ids.try_emplace({k, s}, nodes.size());
            if (fresh) nodes.push_back({k, std::move(s)});
            row_node[i][k] = it->second;
        }
    std::map<EfgEdge, std::vector<std::size_t>> edge_rows;
    for (std::size_t i = 0; i < msa.rows(); ++i)
        for (std::size_t k = 0; k + 1 < segments.size(); ++k) edge_rows[{row_node[i][k], row_node[i][k + 1]}].push_back(i);
    std::vector<EfgEdge> edges;
    std::vector<std::vector<std::size_t>> support;
    for (auto& [e, rows] : edge_rows) {
        edges.push_back(e);
        support.push_back(std::move(rows));
    }
    if (edges.empty()) support.clear();
    return Efg(std::move(nodes), std::move(edges), std::move(support));
}

inline Efg build_efg(const Msa& msa, const Segmentation& seg) { return build_efg(msa, seg.intervals); }

struct EfgStats {
    std::size_t blocks = 0;
    std::vector<std::size_t> block_sizes;
    std::size_t total_length = 0;  // N
    std::size_t max_label = 0;     // L
    std::size_t max_height = 0;    // H (= W)
    std::size_t edge_count = 0;
};

inline EfgStats efg_stats(const Efg& g) {
    EfgStats s;
    s.blocks = g.block_count();
    for (const auto& b : g.blocks()) {
        s.block_sizes.push_back(b.size());
        s.max_height = std::max(s.max_height, b.size());
    }
    for (const auto& v : g.nodes()) {
        s.total_length += v.label.size();
        s.max_label = std::max(s.max_label, v.label.size());
    }
    s.edge_count = g.edges().size();
    return s;
}

// Whether s is the label of a path from the first to the last block.
inline bool is_full_path_label(const Efg& g, const std::string& s) {
    if (g.block_count() == 0) return false;
    // frontier: nodes whose label has been matched ending exactly at position pos
    std::map<std::size_t, std::set<std::size_t>> frontier;
    for (std::size_t v : g.block(0))
        if (s.compare(0, g.label(v).size(), g.label(v)) == 0) frontier[g.label(v).size()].insert(v);
    while (!frontier.empty()) {
        auto it = frontier.begin();
        const std::size_t pos = it->first;
        const std::set<std::size_t> here = std::move(it->second);
        frontier.erase(it);
        for (std::size_t v : here) {
            if (pos == s.size() && g.node(v).block + 1 == g.block_count()) return true;
            for (std::size_t w : g.out(v)) {
                const auto& l = g.label(w);
                if (s.compare(pos, l.size(), l) == 0 && pos + l.size() <= s.size()) frontier[pos + l.size()].insert(w);
            }
        }
    }
    return false;
}

}  // namespace efgkit
