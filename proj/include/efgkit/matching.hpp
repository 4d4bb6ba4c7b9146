#pragma once

// Online pattern matching on a founder graph: a DP over (node, offset)
// positions, O(|Q| (N + |E|)). Slow but obviously correct, so it
// doubles as the reference answer for the indexes.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efgkit/efg.hpp"

namespace efgkit {

struct MatchPath {
    std::vector<std::size_t> nodes;  // consecutive nodes spelling the match
    std::size_t first_offset = 0;    // where the match starts in nodes.front()
    std::size_t last_offset = 0;     // offset of the final matched character in nodes.back()
};

class OnlineMatcher {
public:
    explicit OnlineMatcher(const Efg& g) : g_(g) {
        start_.reserve(g.node_count() + 1);
        std::size_t total = 0;
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            start_.push_back(total);
            total += g.label(v).size();
        }
        start_.push_back(total);
        node_of_.resize(total);
        for (std::size_t v = 0; v < g.node_count(); ++v) flat_ += g.label(v);
        for (std::size_t v = 0; v < g.node_count(); ++v)
            for (std::size_t p = start_[v]; p < start_[v + 1]; ++p) node_of_[p] = v;
    }

    bool occurs(std::string_view q) const { return run(q, false).has_value(); }

    std::optional<MatchPath> match(std::string_view q) const { return run(q, true); }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    std::optional<MatchPath> run(std::string_view q, bool want_path) const {
        if (q.empty()) return g_.node_count() ? std::optional<MatchPath>(MatchPath{}) : std::nullopt;
        const std::size_t total = node_of_.size();
        std::vector<std::size_t> active;
        std::vector<std::vector<std::size_t>> history;  // predecessor of each active position, per step
        const std::string_view text = flat_;
        for (std::size_t p = 0; p < total; ++p)
            if (text[p] == q[0]) active.push_back(p);
        if (want_path) {
            history.emplace_back(total, kNone);
            for (std::size_t p : active) history.back()[p] = p;
        }
        std::vector<char> mark(total, 0);
        for (std::size_t i = 1; i < q.size() && !active.empty(); ++i) {
            std::vector<std::size_t> next;
            if (want_path) history.emplace_back(total, kNone);
            auto step = [&](std::size_t from, std::size_t to) {
                if (text[to] != q[i] || mark[to]) return;
                mark[to] = 1;
                next.push_back(to);
                if (want_path) history.back()[to] = from;
            };
            for (std::size_t p : active) {
                const std::size_t v = node_of_[p];
                if (p + 1 < start_[v + 1])
                    step(p, p + 1);
                else
                    for (std::size_t w : g_.out(v)) step(p, start_[w]);
            }
            for (std::size_t p : next) mark[p] = 0;
            active = std::move(next);
        }
        if (active.empty()) return std::nullopt;
        if (!want_path) return MatchPath{};
        MatchPath path;
        std::size_t p = active.front();
        path.last_offset = p - start_[node_of_[p]];
        std::vector<std::size_t> positions{p};
        for (std::size_t i = q.size() - 1; i > 0; --i) {
            p = history[i][p];
            positions.push_back(p);
        }
        for (auto it = positions.rbegin(); it != positions.rend(); ++it)
            if (path.nodes.empty() || path.nodes.back() != node_of_[*it]) path.nodes.push_back(node_of_[*it]);
        path.first_offset = positions.back() - start_[node_of_[positions.back()]];
        return path;
    }

    const Efg& g_;
    std::vector<std::size_t> start_;
    std::vector<std::size_t> node_of_;
    std::string flat_;  // all labels back to back
};

inline bool online_match(const Efg& g, std::string_view q) { return OnlineMatcher(g).occurs(q); }

inline std::optional<MatchPath> online_match_path(const Efg& g, std::string_view q) { return OnlineMatcher(g).match(q); }

}  // namespace efgkit
