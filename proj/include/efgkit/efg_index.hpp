#pragma once

// Pattern indexes over (semi-)repeat-free founder graphs. All three answer the
// same question: is Q a substring of the label of some path?
//
//   classic  Aho-Corasick over node labels, neighbour tries for verification,
//            and a suffix structure over C for patterns that contain no label.
//   ebwt     backward search over the BWT of C, jumping to the whole interval
//            of a node label whenever the search range falls inside one.
//   triple   suffix structure over reversed three-node path labels D, node
//            annotations, and predecessor tries for the left remainder.
//
// C joins l(v)l(w)0 for every edge (v, w) and l(v)0 for isolated nodes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efgkit/efg.hpp"
#include "efgkit/error.hpp"
#include "efgkit/graph_validity.hpp"
#include "efgkit/rank_select.hpp"
#include "efgkit/suffix_structure.hpp"

namespace efgkit {

enum class IndexKind : std::uint8_t { classic = 0, ebwt = 1, triple = 2 };

inline std::string_view to_string(IndexKind k) {
    switch (k) {
        case IndexKind::classic: return "classic";
        case IndexKind::ebwt: return "ebwt";
        case IndexKind::triple: return "triple";
    }
    return "?";
}

inline IndexKind parse_index_kind(std::string_view s) {
    if (s == "classic") return IndexKind::classic;
    if (s == "ebwt") return IndexKind::ebwt;
    if (s == "triple") return IndexKind::triple;
    throw invalid_input("unknown index kind '" + std::string(s) + "'");
}

// Where an occurrence starts: node and offset into its label.
struct Occurrence {
    std::size_t block = 0;
    std::size_t node = 0;
    std::size_t offset = 0;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

inline constexpr std::uint32_t kNoNode = 0xFFFFFFFFu;

namespace detail {

// One trie per graph node over the labels of its neighbours (reversed for
// predecessors). Trie states record which neighbour a complete word names.
class NeighbourTries {
public:
    struct State {
        std::vector<std::pair<char, std::uint32_t>> child;  // sorted by symbol
        std::uint32_t end = kNoNode;                        // neighbour spelled exactly here
        std::uint32_t any = kNoNode;                        // some neighbour below
        std::uint32_t depth = 0;
    };

    static NeighbourTries predecessors(const Efg& g) {
        NeighbourTries t;
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            t.roots_.push_back(t.fresh(0));
            for (std::size_t u : g.in(v)) {
                const std::string& l = g.label(u);
                t.add(t.roots_.back(), std::string(l.rbegin(), l.rend()), u);
            }
        }
        return t;
    }

    static NeighbourTries successors(const Efg& g) {
        NeighbourTries t;
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            t.roots_.push_back(t.fresh(0));
            for (std::size_t w : g.out(v)) t.add(t.roots_.back(), g.label(w), w);
        }
        return t;
    }

    std::uint32_t root(std::size_t v) const { return roots_.at(v); }
    const State& state(std::uint32_t s) const { return states_[s]; }

    std::optional<std::uint32_t> step(std::uint32_t s, char c) const {
        const auto& ch = states_[s].child;
        auto it = std::lower_bound(ch.begin(), ch.end(), c, [](const auto& e, char x) { return e.first < x; });
        if (it == ch.end() || it->first != c) return std::nullopt;
        return it->second;
    }

    // Preorder listing per root: symbol, end node, child count.
    std::vector<std::uint32_t> preorder() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t r : roots_) {
            std::vector<std::pair<std::uint32_t, char>> stack{{r, '\0'}};
            while (!stack.empty()) {
                const auto [s, c] = stack.back();
                stack.pop_back();
                out.push_back(static_cast<unsigned char>(c));
                out.push_back(states_[s].end);
                out.push_back(static_cast<std::uint32_t>(states_[s].child.size()));
                for (auto it = states_[s].child.rbegin(); it != states_[s].child.rend(); ++it) stack.push_back({it->second, it->first});
            }
        }
        return out;
    }

    std::size_t size() const noexcept { return states_.size(); }

private:
    std::uint32_t fresh(std::uint32_t depth) {
        states_.emplace_back();
        states_.back().depth = depth;
        return static_cast<std::uint32_t>(states_.size() - 1);
    }

    void add(std::uint32_t s, const std::string& word, std::size_t node) {
        const auto id = static_cast<std::uint32_t>(node);
        if (states_[s].any == kNoNode) states_[s].any = id;
        for (char c : word) {
            auto next = step(s, c);
            if (!next) {
                next = fresh(states_[s].depth + 1);
                auto& ch = states_[s].child;
                ch.insert(std::lower_bound(ch.begin(), ch.end(), c, [](const auto& e, char x) { return e.first < x; }),
                          {c, *next});
            }
            s = *next;
            if (states_[s].any == kNoNode) states_[s].any = id;
        }
        states_[s].end = id;
    }

    std::vector<State> states_;
    std::vector<std::uint32_t> roots_;
};

// Whether q[0, pos) can be read right to left along a path ending in a
// predecessor of v; `where` receives the start of that path.
inline bool extend_left(const Efg& g, const NeighbourTries& pred, std::size_t v, std::string_view q, std::size_t pos,
                        Occurrence* where) {
    if (pos == 0) {
        if (where) *where = {g.node(v).block, v, 0};
        return true;
    }
    std::uint32_t s = pred.root(v);
    for (std::size_t j = pos; j-- > 0;) {
        const auto next = pred.step(s, q[j]);
        if (!next) return false;
        s = *next;
        const auto& st = pred.state(s);
        if (j == 0) {
            if (where) *where = {g.node(st.any).block, st.any, g.label(st.any).size() - st.depth};
            return true;
        }
        if (st.end != kNoNode && extend_left(g, pred, st.end, q, j, where)) return true;
    }
    return false;
}

// Whether q[pos, end) can be read left to right along a path leaving v.
inline bool extend_right(const NeighbourTries& succ, std::size_t v, std::string_view q, std::size_t pos) {
    if (pos == q.size()) return true;
    std::uint32_t s = succ.root(v);
    for (std::size_t j = pos; j < q.size(); ++j) {
        const auto next = succ.step(s, q[j]);
        if (!next) return false;
        s = *next;
        if (j + 1 == q.size()) return true;
        const auto& st = succ.state(s);
        if (st.end != kNoNode && extend_right(succ, st.end, q, j + 1)) return true;
    }
    return false;
}

// Concatenated text with, per position, the node and label offset it came from.
struct LabelledText {
    std::vector<symbol_t> text;
    std::vector<std::uint32_t> node;  // kNoNode on separators
    std::vector<std::uint32_t> offset;

    void push(const Efg& g, std::size_t v, bool reversed_order = false) {
        const std::string& l = g.label(v);
        for (std::size_t k = 0; k < l.size(); ++k) {
            const std::size_t off = reversed_order ? l.size() - 1 - k : k;
            text.push_back(*g.alphabet().encode(l[off]));
            node.push_back(static_cast<std::uint32_t>(v));
            offset.push_back(static_cast<std::uint32_t>(off));
        }
    }

    void separate() {
        text.push_back(kSeparator);
        node.push_back(kNoNode);
        offset.push_back(0);
    }

    Occurrence at(const Efg& g, std::size_t pos) const { return {g.node(node[pos]).block, node[pos], offset[pos]}; }
};

inline LabelledText edge_concatenation(const Efg& g) {
    LabelledText c;
    for (const auto& block : g.blocks())
        for (std::size_t v : block) {
            for (std::size_t w : g.out(v)) {
                c.push(g, v);
                c.push(g, w);
                c.separate();
            }
            if (g.out(v).empty() && g.in(v).empty()) {
                c.push(g, v);
                c.separate();
            }
        }
    return c;
}

inline void require(const Efg& g, Mode mode, IndexKind kind) {
    if (g.node_count() == 0) throw invalid_input("cannot index an empty graph");
    if (g.alphabet().size() >= 255) throw invalid_input("alphabet too large to index");
    if (auto w = find_repeat(g, mode))
        throw not_indexable(std::string(to_string(kind)) + " index needs a " + std::string(to_string(mode)) + " graph: " +
                                w->describe(g),
                            w->label, w->at_node, w->offset);
}

}  // namespace detail

class GraphIndex {
public:
    virtual ~GraphIndex() = default;

    virtual IndexKind kind() const noexcept = 0;
    const Efg& graph() const noexcept { return g_; }

    // A start position of some occurrence of q, if q occurs. Symbols outside
    // the graph alphabet simply do not occur.
    std::optional<Occurrence> locate(std::string_view q) const {
        const auto enc = g_.alphabet().encode(q);
        if (!enc) return std::nullopt;
        if (enc->empty()) return Occurrence{g_.node(0).block, 0, 0};
        return locate_encoded(q, *enc);
    }

    bool occurs(std::string_view q) const { return locate(q).has_value(); }

    // The text the suffix structure is built on (C or D).
    virtual const SuffixStructure& suffixes() const noexcept = 0;

protected:
    explicit GraphIndex(Efg g) : g_(std::move(g)) {}

    virtual std::optional<Occurrence> locate_encoded(std::string_view q, const std::vector<symbol_t>& enc) const = 0;

    Efg g_;
};

class ClassicIndex final : public GraphIndex {
public:
    // A complete node label found inside the query, q[begin, end) = l(node).
    struct Candidate {
        std::size_t begin = 0;
        std::size_t end = 0;
        std::size_t node = 0;
    };

    explicit ClassicIndex(Efg g) : GraphIndex(std::move(g)) {
        detail::require(g_, Mode::repeat_free, IndexKind::classic);
        build_automaton();
        pred_ = detail::NeighbourTries::predecessors(g_);
        succ_ = detail::NeighbourTries::successors(g_);
        c_ = detail::edge_concatenation(g_);
        sa_ = SuffixStructure(c_.text);
    }

    IndexKind kind() const noexcept override { return IndexKind::classic; }
    const SuffixStructure& suffixes() const noexcept override { return sa_; }
    const detail::NeighbourTries& predecessor_tries() const noexcept { return pred_; }
    const detail::NeighbourTries& successor_tries() const noexcept { return succ_; }

    // Every label occurrence inside q, ordered by end position.
    std::vector<Candidate> candidates(std::string_view q) const {
        std::vector<Candidate> out;
        scan(q, [&](std::size_t end, std::size_t node) {
            out.push_back({end - g_.label(node).size(), end, node});
            return true;
        });
        return out;
    }

    // Extend one candidate to the whole query through the neighbour tries.
    std::optional<Occurrence> verify(std::string_view q, const Candidate& c) const {
        Occurrence where;
        if (!detail::extend_right(succ_, c.node, q, c.end)) return std::nullopt;
        if (!detail::extend_left(g_, pred_, c.node, q, c.begin, &where)) return std::nullopt;
        return where;
    }

private:
    std::optional<Occurrence> locate_encoded(std::string_view q, const std::vector<symbol_t>& enc) const override {
        if (const auto first = first_candidate(q)) return verify(q, *first);
        // no complete label inside: q spans at most one edge
        const SaRange r = sa_.find(enc);
        if (r.empty()) return std::nullopt;
        return c_.at(g_, sa_.sa()[r.lo]);
    }

    struct AcState {
        std::vector<std::pair<char, std::uint32_t>> go;
        std::uint32_t fail = 0;
        std::uint32_t out = kNoNode;   // node whose label ends here
        std::uint32_t dict = kNoNode;  // nearest state on the fail chain with an output
    };

    std::optional<std::uint32_t> go(std::uint32_t s, char c) const {
        for (const auto& [x, t] : ac_[s].go)
            if (x == c) return t;
        return std::nullopt;
    }

    void build_automaton() {
        ac_.assign(1, {});
        for (std::size_t v = 0; v < g_.node_count(); ++v) {
            std::uint32_t s = 0;
            for (char c : g_.label(v)) {
                auto t = go(s, c);
                if (!t) {
                    ac_.emplace_back();
                    t = static_cast<std::uint32_t>(ac_.size() - 1);
                    ac_[s].go.push_back({c, *t});
                }
                s = *t;
            }
            ac_[s].out = static_cast<std::uint32_t>(v);
        }
        std::deque<std::uint32_t> queue;
        for (const auto& [c, t] : ac_[0].go) queue.push_back(t);
        while (!queue.empty()) {
            const std::uint32_t s = queue.front();
            queue.pop_front();
            for (const auto& [c, t] : ac_[s].go) {
                std::uint32_t f = ac_[s].fail;
                while (f != 0 && !go(f, c)) f = ac_[f].fail;
                const auto ft = go(f, c);
                ac_[t].fail = ft && *ft != t ? *ft : 0;
                const std::uint32_t fs = ac_[t].fail;
                ac_[t].dict = ac_[fs].out != kNoNode ? fs : ac_[fs].dict;
                queue.push_back(t);
            }
        }
    }

    // Calls visit(end, node) for label occurrences until it returns false.
    template <class Visit>
    void scan(std::string_view q, Visit visit) const {
        std::uint32_t s = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            while (s != 0 && !go(s, q[i])) s = ac_[s].fail;
            if (auto t = go(s, q[i])) s = *t;
            for (std::uint32_t o = ac_[s].out != kNoNode ? s : ac_[s].dict; o != kNoNode; o = ac_[o].dict)
                if (!visit(i + 1, ac_[o].out)) return;
        }
    }

    std::optional<Candidate> first_candidate(std::string_view q) const {
        std::optional<Candidate> found;
        scan(q, [&](std::size_t end, std::size_t node) {
            found = Candidate{end - g_.label(node).size(), end, node};
            return false;
        });
        return found;
    }

    std::vector<AcState> ac_;
    detail::NeighbourTries pred_, succ_;
    detail::LabelledText c_;
    SuffixStructure sa_;
};

class ExpandedBwtIndex final : public GraphIndex {
public:
    explicit ExpandedBwtIndex(Efg g) : GraphIndex(std::move(g)) {
        detail::require(g_, Mode::repeat_free, IndexKind::ebwt);
        c_ = detail::edge_concatenation(g_);
        sa_ = SuffixStructure(c_.text);
        std::vector<std::pair<SaRange, std::size_t>> marked;
        for (std::size_t v = 0; v < g_.node_count(); ++v) {
            const SaRange r = sa_.find(*g_.alphabet().encode(g_.label(v)));
            if (!r.empty()) marked.push_back({r, v});
        }
        std::sort(marked.begin(), marked.end(), [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
        b_ = RankSelectBits(sa_.size());
        e_ = RankSelectBits(sa_.size());
        for (std::size_t k = 0; k < marked.size(); ++k) {
            const auto& [r, v] = marked[k];
            if (k > 0 && marked[k - 1].first.hi > r.lo)
                throw std::logic_error("ebwt: label intervals overlap in a repeat-free graph");
            for (std::size_t row : {r.lo, r.hi - 1})
                if (c_.node[sa_.sa()[row]] != v || c_.offset[sa_.sa()[row]] != 0)
                    throw std::logic_error("ebwt: label interval does not start at its node");
            b_.set(r.lo);
            e_.set(r.hi - 1);
            marked_node_.push_back(v);
        }
        b_.finalize();
        e_.finalize();
    }

    IndexKind kind() const noexcept override { return IndexKind::ebwt; }
    const SuffixStructure& suffixes() const noexcept override { return sa_; }
    const RankSelectBits& begins() const noexcept { return b_; }
    const RankSelectBits& ends() const noexcept { return e_; }
    // Node of the k-th marked interval, in suffix-array order.
    const std::vector<std::size_t>& marked_nodes() const noexcept { return marked_node_; }

    // Expanded backward search; `expansions`, if given, records every interval
    // the search was widened to together with its node.
    std::optional<Occurrence> search(std::string_view q, std::vector<std::pair<SaRange, std::size_t>>* expansions) const {
        const auto enc = g_.alphabet().encode(q);
        if (!enc) return std::nullopt;
        if (enc->empty()) return locate(q);
        SaRange r = sa_.full_range();
        for (std::size_t i = enc->size(); i-- > 0;) {
            r = sa_.backward_step(r, (*enc)[i]);
            if (r.empty()) return std::nullopt;
            const std::size_t rank = b_.rank1(r.lo + 1);
            if (rank == 0) continue;
            const SaRange marked{b_.select1(rank), e_.select1(rank) + 1};
            if (marked.contains(r) && marked != r) {
                r = marked;
                if (expansions) expansions->push_back({r, marked_node_[rank - 1]});
            }
        }
        return c_.at(g_, sa_.sa()[r.lo]);
    }

private:
    std::optional<Occurrence> locate_encoded(std::string_view q, const std::vector<symbol_t>&) const override {
        return search(q, nullptr);
    }

    detail::LabelledText c_;
    SuffixStructure sa_;
    RankSelectBits b_, e_;
    std::vector<std::size_t> marked_node_;
};

class TripleIndex final : public GraphIndex {
public:
    explicit TripleIndex(Efg g) : GraphIndex(std::move(g)) {
        detail::require(g_, Mode::semi_repeat_free, IndexKind::triple);
        std::vector<std::uint32_t> ann_by_pos;
        auto entry = [&](std::initializer_list<std::size_t> path) {
            std::size_t len = 0;
            for (std::size_t v : path) len += g_.label(v).size();
            for (auto it = std::rbegin(path); it != std::rend(path); ++it) d_.push(g_, *it, true);
            d_.separate();
            // the suffix at start + k reads the reversed forward prefix of length len - k
            const std::size_t covers_two = path.size() >= 2 ? g_.label(*path.begin()).size() + g_.label(*(path.begin() + 1)).size() : SIZE_MAX;
            for (std::size_t k = 0; k < len; ++k)
                ann_by_pos.push_back(len - k >= covers_two ? static_cast<std::uint32_t>(*path.begin()) : kNoNode);
            ann_by_pos.push_back(kNoNode);
        };
        for (const auto& [v, w] : g_.edges()) {
            for (std::size_t u : g_.out(w)) entry({v, w, u});
            if (g_.in(v).empty() || g_.out(w).empty()) entry({v, w});
        }
        for (std::size_t v = 0; v < g_.node_count(); ++v)
            if (g_.in(v).empty() && g_.out(v).empty()) entry({v});

        const auto s = efg_stats(g_);
        if (d_.text.size() > 7 * s.total_length * s.max_height * s.max_height)
            throw std::logic_error("triple index: |D| exceeds 7 N H^2");
        sa_ = SuffixStructure(d_.text);
        annotation_.resize(sa_.size());
        for (std::size_t row = 0; row < sa_.size(); ++row) annotation_[row] = ann_by_pos[sa_.sa()[row]];
        pred_ = detail::NeighbourTries::predecessors(g_);
    }

    IndexKind kind() const noexcept override { return IndexKind::triple; }
    const SuffixStructure& suffixes() const noexcept override { return sa_; }
    const detail::NeighbourTries& predecessor_tries() const noexcept { return pred_; }
    // Start node stored with the suffix at a suffix-array row, or kNoNode.
    const std::vector<std::uint32_t>& annotations() const noexcept { return annotation_; }

private:
    std::optional<Occurrence> locate_encoded(std::string_view q, const std::vector<symbol_t>& enc) const override {
        SaRange r = sa_.full_range();
        std::size_t depth = 0;
        while (depth < enc.size()) {
            const SaRange next = sa_.forward_step(r, depth, enc[enc.size() - 1 - depth]);
            if (next.empty()) break;
            r = next;
            ++depth;
        }
        if (depth == enc.size()) return d_.at(g_, sa_.sa()[r.lo] + depth - 1);
        if (depth == 0) return std::nullopt;
        // q[i..] is a prefix of some stored path; the annotation names its first node
        const std::size_t i = enc.size() - depth;
        const SaRange exact = sa_.forward_step(r, depth, kSeparator);
        std::uint32_t tried = kNoNode;
        for (std::size_t row = exact.lo; row < exact.hi; ++row) {
            const std::uint32_t v = annotation_[row];
            if (v == kNoNode || v == tried) continue;
            tried = v;
            Occurrence where;
            if (detail::extend_left(g_, pred_, v, q, i, &where)) return where;
        }
        return std::nullopt;
    }

    detail::LabelledText d_;
    SuffixStructure sa_;
    std::vector<std::uint32_t> annotation_;
    detail::NeighbourTries pred_;
};

inline std::unique_ptr<GraphIndex> build_index(Efg g, IndexKind kind) {
    switch (kind) {
        case IndexKind::classic: return std::make_unique<ClassicIndex>(std::move(g));
        case IndexKind::ebwt: return std::make_unique<ExpandedBwtIndex>(std::move(g));
        case IndexKind::triple: return std::make_unique<TripleIndex>(std::move(g));
    }
    throw invalid_input("unknown index kind");
}

}  // namespace efgkit
