#pragma once

// Segment validity and the v(j) / f(j) tables.
//
// A segment [x..y] of an MSA is valid when every row spells a non-empty string
// there and each of these strings occurs in the spelled rows only at the
// segment-start position of some row (the spelled position of the first
// non-gap at or after column x). In repeat-free mode the block strings must in
// addition be prefix-free.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "efgkit/error.hpp"
#include "efgkit/interval_union_set.hpp"
#include "efgkit/msa.hpp"
#include "efgkit/suffix_structure.hpp"

namespace efgkit {

enum class Mode { repeat_free, semi_repeat_free };

inline std::string_view to_string(Mode m) { return m == Mode::repeat_free ? "repeat-free" : "semi-repeat-free"; }

inline Mode parse_mode(std::string_view s) {
    if (s == "repeat-free" || s == "repeat_free") return Mode::repeat_free;
    if (s == "semi-repeat-free" || s == "semi_repeat_free") return Mode::semi_repeat_free;
    throw invalid_input("unknown mode '" + std::string(s) + "'");
}

// Direct check by scanning every spelled row for every block string.
inline bool is_valid_segment(const Msa& msa, std::size_t x, std::size_t y, Mode mode) {
    if (x == 0 || x > y || y > msa.columns())
        throw std::out_of_range("segment [" + std::to_string(x) + ".." + std::to_string(y) + "] outside the MSA");
    const GapCoordMap coords(msa);
    std::vector<std::string> block(msa.rows()), spelled(msa.rows());
    std::vector<std::size_t> start(msa.rows());
    for (std::size_t i = 0; i < msa.rows(); ++i) {
        block[i] = msa.spell_range(i, x, y);
        if (block[i].empty()) return false;
        spelled[i] = msa.spelled_row(i);
        start[i] = *coords.col_to_spelled(i, x) - 1;
    }
    std::vector<std::string> distinct = block;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (const auto& s : distinct)
        for (std::size_t t = 0; t < msa.rows(); ++t)
            for (std::size_t p = spelled[t].find(s); p != std::string::npos; p = spelled[t].find(s, p + 1))
                if (p != start[t]) return false;
    if (mode == Mode::repeat_free)
        for (std::size_t k = 0; k + 1 < distinct.size(); ++k)
            // sorted order puts a proper prefix right before a string extending it
            if (distinct[k + 1].compare(0, distinct[k].size(), distinct[k]) == 0) return false;
    return true;
}

struct ValidityTable {
    Mode mode = Mode::repeat_free;
    std::size_t n = 0;
    bool has_v = false;
    // Entries 1..n of v and 0..n-1 of f are meaningful; absent means undefined.
    std::vector<std::optional<std::size_t>> v;
    std::vector<std::optional<std::size_t>> f;

    std::optional<std::size_t> v_at(std::size_t j) const { return v.at(j); }
    std::optional<std::size_t> f_at(std::size_t j) const { return f.at(j); }
};

namespace detail {

// v(j) = largest j' with f(j') <= j; relies on right-extension closure.
inline void derive_v_from_f(ValidityTable& t) {
    std::vector<std::optional<std::size_t>> best_start(t.n + 1);
    for (std::size_t jp = 0; jp < t.n; ++jp)
        if (t.f[jp]) best_start[*t.f[jp]] = jp;  // increasing jp, so the last one is the largest
    std::optional<std::size_t> running;
    for (std::size_t j = 1; j <= t.n; ++j) {
        if (best_start[j] && (!running || *best_start[j] > *running)) running = best_start[j];
        t.v[j] = running;
    }
    t.has_v = true;
}

inline std::vector<std::vector<symbol_t>> encoded_spelled_rows(const Msa& msa) {
    std::vector<std::vector<symbol_t>> docs;
    for (std::size_t i = 0; i < msa.rows(); ++i) docs.push_back(*msa.alphabet().encode(msa.spelled_row(i)));
    return docs;
}

// Size of the union of SA ranges, or 0 if the union is empty.
inline std::size_t union_size(std::vector<SaRange> ranges) {
    std::sort(ranges.begin(), ranges.end(), [](const SaRange& a, const SaRange& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi > b.hi); });
    std::size_t total = 0, reach = 0;
    for (const auto& r : ranges) {
        if (r.hi <= reach) continue;
        total += r.hi - std::max(r.lo, reach);
        reach = r.hi;
    }
    return total;
}

}  // namespace detail

// Gapless repeat-free tables. Segment [x..y] is valid exactly when the SA ranges
// of the m row substrings cover m suffixes in total; f is found with a sliding
// window since left extensions of valid gapless segments stay valid.
inline ValidityTable compute_v_f_gapless(const Msa& msa) {
    if (msa.has_gaps()) throw invalid_input("MSA has gaps; use the elastic (semi-repeat-free) path");
    const std::size_t m = msa.rows(), n = msa.columns();
    const auto gsa = build_gsa(detail::encoded_spelled_rows(msa));
    const LcpNavigator nav(gsa.index);

    auto valid = [&](std::size_t x, std::size_t y) {
        std::vector<SaRange> ranges;
        ranges.reserve(m);
        for (std::size_t i = 0; i < m; ++i) ranges.push_back(nav.substring_range(gsa.doc_start[i] + x - 1, y - x + 1));
        return detail::union_size(std::move(ranges)) == m;
    };

    ValidityTable t;
    t.mode = Mode::repeat_free;
    t.n = n;
    t.v.assign(n + 1, std::nullopt);
    t.f.assign(n + 1, std::nullopt);
    std::size_t y = 1;
    for (std::size_t j = 0; j < n; ++j) {
        y = std::max(y, j + 1);
        while (y <= n && !valid(j + 1, y)) ++y;
        if (y > n) break;  // [j+1..n] invalid, and so is every later suffix block
        t.f[j] = y;
    }
    detail::derive_v_from_f(t);
    return t;
}

// Semi-repeat-free f(j) for general MSAs by climbing, per column, from the loci
// of the row suffixes towards the root of the generalized suffix tree while the
// covered leaves stay exactly the m segment-start suffixes.
inline ValidityTable compute_f_elastic(const Msa& msa) {
    const std::size_t m = msa.rows(), n = msa.columns();
    const GapCoordMap coords(msa);
    const auto gsa = build_gsa(detail::encoded_spelled_rows(msa));
    const LcpNavigator nav(gsa.index);

    ValidityTable t;
    t.mode = Mode::semi_repeat_free;
    t.n = n;
    t.v.assign(n + 1, std::nullopt);
    t.f.assign(n + 1, std::nullopt);

    struct Node {
        SaRange range;
        std::size_t parent = SIZE_MAX;     // redundancy forest
        std::size_t final_length = 0;      // set for roots (set F)
    };

    for (std::size_t j = 0; j < n; ++j) {
        std::vector<SaRange> loci(m);
        bool empty_row = false;
        for (std::size_t i = 0; i < m && !empty_row; ++i) {
            const auto p = coords.col_to_spelled(i, j + 1);
            if (!p) {
                empty_row = true;
                break;
            }
            const std::size_t len = coords.spelled_length(i) - *p + 1;
            loci[i] = nav.substring_range(gsa.doc_start[i] + *p - 1, len);
        }
        if (empty_row || detail::union_size(loci) != m) continue;

        // Keep the maximal distinct ranges; duplicates and nested ones hang below them.
        std::vector<Node> nodes;
        std::vector<std::size_t> row_node(m);
        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return loci[a].lo < loci[b].lo || (loci[a].lo == loci[b].lo && loci[a].hi > loci[b].hi);
        });
        IntervalUnionSet stored;
        std::vector<std::size_t> work;
        std::size_t enclosing = SIZE_MAX;
        for (std::size_t i : order) {
            if (enclosing != SIZE_MAX && nodes[enclosing].range.contains(loci[i])) {
                if (nodes[enclosing].range == loci[i]) {
                    row_node[i] = enclosing;
                } else {
                    nodes.push_back({loci[i], enclosing, 0});
                    row_node[i] = nodes.size() - 1;
                }
                continue;
            }
            nodes.push_back({loci[i], SIZE_MAX, 0});
            enclosing = row_node[i] = nodes.size() - 1;
            stored.insert({static_cast<std::int64_t>(loci[i].lo), static_cast<std::int64_t>(loci[i].hi) - 1});
            work.push_back(enclosing);
        }
        std::map<std::size_t, std::size_t> stored_node_at;  // range.lo -> node
        for (std::size_t w : work) stored_node_at[nodes[w].range.lo] = w;

        while (!work.empty()) {
            const std::size_t v = work.back();
            work.pop_back();
            if (nodes[v].parent != SIZE_MAX) continue;  // made redundant meanwhile
            const SaRange r = nodes[v].range;
            const std::size_t pd = nav.parent_depth(r);
            if (pd == 0) {
                nodes[v].final_length = 1;
                continue;
            }
            const SaRange w = nav.widen(r, pd);
            const auto a = static_cast<std::int64_t>(w.lo), b = static_cast<std::int64_t>(w.hi) - 1;
            if (stored.span(a, b) != b - a + 1) {
                nodes[v].final_length = pd + 1;
                continue;
            }
            nodes.push_back({w, SIZE_MAX, 0});
            const std::size_t wi = nodes.size() - 1;
            for (const Interval& iv : stored.within(a, b)) {
                const std::size_t inner = stored_node_at[static_cast<std::size_t>(iv.a)];
                nodes[inner].parent = wi;
                nodes[inner].final_length = 0;
                stored_node_at.erase(static_cast<std::size_t>(iv.a));
                stored.erase(iv);
            }
            stored.insert({a, b});
            stored_node_at[w.lo] = wi;
            work.push_back(wi);
        }

        std::size_t fj = 0;
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t k = row_node[i];
            while (nodes[k].parent != SIZE_MAX) k = nodes[k].parent;
            const auto y = coords.column_reaching(i, j + 1, nodes[k].final_length);
            if (!y) throw std::logic_error("compute_f_elastic: final length exceeds the row suffix");
            fj = std::max(fj, *y);
        }
        t.f[j] = fj;
    }
    detail::derive_v_from_f(t);
    return t;
}

}  // namespace efgkit
