#pragma once

// Optimal segmentations: maximum number of blocks and minimum maximum block
// length, from the f(j) / v(j) tables or, for gapped repeat-free input,
// directly with a sliding window over left extensions.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efgkit/msa.hpp"
#include "efgkit/range_min.hpp"
#include "efgkit/suffix_structure.hpp"
#include "efgkit/validity.hpp"

namespace efgkit {

enum class Score { maxblocks, minmaxlength };

inline std::string_view to_string(Score s) { return s == Score::maxblocks ? "maxblocks" : "minmaxlength"; }

inline Score parse_score(std::string_view s) {
    if (s == "maxblocks") return Score::maxblocks;
    if (s == "minmaxlength") return Score::minmaxlength;
    throw invalid_input("unknown score '" + std::string(s) + "'");
}

// Columns [first..last], 1-based inclusive.
struct Segment {
    std::size_t first;
    std::size_t last;

    std::size_t length() const noexcept { return last - first + 1; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct Segmentation {
    std::vector<Segment> intervals;
    Mode mode = Mode::repeat_free;
    Score score_kind = Score::maxblocks;
    std::size_t score = 0;

    std::size_t blocks() const noexcept { return intervals.size(); }
    std::size_t max_length() const {
        std::size_t l = 0;
        for (const auto& s : intervals) l = std::max(l, s.length());
        return l;
    }
    std::size_t recomputed_score() const { return score_kind == Score::maxblocks ? blocks() : max_length(); }
};

// Per-column DP values and predecessor links, columns 0..n.
struct DpTrace {
    std::vector<std::optional<std::size_t>> score;  // absent: no valid segmentation of [1..j]
    std::vector<std::optional<std::size_t>> pred;   // start j' of the last block [j'+1..j]
    std::vector<std::size_t> raw;                   // threshold-encoded values where the algorithm uses them
    std::vector<std::size_t> x;                     // x(j) of the linear algorithm
};

struct SegmentationResult {
    DpTrace trace;
    std::optional<Segmentation> segmentation;  // absent when no valid segmentation exists
};

// Follows predecessor links back from column n.
inline std::optional<Segmentation> traceback(const DpTrace& trace, Mode mode, Score kind) {
    const std::size_t n = trace.score.size() - 1;
    if (!trace.score[n]) return std::nullopt;
    Segmentation seg;
    seg.mode = mode;
    seg.score_kind = kind;
    seg.score = *trace.score[n];
    for (std::size_t j = n; j > 0;) {
        const std::size_t jp = trace.pred[j].value();
        seg.intervals.push_back({jp + 1, j});
        j = jp;
    }
    std::reverse(seg.intervals.begin(), seg.intervals.end());
    if (seg.recomputed_score() != seg.score) throw std::logic_error("traceback score mismatch");
    return seg;
}

namespace detail {

// (j, f(j)) pairs with f defined, counting-sorted by f(j); stable in j.
inline std::vector<std::pair<std::size_t, std::size_t>> sorted_right_extensions(const ValidityTable& t) {
    std::vector<std::size_t> count(t.n + 2, 0);
    for (std::size_t j = 0; j < t.n; ++j)
        if (t.f[j]) ++count[*t.f[j] + 1];
    for (std::size_t k = 1; k < count.size(); ++k) count[k] += count[k - 1];
    std::vector<std::pair<std::size_t, std::size_t>> out(count.back());
    for (std::size_t j = 0; j < t.n; ++j)
        if (t.f[j]) out[count[*t.f[j]]++] = {j, *t.f[j]};
    return out;
}

}  // namespace detail

// Forward propagation over right extensions: every j' with f(j') <= j may end
// its segmentation before a block [j'+1..j].
inline SegmentationResult maxblocks(const ValidityTable& table) {
    const std::size_t n = table.n;
    const auto ext = detail::sorted_right_extensions(table);
    SegmentationResult res;
    auto& tr = res.trace;
    tr.score.assign(n + 1, std::nullopt);
    tr.pred.assign(n + 1, std::nullopt);
    tr.score[0] = 0;
    std::optional<std::size_t> best, best_j;
    std::size_t x = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        for (; x < ext.size() && ext[x].second == j; ++x) {
            const std::size_t jx = ext[x].first;
            const auto s = tr.score[jx];
            if (!s) continue;
            if (!best || *s > *best || (*s == *best && jx > *best_j)) {
                best = s;
                best_j = jx;
            }
        }
        if (best) {
            tr.score[j] = *best + 1;
            tr.pred[j] = best_j;
        }
    }
    res.segmentation = traceback(tr, table.mode, Score::maxblocks);
    return res;
}

// Two range-minimum trees over keys 0..2n: T holds minmaxlength(j') at key
// j' + minmaxlength(j') (case: the old maximum dominates), I holds -j' at the
// same key (case: the new block [j'+1..j] is the longest).
inline SegmentationResult minmaxlength_fj(const ValidityTable& table) {
    const std::size_t n = table.n;
    const auto ext = detail::sorted_right_extensions(table);
    using Entry = std::pair<std::int64_t, std::int64_t>;
    constexpr std::int64_t kInf = INT64_MAX / 4;
    RangeMinTree<Entry> tree_t(2 * n + 1, {kInf, kInf});  // (score, -j')
    RangeMinTree<Entry> tree_i(2 * n + 1, {kInf, kInf});  // (-j', 0)

    SegmentationResult res;
    auto& tr = res.trace;
    tr.score.assign(n + 1, std::nullopt);
    tr.pred.assign(n + 1, std::nullopt);
    tr.score[0] = 0;
    std::size_t x = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        for (; x < ext.size() && ext[x].second == j; ++x) {
            const std::size_t jx = ext[x].first;
            if (!tr.score[jx]) continue;
            const auto s = static_cast<std::int64_t>(*tr.score[jx]);
            const std::size_t key = jx + static_cast<std::size_t>(s);
            tree_t.upgrade(key, {s, -static_cast<std::int64_t>(jx)});
            tree_i.upgrade(key, {-static_cast<std::int64_t>(jx), 0});
        }
        const Entry a = tree_t.range_min(j + 1, 2 * n);
        const Entry b = tree_i.range_min(0, j);
        std::optional<std::pair<std::int64_t, std::int64_t>> pick;  // (value, j')
        if (a.first < kInf) pick = {{a.first, -a.second}};
        if (b.first < kInf) {
            const std::pair<std::int64_t, std::int64_t> cand{static_cast<std::int64_t>(j) + b.first, -b.first};
            if (!pick || cand.first < pick->first || (cand.first == pick->first && cand.second > pick->second)) pick = cand;
        }
        if (pick) {
            tr.score[j] = static_cast<std::size_t>(pick->first);
            tr.pred[j] = static_cast<std::size_t>(pick->second);
        }
    }
    res.segmentation = traceback(tr, table.mode, Score::minmaxlength);
    return res;
}

// Linear-time min-max-length from v(j) on gapless input. s(j) is kept
// threshold-encoded (K marks "no segmentation"), x(j) only moves right, and a
// candidate j* is accepted once it beats every s value to its right.
inline SegmentationResult minmaxlength_linear_gapless(const ValidityTable& table) {
    if (!table.has_v) throw invalid_input("minmaxlength_linear_gapless needs v(j) values");
    const std::size_t n = table.n;
    const std::size_t K = n + 1;
    SegmentationResult res;
    auto& tr = res.trace;
    tr.raw.assign(n + 1, K);
    tr.x.assign(n + 1, 0);
    tr.score.assign(n + 1, std::nullopt);
    tr.pred.assign(n + 1, std::nullopt);
    tr.raw[0] = 0;
    AppendRangeMin<std::size_t> smin;
    smin.push_back(0);
    std::size_t x_prev = 0;
    bool have_prev = false;
    for (std::size_t j = 1; j <= n; ++j) {
        if (!table.v[j]) {
            smin.push_back(K);
            continue;
        }
        const std::size_t vj = *table.v[j];
        std::size_t star = have_prev ? x_prev : 0;
        if (star > vj) throw std::logic_error("x(j-1) beyond v(j)");
        for (;; ++star) {
            if (star == vj) break;
            const std::size_t k = std::max(j - star, tr.raw[star]);
            if (k < smin.range_min(star + 1, vj)) break;
        }
        if (have_prev && star < x_prev) throw std::logic_error("x(j) decreased");
        tr.x[j] = star;
        x_prev = star;
        have_prev = true;
        tr.raw[j] = std::max(j - star, tr.raw[star]);
        if (tr.raw[j] > std::max(j, K)) throw std::logic_error("s(j) above max(j, K)");
        smin.push_back(tr.raw[j]);
        if (tr.raw[j] < K) {
            tr.score[j] = tr.raw[j];
            tr.pred[j] = star;
        }
    }
    tr.score[0] = 0;
    res.segmentation = traceback(tr, Mode::repeat_free, Score::minmaxlength);
    return res;
}

// Left-extension window over the spelled rows: for a fixed right end j it
// reports, for j' = j-1 down to 0, whether [j'+1..j] is a repeat-free segment.
// Gap columns keep a row's SA range unchanged; a segment is valid when no
// row range is nested in another one of a different string (prefix pair) and
// the distinct ranges cover exactly m suffixes.
class RepeatFreeWindow {
public:
    explicit RepeatFreeWindow(const Msa& msa) : msa_(&msa), gsa_(build_gsa(detail::encoded_spelled_rows(msa))) {}

    // visit(j', valid) returns false to stop early.
    template <class Visit>
    void scan(std::size_t j, Visit visit) const {
        const std::size_t m = msa_->rows();
        const auto& idx = gsa_.index;
        std::vector<SaRange> range(m, idx.full_range());
        std::vector<std::size_t> len(m, 0);
        std::vector<Item> items(m);
        for (std::size_t jp = j; jp-- > 0;) {
            for (std::size_t i = 0; i < m; ++i) {
                const char c = msa_->at(i, jp + 1);
                if (c == kGap) continue;
                range[i] = idx.backward_step(range[i], *msa_->alphabet().encode(c));
                ++len[i];
            }
            bool valid = true;
            for (std::size_t i = 0; i < m && valid; ++i) {
                valid = len[i] > 0;
                items[i] = {range[i].lo, range[i].hi, len[i]};
            }
            if (valid) valid = check(items, m);
            if (!visit(jp, valid)) return;
        }
    }

private:
    struct Item {
        std::size_t lo, hi, len;
        friend bool operator==(const Item&, const Item&) = default;
    };

    static bool check(std::vector<Item> items, std::size_t m) {
        std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
            if (a.lo != b.lo) return a.lo < b.lo;
            if (a.hi != b.hi) return a.hi > b.hi;
            return a.len < b.len;
        });
        items.erase(std::unique(items.begin(), items.end()), items.end());
        std::size_t total = 0;
        for (std::size_t k = 0; k < items.size(); ++k) {
            if (k > 0 && items[k].lo < items[k - 1].hi) return false;  // nested or same range, other string
            total += items[k].hi - items[k].lo;
        }
        return total == m;
    }

    const Msa* msa_;
    GeneralizedSuffixStructure gsa_;
};

// e(j) = min over valid [j'+1..j] with e(j') feasible of max(j - j', e(j')),
// e(0) = 0 and e(j) = j + 1 when [1..j] has no repeat-free segmentation. The
// scan for column j stops once j - j' exceeds the best value found.
inline SegmentationResult elastic_repeat_free_minmax(const Msa& msa) {
    const std::size_t n = msa.columns();
    const std::size_t K = n + 1;
    const RepeatFreeWindow window(msa);
    SegmentationResult res;
    auto& tr = res.trace;
    tr.raw.assign(n + 1, 0);
    tr.score.assign(n + 1, std::nullopt);
    tr.pred.assign(n + 1, std::nullopt);
    tr.score[0] = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        std::size_t e = j + 1;
        std::optional<std::size_t> arg;
        window.scan(j, [&](std::size_t jp, bool valid) {
            if (j - jp > e) return false;
            if (valid && tr.raw[jp] < jp + 1) {
                const std::size_t cand = std::max(j - jp, tr.raw[jp]);
                if (cand < e) {
                    e = cand;
                    arg = jp;
                }
            }
            return true;
        });
        if (e > std::max(j, K)) throw std::logic_error("e(j) above max(j, K)");
        tr.raw[j] = e;
        if (arg) {
            tr.score[j] = e;
            tr.pred[j] = arg;
        }
    }
    res.segmentation = traceback(tr, Mode::repeat_free, Score::minmaxlength);
    return res;
}

// Maximum number of repeat-free blocks on gapped input. Prefix-freeness is
// not closed under right extension, so no f(j) table applies; the recurrence
// is evaluated directly over the full left-extension window.
inline SegmentationResult elastic_repeat_free_maxblocks(const Msa& msa) {
    const std::size_t n = msa.columns();
    const RepeatFreeWindow window(msa);
    SegmentationResult res;
    auto& tr = res.trace;
    tr.score.assign(n + 1, std::nullopt);
    tr.pred.assign(n + 1, std::nullopt);
    tr.score[0] = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        window.scan(j, [&](std::size_t jp, bool valid) {
            if (valid && tr.score[jp] && (!tr.score[j] || *tr.score[jp] + 1 > *tr.score[j])) {
                tr.score[j] = *tr.score[jp] + 1;
                tr.pred[j] = jp;
            }
            return true;
        });
    }
    res.segmentation = traceback(tr, Mode::repeat_free, Score::maxblocks);
    return res;
}

enum class Engine { automatic, gapless_linear, elastic };

inline std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::automatic: return "auto";
        case Engine::gapless_linear: return "gapless-linear";
        default: return "elastic";
    }
}

inline Engine parse_engine(std::string_view s) {
    if (s == "auto") return Engine::automatic;
    if (s == "gapless-linear") return Engine::gapless_linear;
    if (s == "elastic") return Engine::elastic;
    throw invalid_input("unknown engine '" + std::string(s) + "'");
}

// Picks the algorithm for (mode, score, engine) and runs it.
inline SegmentationResult segment_msa(const Msa& msa, Mode mode, Score score, Engine engine = Engine::automatic) {
    const bool gapless = !msa.has_gaps();
    if (engine == Engine::gapless_linear && !gapless) throw invalid_input("the gapless-linear engine needs a gapless MSA");
    const bool use_gapless = engine == Engine::gapless_linear || (engine == Engine::automatic && gapless);
    if (mode == Mode::semi_repeat_free) {
        // equal-length block strings cannot be proper prefixes of each other, so
        // on gapless input both modes share one table
        ValidityTable t = use_gapless ? compute_v_f_gapless(msa) : compute_f_elastic(msa);
        t.mode = Mode::semi_repeat_free;
        return score == Score::maxblocks ? maxblocks(t) : minmaxlength_fj(t);
    }
    if (use_gapless) {
        const ValidityTable t = compute_v_f_gapless(msa);
        return score == Score::maxblocks ? maxblocks(t) : minmaxlength_linear_gapless(t);
    }
    return score == Score::maxblocks ? elastic_repeat_free_maxblocks(msa) : elastic_repeat_free_minmax(msa);
}

}  // namespace efgkit
