#pragma once

// Generalized suffix array with inverse, LCP, BWT and backward search.
//
// Documents are concatenated as d_1 0 d_2 0 ... d_k 0 where 0 is the shared
// separator (every document symbol is >= 1). Suffixes compare with the usual
// "shorter prefix is smaller" rule, so the final 0 is the smallest suffix.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "efgkit/alphabet.hpp"

namespace efgkit {

// Half-open range [lo, hi) of suffix-array rows.
struct SaRange {
    std::size_t lo = 0;
    std::size_t hi = 0;

    bool empty() const noexcept { return lo >= hi; }
    std::size_t size() const noexcept { return empty() ? 0 : hi - lo; }
    bool contains(const SaRange& inner) const noexcept { return lo <= inner.lo && inner.hi <= hi; }

    friend bool operator==(const SaRange&, const SaRange&) = default;
};

namespace detail {

// Prefix doubling with two-pass radix sort; O(N log N).
inline std::vector<std::uint32_t> suffix_array(std::span<const symbol_t> text) {
    const std::size_t n = text.size();
    std::vector<std::uint32_t> sa(n), rank(n), tmp(n), next(n);
    if (n == 0) return sa;
    if (n > std::numeric_limits<std::uint32_t>::max() - 1) throw std::length_error("text too long for 32-bit suffix array");
    for (std::size_t i = 0; i < n; ++i) rank[i] = static_cast<std::uint32_t>(text[i]) + 1;
    std::size_t classes = 257;
    std::vector<std::uint32_t> count;
    for (std::size_t k = 1;; k <<= 1) {
        // secondary key: rank of i + k, 0 when past the end
        auto second = [&](std::size_t i) -> std::uint32_t { return i + k < n ? rank[i + k] : 0; };
        count.assign(classes + 1, 0);
        for (std::size_t i = 0; i < n; ++i) ++count[second(i)];
        for (std::size_t c = 1; c <= classes; ++c) count[c] += count[c - 1];
        for (std::size_t i = n; i-- > 0;) tmp[--count[second(i)]] = static_cast<std::uint32_t>(i);
        count.assign(classes + 1, 0);
        for (std::size_t i = 0; i < n; ++i) ++count[rank[i]];
        for (std::size_t c = 1; c <= classes; ++c) count[c] += count[c - 1];
        for (std::size_t i = n; i-- > 0;) sa[--count[rank[tmp[i]]]] = tmp[i];

        next[sa[0]] = 1;
        for (std::size_t i = 1; i < n; ++i) {
            const bool same = rank[sa[i]] == rank[sa[i - 1]] && second(sa[i]) == second(sa[i - 1]);
            next[sa[i]] = next[sa[i - 1]] + (same ? 0 : 1);
        }
        rank.swap(next);
        classes = rank[sa[n - 1]];
        if (classes == n) break;
    }
    return sa;
}

}  // namespace detail

class SuffixStructure {
public:
    SuffixStructure() = default;

    // text must end with the separator 0.
    explicit SuffixStructure(std::vector<symbol_t> text) : text_(std::move(text)) {
        if (text_.empty() || text_.back() != kSeparator)
            throw std::invalid_argument("suffix structure text must end with the separator");
        const std::size_t n = text_.size();
        sa_ = detail::suffix_array(text_);
        isa_.resize(n);
        for (std::size_t i = 0; i < n; ++i) isa_[sa_[i]] = static_cast<std::uint32_t>(i);

        // Kasai; lcp_[i] = lcp(suffix sa[i-1], suffix sa[i]), lcp_[0] = lcp_[n] = 0
        lcp_.assign(n + 1, 0);
        std::size_t h = 0;
        for (std::size_t p = 0; p < n; ++p) {
            const std::size_t r = isa_[p];
            if (r == 0) {
                h = 0;
                continue;
            }
            const std::size_t q = sa_[r - 1];
            while (p + h < n && q + h < n && text_[p + h] == text_[q + h]) ++h;
            lcp_[r] = static_cast<std::uint32_t>(h);
            if (h > 0) --h;
        }

        bwt_.resize(n);
        sigma_ = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bwt_[i] = text_[sa_[i] == 0 ? n - 1 : sa_[i] - 1];
            sigma_ = std::max<std::size_t>(sigma_, text_[i] + 1u);
        }
        c_.assign(sigma_ + 1, 0);
        for (symbol_t s : text_) ++c_[s + 1u];
        for (std::size_t s = 1; s <= sigma_; ++s) c_[s] += c_[s - 1];

        const std::size_t blocks = n / kSample + 1;
        occ_.assign(blocks * sigma_, 0);
        std::vector<std::uint32_t> running(sigma_, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (i % kSample == 0) std::copy(running.begin(), running.end(), occ_.begin() + static_cast<std::ptrdiff_t>((i / kSample) * sigma_));
            ++running[bwt_[i]];
        }
        if (n % kSample == 0) std::copy(running.begin(), running.end(), occ_.begin() + static_cast<std::ptrdiff_t>((n / kSample) * sigma_));
    }

    std::size_t size() const noexcept { return text_.size(); }
    std::span<const symbol_t> text() const noexcept { return text_; }
    std::span<const std::uint32_t> sa() const noexcept { return sa_; }
    std::span<const std::uint32_t> isa() const noexcept { return isa_; }
    // Size n+1; entry i (1 <= i < n) is the LCP of SA rows i-1 and i.
    std::span<const std::uint32_t> lcp() const noexcept { return lcp_; }
    std::span<const symbol_t> bwt() const noexcept { return bwt_; }

    SaRange full_range() const noexcept { return {0, text_.size()}; }

    // Occurrences of c in bwt[0, i).
    std::size_t occ(symbol_t c, std::size_t i) const {
        if (c >= sigma_) return 0;
        const std::size_t block = i / kSample;
        std::size_t r = occ_[block * sigma_ + c];
        for (std::size_t k = block * kSample; k < i; ++k) r += bwt_[k] == c;
        return r;
    }

    // Rows of suffixes starting with c followed by the strings of `range`.
    SaRange backward_step(SaRange range, symbol_t c) const {
        if (c >= sigma_ || range.empty()) return {0, 0};
        const std::size_t lo = c_[c] + occ(c, range.lo);
        const std::size_t hi = c_[c] + occ(c, range.hi);
        return {lo, hi};
    }

    SaRange find(std::span<const symbol_t> pattern) const {
        SaRange r = full_range();
        for (std::size_t i = pattern.size(); i-- > 0 && !r.empty();) r = backward_step(r, pattern[i]);
        return r.empty() ? SaRange{0, 0} : r;
    }

    // Rows whose suffix starts with the symbols of `pattern`, found by binary
    // search over the suffix array. Equivalent to find(); used where the
    // pattern is consumed left to right.
    SaRange locate(std::span<const symbol_t> pattern) const {
        auto cmp_prefix = [&](std::uint32_t pos) {
            // <0: suffix < pattern (on |pattern| prefix), 0: pattern is a prefix, >0: greater
            for (std::size_t k = 0; k < pattern.size(); ++k) {
                if (pos + k >= text_.size()) return -1;
                if (text_[pos + k] != pattern[k]) return text_[pos + k] < pattern[k] ? -1 : 1;
            }
            return 0;
        };
        const auto lo = std::partition_point(sa_.begin(), sa_.end(), [&](std::uint32_t p) { return cmp_prefix(p) < 0; });
        const auto hi = std::partition_point(lo, sa_.end(), [&](std::uint32_t p) { return cmp_prefix(p) == 0; });
        return {static_cast<std::size_t>(lo - sa_.begin()), static_cast<std::size_t>(hi - sa_.begin())};
    }

    // Narrows `range` (rows sharing their first `depth` symbols) to those whose
    // symbol at offset `depth` is c.
    SaRange forward_step(SaRange range, std::size_t depth, symbol_t c) const {
        auto sym = [&](std::uint32_t pos) -> int { return pos + depth < text_.size() ? text_[pos + depth] : -1; };
        const auto first = sa_.begin() + static_cast<std::ptrdiff_t>(range.lo);
        const auto last = sa_.begin() + static_cast<std::ptrdiff_t>(range.hi);
        const auto lo = std::partition_point(first, last, [&](std::uint32_t p) { return sym(p) < c; });
        const auto hi = std::partition_point(lo, last, [&](std::uint32_t p) { return sym(p) == c; });
        return {static_cast<std::size_t>(lo - sa_.begin()), static_cast<std::size_t>(hi - sa_.begin())};
    }

private:
    static constexpr std::size_t kSample = 64;

    std::vector<symbol_t> text_;
    std::vector<std::uint32_t> sa_, isa_, lcp_;
    std::vector<symbol_t> bwt_;
    std::size_t sigma_ = 0;
    std::vector<std::size_t> c_;
    std::vector<std::uint32_t> occ_;
};

// Documents joined with the shared separator plus a final one.
struct GeneralizedSuffixStructure {
    SuffixStructure index;
    std::vector<std::size_t> doc_start;  // text offset of each document

    std::size_t doc_of(std::size_t pos) const {
        return static_cast<std::size_t>(std::upper_bound(doc_start.begin(), doc_start.end(), pos) - doc_start.begin()) - 1;
    }
};

inline GeneralizedSuffixStructure build_gsa(const std::vector<std::vector<symbol_t>>& docs) {
    if (docs.empty()) throw std::invalid_argument("build_gsa: no documents");
    std::vector<symbol_t> text;
    std::vector<std::size_t> starts;
    for (const auto& d : docs) {
        starts.push_back(text.size());
        for (symbol_t s : d) {
            if (s == kSeparator) throw std::invalid_argument("build_gsa: document contains the separator");
            text.push_back(s);
        }
        text.push_back(kSeparator);
    }
    return {SuffixStructure(std::move(text)), std::move(starts)};
}

// Range-minimum over the LCP array, giving suffix-tree navigation on SA ranges:
// the range of all suffixes sharing a given prefix and the parent of a node.
class LcpNavigator {
public:
    explicit LcpNavigator(const SuffixStructure& s) : s_(&s) {
        const auto lcp = s.lcp();
        table_.emplace_back(lcp.begin(), lcp.end());
        for (std::size_t len = 2; len <= lcp.size(); len <<= 1) {
            const auto& prev = table_.back();
            std::vector<std::uint32_t> cur(lcp.size() - len + 1);
            for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = std::min(prev[i], prev[i + len / 2]);
            table_.push_back(std::move(cur));
        }
    }

    // Rows whose suffix shares its first `len` symbols with the suffix at text
    // position pos (len must not exceed that suffix's length).
    SaRange substring_range(std::size_t pos, std::size_t len) const {
        const std::size_t r = s_->isa()[pos];
        return widen({r, r + 1}, len);
    }

    // Widens a range to all rows sharing its first `depth` symbols.
    SaRange widen(SaRange range, std::size_t depth) const {
        std::size_t lo = range.lo, hi = range.hi - 1;  // inclusive rows
        const std::size_t n = s_->size();
        for (std::size_t lev = table_.size(); lev-- > 0;) {
            const std::size_t w = std::size_t{1} << lev;
            // lcp entries lo-w+1 .. lo link rows lo-w .. lo
            if (lo >= w && table_[lev][lo - w + 1] >= depth) lo -= w;
        }
        for (std::size_t lev = table_.size(); lev-- > 0;) {
            const std::size_t w = std::size_t{1} << lev;
            if (hi + w <= n - 1 && table_[lev][hi + 1] >= depth) hi += w;
        }
        return {lo, hi + 1};
    }

    // String depth of the parent of the suffix-tree node spanning `range`.
    std::size_t parent_depth(SaRange range) const {
        const auto lcp = s_->lcp();
        return std::max(lcp[range.lo], lcp[range.hi]);
    }

    // min LCP over rows [lo, hi) i.e. the longest common prefix of all of them.
    std::size_t common_prefix(SaRange range) const {
        if (range.size() <= 1) throw std::invalid_argument("common_prefix needs two rows");
        const std::size_t a = range.lo + 1, b = range.hi - 1;  // lcp entries a..b
        const std::size_t lev = static_cast<std::size_t>(std::bit_width(b - a + 1)) - 1;
        return std::min(table_[lev][a], table_[lev][b + 1 - (std::size_t{1} << lev)]);
    }

private:
    const SuffixStructure* s_;
    std::vector<std::vector<std::uint32_t>> table_;
};

}  // namespace efgkit
