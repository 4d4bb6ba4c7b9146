#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace efgkit {

// Keys 0..size-1 with values that can only decrease. Iterative segment tree.
template <class V>
class RangeMinTree {
public:
    RangeMinTree(std::size_t size, V infinity) : n_(std::max<std::size_t>(size, 1)), inf_(infinity), tree_(2 * n_, infinity) {}

    std::size_t size() const noexcept { return n_; }

    // Sets key k to v if its current value is larger.
    void upgrade(std::size_t k, const V& v) {
        if (k >= n_) throw std::out_of_range("RangeMinTree::upgrade: key out of range");
        std::size_t p = k + n_;
        if (!(v < tree_[p])) return;
        tree_[p] = v;
        for (p /= 2; p >= 1; p /= 2) {
            const V& m = std::min(tree_[2 * p], tree_[2 * p + 1]);
            if (!(m < tree_[p])) break;
            tree_[p] = m;
        }
    }

    // Minimum over keys [a..b], clamped to the key range; infinity if empty.
    V range_min(std::size_t a, std::size_t b) const {
        if (b >= n_) b = n_ - 1;
        if (a > b) return inf_;
        V best = inf_;
        for (std::size_t l = a + n_, r = b + n_ + 1; l < r; l /= 2, r /= 2) {
            if (l & 1) best = std::min(best, tree_[l++]);
            if (r & 1) best = std::min(best, tree_[--r]);
        }
        return best;
    }

    V at(std::size_t k) const { return tree_.at(k + n_); }

private:
    std::size_t n_;
    V inf_;
    std::vector<V> tree_;
};

// Sparse table that grows at the right end: push_back is O(log n),
// range_min over any [a..b] of stored values is O(1).
template <class V>
class AppendRangeMin {
public:
    std::size_t size() const noexcept { return levels_.empty() ? 0 : levels_[0].size(); }

    void push_back(const V& v) {
        if (levels_.empty()) levels_.emplace_back();
        levels_[0].push_back(v);
        const std::size_t n = levels_[0].size();
        for (std::size_t lev = 1; (std::size_t{1} << lev) <= n; ++lev) {
            if (levels_.size() == lev) levels_.emplace_back();
            const std::size_t half = std::size_t{1} << (lev - 1);
            const std::size_t start = n - (std::size_t{1} << lev);
            levels_[lev].push_back(std::min(levels_[lev - 1][start], levels_[lev - 1][start + half]));
        }
    }

    const V& operator[](std::size_t i) const { return levels_[0][i]; }

    V range_min(std::size_t a, std::size_t b) const {
        if (a > b || b >= size()) throw std::out_of_range("AppendRangeMin::range_min: bad range");
        const std::size_t lev = static_cast<std::size_t>(std::bit_width(b - a + 1)) - 1;
        return std::min(levels_[lev][a], levels_[lev][b + 1 - (std::size_t{1} << lev)]);
    }

private:
    std::vector<std::vector<V>> levels_;
};

}  // namespace efgkit
