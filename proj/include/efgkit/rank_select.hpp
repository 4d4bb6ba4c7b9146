#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace efgkit {

// Static bit sequence with rank/select directories.
//
// rank1(i) counts set bits among the first i positions (i.e. in [0, i)),
// select1(j) returns the 0-based position of the j-th set bit (j >= 1).
// Consequently rank1(select1(j) + 1) == j.
class RankSelectBits {
public:
    RankSelectBits() = default;

    explicit RankSelectBits(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    explicit RankSelectBits(const std::vector<bool>& bits) : RankSelectBits(bits.size()) {
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) set(i);
        finalize();
    }

    std::size_t size() const noexcept { return size_; }

    void set(std::size_t i, bool value = true) {
        assert(i < size_);
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (value)
            words_[i / 64] |= mask;
        else
            words_[i / 64] &= ~mask;
        finalized_ = false;
    }

    bool operator[](std::size_t i) const {
        assert(i < size_);
        return (words_[i / 64] >> (i % 64)) & 1u;
    }

    // Builds the rank directory. Must be called after the last set().
    void finalize() {
        block_rank_.assign(words_.size() + 1, 0);
        for (std::size_t w = 0; w < words_.size(); ++w)
            block_rank_[w + 1] = block_rank_[w] + static_cast<std::uint64_t>(std::popcount(words_[w]));
        finalized_ = true;
    }

    std::size_t count() const {
        check_finalized();
        return static_cast<std::size_t>(block_rank_.back());
    }

    std::size_t rank1(std::size_t i) const {
        check_finalized();
        if (i > size_) throw std::out_of_range("rank1: position past end");
        const std::size_t w = i / 64;
        std::uint64_t r = block_rank_[w];
        if (i % 64 != 0) r += static_cast<std::uint64_t>(std::popcount(words_[w] & ((std::uint64_t{1} << (i % 64)) - 1)));
        return static_cast<std::size_t>(r);
    }

    std::size_t rank0(std::size_t i) const { return i - rank1(i); }

    std::size_t select1(std::size_t j) const {
        check_finalized();
        if (j == 0 || j > count()) throw std::out_of_range("select1: no such set bit");
        // last word whose preceding rank is < j
        std::size_t lo = 0, hi = words_.size();
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (block_rank_[mid] < j)
                lo = mid;
            else
                hi = mid;
        }
        std::uint64_t word = words_[lo];
        std::size_t need = j - static_cast<std::size_t>(block_rank_[lo]);
        for (; need > 1; --need) word &= word - 1;
        return lo * 64 + static_cast<std::size_t>(std::countr_zero(word));
    }

    std::size_t select0(std::size_t j) const {
        check_finalized();
        if (j == 0 || j > size_ - count()) throw std::out_of_range("select0: no such unset bit");
        std::size_t lo = 0, hi = size_;
        while (lo < hi) {  // smallest p with rank0(p + 1) >= j
            const std::size_t mid = (lo + hi) / 2;
            if (rank0(mid + 1) >= j)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const RankSelectBits& a, const RankSelectBits& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

private:
    void check_finalized() const {
        if (!finalized_) throw std::logic_error("RankSelectBits used before finalize()");
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
    std::vector<std::uint64_t> block_rank_{0};
    bool finalized_ = true;
};

}  // namespace efgkit
