#include <gtest/gtest.h>

#include <random>

#include "efgkit/interval_union_set.hpp"
#include "oracles.hpp"

using efgkit::IntervalUnionSet;

TEST(IntervalUnionSet, SpanExamples) {
    IntervalUnionSet s;
    EXPECT_EQ(s.span(1, 100), 0);
    s.insert({1, 3});
    s.insert({5, 5});
    EXPECT_EQ(s.span(1, 5), 4);
    s.insert({8, 9});
    EXPECT_EQ(s.span(4, 9), 3);
    EXPECT_EQ(s.span(2, 9), 3);  // [1..3] is not contained
    EXPECT_EQ(s.span(1, 8), 4);
    EXPECT_EQ(s.span(6, 7), 0);
}

TEST(IntervalUnionSet, CheckedErrors) {
    IntervalUnionSet s;
    s.insert({4, 6});
    EXPECT_THROW(s.insert({6, 8}), std::logic_error);
    EXPECT_THROW(s.insert({1, 4}), std::logic_error);
    EXPECT_THROW(s.insert({5, 5}), std::logic_error);
    EXPECT_THROW(s.erase({4, 5}), std::logic_error);
    EXPECT_THROW(s.erase({1, 2}), std::logic_error);
    s.erase({4, 6});
    EXPECT_TRUE(s.empty());
}

TEST(IntervalUnionSet, RandomOperationsAgainstNaive) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 5; ++round) {
        IntervalUnionSet s;
        std::vector<std::pair<std::int64_t, std::int64_t>> ref;
        int done = 0;
        while (done < 1000) {
            const bool do_insert = ref.empty() || rng() % 3 != 0;
            if (do_insert) {
                const std::int64_t a = static_cast<std::int64_t>(rng() % 400);
                const std::int64_t b = a + static_cast<std::int64_t>(rng() % 6);
                bool clash = false;
                for (auto [x, y] : ref) clash = clash || !(b < x || y < a);
                if (clash) {
                    EXPECT_THROW(s.insert({a, b}), std::logic_error);
                    continue;
                }
                s.insert({a, b});
                ref.emplace_back(a, b);
            } else {
                const std::size_t k = rng() % ref.size();
                s.erase({ref[k].first, ref[k].second});
                ref.erase(ref.begin() + static_cast<std::ptrdiff_t>(k));
            }
            ++done;
            ASSERT_TRUE(s.check_invariants());
        }
        ASSERT_EQ(s.size(), ref.size());
        for (int q = 0; q < 100; ++q) {
            std::int64_t a = static_cast<std::int64_t>(rng() % 420), b = static_cast<std::int64_t>(rng() % 420);
            if (a > b) std::swap(a, b);
            ASSERT_EQ(s.span(a, b), oracle::naive_span(ref, a, b)) << a << " " << b;
            std::size_t inside = 0;
            for (auto [x, y] : ref) inside += a <= x && y <= b;
            ASSERT_EQ(s.within(a, b).size(), inside);
        }
    }
}
