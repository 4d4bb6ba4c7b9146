#include <gtest/gtest.h>

#include <random>

#include "efgkit/suffix_structure.hpp"
#include "oracles.hpp"

using namespace efgkit;

namespace {

std::vector<symbol_t> sym(const std::string& s) {
    std::vector<symbol_t> out;
    for (char c : s) out.push_back(c == '$' ? 0 : static_cast<symbol_t>(c - 'A' + 1));
    return out;
}

std::vector<std::size_t> one_based(std::span<const std::uint32_t> sa) {
    std::vector<std::size_t> out;
    for (auto p : sa) out.push_back(p + 1);
    return out;
}

}  // namespace

TEST(BuildGsa, Examples) {
    auto ab = build_gsa({sym("AB")});
    EXPECT_EQ(one_based(ab.index.sa()), (std::vector<std::size_t>{3, 1, 2}));
    auto a = build_gsa({sym("A")});
    EXPECT_EQ(one_based(a.index.sa()), (std::vector<std::size_t>{2, 1}));
    EXPECT_THROW(build_gsa({}), std::invalid_argument);

    auto two = build_gsa({sym("ACGT"), sym("ATGT")});
    const auto text = std::vector<symbol_t>(two.index.text().begin(), two.index.text().end());
    EXPECT_EQ(text, sym("ACGT$ATGT$"));
    const auto naive = oracle::naive_suffix_array(text);
    EXPECT_EQ(std::vector<std::size_t>(two.index.sa().begin(), two.index.sa().end()), naive);
    EXPECT_EQ(two.doc_of(0), 0u);
    EXPECT_EQ(two.doc_of(4), 0u);
    EXPECT_EQ(two.doc_of(5), 1u);
}

TEST(BackwardStep, Examples) {
    auto ab = build_gsa({sym("AB")});
    const auto& s = ab.index;
    const SaRange b = s.backward_step(s.full_range(), 2);
    EXPECT_EQ(b.size(), 1u);
    const SaRange abr = s.backward_step(b, 1);
    EXPECT_EQ(abr.size(), 1u);
    EXPECT_EQ(s.sa()[abr.lo], 0u);
    EXPECT_TRUE(s.backward_step(s.full_range(), 3).empty());
    EXPECT_TRUE(s.backward_step(s.full_range(), 200).empty());
    auto aa = build_gsa({sym("AA")});
    EXPECT_EQ(aa.index.backward_step(aa.index.full_range(), 1).size(), 2u);
}

TEST(SuffixStructure, RandomTextsAgainstNaive) {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 200; ++round) {
        const std::size_t sigma = 1 + rng() % 4;
        std::vector<std::vector<symbol_t>> docs(1 + rng() % 3);
        std::size_t total = 0;
        for (auto& d : docs) {
            d.resize(1 + rng() % 20);
            for (auto& c : d) c = static_cast<symbol_t>(1 + rng() % sigma);
            total += d.size() + 1;
        }
        if (total > 64) docs.resize(1);
        const auto g = build_gsa(docs);
        const auto& s = g.index;
        const std::vector<symbol_t> text(s.text().begin(), s.text().end());
        ASSERT_EQ(std::vector<std::size_t>(s.sa().begin(), s.sa().end()), oracle::naive_suffix_array(text));
        for (std::size_t i = 0; i < text.size(); ++i) {
            ASSERT_EQ(s.isa()[s.sa()[i]], i);
            ASSERT_EQ(s.bwt()[i], text[(s.sa()[i] + text.size() - 1) % text.size()]);
            if (i > 0) {
                std::size_t h = 0;
                const std::size_t p = s.sa()[i - 1], q = s.sa()[i];
                while (p + h < text.size() && q + h < text.size() && text[p + h] == text[q + h]) ++h;
                ASSERT_EQ(s.lcp()[i], h);
            }
        }
        const LcpNavigator nav(s);
        for (int q = 0; q < 50; ++q) {
            std::vector<symbol_t> pat(1 + rng() % 4);
            for (auto& c : pat) c = static_cast<symbol_t>(1 + rng() % sigma);
            const SaRange r = s.find(pat);
            ASSERT_EQ(r.size(), oracle::count_occurrences(text, pat));
            ASSERT_EQ(s.locate(pat).size(), r.size());
            if (!r.empty()) {
                ASSERT_EQ(s.locate(pat), r);
            }
            for (symbol_t c = 0; c <= sigma + 1; ++c) {
                std::vector<symbol_t> ext{c};
                ext.insert(ext.end(), pat.begin(), pat.end());
                // the BWT is cyclic: the text's first suffix is preceded by the final separator
                const bool wraps = c == 0 && std::equal(pat.begin(), pat.end(), text.begin());
                ASSERT_EQ(s.backward_step(r, c).size(), oracle::count_occurrences(text, ext) + (wraps ? 1 : 0));
                if (!r.empty()) {
                    std::vector<symbol_t> right = pat;
                    right.push_back(c);
                    ASSERT_EQ(s.forward_step(r, pat.size(), c).size(), oracle::count_occurrences(text, right));
                }
            }
            // substring_range from an occurrence reproduces the same rows
            if (!r.empty()) {
                const std::size_t pos = s.sa()[r.lo];
                ASSERT_EQ(nav.substring_range(pos, pat.size()), r);
                ASSERT_EQ(nav.widen({r.lo, r.lo + 1}, pat.size()), r);
                if (r.size() > 1) {
                    ASSERT_GE(nav.common_prefix(r), pat.size());
                }
                ASSERT_LT(nav.parent_depth(r), pat.size());
            }
        }
    }
}
