#include <gtest/gtest.h>

#include <random>

#include "efgkit/efg.hpp"
#include "efgkit/wheeler.hpp"
#include "oracles.hpp"

using namespace efgkit;

namespace {

const Msa kMsaA({"ACGT", "ATGT"});

Efg msa_a_graph() { return build_efg(kMsaA, std::vector<Segment>{{1, 2}, {3, 4}}); }

oracle::Graph to_oracle(const Efg& g) {
    oracle::Graph o;
    for (const auto& v : g.nodes()) {
        o.label.push_back(v.label);
        o.block.push_back(v.block);
    }
    o.edges = g.edges();
    return o;
}

// Full path labels and their prefixes, straight from path enumeration.
Language oracle_language(const Efg& g) {
    Language l;
    l.prefixes.insert("");
    const auto o = to_oracle(g);
    for (const auto& p : oracle::all_paths(o)) {
        if (o.block[p.front()] != 0 || o.block[p.back()] + 1 != g.block_count()) continue;
        const std::string s = oracle::path_label(o, p);
        l.words.insert(s);
        for (std::size_t k = 1; k <= s.size(); ++k) l.prefixes.insert(s.substr(0, k));
    }
    return l;
}

// Atomicity straight from its definition: alpha is in P(v) iff
// P_min(v) <= alpha <= P_max(v) colexicographically, for every path label alpha.
bool atomic_by_definition(const Automaton& a) {
    const auto labels = path_labels(a, a.depth());
    auto colex_less = [](std::string x, std::string y) {
        std::reverse(x.begin(), x.end());
        std::reverse(y.begin(), y.end());
        return x < y;
    };
    std::vector<std::vector<std::string>> in(a.size());
    for (const auto& [s, v] : labels) in[v].push_back(s);
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (in[v].empty()) continue;
        const auto [lo, hi] = std::minmax_element(in[v].begin(), in[v].end(), colex_less);
        for (const auto& [s, u] : labels) {
            const bool inside = !colex_less(s, *lo) && !colex_less(*hi, s);
            if (inside != (u == v)) return false;
        }
    }
    return true;
}

std::vector<Efg> repeat_free_corpus(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<Efg> out;
    while (out.size() < count) {
        const std::size_t m = 1 + rng() % 4, n = 2 + rng() % 7;
        const bool gapped = rng() % 2;
        const Msa msa(oracle::random_msa(rng, m, n, rng() % 2 ? "ACGT" : "AC", 0.3, gapped ? 0.15 : 0.0));
        const auto r = segment_msa(msa, Mode::repeat_free, rng() % 2 ? Score::maxblocks : Score::minmaxlength);
        if (!r.segmentation) continue;
        out.push_back(build_efg(msa, *r.segmentation));
    }
    return out;
}

}  // namespace

TEST(EfgToNfa, MsaA) {
    const CharNfa nfa = efg_to_nfa(msa_a_graph());
    EXPECT_EQ(nfa.size(), 7u);
    std::size_t joins = 0;
    for (std::size_t u = 1; u < nfa.size(); ++u)
        for (std::size_t v : nfa.out[u])
            if (nfa.origin[u].first != nfa.origin[v].first) ++joins;
    EXPECT_EQ(joins, 2u);
    EXPECT_EQ(nfa.out[Automaton::kInitial].size(), 2u);
    EXPECT_EQ(nfa.edge_count(), 7u);
    std::size_t ends = 0, accepting = 0;
    for (const auto& s : nfa.states) {
        ends += s.block_end;
        accepting += s.accepting;
    }
    EXPECT_EQ(ends, 3u);
    EXPECT_EQ(accepting, 1u);
}

TEST(EfgToNfa, SingleNode) {
    const CharNfa nfa = efg_to_nfa(Efg({{0, "A"}}, {}));
    EXPECT_EQ(nfa.size(), 2u);
    EXPECT_EQ(nfa.edge_count(), 1u);
    EXPECT_TRUE(nfa.states[1].accepting);
}

TEST(EfgToNfa, OneStatePerCharacter) {
    for (const Efg& g : repeat_free_corpus(5, 40)) EXPECT_EQ(efg_to_nfa(g).size(), efg_stats(g).total_length + 1);
}

TEST(EfgToNfa, RejectsSemiRepeatFree) {
    const Efg semi({{0, "A"}, {0, "AC"}, {1, "G"}}, {{0, 2}, {1, 2}});
    ASSERT_TRUE(graph_is_semi_repeat_free(semi));
    try {
        efg_to_nfa(semi);
        FAIL() << "expected not_indexable";
    } catch (const not_indexable& e) {
        EXPECT_EQ(e.label(), "A");
    }
}

TEST(Determinize, MergesSharedFirstCharacter) {
    const Efg g({{0, "AC"}, {0, "AT"}}, {});
    const Dfa dfa = determinize(efg_to_nfa(g));
    ASSERT_EQ(dfa.size(), 4u);
    const std::size_t a = dfa.out[Automaton::kInitial].at(0);
    EXPECT_EQ(dfa.subsets[a].size(), 2u);
    EXPECT_EQ(dfa.out[a].size(), 2u);
    EXPECT_TRUE(dfa.deterministic());
}

TEST(Determinize, DeterministicInputIsUnchanged) {
    const CharNfa nfa = efg_to_nfa(build_efg(Msa({"ACGT"}), std::vector<Segment>{{1, 2}, {3, 4}}));
    const Dfa dfa = determinize(nfa);
    EXPECT_EQ(dfa.size(), nfa.size());
    EXPECT_EQ(dfa.edge_count(), nfa.edge_count());
    for (std::size_t v = 0; v < dfa.size(); ++v) {
        ASSERT_EQ(dfa.subsets[v].size(), 1u);
        EXPECT_EQ(dfa.states[v], nfa.states[dfa.subsets[v][0]]);
    }
}

TEST(Determinize, PreservesLanguage) {
    const CharNfa nfa = efg_to_nfa(msa_a_graph());
    const Dfa dfa = determinize(nfa);
    EXPECT_EQ(language(dfa, 4), language(nfa, 4));
    EXPECT_EQ(language(dfa, 4), oracle_language(msa_a_graph()));
}

namespace {

// initial -> 1 'A', 2 'B' (block ends) -> 3 'C' -> 4 'D', 5 'E' (block ends)
Dfa diamond(bool middle_ends_block) {
    Dfa d;
    d.add_state({});
    d.add_state({'A', true, false});
    d.add_state({'B', true, false});
    d.add_state({'C', middle_ends_block, false});
    d.add_state({'D', true, true});
    d.add_state({'E', true, true});
    for (auto [u, v] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}})
        d.add_edge(u, v);
    for (std::size_t v = 0; v < d.size(); ++v) d.subsets.push_back({v});
    return d;
}

}  // namespace

TEST(WheelerExpand, DistributesInEdgesAndDuplicatesOutEdges) {
    const WheelerAutomaton w = wheeler_expand(diamond(false));
    ASSERT_EQ(w.size(), 7u);
    std::size_t copies = 0, copy_out = 0;
    for (std::size_t v = 0; v < w.size(); ++v)
        if (w.dfa_state[v] == 3) {
            ++copies;
            copy_out += w.out[v].size();
        }
    EXPECT_EQ(copies, 2u);
    EXPECT_EQ(copy_out, 4u);
    EXPECT_TRUE(w.deterministic());
    EXPECT_EQ(language(w, 3), language(diamond(false), 3));
}

TEST(WheelerExpand, LeavesBlockEndsAlone) {
    const WheelerAutomaton w = wheeler_expand(diamond(true));
    EXPECT_EQ(w.size(), 6u);
    EXPECT_EQ(w.edge_count(), 6u);
}

TEST(WheelerExpand, RejectsCycles) {
    Dfa d = diamond(false);
    d.add_edge(4, 3);
    EXPECT_THROW(wheeler_expand(d), invalid_input);
}

TEST(WheelerSort, InitialStateFirstAndColexOrder) {
    WheelerAutomaton w;
    w.add_state({});
    w.add_state({'C', false, false});
    w.add_state({'B', false, true});
    w.add_state({'A', false, true});
    w.add_edge(0, 1);
    w.add_edge(1, 2);
    w.add_edge(1, 3);
    w.dfa_state = {0, 1, 2, 3};
    const WheelerAutomaton s = wheeler_sort(w);
    EXPECT_EQ(s.p_min(0), "");
    // "CA" < "CB" because "AC" < "BC"
    EXPECT_EQ(s.p_min(1), "CA");
    EXPECT_EQ(s.p_min(2), "CB");
    EXPECT_EQ(s.p_min(3), "C");
    EXPECT_FALSE(verify_wheeler(s, 2));
}

TEST(WheelerSort, TieIsAnError) {
    WheelerAutomaton w;
    w.add_state({});
    w.add_state({'A', false, false});
    w.add_state({'A', false, false});
    w.add_edge(0, 1);
    w.add_edge(0, 2);
    w.dfa_state = {0, 1, 2};
    EXPECT_THROW(wheeler_sort(w), invalid_input);
}

TEST(WheelerPipeline, MsaA) {
    const auto p = wheeler_pipeline(msa_a_graph());
    const auto& w = p.automaton;
    EXPECT_FALSE(verify_wheeler(w, w.depth()));
    EXPECT_TRUE(atomic_by_definition(w));
    EXPECT_EQ(language(w, 4), oracle_language(msa_a_graph()));
    // GT is entered from both block-1 ends, so G is copied
    EXPECT_EQ(w.size(), 7u);
    EXPECT_LE(w.size(), p.size_bound());
}

TEST(VerifyWheeler, SwappedStatesAreCaught) {
    auto w = wheeler_pipeline(msa_a_graph()).automaton;
    w.swap_states(1, 2);
    const auto bad = verify_wheeler(w, w.depth());
    ASSERT_TRUE(bad);
    EXPECT_TRUE(bad->state == 1 || bad->state == 2);
}

TEST(VerifyWheeler, SingleChain) {
    const auto p = wheeler_pipeline(Efg({{0, "GATTACA"}}, {}));
    EXPECT_EQ(p.automaton.size(), 8u);
    EXPECT_FALSE(verify_wheeler(p.automaton, 7));
}

TEST(VerifyWheeler, NondeterminismIsCaught) {
    WheelerAutomaton w;
    w.add_state({});
    w.add_state({'A', false, false});
    w.add_state({'A', false, false});
    w.add_edge(0, 1);
    w.add_edge(0, 2);
    const auto bad = verify_wheeler(w, 1);
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->state, 0u);
}

TEST(WheelerPipeline, RandomRepeatFreeGraphs) {
    for (const Efg& g : repeat_free_corpus(17, 60)) {
        const auto p = wheeler_pipeline(g);
        const auto& w = p.automaton;
        const std::size_t depth = p.nfa.depth();
        ASSERT_EQ(w.depth(), depth);
        const auto bad = verify_wheeler(w, depth);
        EXPECT_FALSE(bad) << serialize_efg(g) << bad->reason;
        EXPECT_TRUE(atomic_by_definition(w)) << serialize_efg(g);
        EXPECT_TRUE(w.deterministic());
        EXPECT_LE(w.size(), p.size_bound()) << serialize_efg(g);
        const Language l = oracle_language(g);
        EXPECT_EQ(language(p.nfa, depth), l);
        EXPECT_EQ(language(p.dfa, depth), l);
        EXPECT_EQ(language(w, depth), l);
    }
}

TEST(WheelerIo, JsonAndDot) {
    const auto w = wheeler_pipeline(msa_a_graph()).automaton;
    const auto j = nlohmann::json::parse(wheeler_to_json(w));
    EXPECT_EQ(j["states"].size(), w.size());
    EXPECT_EQ(j["edges"].size(), w.edge_count());
    EXPECT_EQ(j["states"][0]["p_min"], "");
    for (const auto& e : j["edges"]) EXPECT_EQ(e.size(), 3u);
    const std::string dot = wheeler_to_dot(w);
    EXPECT_NE(dot.find("digraph wheeler"), std::string::npos);
    EXPECT_NE(dot.find("s0 -> "), std::string::npos);
}
