// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "efgkit/efgkit.hpp"
#include "oracles.hpp"

using namespace efgkit;

namespace {

// Pinned limits.
constexpr double kValidityLimit = 60.0;
constexpr double kIndexLimit = 120.0;
constexpr double kOvLimit = 60.0;
constexpr double kScaleBuildLimit = 30.0;
constexpr double kScaleQueryLimit = 5.0;
// Wall-clock budget for enumerating every small binary MSA; EFGKIT_ENUM_BUDGET
// (seconds, or "unlimited") overrides it.
constexpr double kEnumerationBudget = 420.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Report {
    bool pass = true;
    std::ostringstream detail;

    // Records a mismatch; keeps the first few descriptions.
    void fail(const std::string& what) {
        if (failed++ < 3) detail << " [" << what << "]";
        pass = false;
    }
    std::size_t failed = 0;
};

int failures = 0;

void emit(int id, const std::string& name, const Report& r, double secs) {
    std::printf("%s %d %s:%s (%.2f s)\n", r.pass ? "PASS" : "FAIL", id, name.c_str(), r.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += !r.pass;
}

oracle::Mode to_oracle(Mode m) { return m == Mode::repeat_free ? oracle::Mode::repeat_free : oracle::Mode::semi_repeat_free; }

oracle::Graph to_oracle(const Efg& g) {
    oracle::Graph o;
    for (const auto& v : g.nodes()) {
        o.label.push_back(v.label);
        o.block.push_back(v.block);
    }
    o.edges = g.edges();
    return o;
}

std::string show(const std::vector<std::string>& rows) {
    std::string s;
    for (const auto& r : rows) s += (s.empty() ? "" : "/") + r;
    return s;
}

std::string show(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "-"; }

std::optional<std::size_t> final_score(const SegmentationResult& r) {
    if (!r.segmentation) return std::nullopt;
    return r.segmentation->score;
}

// ---------------------------------------------------------------------------
// 1

void compare_tables(const Msa& msa, const ValidityTable& t, Mode mode, const char* what, Report& rep) {
    const auto& rows = msa.row_strings();
    const auto ref = oracle::brute_tables(rows, to_oracle(mode));
    const std::size_t n = msa.columns();
    // tables straight from the library predicate as well
    for (std::size_t j = 0; j < n; ++j) {
        std::optional<std::size_t> lib;
        for (std::size_t y = j + 1; y <= n && !lib; ++y)
            if (is_valid_segment(msa, j + 1, y, mode)) lib = y;
        if (t.f[j] != ref.f[j] || lib != ref.f[j])
            rep.fail(std::string(what) + " f(" + std::to_string(j) + ") " + show(rows));
    }
    for (std::size_t j = 1; j <= n; ++j) {
        std::optional<std::size_t> lib;
        for (std::size_t jp = j; jp-- > 0 && !lib;)
            if (is_valid_segment(msa, jp + 1, j, mode)) lib = jp;
        if (t.v[j] != ref.v[j] || lib != ref.v[j])
            rep.fail(std::string(what) + " v(" + std::to_string(j) + ") " + show(rows));
    }
}

void criterion_validity() {
    const auto t0 = Clock::now();
    Report rep;
    std::mt19937_64 rng(101);
    for (int k = 0; k < 500; ++k) {
        const Msa msa(oracle::random_msa(rng, 1 + rng() % 5, 1 + rng() % 10, "ACGT", 0.25, 0.0));
        const auto t = compute_v_f_gapless(msa);
        compare_tables(msa, t, Mode::repeat_free, "gapless", rep);
        compare_tables(msa, t, Mode::semi_repeat_free, "gapless/semi", rep);
        compare_tables(msa, compute_f_elastic(msa), Mode::semi_repeat_free, "elastic on gapless", rep);
    }
    for (int k = 0; k < 500; ++k) {
        const Msa msa(oracle::random_msa(rng, 1 + rng() % 5, 1 + rng() % 10, "ACGT", 0.25, 0.2));
        compare_tables(msa, compute_f_elastic(msa), Mode::semi_repeat_free, "elastic", rep);
    }
    const double secs = seconds_since(t0);
    if (secs >= kValidityLimit) rep.fail("over time limit");
    rep.detail << " 500 gapless + 500 gapped MSAs";
    emit(1, "validity tables vs brute force", rep, secs);
}

// ---------------------------------------------------------------------------
// 2

void check_segmenters(const std::vector<std::string>& rows, Report& rep) {
    const Msa msa(rows);
    const auto best = oracle::exhaustive_segmentation(rows, oracle::Mode::repeat_free);
    const auto t = compute_v_f_gapless(msa);
    const auto mb = final_score(maxblocks(t));
    const auto fj = final_score(minmaxlength_fj(t));
    const auto lin = final_score(minmaxlength_linear_gapless(t));
    const auto el = final_score(elastic_repeat_free_minmax(msa));
    if (mb != best.maxblocks) rep.fail("maxblocks " + show(rows));
    if (fj != best.minmaxlength) rep.fail("fj " + show(rows));
    if (lin != best.minmaxlength) rep.fail("linear " + show(rows));
    if (el != best.minmaxlength) rep.fail("elastic " + show(rows));
}

void check_gapped_segmenters(const std::vector<std::string>& rows, Report& rep) {
    const Msa msa(rows);
    const auto t = compute_f_elastic(msa);
    for (Mode mode : {Mode::repeat_free, Mode::semi_repeat_free}) {
        const auto best = oracle::exhaustive_segmentation(rows, to_oracle(mode));
        if (mode == Mode::semi_repeat_free) {
            if (final_score(maxblocks(t)) != best.maxblocks) rep.fail("maxblocks semi " + show(rows));
            if (final_score(minmaxlength_fj(t)) != best.minmaxlength) rep.fail("fj semi " + show(rows));
        } else {
            if (final_score(elastic_repeat_free_maxblocks(msa)) != best.maxblocks) rep.fail("maxblocks rf " + show(rows));
            if (final_score(elastic_repeat_free_minmax(msa)) != best.minmaxlength) rep.fail("elastic " + show(rows));
        }
    }
}

double enumeration_budget() {
    const char* env = std::getenv("EFGKIT_ENUM_BUDGET");
    if (!env) return kEnumerationBudget;
    if (std::string(env) == "unlimited") return 1e300;
    return std::strtod(env, nullptr);
}

void criterion_segmentation() {
    const auto t0 = Clock::now();
    Report rep;
    const double budget = enumeration_budget();

    // Shapes in order of growing m*n, so whatever the budget allows is a
    // complete prefix of small shapes.
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (std::size_t m = 1; m <= 4; ++m)
        for (std::size_t n = 1; n <= 9; ++n) shapes.push_back({m, n});
    std::stable_sort(shapes.begin(), shapes.end(),
                     [](auto a, auto b) { return a.first * a.second < b.first * b.second; });
    std::uint64_t total = 0, done = 0;
    for (auto [m, n] : shapes) total += std::uint64_t{1} << (m * n);

    std::size_t complete_shapes = 0;
    std::string last_complete = "none";
    bool out_of_budget = false;
    for (auto [m, n] : shapes) {
        const std::uint64_t count = std::uint64_t{1} << (m * n);
        std::vector<std::string> rows(m, std::string(n, 'A'));
        for (std::uint64_t code = 0; code < count; ++code) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t c = 0; c < n; ++c) rows[i][c] = (code >> (i * n + c)) & 1u ? 'C' : 'A';
            check_segmenters(rows, rep);
            ++done;
            if ((code & 1023u) == 1023u && seconds_since(t0) > budget) {
                out_of_budget = true;
                break;
            }
        }
        if (out_of_budget) break;
        ++complete_shapes;
        last_complete = "m=" + std::to_string(m) + ",n=" + std::to_string(n);
    }

    std::mt19937_64 rng(202);
    for (int k = 0; k < 300; ++k)
        check_gapped_segmenters(oracle::random_msa(rng, 1 + rng() % 4, 1 + rng() % 9, rng() % 2 ? "AC" : "ACGT", 0.3, 0.2),
                                rep);

    if (out_of_budget) rep.fail("enumeration incomplete within budget");
    rep.detail << " binary gapless MSAs checked " << done << " of " << total << ", " << complete_shapes << "/"
               << shapes.size() << " shapes complete (last " << last_complete << "); 300 gapped";
    emit(2, "segmentation optimality vs exhaustive partitions", rep, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 3

void criterion_linear_identity() {
    const auto t0 = Clock::now();
    Report rep;
    std::mt19937_64 rng(303);
    for (int k = 0; k < 200; ++k) {
        const auto rows =
            oracle::random_msa(rng, 1 + rng() % 8, 1 + rng() % 60, k % 3 == 0 ? "AC" : "ACGT", k % 2 ? 0.1 : 0.3, 0.0);
        const auto t = compute_v_f_gapless(Msa(rows));
        if (minmaxlength_linear_gapless(t).trace.score != minmaxlength_fj(t).trace.score) rep.fail(show(rows));
    }
    rep.detail << " 200 gapless instances";
    emit(3, "linear and fj score arrays identical", rep, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 4

// Every substring of length <= max_len of every path label, by extending
// character by character from each position of each node.
std::set<std::string> bounded_substrings(const Efg& g, std::size_t max_len) {
    std::vector<std::vector<std::size_t>> out(g.node_count());
    for (const auto& [a, b] : g.edges()) out[a].push_back(b);
    std::set<std::string> seen;
    std::function<void(std::size_t, std::size_t, std::string&)> walk = [&](std::size_t v, std::size_t k, std::string& s) {
        const std::string& label = g.node(v).label;
        if (k == label.size()) {
            for (std::size_t w : out[v]) walk(w, 0, s);
            return;
        }
        if (s.size() == max_len) return;
        s.push_back(label[k]);
        seen.insert(s);
        walk(v, k + 1, s);
        s.pop_back();
    };
    for (std::size_t v = 0; v < g.node_count(); ++v)
        for (std::size_t k = 0; k < g.node(v).label.size(); ++k) {
            std::string s;
            walk(v, k, s);
        }
    return seen;
}

void criterion_index_agreement() {
    const auto t0 = Clock::now();
    Report rep;
    std::mt19937_64 rng(404);
    std::size_t graphs = 0, patterns = 0, index_builds = 0;
    while (graphs < 200) {
        const std::size_t m = 2 + rng() % 5, n = 4 + rng() % 27;
        const bool gapped = rng() % 2;
        const auto rows = oracle::random_msa(rng, m, n, "ACGT", 0.25, gapped ? 0.15 : 0.0);
        const Mode mode = rng() % 2 ? Mode::repeat_free : Mode::semi_repeat_free;
        const Msa msa(rows);
        const auto r = segment_msa(msa, mode, rng() % 2 ? Score::maxblocks : Score::minmaxlength);
        if (!r.segmentation) continue;
        const Efg g = build_efg(msa, *r.segmentation);
        ++graphs;

        std::vector<std::unique_ptr<GraphIndex>> indexes;
        for (IndexKind kind : {IndexKind::classic, IndexKind::ebwt, IndexKind::triple}) {
            try {
                indexes.push_back(build_index(g, kind));
            } catch (const not_indexable&) {
                if (kind == IndexKind::triple || mode == Mode::repeat_free) rep.fail("refused " + std::string(to_string(kind)) + " " + show(rows));
            }
        }
        index_builds += indexes.size();

        const auto positives = bounded_substrings(g, 12);
        std::vector<std::string> negatives;
        const std::string sigma = "ACGT";
        for (std::size_t attempt = 0; negatives.size() < 200 && attempt < 100000; ++attempt) {
            std::string q(1 + rng() % 12, 'A');
            for (auto& c : q) c = sigma[rng() % 4];
            if (!positives.count(q)) negatives.push_back(q);
        }
        if (negatives.size() < 200) rep.fail("too few negatives " + show(rows));

        const OnlineMatcher online(g);
        auto check = [&](const std::string& q, bool expected) {
            ++patterns;
            if (online.occurs(q) != expected) rep.fail("online '" + q + "' " + show(rows));
            for (const auto& idx : indexes)
                if (idx->occurs(q) != expected) rep.fail(std::string(to_string(idx->kind())) + " '" + q + "' " + show(rows));
        };
        for (const auto& q : positives) check(q, true);
        for (const auto& q : negatives) check(q, false);
    }
    const double secs = seconds_since(t0);
    if (secs >= kIndexLimit) rep.fail("over time limit");
    rep.detail << " " << graphs << " graphs, " << index_builds << " indexes, " << patterns << " patterns";
    emit(4, "index agreement with online matching", rep, secs);
}

// ---------------------------------------------------------------------------
// 5

void criterion_msa_b() {
    const auto t0 = Clock::now();
    Report rep;
    const std::vector<std::string> rows{"ATT", "-TT", "ACG", "AC-"};
    const Msa msa(rows);
    if (!is_valid_segment(msa, 2, 3, Mode::semi_repeat_free)) rep.fail("[2..3] should be valid");
    if (is_valid_segment(msa, 1, 3, Mode::semi_repeat_free)) rep.fail("[1..3] should be invalid");
    const auto t = compute_f_elastic(msa);
    if (t.f[0]) rep.fail("f(0) should be undefined");
    if (t.f[1] != std::optional<std::size_t>(3)) rep.fail("f(1) should be 3");
    const auto ref = oracle::brute_tables(rows, oracle::Mode::semi_repeat_free);
    if (ref.f[0] || ref.f[1] != std::optional<std::size_t>(3)) rep.fail("brute-force table disagrees");
    rep.detail << " f(0)=" << show(t.f[0]) << " f(1)=" << show(t.f[1]);
    emit(5, "MSA-B semi-repeat-free table", rep, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 6

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

void criterion_wheeler() {
    const auto t0 = Clock::now();
    Report rep;
    std::mt19937_64 rng(606);
    std::size_t graphs = 0, largest = 0;
    while (graphs < 100) {
        const std::size_t m = 1 + rng() % 4, n = 2 + rng() % 7;
        const bool gapped = rng() % 2;
        const Msa msa(oracle::random_msa(rng, m, n, rng() % 2 ? "ACGT" : "AC", 0.3, gapped ? 0.15 : 0.0));
        const auto r = segment_msa(msa, Mode::repeat_free, rng() % 2 ? Score::maxblocks : Score::minmaxlength);
        if (!r.segmentation) continue;
        const Efg g = build_efg(msa, *r.segmentation);
        ++graphs;
        const auto p = wheeler_pipeline(g);
        const auto& w = p.automaton;
        const std::size_t depth = p.nfa.depth();
        const std::string where = show(msa.row_strings());
        if (const auto bad = verify_wheeler(w, depth)) rep.fail("not Wheeler: " + bad->reason + " " + where);
        if (w.size() > p.size_bound()) rep.fail("size bound " + where);
        largest = std::max(largest, w.size());
        const Language l = oracle_language(g);
        const Language nfa = language(p.nfa, depth);
        if (nfa != l) rep.fail("NFA language " + where);
        if (language(p.dfa, depth) != nfa) rep.fail("DFA language " + where);
        if (language(w, depth) != nfa) rep.fail("Wheeler language " + where);
    }
    rep.detail << " " << graphs << " graphs, largest automaton " << largest << " states";
    emit(6, "Wheeler pipeline", rep, seconds_since(t0));
}

// ---------------------------------------------------------------------------
// 7

std::vector<std::string> all_vectors(std::size_t d) {
    std::vector<std::string> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        std::string v;
        for (std::size_t h = 0; h < d; ++h) v += (mask >> (d - 1 - h)) & 1 ? '1' : '0';
        out.push_back(v);
    }
    return out;
}

std::vector<std::vector<std::string>> subsets(const std::vector<std::string>& pool, std::size_t n) {
    std::vector<std::vector<std::string>> out;
    if (n > pool.size()) return out;
    std::vector<std::size_t> pick(n);
    for (std::size_t k = 0; k < n; ++k) pick[k] = k;
    while (true) {
        std::vector<std::string> s;
        for (std::size_t k : pick) s.push_back(pool[k]);
        out.push_back(std::move(s));
        std::size_t k = n;
        while (k > 0 && pick[k - 1] == pool.size() - n + k - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t t = k; t < n; ++t) pick[t] = pick[t - 1] + 1;
    }
    return out;
}

void check_ov(const OvGraph& og, const OnlineMatcher& matcher, const std::vector<std::string>& x,
              const std::vector<std::string>& y, Report& rep) {
    const bool expected = ov_has_orthogonal_pair(x, y);
    const auto path = matcher.match(build_ov_query(x));
    if (path.has_value() != expected) rep.fail("match/orthogonal " + serialize_ov_instance({x, y}));
    if (path)
        if (const auto bad = check_row_confinement(og, x, *path)) rep.fail(*bad);
}

void criterion_ov() {
    const auto t0 = Clock::now();
    Report rep;
    std::size_t exhaustive = 0;
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto pool = all_vectors(d);
        for (std::size_t n = 1; n <= 4; ++n) {
            const auto sets = subsets(pool, n);
            for (const auto& y : sets) {
                const OvGraph og = build_ov_graph(y);
                const OnlineMatcher matcher(og.graph);
                for (const auto& x : sets) {
                    check_ov(og, matcher, x, y, rep);
                    ++exhaustive;
                }
            }
        }
    }
    std::mt19937_64 rng(707);
    std::size_t yes = 0;
    for (int k = 0; k < 300; ++k) {
        const std::size_t n = 1 + rng() % 8, d = 1 + rng() % 8;
        std::vector<std::string> x(n), y(n);
        for (auto* side : {&x, &y})
            for (auto& v : *side)
                for (std::size_t h = 0; h < d; ++h) v += rng() % 2 ? '1' : '0';
        const OvGraph og = build_ov_graph(y);
        check_ov(og, OnlineMatcher(og.graph), x, y, rep);
        yes += ov_has_orthogonal_pair(x, y);
    }
    const double secs = seconds_since(t0);
    if (secs >= kOvLimit) rep.fail("over time limit");
    rep.detail << " " << exhaustive << " exhaustive instances (sets), 300 random (" << yes << " with a pair)";
    emit(7, "OV reduction equivalence", rep, secs);
}

// ---------------------------------------------------------------------------
// 8

void criterion_scale() {
    const auto t0 = Clock::now();
    Report rep;
    std::mt19937_64 rng(808);
    const auto rows = oracle::random_msa(rng, 20, 10000, "ACGT", 0.1, 0.0);
    const Msa msa(rows);
    const auto r = segment_msa(msa, Mode::repeat_free, Score::minmaxlength);
    if (!r.segmentation) {
        rep.fail("no segmentation");
        emit(8, "scale smoke", rep, seconds_since(t0));
        return;
    }
    const Efg g = build_efg(msa, *r.segmentation);
    const auto index = build_index(g, IndexKind::triple);
    const double build_secs = seconds_since(t0);
    if (build_secs >= kScaleBuildLimit) rep.fail("segment+index over time limit");

    std::vector<std::string> patterns;
    for (std::size_t k = 0; k < 10000; ++k) {
        if (k % 2 == 0) {
            const auto& row = rows[rng() % rows.size()];
            patterns.push_back(row.substr(rng() % (row.size() - 50 + 1), 50));
        } else {
            std::string q(50, 'A');
            for (auto& c : q) c = "ACGT"[rng() % 4];
            patterns.push_back(q);
        }
    }
    const auto q0 = Clock::now();
    std::size_t hits = 0, row_misses = 0;
    for (std::size_t k = 0; k < patterns.size(); ++k) {
        const bool hit = index->occurs(patterns[k]);
        hits += hit;
        row_misses += k % 2 == 0 && !hit;
    }
    const double query_secs = seconds_since(q0);
    if (query_secs >= kScaleQueryLimit) rep.fail("queries over time limit");
    if (row_misses) rep.fail(std::to_string(row_misses) + " row substrings not found");
    char buf[160];
    std::snprintf(buf, sizeof buf, " %zu blocks, %zu nodes; build %.2f s, 10000 queries %.2f s, %zu hits",
                  g.block_count(), g.node_count(), build_secs, query_secs, hits);
    rep.detail << buf;
    emit(8, "scale smoke", rep, seconds_since(t0));
}

}  // namespace

int main() {
    criterion_validity();
    criterion_segmentation();
    criterion_linear_identity();
    criterion_index_agreement();
    criterion_msa_b();
    criterion_wheeler();
    criterion_ov();
    criterion_scale();
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
