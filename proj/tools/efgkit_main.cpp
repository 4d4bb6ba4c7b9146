// efgkit: segment alignments, build and index founder graphs, query them.
//
// Exit codes: 0 ok, 2 input error, 3 infeasible under --strict,
// 4 verification failure.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "efgkit/efgkit.hpp"

using namespace efgkit;

namespace {

constexpr int kOk = 0, kInputError = 2, kInfeasible = 3, kVerifyFailed = 4;

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct exit_code {
    int code;
};

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content) || !out.flush()) throw io_error("cannot write '" + path + "'");
}

bool is_index_file(const std::string& bytes) { return bytes.compare(0, kIndexMagic.size(), kIndexMagic) == 0; }

struct Config {
    std::string mode = "repeat-free";
    std::string score = "maxblocks";
    std::string engine = "auto";
    std::string index = "triple";
    std::string format = "json";
    std::string out;
    bool strict = false;
    bool any_alphabet = false;
    bool verify = false;
    std::uint64_t seed = 1;
    std::size_t samples = 500;
    std::vector<std::size_t> random_shape;
    std::string input, second;
};

Msa load_msa(const Config& c) {
    FastaOptions opts;
    opts.any_alphabet = c.any_alphabet;
    return parse_msa(read_input(c.input), opts);
}

Segmentation segment_or_fallback(const Msa& msa, const Config& c) {
    const Mode mode = parse_mode(c.mode);
    const Score score = parse_score(c.score);
    const auto r = segment_msa(msa, mode, score, parse_engine(c.engine));
    if (r.segmentation) return *r.segmentation;
    if (c.strict) {
        std::cerr << "error: no valid " << to_string(mode) << " segmentation exists\n";
        throw exit_code{kInfeasible};
    }
    std::cerr << "notice: no valid " << to_string(mode) << " segmentation exists; falling back to a single block [1.."
              << msa.columns() << "]\n";
    Segmentation seg;
    seg.intervals = {{1, msa.columns()}};
    seg.mode = mode;
    seg.score_kind = score;
    seg.score = seg.recomputed_score();
    return seg;
}

std::string segmentation_stats(const Msa& msa, const Segmentation& seg) {
    std::ostringstream os;
    os << "blocks: " << seg.blocks() << "\nmax length: " << seg.max_length() << "\nheights:";
    for (const auto& s : seg.intervals) {
        std::set<std::string> spells;
        for (std::size_t i = 0; i < msa.rows(); ++i) spells.insert(msa.spell_range(i, s.first, s.last));
        spells.erase("");
        os << ' ' << spells.size();
    }
    os << '\n';
    return os.str();
}

int cmd_segment(const Config& c) {
    const Msa msa = load_msa(c);
    const Segmentation seg = segment_or_fallback(msa, c);
    write_output(c.out, serialize_segmentation(seg));
    (c.out.empty() ? std::cerr : std::cout) << segmentation_stats(msa, seg);
    return kOk;
}

int cmd_build(const Config& c) {
    const Msa msa = load_msa(c);
    const Segmentation seg = c.second.empty() ? segment_or_fallback(msa, c) : parse_segmentation(read_input(c.second));
    const Efg g = build_efg(msa, seg);
    spdlog::info("built graph: {} blocks, {} nodes, {} edges", g.block_count(), g.node_count(), g.edges().size());
    if (c.format == "dot") write_output(c.out, to_dot(g));
    else if (c.format == "gfa") write_output(c.out, to_gfa(g));
    else write_output(c.out, serialize_efg(g));
    return kOk;
}

int cmd_index(const Config& c) {
    const Efg g = parse_efg(read_input(c.input));
    const auto index = build_index(g, parse_index_kind(c.index));
    write_output(c.out, serialize_index(*index));
    spdlog::info("{} index over {} nodes written", c.index, g.node_count());
    return kOk;
}

std::vector<std::string> read_patterns(const std::string& path) {
    std::vector<std::string> out;
    std::istringstream in(read_input(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

int cmd_query(const Config& c) {
    const std::string bytes = read_input(c.input);
    const auto patterns = read_patterns(c.second);
    std::string out;
    if (is_index_file(bytes)) {
        const auto index = load_index(bytes);
        for (const auto& p : patterns) out += index->occurs(p) ? "1\n" : "0\n";
    } else {
        const Efg g = parse_efg(bytes);
        spdlog::info("no index given; matching {} patterns online", patterns.size());
        const OnlineMatcher matcher(g);
        for (const auto& p : patterns) out += matcher.occurs(p) ? "1\n" : "0\n";
    }
    write_output(c.out, out);
    return kOk;
}

// Substrings of random walks plus random strings over the graph alphabet.
std::vector<std::string> sample_patterns(const Efg& g, std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> out;
    if (g.node_count() == 0) return out;
    std::string symbols;
    for (const auto& v : g.nodes()) symbols += v.label;
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    while (out.size() < count) {
        const std::size_t len = 1 + rng() % 12;
        std::string p;
        if (out.size() % 2 == 0) {
            std::size_t v = rng() % g.node_count();
            std::size_t off = rng() % g.label(v).size();
            while (p.size() < len) {
                p += g.label(v)[off++];
                if (off < g.label(v).size()) continue;
                if (g.out(v).empty()) break;
                v = g.out(v)[rng() % g.out(v).size()];
                off = 0;
            }
        } else {
            for (std::size_t k = 0; k < len; ++k) p += symbols[rng() % symbols.size()];
        }
        out.push_back(std::move(p));
    }
    return out;
}

int check_agreement(const GraphIndex& index, const std::vector<std::string>& patterns) {
    const OnlineMatcher matcher(index.graph());
    for (const auto& p : patterns)
        if (index.occurs(p) != matcher.occurs(p)) {
            std::cerr << "verification failed: " << to_string(index.kind()) << " index says " << index.occurs(p)
                      << " for pattern '" << p << "', online matching says " << matcher.occurs(p) << '\n';
            return kVerifyFailed;
        }
    std::cout << to_string(index.kind()) << " index agrees with online matching on " << patterns.size() << " patterns\n";
    return kOk;
}

int cmd_verify(const Config& c) {
    const std::string bytes = read_input(c.input);
    if (is_index_file(bytes)) {
        const auto index = load_index(bytes);
        std::cout << "index file consistent (" << to_string(index->kind()) << ", " << index->graph().node_count()
                  << " nodes)\n";
        return check_agreement(*index, sample_patterns(index->graph(), c.seed, c.samples));
    }
    const Efg g = parse_efg(bytes);
    const EfgStats s = efg_stats(g);
    std::cout << "graph invariants hold: " << s.blocks << " blocks, " << g.node_count() << " nodes, " << s.edge_count
              << " edges, N=" << s.total_length << ", H=" << s.max_height << '\n';
    for (Mode m : {Mode::repeat_free, Mode::semi_repeat_free}) {
        const auto w = find_repeat(g, m);
        std::cout << to_string(m) << ": " << (w ? "no (" + w->describe(g) + ")" : std::string("yes")) << '\n';
    }
    const auto patterns = sample_patterns(g, c.seed, c.samples);
    for (IndexKind k : {IndexKind::classic, IndexKind::ebwt, IndexKind::triple}) {
        std::unique_ptr<GraphIndex> index;
        try {
            index = build_index(g, k);
        } catch (const not_indexable&) {
            continue;
        }
        if (const int rc = check_agreement(*index, patterns); rc != kOk) return rc;
    }
    return kOk;
}

int cmd_wheeler(const Config& c) {
    const Efg g = parse_efg(read_input(c.input));
    const auto p = wheeler_pipeline(g);
    std::cerr << "states: nfa " << p.nfa.size() << ", dfa " << p.dfa.size() << ", wheeler " << p.automaton.size()
              << " (bound " << p.size_bound() << ")\n";
    if (c.verify) {
        if (const auto bad = verify_wheeler(p.automaton, p.automaton.depth())) {
            std::cerr << "verification failed: state " << bad->state << ", label '" << bad->label << "': " << bad->reason
                      << '\n';
            return kVerifyFailed;
        }
        std::cerr << "Wheeler order verified\n";
    }
    write_output(c.out, c.format == "dot" ? wheeler_to_dot(p.automaton) : wheeler_to_json(p.automaton));
    return kOk;
}

int cmd_ovgadget(const Config& c) {
    OvInstance ov;
    if (!c.random_shape.empty()) {
        std::mt19937_64 rng(c.seed);
        const std::size_t n = c.random_shape.at(0), d = c.random_shape.at(1);
        if (n == 0 || d == 0) throw invalid_input("--random needs positive n and d");
        for (auto* set : {&ov.x, &ov.y})
            for (std::size_t i = 0; i < n; ++i) {
                std::string v;
                for (std::size_t h = 0; h < d; ++h) v += rng() % 2 ? '1' : '0';
                set->push_back(std::move(v));
            }
        std::cerr << serialize_ov_instance(ov);
    } else if (!c.input.empty()) {
        ov = parse_ov_instance(read_input(c.input));
    } else {
        throw invalid_input("give an OV instance file or --random N D");
    }
    const OvGraph og = build_ov_graph(ov.y);
    write_output(c.out, serialize_efg(og.graph));
    std::cout << build_ov_query(ov.x) << '\n';
    spdlog::info("orthogonal pair exists: {}", ov_has_orthogonal_pair(ov.x, ov.y));
    return kOk;
}

void setup_logging() {
    auto logger = spdlog::stderr_color_st("efgkit");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("EFGKIT_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Founder graphs from multiple sequence alignments", "efgkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "efgkit 1.0");
    Config c;

    const std::vector<std::string> modes{"repeat-free", "semi-repeat-free"}, scores{"maxblocks", "minmaxlength"},
        engines{"auto", "gapless-linear", "elastic"}, kinds{"classic", "ebwt", "triple"};
    auto segmentation_flags = [&](CLI::App* s) {
        s->add_option("--mode", c.mode, "Validity condition for blocks")->check(CLI::IsMember(modes))->capture_default_str();
        s->add_option("--score", c.score, "Objective to optimise")->check(CLI::IsMember(scores))->capture_default_str();
        s->add_option("--engine", c.engine, "Segmentation algorithm family")->check(CLI::IsMember(engines))->capture_default_str();
        s->add_flag("--strict", c.strict, "Exit with code 3 instead of falling back to a single block");
        s->add_flag("--any-alphabet", c.any_alphabet, "Accept any printable symbol, not only ACGTN");
    };

    auto* segment = app.add_subcommand("segment", "Compute an optimal segmentation of an aligned FASTA file");
    segment->add_option("msa", c.input, "Aligned FASTA file ('-' for stdin)")->required();
    segmentation_flags(segment);
    segment->add_option("--out", c.out, "Segmentation JSON output (default stdout, statistics then go to stderr)");

    auto* build = app.add_subcommand("build", "Build the founder graph of an aligned FASTA file");
    build->add_option("msa", c.input, "Aligned FASTA file ('-' for stdin)")->required();
    build->add_option("segmentation", c.second, "Segmentation JSON (computed when omitted)");
    segmentation_flags(build);
    build->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "dot", "gfa"}))->capture_default_str();
    build->add_option("--out", c.out, "Output file (default stdout)");

    auto* index = app.add_subcommand("index", "Index a founder graph");
    index->add_option("graph", c.input, "Graph JSON file")->required();
    index->add_option("--index", c.index, "Index kind")->check(CLI::IsMember(kinds))->capture_default_str();
    index->add_option("--out", c.out, "Index file")->required();

    auto* query = app.add_subcommand("query", "Report for each pattern whether it occurs in the graph");
    query->add_option("target", c.input, "Index file, or graph JSON for online matching")->required();
    query->add_option("patterns", c.second, "Patterns, one per line ('-' for stdin)")->required();
    query->add_option("--out", c.out, "Answers, one 1/0 per line (default stdout)");

    auto* verify = app.add_subcommand("verify", "Check a graph or index file and compare indexes with online matching");
    verify->add_option("file", c.input, "Index file or graph JSON")->required();
    verify->add_option("--seed", c.seed, "Seed for the sampled patterns")->capture_default_str();
    verify->add_option("--samples", c.samples, "Number of sampled patterns")->capture_default_str();

    auto* wheeler = app.add_subcommand("wheeler", "Convert a repeat-free graph to a Wheeler automaton");
    wheeler->add_option("graph", c.input, "Graph JSON file")->required();
    wheeler->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();
    wheeler->add_flag("--verify", c.verify, "Check the order on every path label (exponential in the worst case)");
    wheeler->add_option("--out", c.out, "Output file (default stdout)");

    auto* ov = app.add_subcommand("ovgadget", "Build the OV reduction graph and print its query string");
    ov->add_option("instance", c.input, "OV instance: \"n d\", then n X vectors, then n Y vectors");
    ov->add_option("--random", c.random_shape, "Generate a random instance with N vectors of dimension D")->expected(2);
    ov->add_option("--seed", c.seed, "Seed for --random")->capture_default_str();
    ov->add_option("--out", c.out, "Graph JSON output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*segment) return cmd_segment(c);
        if (*build) return cmd_build(c);
        if (*index) return cmd_index(c);
        if (*query) return cmd_query(c);
        if (*verify) return cmd_verify(c);
        if (*wheeler) return cmd_wheeler(c);
        if (*ov) return cmd_ovgadget(c);
    } catch (const exit_code& e) {
        return e.code;
    } catch (const verification_error& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kVerifyFailed;
    } catch (const not_indexable& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kVerifyFailed;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
