#pragma once

// Orthogonal Vectors to founder-graph matching. The query is built from X
// alone and the graph from Y alone; the query occurs in the graph iff some
// x in X and y in Y are orthogonal.
//
// Query: B^4 Q_1 ... Q_n E^4 with Q_i = B^4, then 0^4 or 1^4 per entry of
// x_i, then E^4.
//
// Graph: G_L, then G_M, then G_R. G_L offers n-1 free vector slots before G_M
// and G_R n-1 after it. G_M has one part per y_j made of d+2 gadget columns
// (a B column, one column per entry of y_j, an E column). Every column spans
// two blocks and has three rows; row t splits each 4-run as a^t | a^(4-t), so
// the labels of different rows never clash inside a block. Rows 1 and 3 accept
// any entry, row 2 accepts 1^4 only where y_j has a 0. Between parts a path
// keeps its row or moves one row down. B^8 only occurs in G_L and rows 1-2,
// E^8 only in rows 2-3 and G_R, so any match crosses row 2 through one whole
// part while spelling some Q_i.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efgkit/efg.hpp"
#include "efgkit/error.hpp"
#include "efgkit/matching.hpp"

namespace efgkit {

// Vectors are strings over {'0', '1'}.
struct OvInstance {
    std::vector<std::string> x, y;
};

inline std::size_t ov_dimension(const std::vector<std::string>& vectors) {
    if (vectors.empty()) throw invalid_input("vector set is empty");
    const std::size_t d = vectors.front().size();
    if (d == 0) throw invalid_input("vectors must have at least one entry");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != d)
            throw invalid_input("dimension mismatch: vector " + std::to_string(i + 1) + " has " +
                                std::to_string(vectors[i].size()) + " entries, expected " + std::to_string(d));
        if (vectors[i].find_first_not_of("01") != std::string::npos)
            throw invalid_input("vector " + std::to_string(i + 1) + " has an entry other than 0 or 1");
    }
    return d;
}

inline bool ov_has_orthogonal_pair(const std::vector<std::string>& x, const std::vector<std::string>& y) {
    for (const auto& a : x)
        for (const auto& b : y) {
            bool orthogonal = true;
            for (std::size_t h = 0; h < a.size() && orthogonal; ++h) orthogonal = !(a[h] == '1' && b[h] == '1');
            if (orthogonal) return true;
        }
    return false;
}

inline std::string build_ov_query(const std::vector<std::string>& x) {
    const std::size_t d = ov_dimension(x);
    std::string q;
    q.reserve(8 + x.size() * (8 + 4 * d));
    q.append(4, 'B');
    for (const auto& v : x) {
        q.append(4, 'B');
        for (char c : v) q.append(4, c);
        q.append(4, 'E');
    }
    q.append(4, 'E');
    return q;
}

enum class OvPart : std::uint8_t { left, middle, right };

struct OvNodeRole {
    OvPart part = OvPart::left;
    std::size_t row = 0;     // 1..3 inside G_M, 0 elsewhere
    std::size_t vector = 0;  // index j of y_j inside G_M
    std::size_t column = 0;  // 0 is the B column, 1..d the entries, d+1 the E column
    char letter = 0;
};

struct OvGraph {
    Efg graph;
    std::vector<OvNodeRole> roles;  // by node id of `graph`
    std::size_t n = 0, d = 0;
};

namespace detail {

class OvBuilder {
public:
    std::size_t node(std::size_t block, char letter, std::size_t len, OvNodeRole role) {
        role.letter = letter;
        nodes_.push_back({block, std::string(len, letter)});
        roles_.push_back(role);
        return nodes_.size() - 1;
    }

    void edge(std::size_t a, std::size_t b) { edges_.emplace_back(a, b); }

    OvGraph finish(std::size_t n, std::size_t d) {
        OvGraph out;
        out.n = n;
        out.d = d;
        out.graph = Efg(nodes_, edges_);
        out.roles.resize(nodes_.size());
        for (std::size_t k = 0; k < nodes_.size(); ++k) out.roles[*out.graph.find(nodes_[k].block, nodes_[k].label)] = roles_[k];
        return out;
    }

private:
    std::vector<EfgNode> nodes_;
    std::vector<EfgEdge> edges_;
    std::vector<OvNodeRole> roles_;
};

// One row of one gadget column: a first node a^row and a second a^(4-row).
struct Cell {
    std::size_t entry, exit;
};

}  // namespace detail

inline OvGraph build_ov_graph(const std::vector<std::string>& y) {
    const std::size_t d = ov_dimension(y), n = y.size();
    detail::OvBuilder b;
    std::size_t block = 0;
    using Segment4 = std::vector<std::pair<char, std::size_t>>;  // (letter, node)

    // a block of single 4-runs outside G_M
    auto segment = [&](std::string_view letters, OvPart part) {
        Segment4 s;
        for (char c : letters) s.emplace_back(c, b.node(block, c, 4, {part}));
        ++block;
        return s;
    };
    auto connect = [&](const Segment4& from, const Segment4& to, auto keep) {
        for (const auto& [a, u] : from)
            for (const auto& [c, w] : to)
                if (keep(a, c)) b.edge(u, w);
    };
    auto all = [](char, char) { return true; };

    // G_L: B, then n-1 times [B] [01]^d [B E], where entries only reach E
    Segment4 left = segment("B", OvPart::left);
    for (std::size_t i = 1; i < n; ++i) {
        Segment4 s = segment("B", OvPart::left);
        connect(left, s, all);
        for (std::size_t h = 0; h < d; ++h) {
            Segment4 t = segment("01", OvPart::left);
            connect(s, t, all);
            s = std::move(t);
        }
        Segment4 t = segment("BE", OvPart::left);
        connect(s, t, [](char, char c) { return c == 'E'; });
        left = std::move(t);
    }

    // G_M
    // cells[row][letter] of the current and previous column
    using Column = std::array<std::map<char, detail::Cell>, 4>;
    auto column = [&](std::size_t j, std::size_t col, const std::array<std::string, 4>& letters) {
        Column c;
        for (std::size_t row = 1; row <= 3; ++row)
            for (char a : letters[row]) {
                const OvNodeRole role{OvPart::middle, row, j, col};
                const std::size_t first = b.node(block, a, row, role);
                const std::size_t second = b.node(block + 1, a, 4 - row, role);
                b.edge(first, second);
                c[row][a] = {first, second};
            }
        block += 2;
        return c;
    };
    Column prev_e;
    for (std::size_t j = 0; j < n; ++j) {
        Column bcol = column(j, 0, {"", "B", "BE", "BE"});
        if (j == 0) {
            for (std::size_t row : {1, 2})
                for (const auto& [a, u] : left) b.edge(u, bcol[row]['B'].entry);
        } else {
            for (std::size_t row = 1; row <= 3; ++row)
                for (std::size_t to = row; to <= std::min<std::size_t>(row + 1, 3); ++to) {
                    b.edge(prev_e[row]['E'].exit, bcol[to]['B'].entry);
                    if (to <= 2 && prev_e[row].count('B')) b.edge(prev_e[row]['B'].exit, bcol[to]['B'].entry);
                    if (row >= 2) b.edge(prev_e[row]['E'].exit, bcol[to]['E'].entry);
                }
        }
        std::array<std::map<char, detail::Cell>, 4> last;
        for (std::size_t row = 1; row <= 3; ++row) last[row] = {{'B', bcol[row]['B']}};
        for (std::size_t h = 0; h < d; ++h) {
            const std::string middle = y[j][h] == '0' ? "01" : "0";
            Column c = column(j, h + 1, {"", "01", middle, "01"});
            for (std::size_t row = 1; row <= 3; ++row)
                for (const auto& [a, from] : last[row])
                    for (const auto& [z, to] : c[row]) b.edge(from.exit, to.entry);
            last = std::move(c);
        }
        Column ecol = column(j, d + 1, {"", "EB", "EB", "E"});
        for (std::size_t row = 1; row <= 3; ++row)
            for (const auto& [a, from] : last[row]) b.edge(from.exit, ecol[row]['E'].entry);
        prev_e = std::move(ecol);
    }

    // G_R: n-1 times [B E] [01]^d [E], where the first E is a dead end, then E
    Segment4 right = segment(n > 1 ? "BE" : "E", OvPart::right);
    for (std::size_t row : {2, 3})
        for (const auto& [a, w] : right) b.edge(prev_e[row]['E'].exit, w);
    for (std::size_t i = 1; i < n; ++i) {
        Segment4 s = right;
        for (std::size_t h = 0; h < d; ++h) {
            Segment4 t = segment("01", OvPart::right);
            connect(s, t, [](char a, char) { return a != 'E'; });
            s = std::move(t);
        }
        Segment4 e = segment("E", OvPart::right);
        connect(s, e, all);
        right = segment(i + 1 < n ? "BE" : "E", OvPart::right);
        connect(e, right, all);
    }
    return b.finish(n, d);
}

// Checks a witness path for the query of `x` on `og`: every Q_i spelled
// entirely in row 2 lies in one part G_M^j, with each entry on the two
// nodes of the column encoding y_j[h], and at least one Q_i is spelled
// that way. Returns a description of the first violation.
inline std::optional<std::string> check_row_confinement(const OvGraph& og, const std::vector<std::string>& x,
                                                        const MatchPath& path) {
    const Efg& g = og.graph;
    const std::string q = build_ov_query(x);
    // node and offset behind every character of q
    std::vector<std::size_t> node_at;
    std::size_t offset = path.first_offset;
    for (std::size_t k = 0; k < path.nodes.size() && node_at.size() < q.size(); ++k) {
        const std::string& l = g.label(path.nodes[k]);
        for (std::size_t p = k == 0 ? offset : 0; p < l.size() && node_at.size() < q.size(); ++p) {
            if (l[p] != q[node_at.size()]) return "witness path does not spell the query at position " + std::to_string(node_at.size());
            node_at.push_back(path.nodes[k]);
        }
    }
    if (node_at.size() != q.size()) return std::string("witness path is shorter than the query");
    const std::size_t d = x.front().size(), width = 8 + 4 * d;
    std::size_t confined = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t from = 4 + i * width;
        bool row2 = true;
        for (std::size_t k = from; k < from + width && row2; ++k) {
            const OvNodeRole& r = og.roles[node_at[k]];
            row2 = r.part == OvPart::middle && r.row == 2;
        }
        if (!row2) continue;
        const std::size_t j = og.roles[node_at[from]].vector;
        for (std::size_t k = from; k < from + width; ++k) {
            const OvNodeRole& r = og.roles[node_at[k]];
            if (r.vector != j)
                return "Q_" + std::to_string(i + 1) + " leaves G_M2^" + std::to_string(j + 1) + " for G_M2^" + std::to_string(r.vector + 1);
            if (r.column != (k - from) / 4)
                return "Q_" + std::to_string(i + 1) + " character " + std::to_string(k - from) + " sits in column " +
                       std::to_string(r.column);
        }
        for (std::size_t h = 0; h < d; ++h) {
            const std::size_t at = from + 4 + 4 * h;
            std::vector<std::size_t> nodes(node_at.begin() + at, node_at.begin() + at + 4);
            nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
            if (nodes.size() != 2)
                return "Q_" + std::to_string(i + 1) + "," + std::to_string(h + 1) + " spans " + std::to_string(nodes.size()) + " nodes";
        }
        ++confined;
    }
    if (confined == 0) return std::string("no Q_i is spelled inside the middle row");
    return std::nullopt;
}

// "n d", then n lines of X, then n lines of Y.
inline OvInstance parse_ov_instance(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> std::optional<std::string> {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") != std::string::npos) return line;
        }
        return std::nullopt;
    };
    const auto head = next();
    if (!head) throw parse_error("empty OV instance");
    std::istringstream hs(*head);
    long long n = -1, d = -1;
    std::string extra;
    if (!(hs >> n >> d) || (hs >> extra) || n <= 0 || d <= 0)
        throw parse_error("expected a header line \"n d\" with positive integers", lineno);
    OvInstance ov;
    for (long long k = 0; k < 2 * n; ++k) {
        const auto l = next();
        if (!l) throw parse_error("expected " + std::to_string(2 * n) + " vectors, found " + std::to_string(k), lineno);
        std::string v;
        for (char c : *l)
            if (c != ' ' && c != '\t') v += c;
        if (v.size() != static_cast<std::size_t>(d)) throw parse_error("vector has " + std::to_string(v.size()) + " entries, expected " + std::to_string(d), lineno);
        if (v.find_first_not_of("01") != std::string::npos) throw parse_error("vector entries must be 0 or 1", lineno);
        (k < n ? ov.x : ov.y).push_back(std::move(v));
    }
    if (next()) throw parse_error("unexpected content after the Y vectors", lineno);
    return ov;
}

inline std::string serialize_ov_instance(const OvInstance& ov) {
    std::string out = std::to_string(ov.x.size()) + " " + std::to_string(ov.x.empty() ? 0 : ov.x.front().size()) + "\n";
    for (const auto& v : ov.x) out += v + "\n";
    for (const auto& v : ov.y) out += v + "\n";
    return out;
}

}  // namespace efgkit
