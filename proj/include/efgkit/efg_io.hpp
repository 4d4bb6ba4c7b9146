#pragma once

// Graph and segmentation documents. The JSON layout is written by hand, one
// item per line, so output is byte-deterministic and error messages can name
// the offending line.

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "efgkit/efg.hpp"
#include "efgkit/error.hpp"
#include "efgkit/segmentation.hpp"

namespace efgkit {

inline constexpr int kEfgFormatVersion = 1;

namespace detail {

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) line += text[i] == '\n';
    return line;
}

// Line on which element `index` of the top-level array member `key` starts;
// the line of the member itself if index is npos; 1 if not found.
inline std::size_t member_line(std::string_view text, std::string_view key, std::size_t index = std::string_view::npos) {
    int depth = 0;
    bool in_string = false;
    std::size_t string_start = 0;
    std::string last_key;
    std::size_t key_pos = 0;
    bool armed = false;  // inside the array of `key`
    std::size_t element = 0;
    bool expect_element = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
                if (depth == 1) {
                    last_key = std::string(text.substr(string_start + 1, i - string_start - 1));
                    key_pos = string_start;
                    if (index == std::string_view::npos && last_key == key) return line_of_offset(text, key_pos);
                }
            }
            continue;
        }
        if (armed && expect_element && !std::isspace(static_cast<unsigned char>(c)) && c != ']') {
            if (element == index) return line_of_offset(text, i);
            expect_element = false;
        }
        switch (c) {
            case '"':
                in_string = true;
                string_start = i;
                break;
            case '{':
            case '[':
                ++depth;
                if (depth == 2 && c == '[' && last_key == key) {
                    armed = true;
                    expect_element = true;
                    element = 0;
                }
                break;
            case '}':
            case ']':
                if (depth == 2 && armed) return 1;
                --depth;
                break;
            case ',':
                if (depth == 2 && armed) {
                    ++element;
                    expect_element = true;
                }
                break;
            default:
                break;
        }
    }
    return 1;
}

inline nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("malformed JSON: ") + e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
    }
}

}  // namespace detail

inline std::string serialize_efg(const Efg& g) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"version\": " << kEfgFormatVersion << ",\n";
    out << "  \"sigma\": " << g.alphabet().size() << ",\n";
    out << "  \"alphabet\": " << detail::json_string(g.alphabet().chars()) << ",\n";
    out << "  \"blocks\": [";
    for (std::size_t k = 0; k < g.block_count(); ++k) {
        out << (k ? ", [" : "[");
        for (std::size_t i = 0; i < g.block(k).size(); ++i) out << (i ? ", " : "") << g.block(k)[i];
        out << "]";
    }
    out << "],\n";
    out << "  \"nodes\": [\n";
    for (std::size_t v = 0; v < g.node_count(); ++v)
        out << "    {\"id\": " << v << ", \"block\": " << g.node(v).block << ", \"label\": " << detail::json_string(g.label(v))
            << "}" << (v + 1 < g.node_count() ? "," : "") << "\n";
    out << "  ],\n";
    out << "  \"edges\": [";
    for (std::size_t e = 0; e < g.edges().size(); ++e)
        out << (e ? ",\n    " : "\n    ") << "[" << g.edges()[e].first << ", " << g.edges()[e].second << "]";
    out << (g.edges().empty() ? "]" : "\n  ]");
    if (g.has_support()) {
        out << ",\n  \"support\": [";
        for (std::size_t e = 0; e < g.edge_support().size(); ++e) {
            out << (e ? ",\n    [" : "\n    [");
            for (std::size_t i = 0; i < g.edge_support()[e].size(); ++i) out << (i ? ", " : "") << g.edge_support()[e][i];
            out << "]";
        }
        out << "\n  ]";
    }
    out << "\n}\n";
    return out.str();
}

inline Efg parse_efg(std::string_view text) {
    const nlohmann::json doc = detail::parse_json(text);
    auto fail = [&](const std::string& what, std::string_view key, std::size_t index = std::string_view::npos) -> parse_error {
        return parse_error(what, detail::member_line(text, key, index));
    };
    if (!doc.is_object()) throw parse_error("graph document must be a JSON object", 1);
    for (const char* key : {"version", "nodes", "edges", "blocks"})
        if (!doc.contains(key)) throw parse_error(std::string("missing member \"") + key + "\"", 1);
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kEfgFormatVersion)
        throw fail("unsupported graph format version", "version");

    const auto& jnodes = doc["nodes"];
    if (!jnodes.is_array()) throw fail("\"nodes\" must be an array", "nodes");
    std::vector<EfgNode> nodes;
    std::map<std::size_t, std::size_t> index_of_id;
    for (std::size_t k = 0; k < jnodes.size(); ++k) {
        const auto& jn = jnodes[k];
        if (!jn.is_object() || !jn.contains("id") || !jn.contains("block") || !jn.contains("label") ||
            !jn["id"].is_number_unsigned() || !jn["block"].is_number_unsigned() || !jn["label"].is_string())
            throw fail("node needs unsigned \"id\", unsigned \"block\" and string \"label\"", "nodes", k);
        const auto id = jn["id"].get<std::size_t>();
        if (!index_of_id.emplace(id, k).second) throw fail("duplicate node id " + std::to_string(id), "nodes", k);
        const std::string label = jn["label"].get<std::string>();
        if (label.empty()) throw fail("empty node label", "nodes", k);
        nodes.push_back({jn["block"].get<std::size_t>(), label});
    }

    const auto& jblocks = doc["blocks"];
    if (!jblocks.is_array()) throw fail("\"blocks\" must be an array", "blocks");
    std::vector<char> listed(nodes.size(), 0);
    for (std::size_t k = 0; k < jblocks.size(); ++k) {
        if (!jblocks[k].is_array() || jblocks[k].empty()) throw fail("block must be a non-empty array of node ids", "blocks", k);
        for (const auto& jid : jblocks[k]) {
            if (!jid.is_number_unsigned() || !index_of_id.count(jid.get<std::size_t>()))
                throw fail("block " + std::to_string(k) + " lists an unknown node", "blocks", k);
            const std::size_t idx = index_of_id[jid.get<std::size_t>()];
            if (nodes[idx].block != k || listed[idx])
                throw fail("block " + std::to_string(k) + " disagrees with the node list", "blocks", k);
            listed[idx] = 1;
        }
    }
    for (std::size_t idx = 0; idx < nodes.size(); ++idx)
        if (!listed[idx]) throw fail("node is not listed in any block", "nodes", idx);

    const auto& jedges = doc["edges"];
    if (!jedges.is_array()) throw fail("\"edges\" must be an array", "edges");
    std::vector<EfgEdge> edges;
    for (std::size_t k = 0; k < jedges.size(); ++k) {
        const auto& je = jedges[k];
        if (!je.is_array() || je.size() != 2 || !je[0].is_number_unsigned() || !je[1].is_number_unsigned())
            throw fail("edge must be a pair of node ids", "edges", k);
        const auto from = index_of_id.find(je[0].get<std::size_t>());
        const auto to = index_of_id.find(je[1].get<std::size_t>());
        if (from == index_of_id.end() || to == index_of_id.end()) throw fail("edge refers to an unknown node", "edges", k);
        if (nodes[to->second].block != nodes[from->second].block + 1)
            throw fail("edge does not connect consecutive blocks", "edges", k);
        edges.emplace_back(from->second, to->second);
    }
    std::vector<std::vector<std::size_t>> support;
    if (doc.contains("support")) {
        const auto& js = doc["support"];
        if (!js.is_array() || js.size() != edges.size()) throw fail("\"support\" must have one entry per edge", "support");
        for (std::size_t k = 0; k < js.size(); ++k) {
            if (!js[k].is_array()) throw fail("support entry must be an array of row indices", "support", k);
            std::vector<std::size_t> rows;
            for (const auto& r : js[k]) {
                if (!r.is_number_unsigned()) throw fail("support entry must be an array of row indices", "support", k);
                rows.push_back(r.get<std::size_t>());
            }
            support.push_back(std::move(rows));
        }
    }
    try {
        return Efg(std::move(nodes), std::move(edges), std::move(support));
    } catch (const invalid_input& e) {
        throw parse_error(e.what(), 1);
    }
}

inline std::string to_dot(const Efg& g) {
    std::ostringstream out;
    out << "digraph efg {\n  rankdir=LR;\n  node [shape=box];\n";
    for (std::size_t k = 0; k < g.block_count(); ++k) {
        out << "  subgraph cluster_" << k << " {\n    label=\"block " << k << "\";\n";
        for (std::size_t v : g.block(k)) out << "    n" << v << " [label=" << detail::json_string(g.label(v)) << "];\n";
        out << "  }\n";
    }
    for (const auto& [from, to] : g.edges()) out << "  n" << from << " -> n" << to << ";\n";
    out << "}\n";
    return out.str();
}

// GFA 1 flavoured text: one S line per node, one L line per edge.
inline std::string to_gfa(const Efg& g) {
    std::ostringstream out;
    out << "H\tVN:Z:1.0\n";
    for (std::size_t v = 0; v < g.node_count(); ++v)
        out << "S\tn" << v << "\t" << g.label(v) << "\tBK:i:" << g.node(v).block << "\n";
    for (const auto& [from, to] : g.edges()) out << "L\tn" << from << "\t+\tn" << to << "\t+\t0M\n";
    return out.str();
}

inline std::string serialize_segmentation(const Segmentation& seg) {
    nlohmann::ordered_json doc;
    doc["version"] = kEfgFormatVersion;
    doc["mode"] = std::string(to_string(seg.mode));
    doc["score_kind"] = std::string(to_string(seg.score_kind));
    doc["score"] = seg.score;
    nlohmann::ordered_json iv = nlohmann::ordered_json::array();
    for (const auto& s : seg.intervals) iv.push_back({s.first, s.last});
    doc["intervals"] = iv;
    return doc.dump(2) + "\n";
}

inline Segmentation parse_segmentation(std::string_view text) {
    const nlohmann::json doc = detail::parse_json(text);
    try {
        Segmentation seg;
        seg.mode = parse_mode(doc.at("mode").get<std::string>());
        seg.score_kind = parse_score(doc.at("score_kind").get<std::string>());
        seg.score = doc.at("score").get<std::size_t>();
        for (const auto& iv : doc.at("intervals")) seg.intervals.push_back({iv.at(0).get<std::size_t>(), iv.at(1).get<std::size_t>()});
        if (seg.intervals.empty()) throw parse_error("segmentation has no intervals", detail::member_line(text, "intervals"));
        return seg;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed segmentation: ") + e.what());
    } catch (const invalid_input& e) {
        throw parse_error(e.what());
    }
}

}  // namespace efgkit
