#pragma once

// Binary index files:
//
//   "EFGIDX" | version u8 | kind u8 | section count u8 |
//   per section: name length u8, name, payload length u64 LE, payload |
//   FNV-1a 64 of all preceding bytes, u64 LE
//
// Integers inside payloads are little-endian and fixed width (u32 for suffix
// array entries, annotations and trie listings, u64 for bit-vector words).
// Every section is a function of the graph section, so loading rebuilds the
// index from the graph and rejects files whose stored tables differ.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efgkit/efg_index.hpp"
#include "efgkit/efg_io.hpp"
#include "efgkit/error.hpp"

namespace efgkit {

inline constexpr std::string_view kIndexMagic = "EFGIDX";
inline constexpr std::uint8_t kIndexVersion = 1;

namespace detail {

class ByteWriter {
public:
    void u8(std::uint8_t x) { out_.push_back(static_cast<char>(x)); }
    template <class T>
    void le(T x) {
        for (std::size_t k = 0; k < sizeof(T); ++k) out_.push_back(static_cast<char>((static_cast<std::uint64_t>(x) >> (8 * k)) & 0xFF));
    }
    void bytes(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

template <class T, class Range>
std::string pack(const Range& values) {
    ByteWriter w;
    for (auto x : values) w.le<T>(static_cast<T>(x));
    return w.take();
}

inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : bytes) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

using Sections = std::vector<std::pair<std::string, std::string>>;

inline Sections index_sections(const GraphIndex& index) {
    Sections s;
    s.emplace_back("graph", serialize_efg(index.graph()));
    const auto text = index.suffixes().text();
    s.emplace_back("text", std::string(text.begin(), text.end()));
    s.emplace_back("sa", pack<std::uint32_t>(index.suffixes().sa()));
    switch (index.kind()) {
        case IndexKind::classic: {
            const auto& c = static_cast<const ClassicIndex&>(index);
            s.emplace_back("pred_tries", pack<std::uint32_t>(c.predecessor_tries().preorder()));
            s.emplace_back("succ_tries", pack<std::uint32_t>(c.successor_tries().preorder()));
            break;
        }
        case IndexKind::ebwt: {
            const auto& e = static_cast<const ExpandedBwtIndex&>(index);
            s.emplace_back("B", pack<std::uint64_t>(e.begins().words()));
            s.emplace_back("E", pack<std::uint64_t>(e.ends().words()));
            break;
        }
        case IndexKind::triple: {
            const auto& t = static_cast<const TripleIndex&>(index);
            s.emplace_back("annotations", pack<std::uint32_t>(t.annotations()));
            s.emplace_back("pred_tries", pack<std::uint32_t>(t.predecessor_tries().preorder()));
            break;
        }
    }
    return s;
}

}  // namespace detail

inline std::string serialize_index(const GraphIndex& index) {
    const auto sections = detail::index_sections(index);
    detail::ByteWriter w;
    w.bytes(kIndexMagic);
    w.u8(kIndexVersion);
    w.u8(static_cast<std::uint8_t>(index.kind()));
    w.u8(static_cast<std::uint8_t>(sections.size()));
    for (const auto& [name, payload] : sections) {
        w.u8(static_cast<std::uint8_t>(name.size()));
        w.bytes(name);
        w.le<std::uint64_t>(payload.size());
        w.bytes(payload);
    }
    std::string out = w.take();
    detail::ByteWriter tail;
    tail.le<std::uint64_t>(detail::fnv1a(out));
    return out + tail.take();
}

// Throws parse_error for files that are not index files at all and
// verification_error for index files whose content is inconsistent.
inline std::unique_ptr<GraphIndex> load_index(std::string_view bytes) {
    std::size_t pos = 0;
    auto need = [&](std::size_t n) {
        if (bytes.size() - pos < n) throw parse_error("index file truncated at byte " + std::to_string(pos));
    };
    auto u8 = [&] {
        need(1);
        return static_cast<std::uint8_t>(bytes[pos++]);
    };
    need(kIndexMagic.size());
    if (bytes.substr(0, kIndexMagic.size()) != kIndexMagic) throw parse_error("not an index file (bad magic)");
    pos = kIndexMagic.size();
    if (const auto v = u8(); v != kIndexVersion) throw parse_error("unsupported index version " + std::to_string(v));
    const std::uint8_t kind_byte = u8();
    if (kind_byte > static_cast<std::uint8_t>(IndexKind::triple)) throw parse_error("unknown index kind byte " + std::to_string(kind_byte));
    const auto kind = static_cast<IndexKind>(kind_byte);
    const std::size_t count = u8();
    detail::Sections stored;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t name_len = u8();
        need(name_len);
        std::string name(bytes.substr(pos, name_len));
        pos += name_len;
        need(8);
        std::uint64_t len = 0;
        for (std::size_t b = 0; b < 8; ++b) len |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes[pos + b])) << (8 * b);
        pos += 8;
        need(len);
        stored.emplace_back(std::move(name), std::string(bytes.substr(pos, len)));
        pos += len;
    }
    need(8);
    std::uint64_t checksum = 0;
    for (std::size_t b = 0; b < 8; ++b) checksum |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes[pos + b])) << (8 * b);
    if (pos + 8 != bytes.size()) throw parse_error("trailing bytes after the index checksum");
    if (checksum != detail::fnv1a(bytes.substr(0, pos))) throw verification_error("index file checksum mismatch");
    if (stored.empty() || stored.front().first != "graph") throw parse_error("index file has no graph section");

    std::unique_ptr<GraphIndex> index;
    try {
        index = build_index(parse_efg(stored.front().second), kind);
    } catch (const parse_error& e) {
        throw verification_error(std::string("graph section is damaged: ") + e.what());
    } catch (const not_indexable& e) {
        throw verification_error(std::string("stored graph cannot carry this index: ") + e.what());
    } catch (const invalid_input& e) {
        throw verification_error(std::string("stored graph is invalid: ") + e.what());
    }
    const auto expected = detail::index_sections(*index);
    if (expected.size() != stored.size()) throw verification_error("index file has the wrong set of sections");
    for (std::size_t k = 0; k < expected.size(); ++k) {
        if (expected[k].first != stored[k].first)
            throw verification_error("unexpected section '" + stored[k].first + "', expected '" + expected[k].first + "'");
        if (expected[k].second != stored[k].second)
            throw verification_error("section '" + stored[k].first + "' does not match the graph it indexes");
    }
    return index;
}

}  // namespace efgkit
