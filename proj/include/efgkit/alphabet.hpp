#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace efgkit {

using symbol_t = std::uint8_t;

// Separator / end marker in all concatenated texts; smaller than every symbol.
inline constexpr symbol_t kSeparator = 0;
inline constexpr char kGap = '-';

// Dense remap of a set of surface characters onto {1..sigma}, preserving
// byte order so that lexicographic order is the same in both encodings.
class Alphabet {
public:
    Alphabet() { code_.fill(0); }

    explicit Alphabet(std::string_view chars) : Alphabet() {
        std::array<bool, 256> present{};
        for (unsigned char c : chars)
            if (c != static_cast<unsigned char>(kGap)) present[c] = true;
        for (int c = 1; c < 256; ++c) {
            if (!present[static_cast<std::size_t>(c)]) continue;
            chars_.push_back(static_cast<char>(c));
            code_[static_cast<std::size_t>(c)] = static_cast<symbol_t>(chars_.size());
        }
    }

    std::size_t size() const noexcept { return chars_.size(); }
    const std::string& chars() const noexcept { return chars_; }

    bool contains(char c) const noexcept { return code_[static_cast<unsigned char>(c)] != 0; }

    std::optional<symbol_t> encode(char c) const noexcept {
        const symbol_t s = code_[static_cast<unsigned char>(c)];
        if (s == 0) return std::nullopt;
        return s;
    }

    char decode(symbol_t s) const { return chars_.at(static_cast<std::size_t>(s) - 1); }

    // Encodes a whole string; nullopt if any character is outside the alphabet.
    std::optional<std::vector<symbol_t>> encode(std::string_view text) const {
        std::vector<symbol_t> out;
        out.reserve(text.size());
        for (char c : text) {
            auto s = encode(c);
            if (!s) return std::nullopt;
            out.push_back(*s);
        }
        return out;
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.chars_ == b.chars_; }

private:
    std::string chars_;
    std::array<symbol_t, 256> code_;
};

}  // namespace efgkit
