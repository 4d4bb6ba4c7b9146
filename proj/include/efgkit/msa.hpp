#pragma once

// Multiple sequence alignments: aligned FASTA I/O, gap removal and the
// column <-> spelled-position maps used by every gap-aware algorithm.
//
// Conventions: rows are 0-based, columns are 1-based ([1..n]) so that a
// segment [x..y] and the "after column j" indices of the DP tables read the
// same way everywhere. Spelled positions are 1-based as well.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "efgkit/alphabet.hpp"
#include "efgkit/error.hpp"
#include "efgkit/rank_select.hpp"

namespace efgkit {

inline std::string spell(std::string_view gapped) {
    std::string out;
    out.reserve(gapped.size());
    for (char c : gapped)
        if (c != kGap) out.push_back(c);
    return out;
}

class Msa {
public:
    Msa() = default;

    // Rows must be non-empty, of equal length, and free of lowercase letters.
    Msa(std::vector<std::string> names, std::vector<std::string> rows)
        : names_(std::move(names)), rows_(std::move(rows)) {
        if (rows_.empty()) throw invalid_input("MSA needs at least one row");
        if (names_.size() != rows_.size()) throw invalid_input("MSA needs one name per row");
        const std::size_t n = rows_.front().size();
        if (n == 0) throw invalid_input("MSA rows must be non-empty");
        std::string symbols;
        for (const auto& r : rows_) {
            if (r.size() != n) throw invalid_input("row length mismatch");
            symbols += r;
        }
        alphabet_ = Alphabet(symbols);
    }

    explicit Msa(const std::vector<std::string>& rows) : Msa(default_names(rows.size()), rows) {}

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t columns() const noexcept { return rows_.empty() ? 0 : rows_.front().size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }

    const std::string& row(std::size_t i) const { return rows_.at(i); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& row_strings() const noexcept { return rows_; }

    // Symbol at row i (0-based), column col (1-based).
    char at(std::size_t i, std::size_t col) const { return rows_[i][col - 1]; }
    bool is_gap(std::size_t i, std::size_t col) const { return at(i, col) == kGap; }

    bool has_gaps() const {
        return std::any_of(rows_.begin(), rows_.end(),
                           [](const std::string& r) { return r.find(kGap) != std::string::npos; });
    }

    // spell(row i restricted to columns [x..y]).
    std::string spell_range(std::size_t i, std::size_t x, std::size_t y) const {
        return spell(std::string_view(rows_[i]).substr(x - 1, y - x + 1));
    }

    std::string spelled_row(std::size_t i) const { return spell(rows_[i]); }

    friend bool operator==(const Msa& a, const Msa& b) { return a.names_ == b.names_ && a.rows_ == b.rows_; }

private:
    static std::vector<std::string> default_names(std::size_t m) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < m; ++i) names.push_back("r" + std::to_string(i + 1));
        return names;
    }

    std::vector<std::string> names_;
    std::vector<std::string> rows_;
    Alphabet alphabet_;
};

struct FastaOptions {
    std::string whitelist = "ACGTN-";
    bool any_alphabet = false;
};

// Reads an aligned FASTA document. Symbols are upper-cased; LF and CRLF line
// endings are accepted.
inline Msa parse_msa(std::string_view text, const FastaOptions& options = {}) {
    std::vector<std::string> names, rows;
    std::vector<std::size_t> header_lines;
    std::unordered_set<std::string> seen;
    std::set<unsigned char> allowed;
    for (unsigned char c : options.whitelist) allowed.insert(static_cast<unsigned char>(std::toupper(c)));
    allowed.insert(static_cast<unsigned char>(kGap));

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '>') {
            std::string name(line.substr(1));
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
            if (!rows.empty() && rows.back().empty())
                throw parse_error("empty record '" + names.back() + "'", header_lines.back());
            if (!seen.insert(name).second) throw parse_error("duplicate record '" + name + "'", line_no);
            names.push_back(std::move(name));
            rows.emplace_back();
            header_lines.push_back(line_no);
            continue;
        }
        if (rows.empty()) throw parse_error("sequence data before the first header", line_no);
        for (char raw : line) {
            const auto c = static_cast<unsigned char>(std::toupper(static_cast<unsigned char>(raw)));
            if (std::isspace(c)) continue;
            if (!options.any_alphabet && !allowed.count(c))
                throw parse_error(std::string("symbol '") + static_cast<char>(c) + "' not in alphabet", line_no);
            if (!std::isgraph(c)) throw parse_error("non-printable symbol", line_no);
            rows.back().push_back(static_cast<char>(c));
        }
    }
    if (rows.empty()) throw parse_error("empty file");
    if (rows.back().empty()) throw parse_error("empty record '" + names.back() + "'", header_lines.back());
    const std::size_t n = rows.front().size();
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].size() != n)
            throw parse_error("row length mismatch: record '" + names[i] + "' has " + std::to_string(rows[i].size()) +
                                  " columns, expected " + std::to_string(n),
                              header_lines[i]);
    return Msa(std::move(names), std::move(rows));
}

// Aligned FASTA with LF line endings, sequence lines wrapped at 80 columns.
inline std::string write_fasta(const Msa& msa) {
    std::string out;
    for (std::size_t i = 0; i < msa.rows(); ++i) {
        out += '>';
        out += msa.name(i);
        out += '\n';
        const std::string& r = msa.row(i);
        for (std::size_t p = 0; p < r.size(); p += 80) {
            out.append(r, p, 80);
            out += '\n';
        }
    }
    return out;
}

// Per-row rank/select over non-gap columns.
class GapCoordMap {
public:
    explicit GapCoordMap(const Msa& msa) : columns_(msa.columns()) {
        bits_.reserve(msa.rows());
        for (std::size_t i = 0; i < msa.rows(); ++i) {
            RankSelectBits b(columns_);
            for (std::size_t c = 1; c <= columns_; ++c)
                if (!msa.is_gap(i, c)) b.set(c - 1);
            b.finalize();
            bits_.push_back(std::move(b));
        }
    }

    std::size_t rows() const noexcept { return bits_.size(); }
    std::size_t columns() const noexcept { return columns_; }

    std::size_t spelled_length(std::size_t row) const { return bits_.at(row).count(); }

    // |spell(row[1..col])|, with col in [0..n].
    std::size_t spelled_prefix(std::size_t row, std::size_t col) const { return bits_.at(row).rank1(col); }

    // Spelled position of the first non-gap at or after column col; nullopt if
    // the row holds only gaps from col on.
    std::optional<std::size_t> col_to_spelled(std::size_t row, std::size_t col) const {
        check_column(col);
        const std::size_t p = bits_.at(row).rank1(col - 1) + 1;
        if (p > spelled_length(row)) return std::nullopt;
        return p;
    }

    // Column holding the spelled position pos (1-based).
    std::size_t spelled_to_col(std::size_t row, std::size_t pos) const { return bits_.at(row).select1(pos) + 1; }

    // Smallest column y >= x with |spell(row[x..y])| == len (len >= 1), if any.
    std::optional<std::size_t> column_reaching(std::size_t row, std::size_t x, std::size_t len) const {
        check_column(x);
        const std::size_t target = bits_.at(row).rank1(x - 1) + len;
        if (len == 0 || target > spelled_length(row)) return std::nullopt;
        return spelled_to_col(row, target);
    }

private:
    void check_column(std::size_t col) const {
        if (col == 0 || col > columns_)
            throw std::out_of_range("column " + std::to_string(col) + " outside [1.." + std::to_string(columns_) + "]");
    }

    std::size_t columns_;
    std::vector<RankSelectBits> bits_;
};

}  // namespace efgkit
