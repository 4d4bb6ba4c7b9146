#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace efgkit {

// Malformed input documents (FASTA, graph JSON, index files, OV instances).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A precondition of an operation was violated by its arguments.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A graph lacks the (semi-)repeat-free property an index or conversion needs.
class not_indexable : public std::runtime_error {
public:
    not_indexable(const std::string& what, std::string label, std::size_t node, std::size_t offset)
        : std::runtime_error(what), label_(std::move(label)), node_(node), offset_(offset) {}

    // The node label that has a forbidden occurrence, and where it occurs.
    const std::string& label() const noexcept { return label_; }
    std::size_t node() const noexcept { return node_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string label_;
    std::size_t node_;
    std::size_t offset_;
};

// A stored artifact disagrees with what its own content implies (e.g. an index
// file whose tables do not match the graph it carries).
class verification_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace efgkit
