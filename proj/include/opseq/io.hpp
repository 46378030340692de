#pragma once

#include <stdexcept>
#include <string>

#include "opseq/couple.hpp"

namespace opseq {

/// Parse failure. Syntax errors carry line and column (1-based); structural
/// errors carry the JSON path of the offending field.
class DocumentError : public std::runtime_error {
public:
    DocumentError(std::string path, std::size_t line, std::size_t column, const std::string& message);

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string path_;
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

/// Tower document: JSON with string-encoded exact scalars. Serialization is
/// canonical (sorted keys, two-space indent, zero blocks and entries dropped).
AlgebraTower parse_tower(const std::string& text);
std::string serialize_tower(const AlgebraTower& t);

AlgebraTower read_tower_file(const std::string& path);

} // namespace opseq
