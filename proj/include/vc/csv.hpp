#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vc::csv {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One parsed file: a header row plus data rows, all cells as strings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name, -1 if absent.
    int column(std::string_view name) const;
};

/// RFC-4180-ish reader: quoted cells, embedded commas/quotes/newlines,
/// tolerant of CRLF. Throws ParseError on unterminated quotes.
Table read_file(const std::filesystem::path& path);
Table read_string(std::string_view text);

/// Quotes a cell only when it needs it (comma, quote, newline).
std::string escape_cell(std::string_view cell);

void write_file(const std::filesystem::path& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

std::string write_string(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

/// Splits a comma-separated tag cell into trimmed, non-empty tags.
std::vector<std::string> split_tags(std::string_view cell);

}  // namespace vc::csv
