#include "vc/csv.hpp"

#include <fstream>
#include <sstream>

namespace vc::csv {

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return int(i);
    return -1;
}

Table read_string(std::string_view text) {
    Table t;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool row_started = false;
    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
    };
    auto end_row = [&] {
        end_cell();
        if (t.header.empty())
            t.header = std::move(row);
        else
            t.rows.push_back(std::move(row));
        row.clear();
        row_started = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_started = true;
                break;
            case ',':
                end_cell();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_started || !cell.empty() || !row.empty()) end_row();
                break;
            default:
                cell += c;
                row_started = true;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted cell");
    if (row_started || !cell.empty() || !row.empty()) end_row();
    return t;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_string(ss.str());
}

std::string escape_cell(std::string_view cell) {
    bool needs = cell.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string write_string(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto emit = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += escape_cell(r[i]);
        }
        out += '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
    return out;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << write_string(header, rows);
}

std::vector<std::string> split_tags(std::string_view cell) {
    std::vector<std::string> tags;
    std::size_t start = 0;
    auto push = [&](std::string_view piece) {
        std::size_t a = piece.find_first_not_of(" \t");
        if (a == std::string_view::npos) return;
        std::size_t b = piece.find_last_not_of(" \t");
        tags.emplace_back(piece.substr(a, b - a + 1));
    };
    for (std::size_t i = 0; i <= cell.size(); ++i) {
        if (i == cell.size() || cell[i] == ',') {
            push(cell.substr(start, i - start));
            start = i + 1;
        }
    }
    return tags;
}

}  // namespace vc::csv
