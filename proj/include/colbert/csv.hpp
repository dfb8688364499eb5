#pragma once

// Minimal RFC 4180 CSV reading and writing: quoted fields, doubled quotes,
// embedded newlines, CRLF or LF line ends, optional UTF-8 BOM.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "colbert/error.hpp"

namespace colbert::csv {

using Row = std::vector<std::string>;

inline std::vector<Row> parse(std::string_view data) {
    if (data.substr(0, 3) == "\xEF\xBB\xBF") data.remove_prefix(3);
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };
    for (std::size_t i = 0; i < data.size(); ++i) {
        const char c = data[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < data.size() && data[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started && field.empty()) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') {
            // handled by the following '\n'
        } else if (c == '\n') {
            end_row();
            ++line;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) throw Error(ErrorCode::bad_csv, "unterminated quoted field near line " + std::to_string(line));
    if (field_started || !field.empty() || !row.empty()) end_row();
    return rows;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::missing_file, path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Reads one named column from a CSV file with a header row.
inline std::vector<std::string> read_column(const std::filesystem::path& path, std::string_view column) {
    const auto rows = parse(read_file(path));
    if (rows.empty()) throw Error(ErrorCode::bad_csv, path.string() + ": no header row");
    const auto& header = rows.front();
    std::size_t index = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == column) index = i;
    }
    if (index == header.size()) {
        throw Error(ErrorCode::bad_csv, path.string() + ": column '" + std::string(column) + "' not found");
    }
    std::vector<std::string> values;
    values.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() == 1 && rows[r][0].empty()) continue; // blank line
        if (rows[r].size() <= index) {
            throw Error(ErrorCode::bad_csv, path.string() + ": row " + std::to_string(r) + " is missing column '" +
                                                std::string(column) + "'");
        }
        values.push_back(rows[r][index]);
    }
    return values;
}

inline std::string escape(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                              (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << escape(row[i]);
    }
    out << '\n';
}

} // namespace colbert::csv
