#pragma once

// CSV emission: RFC 4180 quoting, '.' decimal separator, reals as %.17g.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <variant>
#include <vector>

#include "brownian/errors.hpp"
#include "brownian/xcli/config.hpp"

namespace brownian::xcli {

enum class ColumnType { integer, real, text };

struct Column {
    std::string name;
    ColumnType type;
};

using CsvSchema = std::vector<Column>;
using Cell = std::variant<std::int64_t, double, std::string>;
using Row = std::vector<Cell>;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string format_cell(const Cell& cell, const Column& col) {
    switch (col.type) {
        case ColumnType::integer:
            if (const auto* v = std::get_if<std::int64_t>(&cell)) return std::to_string(*v);
            break;
        case ColumnType::real:
            if (const auto* v = std::get_if<double>(&cell)) {
                if (std::isnan(*v)) return "nan";
                if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
                return format_real(*v);
            }
            if (const auto* v = std::get_if<std::int64_t>(&cell)) return format_real(static_cast<double>(*v));
            break;
        case ColumnType::text:
            if (const auto* v = std::get_if<std::string>(&cell)) return quote_field(*v);
            break;
    }
    throw ValidationError("CSV column '" + col.name + "' received a value of the wrong type");
}

inline std::string render_csv(const CsvSchema& schema, const std::vector<Row>& rows) {
    std::string out;
    for (std::size_t c = 0; c < schema.size(); ++c) out += (c ? "," : "") + quote_field(schema[c].name);
    out += "\r\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != schema.size())
            throw ValidationError("CSV row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                  " cells, schema has " + std::to_string(schema.size()));
        for (std::size_t c = 0; c < schema.size(); ++c) out += (c ? "," : "") + format_cell(rows[r][c], schema[c]);
        out += "\r\n";
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    const std::size_t n = std::fwrite(content.data(), 1, content.size(), f);
    const bool ok = n == content.size() && std::fclose(f) == 0;
    if (!ok) throw IoError("failed writing '" + path + "'");
}

inline void emit_csv(const std::string& path, const CsvSchema& schema, const std::vector<Row>& rows) {
    write_file(path, render_csv(schema, rows));
}

}  // namespace brownian::xcli
