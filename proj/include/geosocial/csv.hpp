#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "geosocial/error.hpp"

namespace geosocial::csv {

/// Shortest round-trip decimal representation; '.' separator regardless of locale.
inline std::string format_double(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

/// RFC-4180 quoting: fields containing comma, quote, CR or LF are quoted and
/// embedded quotes doubled.
inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (const char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Line-oriented writer. Records end with CRLF-free "\n" so outputs diff cleanly.
class Writer {
public:
    explicit Writer(std::ostream& os) : os_(&os) {}

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((write_field(fields, first)), ...);
        *os_ << '\n';
    }

    void row(const std::vector<std::string>& fields) {
        bool first = true;
        for (const auto& f : fields) write_field(f, first);
        *os_ << '\n';
    }

private:
    template <typename T>
    void write_field(const T& value, bool& first) {
        if (!first) *os_ << ',';
        first = false;
        if constexpr (std::is_same_v<T, double>) {
            *os_ << format_double(value);
        } else if constexpr (std::is_arithmetic_v<T>) {
            *os_ << value;
        } else {
            *os_ << quote(std::string_view(value));
        }
    }

    std::ostream* os_;
};

/// Parses a whole RFC-4180 document. Quoted fields may span lines.
inline std::vector<std::vector<std::string>> parse(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
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
    while (i < text.size()) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_row();
        } else {
            field.push_back(c);
            field_started = true;
        }
        ++i;
    }
    if (in_quotes) throw IngestError("csv: unterminated quoted field");
    if (field_started || !row.empty()) end_row();
    return rows;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Reads a CSV file and checks its header row against `expected_header`.
/// Returns the data rows only; blank lines are skipped.
inline std::vector<std::vector<std::string>> read_table(const std::string& path,
                                                        const std::vector<std::string>& expected_header) {
    auto rows = parse(read_file(path));
    if (rows.empty()) throw IngestError(path + ": missing header row");
    auto header = rows.front();
    // Tolerate a UTF-8 byte order mark on the first column.
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
    if (header != expected_header) throw IngestError(path + ": unexpected header");
    std::vector<std::vector<std::string>> data;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() == 1 && rows[i][0].empty()) continue;
        if (rows[i].size() != expected_header.size()) {
            throw IngestError(path + ": row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                              " fields, expected " + std::to_string(expected_header.size()));
        }
        data.push_back(std::move(rows[i]));
    }
    return data;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<double> parse_double(std::string_view s) {
    double v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace geosocial::csv
