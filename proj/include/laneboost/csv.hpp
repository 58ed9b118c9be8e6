// csv.hpp
// Fixed-schema CSV reading and writing. Headers must match the frozen
// schemas exactly (see SCHEMAS.md); parse failures name the column and line.
// Writers format doubles with a pinned precision so byte-identical replays
// stay byte-identical.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace laneboost {

struct CsvError : std::runtime_error {
    CsvError(const std::string& file, std::size_t line, const std::string& what_arg)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what_arg) {}
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

class CsvReader {
public:
    CsvReader(const std::string& path, const std::vector<std::string>& schema)
        : path_(path), schema_(schema) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::string line;
        if (!std::getline(in, line)) throw CsvError(path, 1, "missing header");
        auto header = detail::split_csv_line(line);
        if (header != schema) {
            std::string want;
            for (std::size_t i = 0; i < schema.size(); ++i)
                want += (i ? "," : "") + schema[i];
            throw CsvError(path, 1, "header mismatch; expected '" + want + "' got '" + line + "'");
        }
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto fields = detail::split_csv_line(line);
            if (fields.size() != schema.size())
                throw CsvError(path, lineno,
                               "expected " + std::to_string(schema.size()) + " fields, got " +
                                   std::to_string(fields.size()));
            rows_.push_back(std::move(fields));
            row_lines_.push_back(lineno);
        }
    }

    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }

    const std::string& field(std::size_t row, std::size_t col) const { return rows_[row][col]; }

    std::int64_t int_field(std::size_t row, std::size_t col) const {
        const std::string& s = rows_[row][col];
        std::int64_t v{};
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw CsvError(path_, row_lines_[row],
                           "column '" + schema_[col] + "': invalid integer '" + s + "'");
        return v;
    }

    double double_field(std::size_t row, std::size_t col) const {
        const std::string& s = rows_[row][col];
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw CsvError(path_, row_lines_[row],
                           "column '" + schema_[col] + "': invalid number '" + s + "'");
        }
    }

    std::size_t line_of(std::size_t row) const { return row_lines_[row]; }
    const std::string& path() const { return path_; }
    const std::vector<std::string>& schema() const { return schema_; }

private:
    std::string path_;
    std::vector<std::string> schema_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> row_lines_;
};

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& schema) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
        for (std::size_t i = 0; i < schema.size(); ++i) {
            if (i) out_ << ',';
            out_ << schema[i];
        }
        out_ << '\n';
        cols_ = schema.size();
    }

    void write_row(const std::vector<std::string>& fields) {
        if (fields.size() != cols_)
            throw std::logic_error("CsvWriter: wrong field count");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t cols_{0};
};

// Pinned double formatting for CSV output.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace laneboost
