// toml.hpp
// Reader for the TOML-compatible subset the scenario configs use: [tables],
// [[arrays of tables]], dotted section paths, strings, integers (with
// underscore separators), floats, booleans, flat arrays and # comments.
// Every node remembers its line for precise error messages, and consumers
// reject keys they do not understand.

#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "laneboost/time.hpp"

namespace laneboost {

struct TomlError : std::runtime_error {
    TomlError(int line, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

struct TomlValue {
    enum class Kind { Str, Int, Float, Bool, Array };
    Kind kind{Kind::Str};
    std::string s;
    std::int64_t i{0};
    double d{0.0};
    bool b{false};
    std::vector<TomlValue> items;
    int line{0};

    std::string type_name() const {
        switch (kind) {
            case Kind::Str: return "string";
            case Kind::Int: return "integer";
            case Kind::Float: return "float";
            case Kind::Bool: return "bool";
            case Kind::Array: return "array";
        }
        return "?";
    }
};

struct TomlTable {
    std::map<std::string, TomlValue> values;
    std::map<std::string, TomlTable> tables;
    std::map<std::string, std::vector<TomlTable>> arrays;
    int line{0};

    bool has(const std::string& key) const { return values.count(key) > 0; }

    const TomlValue& at(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end()) throw TomlError(line, "missing required key '" + key + "'");
        return it->second;
    }

    std::string get_string(const std::string& key) const {
        const auto& v = at(key);
        if (v.kind != TomlValue::Kind::Str)
            throw TomlError(v.line, "key '" + key + "' must be a string, got " + v.type_name());
        return v.s;
    }

    std::int64_t get_int(const std::string& key) const {
        const auto& v = at(key);
        if (v.kind != TomlValue::Kind::Int)
            throw TomlError(v.line, "key '" + key + "' must be an integer, got " + v.type_name());
        return v.i;
    }

    double get_double(const std::string& key) const {
        const auto& v = at(key);
        if (v.kind == TomlValue::Kind::Int) return static_cast<double>(v.i);
        if (v.kind != TomlValue::Kind::Float)
            throw TomlError(v.line, "key '" + key + "' must be a number, got " + v.type_name());
        return v.d;
    }

    bool get_bool(const std::string& key) const {
        const auto& v = at(key);
        if (v.kind != TomlValue::Kind::Bool)
            throw TomlError(v.line, "key '" + key + "' must be a bool, got " + v.type_name());
        return v.b;
    }

    std::string get_string_or(const std::string& key, const std::string& dflt) const {
        return has(key) ? get_string(key) : dflt;
    }
    std::int64_t get_int_or(const std::string& key, std::int64_t dflt) const {
        return has(key) ? get_int(key) : dflt;
    }
    double get_double_or(const std::string& key, double dflt) const {
        return has(key) ? get_double(key) : dflt;
    }
    bool get_bool_or(const std::string& key, bool dflt) const {
        return has(key) ? get_bool(key) : dflt;
    }

    // Strict schema check: throws on the first key, subtable or table-array
    // that is not in the allowed lists.
    void expect_only(const std::vector<std::string>& keys,
                     const std::vector<std::string>& subtables = {},
                     const std::vector<std::string>& table_arrays = {}) const {
        auto in = [](const std::vector<std::string>& xs, const std::string& k) {
            for (const auto& x : xs)
                if (x == k) return true;
            return false;
        };
        for (const auto& [k, v] : values)
            if (!in(keys, k)) throw TomlError(v.line, "unknown key '" + k + "'");
        for (const auto& [k, t] : tables)
            if (!in(subtables, k)) throw TomlError(t.line, "unknown table '" + k + "'");
        for (const auto& [k, a] : arrays)
            if (!in(table_arrays, k))
                throw TomlError(a.empty() ? line : a.front().line,
                                "unknown table array '" + k + "'");
    }
};

namespace toml_detail {

inline void skip_ws(std::string_view s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline TomlValue parse_scalar(std::string_view raw, int line);

inline TomlValue parse_value(std::string_view s, std::size_t& i, int line) {
    skip_ws(s, i);
    if (i >= s.size()) throw TomlError(line, "missing value");
    if (s[i] == '"') {
        TomlValue v;
        v.kind = TomlValue::Kind::Str;
        v.line = line;
        ++i;
        while (i < s.size() && s[i] != '"') {
            if (s[i] == '\\' && i + 1 < s.size()) {
                ++i;
                switch (s[i]) {
                    case 'n': v.s.push_back('\n'); break;
                    case 't': v.s.push_back('\t'); break;
                    case '"': v.s.push_back('"'); break;
                    case '\\': v.s.push_back('\\'); break;
                    default: throw TomlError(line, "unsupported escape in string");
                }
            } else {
                v.s.push_back(s[i]);
            }
            ++i;
        }
        if (i >= s.size()) throw TomlError(line, "unterminated string");
        ++i;
        return v;
    }
    if (s[i] == '[') {
        TomlValue v;
        v.kind = TomlValue::Kind::Array;
        v.line = line;
        ++i;
        skip_ws(s, i);
        if (i < s.size() && s[i] == ']') {
            ++i;
            return v;
        }
        while (true) {
            v.items.push_back(parse_value(s, i, line));
            skip_ws(s, i);
            if (i < s.size() && s[i] == ',') {
                ++i;
                skip_ws(s, i);
                continue;
            }
            if (i < s.size() && s[i] == ']') {
                ++i;
                return v;
            }
            throw TomlError(line, "expected ',' or ']' in array");
        }
    }
    // Bare scalar up to comma/bracket/comment/space run.
    std::size_t start = i;
    while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != '#') ++i;
    std::string_view raw = s.substr(start, i - start);
    while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t')) raw.remove_suffix(1);
    return parse_scalar(raw, line);
}

inline TomlValue parse_scalar(std::string_view raw, int line) {
    TomlValue v;
    v.line = line;
    if (raw.empty()) throw TomlError(line, "empty value");
    if (raw == "true" || raw == "false") {
        v.kind = TomlValue::Kind::Bool;
        v.b = raw == "true";
        return v;
    }
    std::string digits;
    bool is_int = true, is_num = true, seen_digit = false;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        char c = raw[k];
        if (c == '_') continue;  // separator
        if (std::isdigit(static_cast<unsigned char>(c))) {
            seen_digit = true;
        } else if ((c == '+' || c == '-') && k == 0) {
            // sign ok
        } else if (c == '.' || c == 'e' || c == 'E' ||
                   ((c == '+' || c == '-') && (raw[k - 1] == 'e' || raw[k - 1] == 'E'))) {
            is_int = false;
        } else {
            is_num = false;
            break;
        }
        digits.push_back(c);
    }
    if (!is_num || !seen_digit)
        throw TomlError(line, "cannot parse value '" + std::string(raw) + "'");
    if (is_int) {
        v.kind = TomlValue::Kind::Int;
        v.i = std::stoll(digits);
    } else {
        v.kind = TomlValue::Kind::Float;
        v.d = std::stod(digits);
    }
    return v;
}

inline std::vector<std::string> split_path(std::string_view s, int line) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == '.') {
            if (cur.empty()) throw TomlError(line, "empty path segment");
            parts.push_back(cur);
            cur.clear();
        } else if (c == ' ' || c == '\t') {
            continue;
        } else {
            cur.push_back(c);
        }
    }
    if (cur.empty()) throw TomlError(line, "empty path segment");
    parts.push_back(cur);
    return parts;
}

} // namespace toml_detail

inline TomlTable parse_toml(std::string_view text) {
    using namespace toml_detail;
    TomlTable root;
    TomlTable* current = &root;
    int lineno = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;

        std::size_t i = 0;
        skip_ws(line, i);
        if (i >= line.size() || line[i] == '#' || line[i] == '\r') continue;

        if (line[i] == '[') {
            const bool is_array = i + 1 < line.size() && line[i + 1] == '[';
            const std::size_t open = i + (is_array ? 2 : 1);
            const std::size_t close = line.find(is_array ? "]]" : "]", open);
            if (close == std::string_view::npos) throw TomlError(lineno, "unterminated section header");
            const auto path = split_path(line.substr(open, close - open), lineno);
            TomlTable* t = &root;
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                t = &t->tables[path[k]];
                if (t->line == 0) t->line = lineno;
            }
            if (is_array) {
                auto& vec = t->arrays[path.back()];
                vec.emplace_back();
                vec.back().line = lineno;
                current = &vec.back();
            } else {
                auto& sub = t->tables[path.back()];
                if (sub.line == 0) sub.line = lineno;
                current = &sub;
            }
            continue;
        }

        const std::size_t eq = line.find('=', i);
        if (eq == std::string_view::npos) throw TomlError(lineno, "expected 'key = value'");
        std::string key(line.substr(i, eq - i));
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        if (key.empty()) throw TomlError(lineno, "empty key");

        std::size_t vi = eq + 1;
        TomlValue v = parse_value(line, vi, lineno);
        skip_ws(line, vi);
        if (vi < line.size() && line[vi] != '#' && line[vi] != '\r')
            throw TomlError(lineno, "trailing characters after value");
        if (current->values.count(key)) throw TomlError(lineno, "duplicate key '" + key + "'");
        current->values.emplace(std::move(key), std::move(v));
    }
    return root;
}

// "YYYY-MM-DD HH:MM:SS" (UTC) -> epoch ms; the config format for timestamps.
inline TimeMs parse_utc_string(const std::string& s, int line) {
    int y, mo, d, h = 0, mi = 0, se = 0;
    const int n = std::sscanf(s.c_str(), "%d-%d-%d %d:%d:%d", &y, &mo, &d, &h, &mi, &se);
    if (n != 3 && n != 6) throw TomlError(line, "expected 'YYYY-MM-DD[ HH:MM:SS]', got '" + s + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || se < 0 ||
        se > 60)
        throw TomlError(line, "timestamp out of range: '" + s + "'");
    return utc_ms(y, static_cast<unsigned>(mo), static_cast<unsigned>(d),
                  static_cast<unsigned>(h), static_cast<unsigned>(mi),
                  static_cast<unsigned>(se));
}

// Accepts either an epoch-ms integer or a "YYYY-MM-DD HH:MM:SS" string.
inline TimeMs toml_time(const TomlValue& v) {
    if (v.kind == TomlValue::Kind::Int) return TimeMs{v.i};
    if (v.kind == TomlValue::Kind::Str) return parse_utc_string(v.s, v.line);
    throw TomlError(v.line, "expected a timestamp (epoch ms or 'YYYY-MM-DD HH:MM:SS')");
}

} // namespace laneboost
