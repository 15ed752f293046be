#pragma once

// Flat key-value experiment configuration.
//
//     # comment
//     experiment = spin-fp
//     N = 2
//     t_grid = 0.05, 0.1, 0.3
//
// Every key is declared in a typed schema; unknown keys, malformed values and
// out-of-range values are rejected with the offending field named. Reals are
// written with 17 significant digits so a config survives a write/read round
// trip bit-exactly.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "brownian/errors.hpp"

namespace brownian::xcli {

enum class FieldType { integer, unsigned_integer, real, integer_list, real_list, text };

inline const char* to_string(FieldType t) {
    switch (t) {
        case FieldType::integer: return "integer";
        case FieldType::unsigned_integer: return "unsigned 64-bit integer";
        case FieldType::real: return "real";
        case FieldType::integer_list: return "integer list";
        case FieldType::real_list: return "real list";
        case FieldType::text: return "text";
    }
    return "?";
}

using Value = std::variant<std::int64_t, std::uint64_t, double, std::vector<std::int64_t>, std::vector<double>, std::string>;

struct FieldSpec {
    std::string name;
    FieldType type;
    std::string default_value;
    std::string help;
    std::optional<double> min;
    std::optional<double> max;
};

using Schema = std::vector<FieldSpec>;

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::int64_t parse_integer(const std::string& field, const std::string& s) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError("field '" + field + "': '" + s + "' is not an integer");
    return v;
}

inline std::uint64_t parse_unsigned(const std::string& field, const std::string& s) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("field '" + field + "': '" + s + "' is not an unsigned 64-bit integer");
    return v;
}

inline double parse_real(const std::string& field, const std::string& s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError("field '" + field + "': '" + s + "' is not a real number");
    return v;
}

inline void check_range(const FieldSpec& f, double v) {
    if (f.min && v < *f.min)
        throw ConfigError("field '" + f.name + "': value " + format_real(v) + " is below minimum " + format_real(*f.min));
    if (f.max && v > *f.max)
        throw ConfigError("field '" + f.name + "': value " + format_real(v) + " is above maximum " + format_real(*f.max));
}

}  // namespace detail

inline Value parse_value(const FieldSpec& f, const std::string& raw) {
    const std::string s = trim(raw);
    switch (f.type) {
        case FieldType::integer: {
            const auto v = detail::parse_integer(f.name, s);
            detail::check_range(f, static_cast<double>(v));
            return v;
        }
        case FieldType::unsigned_integer: return detail::parse_unsigned(f.name, s);
        case FieldType::real: {
            const auto v = detail::parse_real(f.name, s);
            detail::check_range(f, v);
            return v;
        }
        case FieldType::integer_list: {
            std::vector<std::int64_t> out;
            for (const auto& item : detail::split_list(s)) {
                out.push_back(detail::parse_integer(f.name, item));
                detail::check_range(f, static_cast<double>(out.back()));
            }
            if (out.empty()) throw ConfigError("field '" + f.name + "': list is empty");
            return out;
        }
        case FieldType::real_list: {
            std::vector<double> out;
            for (const auto& item : detail::split_list(s)) {
                out.push_back(detail::parse_real(f.name, item));
                detail::check_range(f, out.back());
            }
            if (out.empty()) throw ConfigError("field '" + f.name + "': list is empty");
            return out;
        }
        case FieldType::text: return s;
    }
    return s;
}

inline std::string format_value(const Value& v) {
    struct {
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(std::uint64_t x) const { return std::to_string(x); }
        std::string operator()(double x) const { return format_real(x); }
        std::string operator()(const std::vector<std::int64_t>& xs) const {
            std::string s;
            for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
            return s;
        }
        std::string operator()(const std::vector<double>& xs) const {
            std::string s;
            for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_real(xs[i]);
            return s;
        }
        std::string operator()(const std::string& x) const { return x; }
    } visitor;
    return std::visit(visitor, v);
}

class ExperimentConfig {
public:
    ExperimentConfig(std::string experiment, Schema schema) : experiment_(std::move(experiment)), schema_(std::move(schema)) {
        for (const auto& f : schema_) values_[f.name] = parse_value(f, f.default_value);
    }

    const std::string& experiment() const noexcept { return experiment_; }
    const Schema& schema() const noexcept { return schema_; }
    const std::map<std::string, Value>& values() const noexcept { return values_; }

    const FieldSpec& spec(const std::string& key) const {
        for (const auto& f : schema_)
            if (f.name == key) return f;
        throw ConfigError("unknown field '" + key + "' for experiment '" + experiment_ + "'");
    }

    void set(const std::string& key, const std::string& raw) {
        const auto k = trim(key);
        if (k == "experiment") {
            if (trim(raw) != experiment_)
                throw ConfigError("field 'experiment': config is for '" + trim(raw) + "', running '" + experiment_ + "'");
            return;
        }
        values_[k] = parse_value(spec(k), raw);
    }

    /// "key=value" override.
    void apply_override(const std::string& assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
        set(assignment.substr(0, eq), assignment.substr(eq + 1));
    }

    void parse_text(const std::string& text, const std::string& origin = "<config>") {
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            try {
                set(line.substr(0, eq), line.substr(eq + 1));
            } catch (const ConfigError& e) {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
    }

    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        parse_text(buf.str(), path);
    }

    /// Canonical text: experiment line, then keys in schema order.
    std::string to_text() const {
        std::string out = "experiment = " + experiment_ + "\n";
        for (const auto& f : schema_) out += f.name + " = " + format_value(values_.at(f.name)) + "\n";
        return out;
    }

    /// FNV-1a 64 of the canonical text.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : to_text()) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }

    std::int64_t integer(const std::string& key) const { return get<std::int64_t>(key); }
    std::uint64_t unsigned_integer(const std::string& key) const { return get<std::uint64_t>(key); }
    double real(const std::string& key) const { return get<double>(key); }
    const std::vector<std::int64_t>& integers(const std::string& key) const { return get<std::vector<std::int64_t>>(key); }
    const std::vector<double>& reals(const std::string& key) const { return get<std::vector<double>>(key); }
    const std::string& text(const std::string& key) const { return get<std::string>(key); }

private:
    template <typename T>
    const T& get(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("unknown field '" + key + "'");
        const T* p = std::get_if<T>(&it->second);
        if (!p) throw ConfigError("field '" + key + "' has type " + to_string(spec(key).type));
        return *p;
    }

    std::string experiment_;
    Schema schema_;
    std::map<std::string, Value> values_;
};

}  // namespace brownian::xcli
