#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace spectraledge {

/// Locale-independent: 17 significant digits, '.' as decimal point.
inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

namespace detail {

inline std::string csv_field(const std::string& f)
{
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
        return f;
    }
    std::string out = "\"";
    for (char ch : f) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

inline void write_json_value(std::ostream& os, const nlohmann::ordered_json& j, int indent,
                             int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                os << ",\n";
            }
            first = false;
            os << pad << nlohmann::ordered_json(it.key()).dump() << ": ";
            write_json_value(os, it.value(), indent, depth + 1);
        }
        os << "\n" << close << "}";
        return;
    }
    case nlohmann::ordered_json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << "[";
        bool first = true;
        for (const auto& v : j) {
            if (!first) {
                os << ", ";
            }
            first = false;
            write_json_value(os, v, indent, depth + 1);
        }
        os << "]";
        return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
        const double v = j.get<double>();
        // JSON has no literal for non-finite values
        os << (std::isfinite(v) ? format_double(v) : "null");
        return;
    }
    default:
        os << j.dump();
        return;
    }
}

} // namespace detail

inline void write_csv(std::ostream& os, const CsvTable& t)
{
    for (std::size_t k = 0; k < t.header.size(); ++k) {
        os << (k ? "," : "") << detail::csv_field(t.header[k]);
    }
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            os << (k ? "," : "") << detail::csv_field(row[k]);
        }
        os << "\n";
    }
}

/// Key order is insertion order; floats use format_double.
inline std::string dump_json(const nlohmann::ordered_json& j)
{
    std::ostringstream os;
    detail::write_json_value(os, j, 2, 0);
    os << "\n";
    return os.str();
}

inline void write_file(const std::string& path, const std::string& body)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    }
    f << body;
    if (!f) {
        throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
    }
}

inline void emit_csv(const CsvTable& t, const std::string& path)
{
    std::ostringstream os;
    write_csv(os, t);
    write_file(path, os.str());
}

inline void emit_json(const nlohmann::ordered_json& j, const std::string& path)
{
    write_file(path, dump_json(j));
}

} // namespace spectraledge
