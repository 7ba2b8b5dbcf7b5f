#pragma once

/**
 * @file json_io.hpp
 * @brief MatrixDocument / bilateral-equation JSON schemas and a deterministic writer.
 *
 * Quaternions are 4-arrays [w, x, y, z]. Documents carry an optional
 * "schema": "quatspec/1" tag; any other unknown field is rejected.
 *
 *     {"schema": "quatspec/1", "n": 2, "entries": [[[0,0,0,0], [1,0,0,0]], [[-1,0,0,0], [0,0,0,0]]]}
 *     {"terms": [[P, Q], ...], "rhs": R}
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "quatspec/linearize.hpp"
#include "quatspec/qmatrix.hpp"

namespace quatspec {

inline constexpr std::string_view kSchema = "quatspec/1";

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating input document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_fields(const Json& doc, std::initializer_list<std::string_view> allowed) {
    if (!doc.is_object()) throw ParseError("document must be a JSON object");
    for (const auto& item : doc.items()) {
        bool ok = false;
        for (auto name : allowed) ok = ok || item.key() == name;
        if (!ok) throw ParseError("unknown field \"" + item.key() + "\"");
    }
    if (doc.contains("schema")) {
        if (!doc["schema"].is_string() || doc["schema"].get<std::string>() != kSchema) {
            throw ParseError("unsupported schema (expected \"" + std::string(kSchema) + "\")");
        }
    }
}

}  // namespace detail

inline Json to_json(const Quaternion& q) { return Json::array({q.w, q.x, q.y, q.z}); }

inline Quaternion quaternion_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 4) throw ParseError("quaternion must be an array of 4 numbers");
    double c[4];
    for (std::size_t k = 0; k < 4; ++k) {
        if (!j[k].is_number()) throw ParseError("quaternion components must be numbers");
        c[k] = j[k].get<double>();
        if (!std::isfinite(c[k])) throw ParseError("quaternion components must be finite");
    }
    return {c[0], c[1], c[2], c[3]};
}

inline QMatrix matrix_from_json(const Json& doc) {
    detail::check_fields(doc, {"schema", "n", "entries"});
    if (!doc.contains("n") || !doc["n"].is_number_integer()) throw ParseError("missing integer field \"n\"");
    if (!doc.contains("entries") || !doc["entries"].is_array()) throw ParseError("missing array field \"entries\"");
    const auto n_signed = doc["n"].get<long long>();
    if (n_signed < 1) throw ParseError("\"n\" must be positive");
    const auto n = static_cast<std::size_t>(n_signed);
    const Json& rows = doc["entries"];
    if (rows.size() != n) throw ParseError("dimension mismatch: expected " + std::to_string(n) + " rows");
    QMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) {
            throw ParseError("dimension mismatch: row " + std::to_string(i + 1) + " must have " +
                             std::to_string(n) + " entries");
        }
        for (std::size_t j = 0; j < n; ++j) m(i, j) = quaternion_from_json(rows[i][j]);
    }
    return m;
}

inline Json matrix_to_json(const QMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(row);
    }
    Json doc;
    doc["schema"] = kSchema;
    doc["n"] = m.size();
    doc["entries"] = rows;
    return doc;
}

struct BilateralEquation {
    BilateralForm form;
    Quaternion rhs;
};

inline BilateralEquation bilateral_from_json(const Json& doc) {
    detail::check_fields(doc, {"schema", "terms", "rhs"});
    if (!doc.contains("terms") || !doc["terms"].is_array()) throw ParseError("missing array field \"terms\"");
    if (!doc.contains("rhs")) throw ParseError("missing field \"rhs\"");
    BilateralEquation eq;
    for (const auto& t : doc["terms"]) {
        if (!t.is_array() || t.size() != 2) throw ParseError("each term must be a pair [P, Q]");
        eq.form.add(quaternion_from_json(t[0]), quaternion_from_json(t[1]));
    }
    eq.rhs = quaternion_from_json(doc["rhs"]);
    return eq;
}

inline Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

namespace detail {

inline bool scientific_key(std::string_view key) {
    return key == "residual" || key == "sdet_residual" || key == "sigma";
}

inline std::string format_double(double v, bool scientific) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, scientific ? "%.16e" : "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

inline void write_value(std::ostream& os, const Json& j, int indent, std::string_view key) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& item : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << inner << Json(item.key()).dump() << ": ";
                write_value(os, item.value(), indent + 1, item.key());
            }
            os << "\n" << pad << "}";
            return;
        }
        case Json::value_t::array: {
            // Flat arrays of scalars (quaternions, index pairs) stay on one line.
            const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
            if (j.empty()) {
                os << "[]";
            } else if (flat) {
                os << "[";
                for (std::size_t k = 0; k < j.size(); ++k) {
                    if (k) os << ", ";
                    write_value(os, j[k], indent + 1, key);
                }
                os << "]";
            } else {
                os << "[\n";
                for (std::size_t k = 0; k < j.size(); ++k) {
                    if (k) os << ",\n";
                    os << inner;
                    write_value(os, j[k], indent + 1, key);
                }
                os << "\n" << pad << "]";
            }
            return;
        }
        case Json::value_t::number_float:
            os << format_double(j.get<double>(), scientific_key(key));
            return;
        default:
            os << j.dump();
            return;
    }
}

}  // namespace detail

/// Deterministic pretty printer: field order as inserted, floats with 17
/// significant digits, residual-like fields in scientific notation.
inline std::string write_json(const Json& j) {
    std::ostringstream os;
    detail::write_value(os, j, 0, "");
    os << "\n";
    return os.str();
}

}  // namespace quatspec
