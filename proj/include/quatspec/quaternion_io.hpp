#pragma once

// Text formatting and parsing of quaternions, e.g. "1-i+2j-2k".

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "quatspec/quaternion.hpp"

namespace quatspec {

enum class Symbols { Unicode, Ascii };

namespace detail {

inline std::string format_real(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

}  // namespace detail

/// Pretty printer: "1−𝐢+2𝐣−2𝐤" (Unicode) or "1-i+2j-2k" (ASCII).
/// Unit coefficients are elided, zero components are skipped.
inline std::string to_string(const Quaternion& q, Symbols symbols = Symbols::Ascii, int digits = 17) {
    const bool uni = symbols == Symbols::Unicode;
    const char* units[4] = {"", uni ? "𝐢" : "i", uni ? "𝐣" : "j", uni ? "𝐤" : "k"};
    const char* minus = uni ? "−" : "-";
    const double c[4] = {q.w, q.x, q.y, q.z};

    std::string out;
    for (int n = 0; n < 4; ++n) {
        double v = c[n];
        if (v == 0.0) continue;
        const bool neg = std::signbit(v);
        if (neg) v = -v;
        if (neg) {
            out += minus;
        } else if (!out.empty()) {
            out += '+';
        }
        if (n == 0 || v != 1.0) out += detail::format_real(v, digits);
        out += units[n];
    }
    return out.empty() ? "0" : out;
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << to_string(q, Symbols::Ascii, 10);
}

namespace detail {

inline void skip_spaces(std::string_view& s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
}

inline bool consume(std::string_view& s, std::string_view token) {
    if (s.substr(0, token.size()) == token) {
        s.remove_prefix(token.size());
        return true;
    }
    return false;
}

inline std::optional<double> parse_number(std::string_view& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr == s.data()) return std::nullopt;
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    return v;
}

inline std::optional<Quaternion> parse_tuple(std::string_view s) {
    consume(s, "[");
    double c[4];
    for (int n = 0; n < 4; ++n) {
        skip_spaces(s);
        auto v = parse_number(s);
        if (!v) return std::nullopt;
        c[n] = *v;
        skip_spaces(s);
        if (n < 3 && !consume(s, ",")) return std::nullopt;
    }
    consume(s, "]");
    skip_spaces(s);
    if (!s.empty()) return std::nullopt;
    return Quaternion{c[0], c[1], c[2], c[3]};
}

// Signed sum of terms such as "2", "-i", "+3.5j", "−𝐤".
inline std::optional<Quaternion> parse_symbolic(std::string_view s) {
    Quaternion q;
    bool any = false;
    skip_spaces(s);
    while (!s.empty()) {
        double sign = 1.0;
        if (consume(s, "+")) {
        } else if (consume(s, "-") || consume(s, "−")) {
            sign = -1.0;
        } else if (any) {
            return std::nullopt;
        }
        skip_spaces(s);
        double coeff = 1.0;
        bool has_number = false;
        if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.')) {
            auto v = parse_number(s);
            if (!v) return std::nullopt;
            coeff = *v;
            has_number = true;
        }
        skip_spaces(s);
        double* slot = nullptr;
        if (consume(s, "𝐢") || consume(s, "i")) {
            slot = &q.x;
        } else if (consume(s, "𝐣") || consume(s, "j")) {
            slot = &q.y;
        } else if (consume(s, "𝐤") || consume(s, "k")) {
            slot = &q.z;
        } else if (has_number) {
            slot = &q.w;
        } else {
            return std::nullopt;
        }
        *slot += sign * coeff;
        any = true;
        skip_spaces(s);
    }
    if (!any) return std::nullopt;
    return q;
}

}  // namespace detail

/// Accepts "[w,x,y,z]", "w,x,y,z" or a symbolic sum such as "1-i+2j-2k".
inline std::optional<Quaternion> parse_quaternion(std::string_view text) {
    if (text.find(',') != std::string_view::npos) return detail::parse_tuple(text);
    return detail::parse_symbolic(text);
}

}  // namespace quatspec
