#pragma once

/**
 * @file quaternion.hpp
 * @brief Hamilton quaternions q = w + x i + y j + z k over double.
 *
 * i^2 = j^2 = k^2 = ijk = -1, so ij = k but ji = -k. Every other module
 * works with coordinates in the basis {1, i, j, k}, in that order.
 */

#include <array>
#include <cmath>
#include <complex>

#include "quatspec/errors.hpp"

namespace quatspec {

struct Quaternion {
    double w = 0.0;  // real part
    double x = 0.0;  // i
    double y = 0.0;  // j
    double z = 0.0;  // k

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_) : w{w_} {}  // NOLINT: reals embed implicitly
    constexpr Quaternion(double w_, double x_, double y_, double z_) : w{w_}, x{x_}, y{y_}, z{z_} {}

    static constexpr Quaternion i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion k() { return {0, 0, 0, 1}; }

    static constexpr Quaternion from_array(const std::array<double, 4>& a) {
        return {a[0], a[1], a[2], a[3]};
    }
    constexpr std::array<double, 4> to_array() const { return {w, x, y, z}; }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr double real() const { return w; }
    constexpr Quaternion imag() const { return {0, x, y, z}; }
    constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
    constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::hypot(std::hypot(w, x), std::hypot(y, z)); }
    double imag_norm() const { return std::hypot(x, std::hypot(y, z)); }

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

// Hamilton product; not commutative.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline Quaternion mul(const Quaternion& p, const Quaternion& q) { return p * q; }

inline double abs(const Quaternion& q) { return q.norm(); }

/// q^{-1} = conj(q) / |q|^2. Throws DomainError for q == 0.
inline Quaternion inv(const Quaternion& q) {
    const double n2 = q.norm2();
    if (!(n2 > 0.0)) {
        throw DomainError("non-invertible quaternion");
    }
    return q.conj() / n2;
}

/// Same norm and same real part, compared with a scale-relative tolerance.
/// Similar quaternions are exactly the conjugates u q u^{-1}.
inline bool similar(const Quaternion& p, const Quaternion& q, double tol) {
    const double np = p.norm();
    const double nq = q.norm();
    const double slack = tol * (1.0 + np + nq);
    return std::abs(np - nq) <= slack && std::abs(p.w - q.w) <= slack;
}

inline double distance(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

inline bool approx_equal(const Quaternion& a, const Quaternion& b, double tol) {
    return distance(a, b) <= tol * (1.0 + a.norm() + b.norm());
}

inline bool is_real(const Quaternion& q, double tol) { return q.imag_norm() <= tol; }

/// Splitting q = alpha + j beta with alpha, beta complex:
/// alpha = w + x i, beta = y - z i.
inline std::complex<double> complex_part(const Quaternion& q) { return {q.w, q.x}; }
inline std::complex<double> j_part(const Quaternion& q) { return {q.y, -q.z}; }

inline Quaternion from_complex_pair(std::complex<double> alpha, std::complex<double> beta) {
    return {alpha.real(), alpha.imag(), beta.real(), -beta.imag()};
}

}  // namespace quatspec
