#pragma once

/**
 * @file linearize.hpp
 * @brief Real 4x4 matrices of R-linear maps H -> H.
 *
 * A quaternion X = w + x i + y j + z k is identified with the column
 * vector (w, x, y, z). Left multiplication X -> PX, right multiplication
 * X -> XQ and finite sums X -> sum P_i X Q_i are all R-linear and are
 * represented here by 4x4 real matrices acting on that vector.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <utility>
#include <vector>

#include "quatspec/errors.hpp"
#include "quatspec/quaternion.hpp"

namespace quatspec {

using RealMat4 = Eigen::Matrix4d;
using RealVec4 = Eigen::Vector4d;

inline RealVec4 vec(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }
inline Quaternion unvec(const RealVec4& v) { return {v[0], v[1], v[2], v[3]}; }

/// X -> sum_i P_i X Q_i. Terms keep insertion order.
struct BilateralForm {
    struct Term {
        Quaternion left;
        Quaternion right;
    };

    std::vector<Term> terms;

    BilateralForm() = default;
    BilateralForm(std::initializer_list<Term> t) : terms(t) {}

    BilateralForm& add(const Quaternion& left, const Quaternion& right) {
        terms.push_back({left, right});
        return *this;
    }

    BilateralForm& append(const BilateralForm& other) {
        terms.insert(terms.end(), other.terms.begin(), other.terms.end());
        return *this;
    }

    Quaternion operator()(const Quaternion& x) const {
        Quaternion sum;
        for (const auto& t : terms) sum += t.left * x * t.right;
        return sum;
    }
};

/// Imaginary part of X -> PX.
inline RealMat4 left_imag_matrix(const Quaternion& p) {
    RealMat4 a;
    // clang-format off
    a << 0,   -p.x, -p.y, -p.z,
         p.x,  0,   -p.z,  p.y,
         p.y,  p.z,  0,   -p.x,
         p.z, -p.y,  p.x,  0;
    // clang-format on
    return a;
}

/// Imaginary part of X -> XQ.
inline RealMat4 right_imag_matrix(const Quaternion& q) {
    RealMat4 b;
    // clang-format off
    b << 0,   -q.x, -q.y, -q.z,
         q.x,  0,    q.z, -q.y,
         q.y, -q.z,  0,    q.x,
         q.z,  q.y, -q.x,  0;
    // clang-format on
    return b;
}

/// Matrix of X -> PX.
inline RealMat4 left_matrix(const Quaternion& p) {
    return p.w * RealMat4::Identity() + left_imag_matrix(p);
}

/// Matrix of X -> XQ.
inline RealMat4 right_matrix(const Quaternion& q) {
    return q.w * RealMat4::Identity() + right_imag_matrix(q);
}

inline RealMat4 bilateral_matrix(const BilateralForm& form) {
    RealMat4 m = RealMat4::Zero();
    for (const auto& t : form.terms) m += left_matrix(t.left) * right_matrix(t.right);
    return m;
}

/// Matrix of the Sylvester operator X -> PX + XQ, written out entrywise.
inline RealMat4 sylvester_matrix(const Quaternion& p, const Quaternion& q) {
    const double d = p.w + q.w;
    RealMat4 j;
    // clang-format off
    j << d,          -p.x - q.x, -p.y - q.y, -p.z - q.z,
         p.x + q.x,   d,         -p.z + q.z,  p.y - q.y,
         p.y + q.y,   p.z - q.z,  d,         -p.x + q.x,
         p.z + q.z,  -p.y + q.y,  p.x - q.x,  d;
    // clang-format on
    return j;
}

/// Closed form of det(sylvester_matrix(p, q)); always >= 0.
inline double sylvester_det(const Quaternion& p, const Quaternion& q) {
    const double d = p.w + q.w;
    const double d2 = d * d;
    const double ip = p.x * p.x + p.y * p.y + p.z * p.z;
    const double iq = q.x * q.x + q.y * q.y + q.z * q.z;
    const double diff = ip - iq;
    return d2 * d2 + 2.0 * d2 * (ip + iq) + diff * diff;
}

inline RealVec4 singular_values(const RealMat4& m) {
    Eigen::JacobiSVD<RealMat4> svd(m);
    return svd.singularValues();
}

/// Number of singular values at least tol * max(sigma_max, floor).
///
/// With floor = 0 the threshold is purely relative. Callers that know the
/// natural magnitude of the map pass it as floor so that a matrix which is
/// tiny everywhere reports rank 0 rather than a spurious full rank.
inline int numeric_rank(const RealMat4& m, double tol = 1e-9, double floor = 0.0) {
    const RealVec4 s = singular_values(m);  // descending
    const double ref = std::max(s[0], floor);
    if (!(ref > 0.0)) return 0;
    const double cut = tol * ref;
    int rank = 0;
    for (int n = 0; n < 4; ++n) {
        if (s[n] > cut) ++rank;
    }
    return rank;
}

inline constexpr double kDefaultRankTol = 1e-9;

/// Solves sum_i P_i X Q_i = rhs for X.
/// Throws RankDeficientError when the real system is numerically singular.
inline Quaternion solve_bilateral(const BilateralForm& form, const Quaternion& rhs,
                                  double rank_tol = kDefaultRankTol) {
    const RealMat4 m = bilateral_matrix(form);
    const int rank = numeric_rank(m, rank_tol);
    if (rank < 4) throw RankDeficientError(rank);
    const RealVec4 x = m.partialPivLu().solve(vec(rhs));
    return unvec(x);
}

}  // namespace quatspec
