#pragma once

/**
 * @file sdet.hpp
 * @brief Study determinant, quasideterminants and inversion of quaternionic matrices.
 *
 * Writing A = X + j Y with complex X, Y, the complex adjoint is the 2n x 2n
 * block matrix
 *
 *     c(A) = [ X  -conj(Y) ]
 *            [ Y   conj(X) ]
 *
 * and c(AB) = c(A) c(B). det c(A) is real and nonnegative; its square root
 * Sdet(A) is zero exactly on singular matrices and equals |q_1 ... q_n| on
 * diag(q_1, ..., q_n).
 */

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "quatspec/errors.hpp"
#include "quatspec/qmatrix.hpp"

namespace quatspec {

using ComplexMatrix = Eigen::MatrixXcd;

inline ComplexMatrix complex_adjoint(const QMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    ComplexMatrix c(2 * n, 2 * n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index s = 0; s < n; ++s) {
            const Quaternion& q = a(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
            const std::complex<double> x = complex_part(q);
            const std::complex<double> y = j_part(q);
            c(r, s) = x;
            c(r, s + n) = -std::conj(y);
            c(r + n, s) = y;
            c(r + n, s + n) = std::conj(x);
        }
    }
    return c;
}

/// det c(A), real up to rounding. LU with partial pivoting.
inline double adjoint_determinant(const QMatrix& a) {
    if (a.size() == 0) return 1.0;
    return complex_adjoint(a).partialPivLu().determinant().real();
}

inline double sdet(const QMatrix& a) {
    const double d = adjoint_determinant(a);
    if (d <= 0.0) {
        // Hadamard bound of c(A) is the square of the quaternionic one.
        const double h = a.hadamard_bound();
        if (d < -1e-10 * h * h) {
            throw ConsistencyError("negative adjoint determinant " + std::to_string(d));
        }
        return 0.0;
    }
    return std::sqrt(d);
}

/// Relative threshold below which sdet(A) / hadamard_bound(A) counts as zero.
inline constexpr double kSingularTol = 1e-13;

inline bool is_singular(const QMatrix& a, double tol = kSingularTol) {
    return sdet(a) <= tol * a.hadamard_bound();
}

/// Gelfand-Retakh quasideterminant |A|_{ij} (0-based indices).
///
/// Defined iff n == 1 or the complementary matrix A^{i,j} is invertible.
/// The expansion sums a_{iq} |A^{i,j}|_{pq}^{-1} a_{pj} over the pairs whose
/// lower-order quasideterminant is defined and non-null; the omitted pairs
/// correspond to zero entries of (A^{i,j})^{-1}.
inline std::optional<Quaternion> quasidet(const QMatrix& a, std::size_t i, std::size_t j) {
    const std::size_t n = a.size();
    if (i >= n || j >= n) throw std::out_of_range("quasidet index");
    if (n == 1) return a(0, 0);

    const QMatrix sub = a.minor(i, j);
    if (is_singular(sub)) return std::nullopt;

    const double null_tol = 1e-12 * (1.0 + a.max_abs());
    Quaternion value = a(i, j);
    // sub row p' <-> a row p (skipping i), sub column q' <-> a column q (skipping j).
    for (std::size_t p = 0, ps = 0; p < n; ++p) {
        if (p == i) continue;
        for (std::size_t q = 0, qs = 0; q < n; ++q) {
            if (q == j) continue;
            const auto lower = quasidet(sub, ps, qs);
            if (lower && lower->norm() > null_tol) {
                value -= a(i, q) * inv(*lower) * a(p, j);
            }
            ++qs;
        }
        ++ps;
    }
    return value;
}

/// Gauss-Jordan elimination over H with partial pivoting by entry norm.
inline QMatrix inverse_by_elimination(const QMatrix& a) {
    const std::size_t n = a.size();
    QMatrix m = a;
    QMatrix x = QMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (m(r, col).norm2() > m(piv, col).norm2()) piv = r;
        if (m(piv, col).norm2() == 0.0) throw SingularMatrixError(sdet(a));
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(m(piv, k), m(col, k));
                std::swap(x(piv, k), x(col, k));
            }
        }
        const Quaternion pinv = inv(m(col, col));
        for (std::size_t k = 0; k < n; ++k) {
            m(col, k) = pinv * m(col, k);
            x(col, k) = pinv * x(col, k);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Quaternion f = m(r, col);
            if (f.norm2() == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) {
                m(r, k) -= f * m(col, k);
                x(r, k) -= f * x(col, k);
            }
        }
    }
    return x;
}

namespace detail {

inline double inverse_residual(const QMatrix& a, const QMatrix& x) {
    const QMatrix id = QMatrix::identity(a.size());
    return std::max(max_abs_diff(a * x, id), max_abs_diff(x * a, id));
}

}  // namespace detail

/// A^{-1} with entries (A^{-1})_{ij} = |A|_{ji}^{-1}.
///
/// Falls back to elimination when some quasideterminant is undefined or the
/// quasideterminant result does not reproduce the identity.
inline QMatrix inverse(const QMatrix& a) {
    const std::size_t n = a.size();
    const double s = sdet(a);
    if (s <= kSingularTol * a.hadamard_bound()) throw SingularMatrixError(s);

    QMatrix x(n);
    bool complete = true;
    for (std::size_t i = 0; i < n && complete; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto qd = quasidet(a, j, i);
            if (!qd || qd->norm2() == 0.0) {
                complete = false;
                break;
            }
            x(i, j) = inv(*qd);
        }
    }
    if (complete) {
        const double scale = static_cast<double>(n) * (1.0 + a.max_abs()) * (1.0 + x.max_abs());
        if (detail::inverse_residual(a, x) <= 1e-9 * scale) return x;
    }
    return inverse_by_elimination(a);
}

}  // namespace quatspec
