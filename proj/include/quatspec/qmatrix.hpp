#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "quatspec/quaternion.hpp"

namespace quatspec {

/// Dense square quaternionic matrix, row-major, 0-based indices.
class QMatrix {
public:
    QMatrix() = default;
    explicit QMatrix(std::size_t n) : n_{n}, data_(n * n) {}

    QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows) : n_{rows.size()} {
        data_.reserve(n_ * n_);
        for (const auto& row : rows) {
            if (row.size() != n_) throw std::invalid_argument("QMatrix: rows must have length n");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static QMatrix identity(std::size_t n) {
        QMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static QMatrix scalar(std::size_t n, const Quaternion& q) {
        QMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = q;
        return m;
    }

    std::size_t size() const { return n_; }

    Quaternion& operator()(std::size_t i, std::size_t j) {
        assert(i < n_ && j < n_);
        return data_[i * n_ + j];
    }
    const Quaternion& operator()(std::size_t i, std::size_t j) const {
        assert(i < n_ && j < n_);
        return data_[i * n_ + j];
    }

    bool operator==(const QMatrix&) const = default;

    /// A - lambda Id, with lambda acting as a left scalar.
    QMatrix shifted(const Quaternion& lambda) const {
        QMatrix m = *this;
        for (std::size_t i = 0; i < n_; ++i) m(i, i) -= lambda;
        return m;
    }

    /// Rows in `rows`, columns in `cols`, in the given order.
    QMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        if (rows.size() != cols.size()) throw std::invalid_argument("submatrix must be square");
        QMatrix m(rows.size());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) m(a, b) = (*this)(rows[a], cols[b]);
        return m;
    }

    /// Deletes the rows in `rows` and the columns in `cols`.
    QMatrix complement(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        return submatrix(remaining(rows), remaining(cols));
    }

    /// Deletes row i and column j.
    QMatrix minor(std::size_t i, std::size_t j) const { return complement({i}, {j}); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& q : data_) m = std::max(m, q.norm());
        return m;
    }

    /// Product of the Euclidean norms of the rows; bounds sdet from above.
    double hadamard_bound() const {
        double prod = 1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j).norm2();
            prod *= std::sqrt(s);
        }
        return prod;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](const Quaternion& q) {
            return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z);
        });
    }

    /// Swaps indices a and b on both rows and columns, i.e. P A P^{-1} for the
    /// transposition matrix P. Left spectra and Study determinants of A - lambda Id
    /// are unchanged.
    QMatrix swap_indices(std::size_t a, std::size_t b) const {
        QMatrix m = *this;
        for (std::size_t k = 0; k < n_; ++k) std::swap(m(a, k), m(b, k));
        for (std::size_t k = 0; k < n_; ++k) std::swap(m(k, a), m(k, b));
        return m;
    }

    /// m(i, j) = this(perm[i], perm[j]).
    QMatrix permuted(const std::vector<std::size_t>& perm) const {
        QMatrix m(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(perm[i], perm[j]);
        return m;
    }

private:
    std::vector<std::size_t> remaining(const std::vector<std::size_t>& removed) const {
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < n_; ++k)
            if (std::find(removed.begin(), removed.end(), k) == removed.end()) keep.push_back(k);
        return keep;
    }

    std::size_t n_ = 0;
    std::vector<Quaternion> data_;
};

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("QMatrix size mismatch");
    const std::size_t n = a.size();
    QMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Quaternion s;
            for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("QMatrix size mismatch");
    QMatrix c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) c(i, j) += b(i, j);
    return c;
}

inline QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("QMatrix size mismatch");
    QMatrix c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) c(i, j) -= b(i, j);
    return c;
}

/// Entrywise left scaling q * A.
inline QMatrix operator*(const Quaternion& q, const QMatrix& a) {
    QMatrix c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) c(i, j) = q * a(i, j);
    return c;
}

inline double max_abs_diff(const QMatrix& a, const QMatrix& b) { return (a - b).max_abs(); }

}  // namespace quatspec
