#pragma once

/**
 * @file charmap.hpp
 * @brief Characteristic maps mu : H -> H of 2x2 and 3x3 quaternionic matrices.
 *
 * A characteristic map satisfies norm_const * |mu(lambda)| = Sdet(A - lambda Id)
 * for every lambda, so its zeros are exactly the left eigenvalues of A.
 *
 * Entry names follow the usual layout
 *
 *     2x2: [a b]      3x3: [a b c]
 *          [c d]           [f g h]
 *                          [p q r]
 *
 * and every map is an interpreted expression over those stored entries, so a
 * CharMap can be printed and serialized. Matrices are first brought to a
 * canonical position by a real permutation similarity P A P^{-1}, which leaves
 * Sdet(A - lambda Id) unchanged.
 */

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quatspec/errors.hpp"
#include "quatspec/linearize.hpp"
#include "quatspec/qmatrix.hpp"
#include "quatspec/sdet.hpp"

namespace quatspec {

enum class MapKind {
    Diag2,           // (d - l)(a - l)                      b = c = 0
    Poly2,           // c - (d - l) b^-1 (a - l)            b != 0
    Tri3,            // (r - l)(g - l)(a - l)               c = b = h = 0
    Block3,          // (q - (r - l) h^-1 (g - l))(a - l)   c = b = 0, h != 0
    Split3,          // (r - l)(f - (g - l) b^-1 (a - l))   c = h = 0, b != 0
    Poly3,           // p - q b^-1 (a - l) - (r - l) h^-1 (f - (g - l) b^-1 (a - l))
    Rational3,       // c != 0, with a pole
    InverseReduced3  // polynomial map of (A - pole Id)^{-1}
};

inline std::string_view kind_name(MapKind k) {
    switch (k) {
        case MapKind::Diag2: return "diag2";
        case MapKind::Poly2: return "poly2";
        case MapKind::Tri3: return "tri3";
        case MapKind::Block3: return "block3";
        case MapKind::Split3: return "split3";
        case MapKind::Poly3: return "poly3";
        case MapKind::Rational3: return "rational3";
        case MapKind::InverseReduced3: return "inverse-reduced3";
    }
    return "unknown";
}

inline bool is_polynomial(MapKind k) {
    return k != MapKind::Rational3;
}

/// Sends roots of a map back to left eigenvalues of the original matrix.
struct BackMap {
    enum class Type { Identity, InverseShift };

    Type type = Type::Identity;
    Quaternion shift;  // InverseShift: lambda = rho^{-1} + shift

    Quaternion to_original(const Quaternion& rho) const {
        return type == Type::Identity ? rho : inv(rho) + shift;
    }

    /// Inverse of to_original; throws DomainError at lambda == shift.
    Quaternion from_original(const Quaternion& lambda) const {
        return type == Type::Identity ? lambda : inv(lambda - shift);
    }
};

/// Relative threshold for "this entry is zero": |e| <= tol * (1 + max|A|).
inline constexpr double kZeroEntryTol = 1e-12;

class CharMap {
public:
    MapKind kind = MapKind::Poly2;
    /// Evaluation formula. Equals kind except for InverseReduced3, where it is
    /// the polynomial form used for the inverted matrix.
    MapKind form = MapKind::Poly2;
    /// The matrix the formula reads its entries from (after permutation,
    /// or the inverted matrix for InverseReduced3).
    QMatrix source;
    std::optional<Quaternion> pole;
    int degree = 2;
    double norm_const = 1.0;
    BackMap back_map;
    /// source = M.permuted(permutation) where M is the matrix handed to the builder.
    std::vector<std::size_t> permutation;

    Quaternion operator()(const Quaternion& lambda) const { return eval(lambda); }

    Quaternion eval(const Quaternion& l) const {
        const auto& s = source;
        switch (form) {
            case MapKind::Diag2:
                return (s(1, 1) - l) * (s(0, 0) - l);
            case MapKind::Poly2:
                return s(1, 0) - (s(1, 1) - l) * inv(s(0, 1)) * (s(0, 0) - l);
            case MapKind::Tri3:
                return (r() - l) * (g() - l) * (a() - l);
            case MapKind::Block3:
                return (q() - (r() - l) * inv(h()) * (g() - l)) * (a() - l);
            case MapKind::Split3:
                return (r() - l) * split_f(l);
            case MapKind::Poly3:
                return p() - q() * inv(b()) * (a() - l) - (r() - l) * inv(h()) * split_f(l);
            case MapKind::Rational3:
            case MapKind::InverseReduced3:
                break;
        }
        // Rational3
        const Quaternion m = *pole - l;
        if (m.norm2() == 0.0) return q1(l) * f1(l);
        return m * (p2(l) - q1(l) * inv(m) * f1(l));
    }

    /// Differential at lambda in the map's own variable, as X -> sum P X Q.
    BilateralForm differential(const Quaternion& l) const {
        const auto& s = source;
        switch (form) {
            case MapKind::Diag2:
                return {{-1.0, s(0, 0) - l}, {-(s(1, 1) - l), 1.0}};
            case MapKind::Poly2: {
                const Quaternion binv = inv(s(0, 1));
                return {{1.0, binv * (s(0, 0) - l)}, {(s(1, 1) - l) * binv, 1.0}};
            }
            case MapKind::Tri3:
                return {{-1.0, (g() - l) * (a() - l)},
                        {-((r() - l) * (g() - l)), 1.0},
                        {-(r() - l), a() - l}};
            case MapKind::Block3: {
                const Quaternion hinv = inv(h());
                return {{1.0, hinv * (g() - l) * (a() - l)},
                        {-(q() - (r() - l) * hinv * (g() - l)), 1.0},
                        {(r() - l) * hinv, a() - l}};
            }
            case MapKind::Split3: {
                const Quaternion binv = inv(b());
                return {{-1.0, split_f(l)},
                        {r() - l, binv * (a() - l)},
                        {(r() - l) * (g() - l) * binv, 1.0}};
            }
            case MapKind::Poly3: {
                const Quaternion binv = inv(b());
                const Quaternion hinv = inv(h());
                return {{q() * binv - (r() - l) * hinv * (g() - l) * binv, 1.0},
                        {1.0, hinv * split_f(l)},
                        {-((r() - l) * hinv), binv * (a() - l)}};
            }
            case MapKind::Rational3:
            case MapKind::InverseReduced3:
                break;
        }
        // Rational3, rebased to B = A - pole Id so that B has pole 0. The
        // polynomials p2, q1, f1 are shift invariant; only m = -lambda_B = pole - l
        // changes.
        const Quaternion m = *pole - l;
        if (m.norm() <= 1e-14 * (1.0 + pole->norm())) {
            throw CaseError("differential undefined at pole");
        }
        const Quaternion minv = inv(m);
        const Quaternion cinv = inv(c());
        const Quaternion qq = q1(l);
        const Quaternion ff = f1(l);
        return {{1.0, -p2(l) + qq * minv * ff},
                {m, cinv * (a() - l)},
                {-m, cinv * b() * minv * ff},
                {-(m * qq * minv), minv * ff},
                {m * (r() - l) * cinv - m * qq * minv * h() * cinv, 1.0}};
    }

    /// lim |mu(l)| / |l|^degree as |l| -> infinity.
    double growth_limit() const {
        switch (form) {
            case MapKind::Diag2:
            case MapKind::Tri3: return 1.0;
            case MapKind::Poly2: return 1.0 / source(0, 1).norm();
            case MapKind::Block3: return 1.0 / h().norm();
            case MapKind::Split3: return 1.0 / b().norm();
            case MapKind::Poly3: return 1.0 / (b().norm() * h().norm());
            case MapKind::Rational3:
            case MapKind::InverseReduced3: break;
        }
        return 1.0 / c().norm();
    }

    /// Named constants of the defining formula, in layout order.
    std::vector<std::pair<std::string, Quaternion>> coefficients() const {
        static constexpr std::array<const char*, 4> names2{"a", "b", "c", "d"};
        static constexpr std::array<const char*, 9> names3{"a", "b", "c", "f", "g", "h", "p", "q", "r"};
        std::vector<std::pair<std::string, Quaternion>> out;
        const std::size_t n = source.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.emplace_back(n == 2 ? names2[i * 2 + j] : names3[i * 3 + j], source(i, j));
        return out;
    }

private:
    const Quaternion& a() const { return source(0, 0); }
    const Quaternion& b() const { return source(0, 1); }
    const Quaternion& c() const { return source(0, 2); }
    const Quaternion& f() const { return source(1, 0); }
    const Quaternion& g() const { return source(1, 1); }
    const Quaternion& h() const { return source(1, 2); }
    const Quaternion& p() const { return source(2, 0); }
    const Quaternion& q() const { return source(2, 1); }
    const Quaternion& r() const { return source(2, 2); }

    Quaternion split_f(const Quaternion& l) const { return f() - (g() - l) * inv(b()) * (a() - l); }
    Quaternion p2(const Quaternion& l) const { return p() - (r() - l) * inv(c()) * (a() - l); }
    Quaternion q1(const Quaternion& l) const { return q() - (r() - l) * inv(c()) * b(); }
    Quaternion f1(const Quaternion& l) const { return f() - h() * inv(c()) * (a() - l); }
};

namespace detail {

inline bool negligible(const Quaternion& e, double scale) { return e.norm() <= kZeroEntryTol * (1.0 + scale); }

/// Checks norm_const * |mu(l)| against Sdet(source - l Id) at one fixed point.
inline void verify_normalization(const CharMap& map) {
    const double s = 1.0 + map.source.max_abs();
    const Quaternion probe = Quaternion{0.3141592653589793, -0.2718281828459045, 0.5772156649015329,
                                        0.1618033988749895} * s;
    const double lhs = map.norm_const * map.eval(probe).norm();
    const double rhs = sdet(map.source.shifted(probe));
    const double floor = 1e-12 * std::pow(s, static_cast<double>(map.degree));
    if (std::abs(lhs - rhs) > 1e-6 * std::max(rhs, floor)) {
        throw ConsistencyError("characteristic map normalization mismatch: " + std::to_string(lhs) + " vs " +
                               std::to_string(rhs));
    }
}

inline std::vector<std::size_t> identity_permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = k;
    return p;
}

/// Permutation moving entry (i, j), i != j, of a 3x3 matrix to (0, 2).
inline std::vector<std::size_t> permutation_to_corner(std::size_t i, std::size_t j) {
    return {i, 3 - i - j, j};
}

}  // namespace detail

/// Characteristic map of a 2x2 matrix.
inline CharMap char2(const QMatrix& a) {
    if (a.size() != 2) throw std::invalid_argument("char2 needs a 2x2 matrix");
    const double scale = a.max_abs();
    CharMap map;
    map.degree = 2;
    map.permutation = {0, 1};
    map.source = a;
    const bool b_zero = detail::negligible(a(0, 1), scale);
    const bool c_zero = detail::negligible(a(1, 0), scale);
    if (b_zero && c_zero) {
        map.kind = map.form = MapKind::Diag2;
        map.source(0, 1) = 0.0;
        map.source(1, 0) = 0.0;
        map.norm_const = 1.0;
    } else {
        if (b_zero) {
            map.permutation = {1, 0};
            map.source = a.permuted(map.permutation);
        }
        map.kind = map.form = MapKind::Poly2;
        map.norm_const = map.source(0, 1).norm();
    }
    detail::verify_normalization(map);
    return map;
}

/// Differential of the 2x2 characteristic map at lambda.
inline BilateralForm diff2(const QMatrix& a, const Quaternion& lambda) { return char2(a).differential(lambda); }

struct Companion {
    Quaternion a0;     // -b^-1 c
    Quaternion a1;     // b^-1 (a - d)
    Quaternion delta;  // a1^2 - 4 a0
    QMatrix normalized;
    std::vector<std::size_t> permutation;
};

/// Companion data of a 2x2 matrix: sigma_l(A) = a + b sigma_l([[0, 1], [-a0, -a1]]).
/// Throws CaseError when both off-diagonal entries vanish.
inline Companion companion2(const QMatrix& a) {
    if (a.size() != 2) throw std::invalid_argument("companion2 needs a 2x2 matrix");
    const CharMap map = char2(a);
    if (map.form == MapKind::Diag2) throw CaseError("diagonal/triangular case");
    const QMatrix& s = map.source;
    const Quaternion binv = inv(s(0, 1));
    Companion out;
    out.a0 = -(binv * s(1, 0));
    out.a1 = binv * (s(0, 0) - s(1, 1));
    out.delta = out.a1 * out.a1 - 4.0 * out.a0;
    out.normalized = s;
    out.permutation = map.permutation;
    return out;
}

/// Pole g - h c^{-1} b of a 3x3 matrix; CaseError when c vanishes.
inline Quaternion pole(const QMatrix& a) {
    if (a.size() != 3) throw std::invalid_argument("pole needs a 3x3 matrix");
    if (detail::negligible(a(0, 2), a.max_abs())) throw CaseError("polynomial case");
    return a(1, 1) - a(1, 2) * inv(a(0, 2)) * a(0, 1);
}

inline constexpr double kPoleEigenTol = 1e-10;

inline bool pole_is_eigenvalue(const QMatrix& a, double tol = kPoleEigenTol) {
    const Quaternion pi = pole(a);
    const double scale = std::pow(1.0 + a.max_abs(), static_cast<double>(a.size()));
    return sdet(a.shifted(pi)) <= tol * scale;
}

/// Characteristic map of a 3x3 matrix.
inline CharMap char3(const QMatrix& a) {
    if (a.size() != 3) throw std::invalid_argument("char3 needs a 3x3 matrix");
    const double scale = a.max_abs();
    static constexpr std::array<std::pair<std::size_t, std::size_t>, 6> scan{
        {{0, 2}, {2, 0}, {0, 1}, {1, 0}, {1, 2}, {2, 1}}};

    CharMap map;
    map.degree = 3;
    for (const auto& [i, j] : scan) {
        if (!detail::negligible(a(i, j), scale)) continue;
        map.permutation = detail::permutation_to_corner(i, j);
        map.source = a.permuted(map.permutation);
        QMatrix& s = map.source;
        s(0, 2) = 0.0;
        const bool b_zero = detail::negligible(s(0, 1), scale);
        const bool h_zero = detail::negligible(s(1, 2), scale);
        if (b_zero) s(0, 1) = 0.0;
        if (h_zero) s(1, 2) = 0.0;
        if (b_zero && h_zero) {
            map.form = MapKind::Tri3;
            map.norm_const = 1.0;
        } else if (b_zero) {
            map.form = MapKind::Block3;
            map.norm_const = s(1, 2).norm();
        } else if (h_zero) {
            map.form = MapKind::Split3;
            map.norm_const = s(0, 1).norm();
        } else {
            map.form = MapKind::Poly3;
            map.norm_const = s(0, 1).norm() * s(1, 2).norm();
        }
        map.kind = map.form;
        detail::verify_normalization(map);
        return map;
    }

    map.permutation = {0, 1, 2};
    map.source = a;
    map.kind = map.form = MapKind::Rational3;
    map.pole = pole(a);
    map.norm_const = a(0, 2).norm();
    detail::verify_normalization(map);
    return map;
}

/// Builds the polynomial map of B^{-1}, B = A - pole Id, for a matrix whose
/// pole is not an eigenvalue. Its roots rho give eigenvalues rho^{-1} + pole.
inline CharMap reduce_discontinuous(const QMatrix& a, double tol = kPoleEigenTol) {
    if (a.size() != 3) throw std::invalid_argument("reduce_discontinuous needs a 3x3 matrix");
    const Quaternion pi = pole(a);
    if (pole_is_eigenvalue(a, tol)) throw CaseError("pole is an eigenvalue; use continuous path");

    QMatrix binv = inverse(a.shifted(pi));
    // |(B^-1)_13| = Sdet(B^{3,1}) / Sdet(B) and Sdet(B^{3,1}) = |pole of B| = 0.
    if (binv(0, 2).norm() > 1e-9 * (1.0 + binv.max_abs())) {
        throw ConsistencyError("inverse of shifted matrix has a nonzero (1,3) entry");
    }
    binv(0, 2) = 0.0;

    CharMap map = char3(binv);
    map.kind = MapKind::InverseReduced3;
    map.back_map = {BackMap::Type::InverseShift, pi};
    return map;
}

/// Characteristic map of a 2x2 or 3x3 matrix.
inline CharMap charmap(const QMatrix& a) {
    if (a.size() == 2) return char2(a);
    if (a.size() == 3) return char3(a);
    throw std::invalid_argument("characteristic maps exist only for 2x2 and 3x3 matrices");
}

/// Differential of lambda -> map(forward(lambda)) in the coordinates of the
/// original matrix's spectrum. For InverseReduced3, forward(l) = (l - pole)^{-1}
/// and d(forward)(X) = -rho X rho, so each term P X Q becomes (-P rho) X (rho Q).
inline BilateralForm diff3(const CharMap& map, const Quaternion& lambda) {
    if (map.kind != MapKind::InverseReduced3) return map.differential(lambda);
    if ((lambda - map.back_map.shift).norm() == 0.0) throw CaseError("differential undefined at pole");
    const Quaternion rho = map.back_map.from_original(lambda);
    BilateralForm inner = map.differential(rho);
    for (auto& t : inner.terms) {
        t.left = -(t.left * rho);
        t.right = rho * t.right;
    }
    return inner;
}

inline BilateralForm diff3(const QMatrix& a, const Quaternion& lambda) { return diff3(char3(a), lambda); }

struct PoleCandidate {
    std::size_t row = 0;  // 0-based position of the entry moved to (1,3)
    std::size_t col = 0;
    std::optional<Quaternion> pole;  // empty when that entry is zero
    bool eigenvalue = false;
};

/// The poles of the six permutation similarities that move each off-diagonal
/// entry to position (1,3).
inline std::vector<PoleCandidate> pole_candidates(const QMatrix& a, double tol = kPoleEigenTol) {
    static constexpr std::array<std::pair<std::size_t, std::size_t>, 6> order{
        {{0, 2}, {2, 0}, {0, 1}, {1, 0}, {1, 2}, {2, 1}}};
    std::vector<PoleCandidate> out;
    for (const auto& [i, j] : order) {
        PoleCandidate c{i, j, std::nullopt, false};
        const QMatrix m = a.permuted(detail::permutation_to_corner(i, j));
        if (!detail::negligible(m(0, 2), a.max_abs())) {
            c.pole = pole(m);
            c.eigenvalue = pole_is_eigenvalue(m, tol);
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace quatspec
