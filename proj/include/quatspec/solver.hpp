#pragma once

/**
 * @file solver.hpp
 * @brief Left spectra of 2x2 and 3x3 quaternionic matrices.
 *
 * Roots of a characteristic map are found by Newton's method whose Jacobian
 * is the exact differential of the map, linearized to a real 4x4 matrix.
 * Starts are spread over the ball that contains every left eigenvalue
 * (|lambda| <= operator norm of A), converged points are clustered, and each
 * survivor is checked against Sdet(A - lambda Id).
 */

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "quatspec/charmap.hpp"
#include "quatspec/errors.hpp"
#include "quatspec/linearize.hpp"
#include "quatspec/qmatrix.hpp"
#include "quatspec/sdet.hpp"

namespace quatspec {

struct SolverConfig {
    double tol_residual = 1e-10;
    double tol_cluster = 1e-6;
    int max_iter = 100;
    int n_starts = 64;
    std::uint64_t seed = 0;
    double rank_tol = kDefaultRankTol;
};

struct NewtonResult {
    bool converged = false;
    Quaternion root;
    int iters = 0;
    double residual = 0.0;  // |mu(root)|
};

namespace detail {

inline double newton_tolerance(const CharMap& map, const Quaternion& l, double tol) {
    return tol * std::pow(1.0 + l.norm(), static_cast<double>(map.degree));
}

inline bool finite(const Quaternion& q) {
    return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z);
}

}  // namespace detail

/// Damped Newton iteration lambda <- lambda - J^{-1} mu(lambda).
///
/// Once the residual is below tolerance the iteration keeps going while the
/// residual still decreases, so roots where the differential degenerates are
/// polished to full precision instead of stopping at sqrt(tol).
inline NewtonResult newton(const CharMap& map, const Quaternion& start, const SolverConfig& cfg) {
    NewtonResult out;
    Quaternion l = start;
    Quaternion mu = map.eval(l);
    double res = mu.norm();
    out.root = l;
    out.residual = res;
    if (res <= detail::newton_tolerance(map, l, cfg.tol_residual)) {
        out.converged = true;
        return out;
    }

    constexpr double kStepFloor = 4.0 * std::numeric_limits<double>::epsilon();
    int it = 0;
    for (; it < cfg.max_iter; ++it) {
        RealMat4 jac;
        try {
            jac = bilateral_matrix(map.differential(l));
        } catch (const CaseError&) {
            break;  // landed on a pole
        } catch (const DomainError&) {
            break;
        }
        const Eigen::FullPivLU<RealMat4> lu(jac);
        if (!lu.isInvertible()) break;
        const Quaternion step = unvec(lu.solve(vec(mu)));
        if (!detail::finite(step)) break;

        const bool converged = res <= detail::newton_tolerance(map, l, cfg.tol_residual);
        double scale = 1.0;
        bool improved = false;
        for (int halving = 0; halving <= 20; ++halving, scale *= 0.5) {
            const Quaternion trial = l - scale * step;
            Quaternion trial_mu;
            try {
                trial_mu = map.eval(trial);
            } catch (const DomainError&) {
                continue;
            }
            const double trial_res = trial_mu.norm();
            if (detail::finite(trial_mu) && trial_res < res) {
                l = trial;
                mu = trial_mu;
                res = trial_res;
                improved = true;
                break;
            }
            if (converged) break;  // polishing only takes full steps
        }
        if (!improved) break;
        if (res == 0.0 || scale * step.norm() <= kStepFloor * (1.0 + l.norm())) {
            ++it;
            break;
        }
    }
    out.root = l;
    out.iters = it;
    out.residual = res;
    out.converged = res <= detail::newton_tolerance(map, l, cfg.tol_residual);
    return out;
}

/// Upper bound on |lambda| over the left spectrum: the largest singular value
/// of the complex adjoint, i.e. the operator norm of A on H^n.
inline double eigen_bound(const QMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(complex_adjoint(a));
    return svd.singularValues()(0);
}

/// det of [[X - x Id, -conj(Y) + conj(y) Id], [Y - y Id, conj(X) - conj(x) Id]]
/// for A = X + jY and lambda = x + jy. Vanishes exactly at left eigenvalues and
/// equals Sdet(A - lambda Id)^2.
inline double sigma_oracle(const QMatrix& a, const Quaternion& lambda) {
    const auto n = static_cast<Eigen::Index>(a.size());
    const std::complex<double> x = complex_part(lambda);
    const std::complex<double> y = j_part(lambda);
    ComplexMatrix m = ComplexMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index s = 0; s < n; ++s) {
            const Quaternion& e = a(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
            m(r, s) = complex_part(e);
            m(r, s + n) = -std::conj(j_part(e));
            m(r + n, s) = j_part(e);
            m(r + n, s + n) = std::conj(complex_part(e));
        }
        m(r, r) -= x;
        m(r, r + n) += std::conj(y);
        m(r + n, r) -= y;
        m(r + n, r + n) -= std::conj(x);
    }
    return m.partialPivLu().determinant().real();
}

/// Starting points: the nine axis points {0, +-1, +-i, +-j, +-k} scaled by
/// `bound`, then seeded uniform points in the ball of radius 1.25 * bound.
inline std::vector<Quaternion> start_points(double bound, const SolverConfig& cfg) {
    if (!(bound > 0.0)) bound = 1.0;
    std::vector<Quaternion> starts{0.0};
    for (const Quaternion& u : {Quaternion{1.0}, Quaternion::i(), Quaternion::j(), Quaternion::k()}) {
        starts.push_back(bound * u);
        starts.push_back(-bound * u);
    }
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double radius = 1.25 * bound;
    while (static_cast<int>(starts.size()) < cfg.n_starts) {
        Quaternion d{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
        const double n = d.norm();
        if (n == 0.0) continue;
        starts.push_back(d * (radius * std::pow(unit(rng), 0.25) / n));
    }
    if (static_cast<int>(starts.size()) > cfg.n_starts && cfg.n_starts > 0) {
        starts.resize(static_cast<std::size_t>(cfg.n_starts));
    }
    return starts;
}

enum class SpectrumKind { Finite, Spherical, SuspectedInfinite };

inline std::string_view spectrum_kind_name(SpectrumKind k) {
    switch (k) {
        case SpectrumKind::Finite: return "finite";
        case SpectrumKind::Spherical: return "spherical";
        case SpectrumKind::SuspectedInfinite: return "suspected-infinite";
    }
    return "unknown";
}

struct RootInfo {
    Quaternion lambda;
    double residual = 0.0;        // Sdet(A - lambda Id)
    std::optional<int> diff_rank; // empty where no differential is available
    int newton_iters = 0;
};

/// The sphere {(a + d + b q) / 2 : q^2 = delta} of a 2x2 matrix with real
/// companion coefficients and delta < 0.
struct SphericalFamily {
    Quaternion center;     // (a + d) / 2
    Quaternion b;          // upper-right entry of the normalized matrix
    double delta = 0.0;    // real, negative
    double radius = 0.0;   // |b| sqrt(-delta) / 2

    /// Point for the unit imaginary direction u (q = sqrt(-delta) u).
    Quaternion point(const Quaternion& u) const {
        const Quaternion unit = u.imag() / u.imag_norm();
        return center + 0.5 * (b * (std::sqrt(-delta) * unit));
    }

    /// `count` deterministic points spread over the sphere (Fibonacci lattice).
    std::vector<Quaternion> sample(int count) const {
        std::vector<Quaternion> pts;
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int n = 0; n < count; ++n) {
            const double zc = 1.0 - 2.0 * (n + 0.5) / count;
            const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
            const double phi = golden * n;
            pts.push_back(point({0.0, rho * std::cos(phi), rho * std::sin(phi), zc}));
        }
        return pts;
    }
};

struct SpectrumReport {
    SpectrumKind kind = SpectrumKind::Finite;
    std::vector<RootInfo> roots;
    std::optional<SphericalFamily> spherical;
    std::string classification_path;
    int degree = 0;
};

namespace detail {

inline double residual_bound(const QMatrix& a, double tol) {
    return tol * std::pow(1.0 + a.max_abs(), static_cast<double>(a.size()));
}

/// Rank of the differential of `map` at rho (map's own variable).
inline std::optional<int> differential_rank(const CharMap& map, const Quaternion& rho, double rank_tol) {
    try {
        const RealMat4 m = bilateral_matrix(map.differential(rho));
        const double floor = map.growth_limit() *
                             std::pow(1.0 + rho.norm() + map.source.max_abs(), static_cast<double>(map.degree - 1));
        return numeric_rank(m, rank_tol, floor);
    } catch (const CaseError&) {
        return std::nullopt;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

/// Rank at a point where `map` itself is not differentiable (its pole): use
/// the map of a permuted matrix whose pole lies elsewhere.
inline std::optional<int> rank_via_other_map(const QMatrix& a, const Quaternion& lambda, double rank_tol) {
    static constexpr std::array<std::pair<std::size_t, std::size_t>, 6> order{
        {{0, 2}, {2, 0}, {0, 1}, {1, 0}, {1, 2}, {2, 1}}};
    for (const auto& [i, j] : order) {
        const QMatrix m = a.permuted(permutation_to_corner(i, j));
        const CharMap alt = char3(m);
        if (alt.pole && distance(*alt.pole, lambda) <= 1e-8 * (1.0 + lambda.norm())) continue;
        if (auto r = differential_rank(alt, lambda, rank_tol)) return r;
    }
    return std::nullopt;
}

/// Single-linkage clustering; each cluster keeps its smallest-residual member.
/// Residuals within `tie` of each other count as equal and the earlier point
/// wins. Output order follows first appearance.
inline std::vector<RootInfo> cluster_roots(const std::vector<RootInfo>& pts, double radius, double tie = 0.0) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t k = 0; k < n; ++k) parent[k] = k;
    auto find = [&](std::size_t k) {
        while (parent[k] != k) k = parent[k] = parent[parent[k]];
        return k;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(pts[i].lambda, pts[j].lambda) <= radius) {
                const std::size_t ri = find(i), rj = find(j);
                if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
            }
    std::vector<RootInfo> out;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t root = find(k);
        if (slot[root] == n) {
            slot[root] = out.size();
            out.push_back(pts[k]);
        } else if (pts[k].residual < out[slot[root]].residual - tie) {
            const int iters = out[slot[root]].newton_iters;
            out[slot[root]] = pts[k];
            out[slot[root]].newton_iters = std::min(iters, pts[k].newton_iters);
        }
    }
    return out;
}

/// Runs Newton from every start and returns the converged points mapped
/// back to the original spectrum, in start order.
inline std::vector<RootInfo> multistart(const QMatrix& original, const CharMap& map, const SolverConfig& cfg,
                                        const std::vector<Quaternion>& extra_starts = {},
                                        std::optional<Quaternion> avoid = std::nullopt, double avoid_radius = 0.0) {
    std::vector<Quaternion> starts = start_points(eigen_bound(map.source), cfg);
    starts.insert(starts.end(), extra_starts.begin(), extra_starts.end());
    std::vector<RootInfo> found;
    for (const Quaternion& s : starts) {
        if (avoid && distance(s, *avoid) < avoid_radius) continue;
        const NewtonResult nr = newton(map, s, cfg);
        if (!nr.converged) continue;
        if (avoid && distance(nr.root, *avoid) < avoid_radius) continue;
        Quaternion lambda;
        try {
            lambda = map.back_map.to_original(nr.root);
        } catch (const DomainError&) {
            continue;
        }
        RootInfo info;
        info.lambda = lambda;
        info.residual = sdet(original.shifted(lambda));
        info.newton_iters = nr.iters;
        found.push_back(info);
    }
    return found;
}

/// Clusters, keeps verified roots and fills in differential ranks.
inline std::vector<RootInfo> finalize_roots(const QMatrix& a, const CharMap& map, std::vector<RootInfo> pts,
                                            const SolverConfig& cfg) {
    const double bound = residual_bound(a, cfg.tol_residual);
    const double tie = residual_bound(a, 1e-14);
    std::vector<RootInfo> clustered = cluster_roots(pts, cfg.tol_cluster * (1.0 + a.max_abs()), tie);
    std::vector<RootInfo> out;
    for (auto& r : clustered) {
        if (!(r.residual <= bound)) continue;
        if (map.pole && map.kind == MapKind::Rational3 &&
            distance(r.lambda, *map.pole) <= 1e-12 * (1.0 + map.pole->norm())) {
            r.diff_rank = rank_via_other_map(a, r.lambda, cfg.rank_tol);
        } else {
            std::optional<Quaternion> rho;
            try {
                rho = map.back_map.from_original(r.lambda);
            } catch (const DomainError&) {
            }
            if (rho) r.diff_rank = differential_rank(map, *rho, cfg.rank_tol);
        }
        out.push_back(r);
    }
    return out;
}

inline RootInfo exact_root(const QMatrix& a, const Quaternion& lambda) {
    RootInfo r;
    r.lambda = lambda;
    r.residual = sdet(a.shifted(lambda));
    return r;
}

inline Quaternion cross(const Quaternion& u, const Quaternion& v) {
    return {0.0, u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

/// Companion-coordinate candidate t - beta for the single-eigenvalue case
/// where P = t + alpha, Q = -t + beta with |alpha| = |beta|, alpha != beta:
/// a1 = -2t + beta - alpha and a0 = (t + alpha)(t - beta).
inline std::optional<Quaternion> single_root_candidate(const Companion& comp) {
    const double t = -0.5 * comp.a1.w;
    const Quaternion gamma = comp.a1.imag();  // beta - alpha
    const double g2 = gamma.norm2();
    if (!(g2 > 0.0)) return std::nullopt;
    const Quaternion m = t * t - t * gamma - comp.a0;  // alpha * beta
    const Quaternion beta = 0.5 * gamma + cross(gamma, m.imag()) / g2;
    return Quaternion{t} - beta;
}

}  // namespace detail

/// Left spectrum of a 2x2 matrix.
inline SpectrumReport spectrum2(const QMatrix& a, const SolverConfig& cfg = {}) {
    if (a.size() != 2) throw std::invalid_argument("spectrum2 needs a 2x2 matrix");
    SpectrumReport rep;
    rep.degree = 2;
    const CharMap map = char2(a);
    const double scale = a.max_abs();

    const bool b_zero = detail::negligible(a(0, 1), scale);
    const bool c_zero = detail::negligible(a(1, 0), scale);
    if (b_zero || c_zero) {
        rep.classification_path = "diagonal/triangular→diagonal entries";
        std::vector<RootInfo> pts{detail::exact_root(a, a(0, 0)), detail::exact_root(a, a(1, 1))};
        rep.roots = detail::finalize_roots(a, map, pts, cfg);
        return rep;
    }

    const Companion comp = companion2(a);
    const QMatrix& s = comp.normalized;
    const Quaternion& ea = s(0, 0);
    const Quaternion& eb = s(0, 1);
    const double real_tol = 1e-10 * (1.0 + comp.a0.norm() + comp.a1.norm());

    if (comp.a0.imag_norm() <= real_tol && comp.a1.imag_norm() <= real_tol) {
        const double a0 = comp.a0.w;
        const double a1 = comp.a1.w;
        const double disc = a1 * a1 - 4.0 * a0;
        if (disc < -real_tol && a0 != 0.0) {
            rep.kind = SpectrumKind::Spherical;
            rep.classification_path = "companion/real coefficients, delta<0→spherical";
            SphericalFamily fam;
            fam.center = 0.5 * (s(0, 0) + s(1, 1));
            fam.b = eb;
            fam.delta = disc;
            fam.radius = 0.5 * eb.norm() * std::sqrt(-disc);
            rep.spherical = fam;
            std::vector<RootInfo> pts;
            for (const Quaternion& u : {Quaternion::i(), Quaternion::j(), Quaternion::k()}) {
                pts.push_back(detail::exact_root(a, fam.point(u)));
                pts.push_back(detail::exact_root(a, fam.point(-u)));
            }
            rep.roots = detail::finalize_roots(a, map, pts, cfg);
            return rep;
        }
        std::vector<RootInfo> pts;
        if (disc > real_tol) {
            rep.classification_path = "companion/real coefficients, delta>0→two roots";
            const double sq = std::sqrt(disc);
            // Stable quadratic formula.
            const double qv = -0.5 * (a1 + std::copysign(sq, a1));
            const double t1 = qv;
            const double t2 = qv != 0.0 ? a0 / qv : 0.0;
            pts.push_back(detail::exact_root(a, ea + eb * t1));
            pts.push_back(detail::exact_root(a, ea + eb * t2));
        } else {
            rep.classification_path = "companion/real coefficients, delta=0→single root";
            pts.push_back(detail::exact_root(a, ea + eb * (-0.5 * a1)));
        }
        rep.roots = detail::finalize_roots(a, map, pts, cfg);
        return rep;
    }

    rep.classification_path = "generic→newton multistart";
    // The closed-form candidate goes first so it wins residual ties against
    // the slowly converging Newton points near a double root.
    std::vector<RootInfo> pts;
    if (auto t = detail::single_root_candidate(comp)) pts.push_back(detail::exact_root(a, ea + eb * *t));
    auto more = detail::multistart(a, map, cfg);
    pts.insert(pts.end(), more.begin(), more.end());
    rep.roots = detail::finalize_roots(a, map, pts, cfg);
    if (rep.roots.empty()) throw SolverFailure("no root found");
    if (static_cast<int>(rep.roots.size()) > rep.degree) rep.kind = SpectrumKind::SuspectedInfinite;
    return rep;
}

/// Left spectrum of a 3x3 matrix. At least one root is always reported;
/// SolverFailure otherwise.
inline SpectrumReport spectrum3(const QMatrix& a, const SolverConfig& cfg = {}) {
    if (a.size() != 3) throw std::invalid_argument("spectrum3 needs a 3x3 matrix");
    SpectrumReport rep;
    rep.degree = 3;
    const CharMap map = char3(a);

    std::vector<RootInfo> pts;
    CharMap used = map;
    if (map.form == MapKind::Tri3) {
        rep.classification_path = "polynomial/triangular→diagonal entries";
        for (std::size_t k = 0; k < 3; ++k) pts.push_back(detail::exact_root(a, map.source(k, k)));
    } else if (is_polynomial(map.kind)) {
        rep.classification_path = std::string("polynomial/") + std::string(kind_name(map.kind)) + "→newton multistart";
        pts = detail::multistart(a, map, cfg);
    } else if (pole_is_eigenvalue(a)) {
        rep.classification_path = "rational/continuous→newton multistart, pole is a root";
        const Quaternion pi = *map.pole;
        pts.push_back(detail::exact_root(a, pi));
        const double ball = 1e-3 * (1.0 + a.max_abs());
        auto more = detail::multistart(a, map, cfg, {}, pi, ball);
        pts.insert(pts.end(), more.begin(), more.end());
    } else {
        rep.classification_path = "rational/discontinuous→inverse-reduction";
        used = reduce_discontinuous(a);
        pts = detail::multistart(a, used, cfg);
    }

    rep.roots = detail::finalize_roots(a, used, pts, cfg);
    if (rep.roots.empty()) throw SolverFailure("no root found");
    if (static_cast<int>(rep.roots.size()) > rep.degree) rep.kind = SpectrumKind::SuspectedInfinite;
    return rep;
}

inline SpectrumReport spectrum(const QMatrix& a, const SolverConfig& cfg = {}) {
    if (a.size() == 2) return spectrum2(a, cfg);
    if (a.size() == 3) return spectrum3(a, cfg);
    throw std::invalid_argument("spectra are computed for 2x2 and 3x3 matrices only");
}

}  // namespace quatspec
