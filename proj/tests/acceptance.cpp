// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "quatspec/charmap.hpp"
#include "quatspec/linearize.hpp"
#include "quatspec/sdet.hpp"
#include "quatspec/solver.hpp"
#include "support.hpp"

using namespace quatspec;

namespace {

constexpr double kRootTol = 1e-8;
constexpr double kFixtureSeconds = 1.0;
constexpr double kInverseTol = 1e-12;
constexpr double kCarInverseRel = 1e-8;
constexpr int kCarInverseSamples = 32;
constexpr int kSylvesterRandom = 1000;
constexpr int kSylvesterSimilar = 200;
constexpr double kSylvesterDetRel = 1e-10;
constexpr int kCalculusMatrices = 200;
constexpr double kCalculusRel = 1e-9;
constexpr double kCalculusSeconds = 5.0;
constexpr int kNormMatrices = 200;
constexpr int kNormSamples = 64;
constexpr double kNormRel = 1e-8;
constexpr int kSphereSamples = 16;
constexpr int kGeneric2 = 200;
constexpr int kExistence = 500;
constexpr double kExistenceSeconds = 60.0;
constexpr int kFdPairs = 50;
constexpr double kFdStep = 1e-6;
constexpr double kFdRel = 1e-5;

const Quaternion I = Quaternion::i();
const Quaternion J = Quaternion::j();
const Quaternion K = Quaternion::k();

QMatrix so3_triple() { return {{I, 0.0, 0.0}, {K, J, 0.0}, {-3.0 * I, 2.0 * K, K}}; }
QMatrix polo() { return {{0.0, I, 1.0}, {3.0 * I - K, 0.0, 1.0}, {K, -1.0 + J + K, 0.0}}; }
QMatrix conti() { return {{0.0, -J, I}, {-1.0 + J, J, K}, {1.0, 1.0, 0.0}}; }
QMatrix generic_poly() { return {{K, 0.0, 0.0}, {3.0 * I - J, -I, I}, {1.0 - 2.0 * K, J, -J}}; }
QMatrix rank0() { return {{-I - J, 0.0, 0.0}, {K, -I, I}, {1.0 - I, J, -J}}; }
QMatrix rank3() { return {{J, 1.0, 0.0}, {2.0 * I, -K, 1.0}, {Quaternion{2, -1, -2, 0}, Quaternion{-1, 0, -1, 1}, -I - K}}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool has_root(const SpectrumReport& rep, const Quaternion& l, double tol = kRootTol) {
    for (const auto& r : rep.roots)
        if (distance(r.lambda, l) <= tol) return true;
    return false;
}

const RootInfo* root_at(const SpectrumReport& rep, const Quaternion& l) {
    for (const auto& r : rep.roots)
        if (distance(r.lambda, l) <= kRootTol) return &r;
    return nullptr;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double rel(double got, double want) { return std::fabs(got - want) / std::max(std::fabs(want), 1e-300); }

// Random 3x3 matrix whose pole is a left eigenvalue: the last diagonal entry
// is fitted so that (A - pole Id) has a kernel vector with last entry 1.
QMatrix with_eigen_pole(oracle::Rng& rng) {
    QMatrix a = rng.matrix(3);
    const Quaternion pi = a(1, 1) - a(1, 2) * oracle::inv(a(0, 2)) * a(0, 1);
    const QMatrix top{{a(0, 0) - pi, a(0, 1)}, {a(1, 0), a(1, 1) - pi}};
    const QMatrix t = inverse(top);
    const Quaternion v1 = t(0, 0) * (-a(0, 2)) + t(0, 1) * (-a(1, 2));
    const Quaternion v2 = t(1, 0) * (-a(0, 2)) + t(1, 1) * (-a(1, 2));
    a(2, 2) = pi - a(2, 0) * v1 - a(2, 1) * v2;
    return a;
}

struct Outcome {
    bool ok = true;
    std::string detail;

    void check(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

// -- criteria --

Outcome fixture_spectra() {
    Outcome o;
    const std::vector<std::pair<QMatrix, std::vector<Quaternion>>> cases{
        {so3_triple(), {I, J, K}}, {generic_poly(), {K, 0.0, -I - J}}, {rank0(), {0.0, -I - J}}};
    double worst = 0.0;
    for (const auto& [a, want] : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const SpectrumReport rep = spectrum3(a);
        const double dt = seconds_since(t0);
        worst = std::max(worst, dt);
        o.check(dt < kFixtureSeconds, "runtime " + sci(dt) + " s");
        o.check(rep.roots.size() == want.size(), "root count " + std::to_string(rep.roots.size()));
        for (const Quaternion& l : want) o.check(has_root(rep, l), "missing root");
    }
    if (o.ok) o.detail = "3 fixtures, slowest " + sci(worst) + " s";
    return o;
}

Outcome pole_dichotomy() {
    Outcome o;
    o.check(pole(polo()) == -I, "pole of the discontinuous matrix");
    o.check(!pole_is_eigenvalue(polo()), "pole flagged as eigenvalue");
    o.check(char3(polo()).eval(-I) == Quaternion(1, -1, 2, -2), "map value at the pole");
    o.check(pole(conti()) == 1.0 + J, "pole of the continuous matrix");
    o.check(pole_is_eigenvalue(conti()), "pole not flagged as eigenvalue");
    if (o.ok) o.detail = "poles -i (not a root) and 1+j (a root)";
    return o;
}

Outcome inverse_reduction() {
    Outcome o;
    const QMatrix b = polo().shifted(pole(polo()));
    const QMatrix want = Quaternion(0.1) * QMatrix{{4.0 * I - 2.0 * K, -4.0 * I + 2.0 * K, 0.0},
                                                   {Quaternion{-1, -3, 8, -6}, Quaternion{1, 3, -3, 1}, -5.0 * J - 5.0 * K},
                                                   {Quaternion{11, 1, -8, -8}, Quaternion{-1, -1, 3, 3}, -5.0 * J + 5.0 * K}};
    const QMatrix x = inverse(b);
    o.check(max_abs_diff(x, want) <= kInverseTol, "inverse entries");
    o.check(x(0, 2).norm() <= kInverseTol, "(1,3) entry");
    // The identity in the form |l|^-3 Sdet(B^-1 - l) Sdet(B) = k |mu_B(l^-1)|;
    // Sdet(l^-1 Id) contributes |l|^-3.
    const CharMap mb = char3(b);
    oracle::Rng rng(1003);
    double worst = 0.0;
    for (int n = 0; n < kCarInverseSamples; ++n) {
        const Quaternion l = rng.quat();
        const double lhs = std::pow(l.norm(), -3) * oracle::sdet(x.shifted(l)) * oracle::sdet(b);
        const double rhs = mb.norm_const * mb.eval(oracle::inv(l)).norm();
        worst = std::max(worst, rel(lhs, rhs));
    }
    o.check(worst <= kCarInverseRel, "inverse identity rel " + sci(worst));
    if (o.ok) o.detail = "inverse identity with |l|^-3, worst rel " + sci(worst);
    return o;
}

Outcome rank_ledger() {
    Outcome o;
    o.check(numeric_rank(bilateral_matrix(BilateralForm{{K, 1.0}, {1.0, 2.0 - I}, {-2.0 * J, J}})) == 3,
            "bilateral example rank");
    RealMat4 printed;
    printed << 0, -2, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 2, 0, -2, 0;
    o.check(bilateral_matrix(diff3(rank3(), 0.0)) == printed, "printed differential matrix");
    const SpectrumReport r3 = spectrum3(rank3());
    const RootInfo* z = root_at(r3, 0.0);
    o.check(z && z->diff_rank == 3, "diff_rank at 0 of the rank-3 example");
    const SpectrumReport r0 = spectrum3(rank0());
    const RootInfo* a = root_at(r0, -I - J);
    const RootInfo* b = root_at(r0, 0.0);
    o.check(a && a->diff_rank == 0, "diff_rank at -i-j of the rank-0 example");
    o.check(b && b->diff_rank == 4, "diff_rank at 0 of the rank-0 example");
    if (o.ok) o.detail = "ranks 3, 3, 0 and 4 as expected";
    return o;
}

Outcome sylvester_law() {
    Outcome o;
    oracle::Rng rng(1005);
    int low = 0, zero = 0;
    const auto one = [&](const Quaternion& p, const Quaternion& q) {
        const RealMat4 m = sylvester_matrix(p, q);
        const int rank = numeric_rank(m);
        o.check(rank == 0 || rank == 2 || rank == 4, "rank " + std::to_string(rank));
        o.check((rank < 4) == similar(p, -q, 1e-9), "rank < 4 vs similarity");
        const bool real_pair = p.imag_norm() <= 1e-12 && distance(q, -p) <= 1e-12;
        o.check((rank == 0) == real_pair, "rank 0 vs real opposite pair");
        const double det = oracle::det4(to_real4(m));
        o.check(rel_err(sylvester_det(p, q), det) <= kSylvesterDetRel, "closed-form determinant");
        low += rank < 4;
        zero += rank == 0;
    };
    for (int n = 0; n < kSylvesterRandom; ++n) one(rng.quat(), rng.quat());
    for (int n = 0; n < kSylvesterSimilar; ++n) {
        if (n % 4 == 3) {
            const double r = rng.gauss();
            one(r, -r);
        } else {
            const Quaternion p = rng.quat(), u = rng.unit();
            one(p, -(u * p * oracle::inv(u)));
        }
    }
    if (o.ok) o.detail = std::to_string(low) + " deficient, " + std::to_string(zero) + " of rank 0";
    return o;
}

Outcome sdet_calculus() {
    Outcome o;
    oracle::Rng rng(1006);
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    auto note = [&](double got, double want) { worst = std::max(worst, rel_err(got, want)); };
    for (int n = 0; n < kCalculusMatrices; ++n) {
        const QMatrix a = rng.matrix(3), b = rng.matrix(3);
        const double s = sdet(a);
        note(sdet(a * b), s * sdet(b));

        QMatrix block = rng.matrix(4);
        block(0, 2) = block(0, 3) = block(1, 2) = block(1, 3) = 0.0;
        note(sdet(block), sdet(block.submatrix({0, 1}, {0, 1})) * sdet(block.submatrix({2, 3}, {2, 3})));

        const Quaternion f = rng.quat();
        QMatrix rows = a;
        for (std::size_t k = 0; k < 3; ++k) rows(2, k) += f * a(0, k);
        note(sdet(rows), s);
        QMatrix cols = a;
        for (std::size_t k = 0; k < 3; ++k) cols(k, 1) += a(k, 2) * f;
        note(sdet(cols), s);
        note(sdet(a.submatrix({1, 0, 2}, {0, 1, 2})), s);

        const QMatrix x = inverse(a);
        for (std::size_t k : {1u, 2u}) {
            std::vector<std::vector<std::size_t>> subs;
            for (unsigned mask = 0; mask < 8; ++mask) {
                if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
                std::vector<std::size_t> s2;
                for (std::size_t bit = 0; bit < 3; ++bit)
                    if (mask & (1u << bit)) s2.push_back(bit);
                subs.push_back(s2);
            }
            for (const auto& r : subs)
                for (const auto& c : subs) note(sdet(x.submatrix(r, c)), sdet(a.complement(c, r)) / s);
        }

        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (const auto qd = quasidet(a, i, j)) note(qd->norm() * sdet(a.minor(i, j)), s);
    }
    const double dt = seconds_since(t0);
    o.check(worst <= kCalculusRel, "worst rel " + sci(worst));
    o.check(dt < kCalculusSeconds, "runtime " + sci(dt) + " s");
    if (o.ok) o.detail = "worst rel " + sci(worst) + ", " + sci(dt) + " s";
    return o;
}

Outcome normalization() {
    Outcome o;
    oracle::Rng rng(1007);
    double worst = 0.0;
    int maps = 0;
    const auto check = [&](const CharMap& map) {
        ++maps;
        const double scale = 1.0 + map.source.max_abs();
        for (int n = 0; n < kNormSamples; ++n) {
            const Quaternion l = rng.quat(scale);
            const double want = oracle::sdet(map.source.shifted(l));
            worst = std::max(worst, rel(map.norm_const * map.eval(l).norm(), want));
        }
    };
    for (const QMatrix& a : {so3_triple(), polo(), conti(), generic_poly(), rank0(), rank3()}) check(char3(a));
    check(reduce_discontinuous(polo()));
    check(char2(QMatrix{{0.0, 1.0}, {-1.0, 0.0}}));
    for (int n = 0; n < kNormMatrices; ++n) {
        check(char2(rng.matrix(2)));
        check(char3(rng.matrix(3)));
    }
    o.check(worst <= kNormRel, "worst rel " + sci(worst));
    if (o.ok) o.detail = std::to_string(maps) + " maps, worst rel " + sci(worst);
    return o;
}

Outcome classification2() {
    Outcome o;
    oracle::Rng rng(1008);

    // Single root of rank 0 at the midpoint.
    {
        const Quaternion a = rng.quat(), b = rng.quat();
        const double u = 1.3;
        const QMatrix m{{a, b}, {-(u * u) * b, a - 2.0 * u * b}};
        const SpectrumReport rep = spectrum2(m);
        o.check(rep.roots.size() == 1 && distance(rep.roots[0].lambda, 0.5 * (m(0, 0) + m(1, 1))) <= kRootTol &&
                    rep.roots[0].diff_rank == 0,
                "rank-0 single root");
    }
    // Spherical.
    {
        const QMatrix m{{0.0, 1.0}, {-1.0, 0.0}};
        const SpectrumReport rep = spectrum2(m);
        o.check(rep.kind == SpectrumKind::Spherical && rep.spherical.has_value(), "spherical class");
        if (rep.spherical)
            for (const Quaternion& q : rep.spherical->sample(kSphereSamples))
                o.check(oracle::sdet(m.shifted(q)) <= kRootTol, "sphere sample");
    }
    // Single root of rank 2: P = s + alpha, Q = -s + beta, |alpha| = |beta|.
    {
        const double s = 0.4;
        const Quaternion alpha = Quaternion{0, 1, 2, -1};
        const Quaternion beta = Quaternion{0, -2, 1, 1};
        const Quaternion a1 = -2.0 * s + beta - alpha;
        const Quaternion a0 = (s + alpha) * (s - beta);
        const SpectrumReport rep = spectrum2(QMatrix{{0.0, 1.0}, {-a0, -a1}});
        o.check(rep.roots.size() == 1 && distance(rep.roots[0].lambda, s - beta) <= kRootTol &&
                    rep.roots[0].diff_rank == 2,
                "rank-2 single root");
    }
    // Generic: two roots, differentials of rank 4 with positive determinant.
    int jac_min_sign = 1;
    for (int n = 0; n < kGeneric2; ++n) {
        const QMatrix a = rng.matrix(2);
        const SpectrumReport rep = spectrum2(a);
        o.check(rep.kind == SpectrumKind::Finite && rep.roots.size() == 2,
                "generic root count " + std::to_string(rep.roots.size()));
        for (const auto& r : rep.roots) {
            o.check(r.diff_rank == 4, "generic diff_rank");
            o.check(oracle::sdet(a.shifted(r.lambda)) <= kRootTol * std::pow(1 + a.max_abs(), 2), "unverified root");
            const double d = oracle::det4(to_real4(bilateral_matrix(diff2(a, r.lambda))));
            if (d < 0.0) jac_min_sign = -1;
        }
    }
    o.check(jac_min_sign > 0, "negative Jacobian determinant at a root");
    if (o.ok) o.detail = "4 classes, " + std::to_string(kGeneric2) + " generic matrices with 2 roots";
    return o;
}

Outcome existence() {
    Outcome o;
    oracle::Rng rng(1009);
    int by_path[3] = {0, 0, 0};
    const auto t0 = std::chrono::steady_clock::now();
    for (int n = 0; n < kExistence; ++n) {
        QMatrix a;
        const int path = n % 3;
        if (path == 0) {
            const std::size_t col = 1 + static_cast<std::size_t>(rng.integer(0, 1));
            a = rng.matrix(3);
            a(0, 2) = 0.0;
            if (n % 2) a(col == 1 ? 0 : 1, col) = 0.0;
        } else if (path == 1) {
            a = with_eigen_pole(rng);
        } else {
            a = rng.matrix(3);
        }
        SpectrumReport rep;
        try {
            rep = spectrum3(a);
        } catch (const std::exception& e) {
            o.check(false, std::string("no root: ") + e.what());
            continue;
        }
        const std::string& p = rep.classification_path;
        if (p.rfind("polynomial/", 0) == 0) ++by_path[0];
        else if (p.rfind("rational/continuous", 0) == 0) ++by_path[1];
        else if (p.rfind("rational/discontinuous", 0) == 0) ++by_path[2];
        o.check(!rep.roots.empty(), "empty spectrum");
        const double bound = kRootTol * std::pow(1 + a.max_abs(), 3);
        for (const auto& r : rep.roots) o.check(oracle::sdet(a.shifted(r.lambda)) <= bound, "unverified root");
    }
    const double dt = seconds_since(t0);
    o.check(by_path[0] > 0 && by_path[1] > 0 && by_path[2] > 0, "a construction path was not exercised");
    o.check(dt < kExistenceSeconds, "runtime " + sci(dt) + " s");
    if (o.ok)
        o.detail = "paths poly/continuous/discontinuous " + std::to_string(by_path[0]) + "/" +
                   std::to_string(by_path[1]) + "/" + std::to_string(by_path[2]) + ", " + sci(dt) + " s";
    return o;
}

Outcome differentials() {
    Outcome o;
    oracle::Rng rng(1010);
    double worst = 0.0;
    const auto fd_check = [&](const std::function<Quaternion(const Quaternion&)>& f, const BilateralForm& form,
                              const Quaternion& l) {
        const oracle::Real4 fd = oracle::fd_jacobian(f, l, kFdStep);
        const oracle::Real4 an = to_real4(bilateral_matrix(form));
        worst = std::max(worst, oracle::max_abs_diff(fd, an) / std::max(1.0, oracle::max_abs(an)));
    };
    for (int n = 0; n < kFdPairs; ++n) {
        const QMatrix a = rng.matrix(2);
        const CharMap map = char2(a);
        const Quaternion l = rng.quat();
        fd_check([&](const Quaternion& x) { return map.eval(x); }, diff2(a, l), l);
    }
    const std::vector<std::pair<MapKind, std::vector<std::pair<int, int>>>> forms{
        {MapKind::Tri3, {{0, 2}, {0, 1}, {1, 2}}},
        {MapKind::Block3, {{0, 2}, {0, 1}}},
        {MapKind::Split3, {{0, 2}, {1, 2}}},
        {MapKind::Poly3, {{0, 2}}},
        {MapKind::Rational3, {}},
    };
    for (const auto& [kind, zeros] : forms) {
        for (int n = 0; n < kFdPairs; ++n) {
            QMatrix a = rng.matrix(3);
            for (auto [i, j] : zeros) a(i, j) = 0.0;
            const CharMap map = char3(a);
            o.check(map.form == kind, "unexpected form " + std::string(kind_name(map.form)));
            Quaternion l = rng.quat();
            if (map.pole && distance(l, *map.pole) < 0.2) l = l + Quaternion(1.0);
            fd_check([&](const Quaternion& x) { return map.eval(x); }, diff3(map, l), l);
        }
    }
    int reduced = 0;
    while (reduced < kFdPairs) {
        const QMatrix a = rng.matrix(3);
        if (pole_is_eigenvalue(a)) continue;
        ++reduced;
        const CharMap map = reduce_discontinuous(a);
        Quaternion l = rng.quat();
        if (distance(l, map.back_map.shift) < 0.3) l = l + Quaternion(1.0);
        fd_check([&](const Quaternion& x) { return map.eval(map.back_map.from_original(x)); }, diff3(map, l), l);
    }
    o.check(worst <= kFdRel, "worst rel " + sci(worst));
    if (o.ok) o.detail = "diff2 + 6 diff3 variants, worst rel " + sci(worst);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"fixture spectra", fixture_spectra},
        {"pole dichotomy", pole_dichotomy},
        {"inverse reduction", inverse_reduction},
        {"rank ledger", rank_ledger},
        {"sylvester law", sylvester_law},
        {"sdet calculus", sdet_calculus},
        {"characteristic-map normalization", normalization},
        {"2x2 classification", classification2},
        {"existence on random 3x3", existence},
        {"differential correctness", differentials},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.ok;
        std::printf("%s %2d %s: %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
    }
    return failed ? 1 : 0;
}
