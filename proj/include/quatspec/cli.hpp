#pragma once

/**
 * @file cli.hpp
 * @brief Batch front-end: `quatspec <command> <file> [flags]`.
 *
 * Exit codes: 0 success, 1 internal error, 2 parse/usage error,
 * 3 singular matrix (or rank-deficient equation), 4 no root found.
 */

#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quatspec/charmap.hpp"
#include "quatspec/errors.hpp"
#include "quatspec/json_io.hpp"
#include "quatspec/linearize.hpp"
#include "quatspec/quaternion_io.hpp"
#include "quatspec/sdet.hpp"
#include "quatspec/solver.hpp"

namespace quatspec::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kParse = 2, kSingular = 3, kNoRoot = 4 };

struct Options {
    std::string command;
    std::string file;
    std::string at;
    std::string format = "json";
    bool ascii = false;
    bool verify = false;
    SolverConfig solver;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline QMatrix load_matrix(const Options& o) { return matrix_from_json(parse_json_text(read_file(o.file))); }

inline void require_size(const QMatrix& a, const std::string& command) {
    if (a.size() != 2 && a.size() != 3) {
        throw ParseError(command + " needs n = 2 or n = 3 (got n = " + std::to_string(a.size()) + ")");
    }
}

inline Quaternion parse_at(const Options& o) {
    if (o.at.empty()) throw ParseError(o.command + " needs --at <quaternion>");
    const auto q = parse_quaternion(o.at);
    if (!q) throw ParseError("cannot parse quaternion \"" + o.at + "\"");
    return *q;
}

inline Json header(const std::string& command) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    return j;
}

inline Json opt_quaternion(const std::optional<Quaternion>& q) { return q ? to_json(*q) : Json(nullptr); }

inline Json opt_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json matrix4_to_json(const RealMat4& m) {
    Json rows = Json::array();
    for (int r = 0; r < 4; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 4; ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

struct Printer {
    const Options& o;
    std::ostream& out;

    std::string q(const Quaternion& v) const {
        return to_string(v, o.ascii ? Symbols::Ascii : Symbols::Unicode, 17);
    }
    static std::string sci(double v) { return quatspec::detail::format_double(v, true); }
    static std::string num(double v) { return quatspec::detail::format_double(v, false); }
};

inline std::string rank_text(const std::optional<int>& r) { return r ? std::to_string(*r) : "n/a"; }

// -- commands --

inline int cmd_spectrum(const Options& o, std::ostream& out) {
    const QMatrix a = load_matrix(o);
    require_size(a, "spectrum");
    const SpectrumReport rep = spectrum(a, o.solver);
    std::vector<double> sigmas;
    if (o.verify)
        for (const auto& r : rep.roots) sigmas.push_back(sigma_oracle(a, r.lambda));

    if (o.format == "text") {
        const Printer p{o, out};
        out << "kind: " << spectrum_kind_name(rep.kind) << "\n";
        out << "path: " << rep.classification_path << "\n";
        out << "degree: " << rep.degree << "\n";
        if (rep.spherical) {
            out << "sphere: center " << p.q(rep.spherical->center) << ", b " << p.q(rep.spherical->b)
                << ", delta " << Printer::num(rep.spherical->delta) << ", radius "
                << Printer::num(rep.spherical->radius) << "\n";
        }
        for (std::size_t k = 0; k < rep.roots.size(); ++k) {
            const auto& r = rep.roots[k];
            out << "root " << k + 1 << ": " << p.q(r.lambda) << "  residual " << Printer::sci(r.residual)
                << "  diff_rank " << rank_text(r.diff_rank) << "  iters " << r.newton_iters;
            if (o.verify) out << "  sigma " << Printer::sci(sigmas[k]);
            out << "\n";
        }
        return kOk;
    }

    Json j = header("spectrum");
    j["n"] = a.size();
    j["kind"] = spectrum_kind_name(rep.kind);
    j["classification_path"] = rep.classification_path;
    j["degree"] = rep.degree;
    Json roots = Json::array();
    for (std::size_t k = 0; k < rep.roots.size(); ++k) {
        const auto& r = rep.roots[k];
        Json e;
        e["lambda"] = to_json(r.lambda);
        e["residual"] = r.residual;
        e["diff_rank"] = opt_int(r.diff_rank);
        e["newton_iters"] = r.newton_iters;
        if (o.verify) e["sigma"] = sigmas[k];
        roots.push_back(e);
    }
    j["roots"] = roots;
    if (rep.spherical) {
        Json s;
        s["center"] = to_json(rep.spherical->center);
        s["b"] = to_json(rep.spherical->b);
        s["delta"] = rep.spherical->delta;
        s["radius"] = rep.spherical->radius;
        j["spherical"] = s;
    } else {
        j["spherical"] = nullptr;
    }
    out << write_json(j);
    return kOk;
}

inline int cmd_sdet(const Options& o, std::ostream& out) {
    const QMatrix a = load_matrix(o);
    const double s = sdet(a);
    if (o.format == "text") {
        out << Printer::num(s) << "\n";
        return kOk;
    }
    Json j = header("sdet");
    j["n"] = a.size();
    j["sdet"] = s;
    out << write_json(j);
    return kOk;
}

inline int cmd_inverse(const Options& o, std::ostream& out) {
    const QMatrix a = load_matrix(o);
    const QMatrix x = inverse(a);
    if (o.format == "text") {
        const Printer p{o, out};
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t k = 0; k < x.size(); ++k) out << (k ? "\t" : "") << p.q(x(i, k));
            out << "\n";
        }
        return kOk;
    }
    // Same shape as the input document, so the output can be fed back in.
    out << write_json(matrix_to_json(x));
    return kOk;
}

inline Json map_to_json(const CharMap& m) {
    Json j;
    j["kind"] = kind_name(m.kind);
    j["form"] = kind_name(m.form);
    j["degree"] = m.degree;
    j["norm_const"] = m.norm_const;
    j["pole"] = opt_quaternion(m.pole);
    Json perm = Json::array();
    for (auto k : m.permutation) perm.push_back(k + 1);
    j["permutation"] = perm;
    Json back;
    if (m.back_map.type == BackMap::Type::Identity) {
        back["type"] = "identity";
    } else {
        back["type"] = "inverse-shift";
        back["shift"] = to_json(m.back_map.shift);
    }
    j["back_map"] = back;
    Json coeffs;
    for (const auto& [name, value] : m.coefficients()) coeffs[name] = to_json(value);
    j["coefficients"] = coeffs;
    return j;
}

inline void map_text(const Printer& p, const CharMap& m, const std::string& indent) {
    auto& out = p.out;
    out << indent << "kind: " << kind_name(m.kind) << "\n";
    out << indent << "degree: " << m.degree << "\n";
    out << indent << "norm_const: " << Printer::num(m.norm_const) << "\n";
    out << indent << "pole: " << (m.pole ? p.q(*m.pole) : std::string("none")) << "\n";
    for (const auto& [name, value] : m.coefficients()) out << indent << name << " = " << p.q(value) << "\n";
}

inline int cmd_charmap(const Options& o, std::ostream& out) {
    const QMatrix a = load_matrix(o);
    require_size(a, "charmap");
    const CharMap m = a.size() == 2 ? char2(a) : char3(a);
    std::optional<CharMap> reduced;
    if (m.kind == MapKind::Rational3 && !pole_is_eigenvalue(a)) reduced = reduce_discontinuous(a);

    if (o.format == "text") {
        const Printer p{o, out};
        map_text(p, m, "");
        if (reduced) {
            out << "reduced (lambda = rho^-1 + " << p.q(reduced->back_map.shift) << "):\n";
            map_text(p, *reduced, "  ");
        }
        return kOk;
    }
    Json j = header("charmap");
    j["n"] = a.size();
    const Json body = map_to_json(m);
    for (const auto& item : body.items()) j[item.key()] = item.value();
    j["reduced"] = reduced ? map_to_json(*reduced) : Json(nullptr);
    out << write_json(j);
    return kOk;
}

inline int cmd_pole(const Options& o, std::ostream& out) {
    const QMatrix a = load_matrix(o);
    if (a.size() != 3) throw ParseError("pole needs n = 3 (got n = " + std::to_string(a.size()) + ")");
    const auto candidates = pole_candidates(a);
    std::optional<Quaternion> pi;
    std::optional<bool> is_eig;
    if (!quatspec::detail::negligible(a(0, 2), a.max_abs())) {
        pi = pole(a);
        is_eig = pole_is_eigenvalue(a);
    }

    if (o.format == "text") {
        const Printer p{o, out};
        out << "pole: " << (pi ? p.q(*pi) : std::string("none")) << "\n";
        out << "eigenvalue: " << (is_eig ? (*is_eig ? "true" : "false") : "n/a") << "\n";
        for (const auto& c : candidates) {
            out << "entry (" << c.row + 1 << "," << c.col + 1 << "): "
                << (c.pole ? p.q(*c.pole) + (c.eigenvalue ? "  eigenvalue" : "  not an eigenvalue")
                           : std::string("zero entry"))
                << "\n";
        }
        return kOk;
    }
    Json j = header("pole");
    j["n"] = a.size();
    j["pole"] = opt_quaternion(pi);
    j["eigenvalue"] = is_eig ? Json(*is_eig) : Json(nullptr);
    Json list = Json::array();
    for (const auto& c : candidates) {
        Json e;
        e["entry"] = Json::array({c.row + 1, c.col + 1});
        e["pole"] = opt_quaternion(c.pole);
        e["eigenvalue"] = c.pole ? Json(c.eigenvalue) : Json(nullptr);
        list.push_back(e);
    }
    j["candidates"] = list;
    out << write_json(j);
    return kOk;
}

inline int cmd_rank(const Options& o, std::ostream& out) {
    const QMatrix a = load_matrix(o);
    require_size(a, "rank");
    const Quaternion at = parse_at(o);
    const CharMap m = a.size() == 2 ? char2(a) : char3(a);
    BilateralForm form;
    try {
        form = a.size() == 2 ? m.differential(at) : diff3(m, at);
    } catch (const CaseError&) {
        throw DomainError("the characteristic map is not differentiable at the pole");
    }
    const RealMat4 lin = bilateral_matrix(form);
    const int rank = numeric_rank(lin, o.solver.rank_tol);

    if (o.format == "text") {
        const Printer p{o, out};
        out << "at: " << p.q(at) << "\n";
        out << "kind: " << kind_name(m.kind) << "\n";
        out << "rank: " << rank << "\n";
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) out << (c ? "\t" : "") << Printer::num(lin(r, c));
            out << "\n";
        }
        return kOk;
    }
    Json j = header("rank");
    j["n"] = a.size();
    j["at"] = to_json(at);
    j["kind"] = kind_name(m.kind);
    j["rank"] = rank;
    j["matrix"] = matrix4_to_json(lin);
    out << write_json(j);
    return kOk;
}

inline int cmd_solve_sylvester(const Options& o, std::ostream& out) {
    const BilateralEquation eq = bilateral_from_json(parse_json_text(read_file(o.file)));
    const int rank = numeric_rank(bilateral_matrix(eq.form), o.solver.rank_tol);
    const Quaternion x = solve_bilateral(eq.form, eq.rhs, o.solver.rank_tol);
    if (o.format == "text") {
        const Printer p{o, out};
        out << "x: " << p.q(x) << "\nrank: " << rank << "\n";
        return kOk;
    }
    Json j;
    j["schema"] = kSchema;
    j["x"] = to_json(x);
    j["rank"] = rank;
    out << write_json(j);
    return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
    const QMatrix a = load_matrix(o);
    const Quaternion at = parse_at(o);
    const double s = sdet(a.shifted(at));
    const double sigma = sigma_oracle(a, at);
    const double bound = quatspec::detail::residual_bound(a, o.solver.tol_residual);
    const bool eig = s <= bound;
    if (o.format == "text") {
        const Printer p{o, out};
        out << "at: " << p.q(at) << "\nsdet: " << Printer::sci(s) << "\nsigma: " << Printer::sci(sigma)
            << "\neigenvalue: " << (eig ? "true" : "false") << "\n";
        return kOk;
    }
    Json j = header("verify");
    j["n"] = a.size();
    j["at"] = to_json(at);
    j["sdet_residual"] = s;
    j["sigma"] = sigma;
    j["eigenvalue"] = eig;
    out << write_json(j);
    return kOk;
}

}  // namespace detail

inline int dispatch(const Options& o, std::ostream& out) {
    if (o.command == "spectrum") return detail::cmd_spectrum(o, out);
    if (o.command == "sdet") return detail::cmd_sdet(o, out);
    if (o.command == "inverse") return detail::cmd_inverse(o, out);
    if (o.command == "charmap") return detail::cmd_charmap(o, out);
    if (o.command == "pole") return detail::cmd_pole(o, out);
    if (o.command == "rank") return detail::cmd_rank(o, out);
    if (o.command == "solve-sylvester") return detail::cmd_solve_sylvester(o, out);
    if (o.command == "verify") return detail::cmd_verify(o, out);
    throw ParseError("unknown command " + o.command);
}

/// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Left spectra of 2x2 and 3x3 quaternionic matrices", "quatspec"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--tol", o.solver.tol_residual, "Newton / verification residual tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", o.solver.seed, "seed for random Newton starts");
    app.add_option("--starts", o.solver.n_starts, "number of Newton starts")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", o.solver.max_iter, "Newton iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--verify", o.verify, "evaluate the independent determinant oracle at every root");
    app.add_flag("--ascii", o.ascii, "ASCII quaternion symbols in text output");

    struct Sub {
        const char* name;
        const char* help;
        bool needs_at;
    };
    const Sub subs[] = {
        {"spectrum", "left spectrum with classification", false},
        {"sdet", "Study determinant", false},
        {"inverse", "matrix inverse", false},
        {"charmap", "characteristic map of a 2x2 or 3x3 matrix", false},
        {"pole", "pole of a 3x3 matrix and its six permuted candidates", false},
        {"rank", "rank of the differential at a point", true},
        {"solve-sylvester", "solve sum P X Q = R", false},
        {"verify", "check a candidate eigenvalue", true},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("file", o.file, "input JSON document")->required();
        if (s.needs_at) sub->add_option("--at", o.at, "quaternion, e.g. \"1-i+2j\" or \"[1,-1,2,0]\"")->required();
        sub->callback([&o, name = std::string(s.name)] { o.command = name; });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "quatspec: " << e.what() << "\n";
        return kParse;
    }

    try {
        return dispatch(o, out);
    } catch (const ParseError& e) {
        err << "quatspec: " << e.what() << "\n";
        return kParse;
    } catch (const SingularMatrixError& e) {
        err << "quatspec: " << e.what() << "\n";
        return kSingular;
    } catch (const RankDeficientError& e) {
        err << "quatspec: " << e.what() << "\n";
        return kSingular;
    } catch (const SolverFailure& e) {
        err << "quatspec: " << e.what() << "\n";
        return kNoRoot;
    } catch (const std::exception& e) {
        err << "quatspec: " << e.what() << "\n";
        return kInternal;
    }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run(args, out, err);
}

}  // namespace quatspec::cli
