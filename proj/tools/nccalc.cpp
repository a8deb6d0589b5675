// nccalc: evaluate free nc expressions on matrix tuples, differentiate them,
// and run the law/CR/diagonal-respect suites with machine-readable reports.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nccalc/nccalc.hpp"

namespace {

using namespace nccalc;

struct GlobalOpts {
    std::uint64_t seed = 12345;
    std::vector<int> sizes{2, 3};
    int samples = 20;
    double tol_alg = 1e-8;
    double tol_fd = 1e-5;
    double fail_threshold = 1e-4;
    std::string out;
};

void emit(const json& j, const GlobalOpts& g) {
    if (g.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        save_json_file(g.out, j);
        std::cerr << "report written to " << g.out << "\n";
    }
}

struct ExprSpec {
    std::string text;
    int d = 0;  // 0 = infer from max index
};

/// Kind inference: A/B-variables vs X-variables, from the raw text.
VarKind infer_kind(const std::string& text, int d_flag) {
    bool has_x = false, has_ab = false;
    int max_idx = 0;
    for (std::size_t i = 0; i + 1 < text.size() + 1; ++i) {
        const char c = text[i];
        if ((c == 'X' || c == 'A' || c == 'B') && i + 1 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            (c == 'X' ? has_x : has_ab) = true;
            int idx = 0;
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                idx = idx * 10 + (text[j++] - '0');
            max_idx = std::max(max_idx, idx);
        }
    }
    if (has_x && has_ab)
        raise(ErrKind::SyntaxError, "expression mixes X-variables with A/B-variables");
    const int d = d_flag > 0 ? d_flag : std::max(1, max_idx);
    return has_ab ? VarKind::real_pairs(d) : VarKind::complex_vars(d);
}

MatTuple point_from_file(const std::string& path, const VarKind& kind) {
    const json j = load_json_file(path);
    if (kind.real()) {
        if (j.is_object() && j.contains("A") && j.contains("B"))
            return herm_point_from_json(j).tuple();
        const MatTuple t = tuple_from_json(j);
        return HermPoint(t).tuple();
    }
    return tuple_from_json(j);
}

void print_summary(const std::vector<CheckReport>& reports) {
    SuiteSummary s = summarize(reports);
    std::map<std::string, SuiteSummary> by_name;
    for (const auto& r : reports) {
        auto& e = by_name[r.check];
        switch (r.verdict) {
            case Verdict::Pass: ++e.pass; break;
            case Verdict::Fail: ++e.fail; break;
            case Verdict::Gray: ++e.gray; break;
            case Verdict::Skipped: ++e.skipped; break;
        }
    }
    for (const auto& [name, e] : by_name)
        std::fprintf(stderr, "%-24s pass %3d  fail %3d  gray %3d  skipped %3d\n", name.c_str(),
                     e.pass, e.fail, e.gray, e.skipped);
    std::fprintf(stderr, "total                    pass %3d  fail %3d  gray %3d  skipped %3d\n",
                 s.pass, s.fail, s.gray, s.skipped);
    if (s.gray > 0)
        std::fprintf(stderr, "warning: %d gray verdict(s); rerun with a finer schedule\n", s.gray);
}

int exit_code_for(const std::vector<CheckReport>& reports) {
    return summarize(reports).fail > 0 ? 1 : 0;
}

int cmd_eval(const GlobalOpts& g, const ExprSpec& es, const std::string& point_path) {
    const VarKind kind = infer_kind(es.text, es.d);
    const NcFunction f = parse_function(es.text, kind);
    const MatTuple point = point_from_file(point_path, kind);
    const CMat value = f(point);
    emit(mat_to_json(value), g);
    return 0;
}

int cmd_derive(const GlobalOpts& g, const ExprSpec& es, const std::string& point_path,
               const std::string& dir_path, const std::string& method) {
    const VarKind kind = infer_kind(es.text, es.d);
    const NcFunction f = parse_function(es.text, kind);
    const MatTuple x = point_from_file(point_path, kind);
    const MatTuple z = kind.real() ? point_from_file(dir_path, kind)
                                   : tuple_from_json(load_json_file(dir_path));

    json j;
    j["expr"] = serialize(f);
    j["seed"] = g.seed;
    if (method == "alg") {
        j["report"] = g_derivative_algebraic(f, x, z).to_json();
    } else if (method == "fd") {
        j["report"] = g_derivative_fd(f, x, z).to_json();
    } else {
        const DerivativeReport a = g_derivative_algebraic(f, x, z);
        const DerivativeReport d = g_derivative_fd(f, x, z);
        j["report"] = a.to_json();
        j["fd_report"] = d.to_json();
        j["inter_method_residual"] = frob_dist(a.value, d.value);
    }
    emit(j, g);
    return 0;
}

int cmd_check_axioms(const GlobalOpts& g, const ExprSpec& es, const std::string& space) {
    const VarKind kind = infer_kind(es.text, es.d);
    const NcFunction w = parse_function(es.text, kind);
    SuiteOptions opt;
    opt.space = (space == "hnc") ? Space::Hnc : Space::Cnc;
    opt.sizes = g.sizes;
    opt.samples = g.samples;
    opt.tol_algebraic = g.tol_alg;
    opt.fail_threshold = g.fail_threshold;
    const auto reports = run_suite(w, opt, g.seed);
    json j;
    j["expr"] = serialize(w);
    j["space"] = w.vars.real() ? "hnc" : space;
    j["seed"] = g.seed;
    j["reports"] = reports_to_json(reports);
    emit(j, g);
    print_summary(reports);
    return exit_code_for(reports);
}

int cmd_check_cr(const GlobalOpts& g, const std::string& u_text, const std::string& v_text,
                 const std::string& f_text, const std::string& route, int d_flag) {
    CrOptions opt;
    opt.sizes = g.sizes;
    opt.samples_per_size = g.samples;
    opt.tol_fd = g.tol_fd;
    opt.tol_algebraic = 1e-9;
    opt.fail_threshold = g.fail_threshold;
    opt.route = route == "fd" ? CrRoute::Fd : route == "alg" ? CrRoute::Algebraic : CrRoute::Auto;

    CrReport rep;
    if (!f_text.empty()) {
        const NcFunction f = parse_function(f_text, infer_kind(f_text, d_flag));
        const Decomposition dec = decompose(f);
        rep = cr_check(dec.u, dec.v, RandomStream(g.seed), opt, &f);
    } else {
        const VarKind kind = infer_kind(u_text + " " + v_text, d_flag);
        if (!kind.real()) raise(ErrKind::KindMismatch, "cr check expects A/B-variable u and v");
        const NcFunction u = parse_function(u_text, kind);
        const NcFunction v = parse_function(v_text, kind);
        rep = cr_check(u, v, RandomStream(g.seed), opt);
    }
    emit(rep.to_json(), g);
    std::fprintf(stderr, "cauchy_riemann (%s): %s, max residual %.3e (tol %.1e)\n",
                 rep.route.c_str(), verdict_name(rep.verdict), rep.max_residual, rep.tolerance);
    return rep.verdict == Verdict::Fail ? 1 : 0;
}

int cmd_check_fdiff(const GlobalOpts& g, const ExprSpec& es) {
    const VarKind kind = infer_kind(es.text, es.d);
    const NcFunction w = parse_function(es.text, kind);
    std::vector<CheckReport> reports;
    int sample_id = 0;
    for (int n : g.sizes) {
        for (int s = 0; s < g.samples; ++s, ++sample_id) {
            RandomStream st = RandomStream(g.seed).substream(sample_id + 1);
            const MatTuple x = kind.real() ? random_herm_tuple(kind.var_count(), n, st)
                                           : random_gaussian_tuple(kind.var_count(), n, n, st);
            FDiffOptions fo;
            fo.final_tol = g.tol_fd * 10.0;  // remainder medians, not derivative residuals
            CheckReport r = f_diff_check(w, x, st, fo);
            r.seed = st.master_seed();
            reports.push_back(std::move(r));
        }
    }
    json j;
    j["expr"] = serialize(w);
    j["seed"] = g.seed;
    j["reports"] = reports_to_json(reports);
    emit(j, g);
    print_summary(reports);
    return exit_code_for(reports);
}

int cmd_check_diag(const GlobalOpts& g, const ExprSpec& es) {
    const VarKind kind = infer_kind(es.text, es.d);
    if (kind.real()) raise(ErrKind::KindMismatch, "diag check expects an X-variable expression");
    const NcFunction f = parse_function(es.text, kind);
    const int d = kind.d;
    std::vector<CheckReport> reports;
    int sample_id = 0;
    for (int n : g.sizes) {
        for (int m : g.sizes) {
            for (int s = 0; s < g.samples; ++s, ++sample_id) {
                RandomStream st = RandomStream(g.seed).substream(sample_id + 1);
                const MatTuple a = random_herm_tuple(d, n, st), b = random_herm_tuple(d, n, st);
                const MatTuple c = random_herm_tuple(d, m, st), dd = random_herm_tuple(d, m, st);
                const MatTuple z = random_gaussian_tuple(d, n, m, st);
                for (auto& r : diag_respect_check(f, a, b, c, dd, z)) {
                    r.seed = st.master_seed();
                    reports.push_back(std::move(r));
                }
            }
        }
    }
    json j;
    j["expr"] = serialize(f);
    j["seed"] = g.seed;
    j["reports"] = reports_to_json(reports);
    emit(j, g);
    print_summary(reports);
    return exit_code_for(reports);
}

int cmd_reconstruct(const GlobalOpts& g, const std::string& u_text, const std::string& v_text,
                    int d_flag) {
    const VarKind kind = infer_kind(u_text + " " + v_text, d_flag);
    if (!kind.real()) raise(ErrKind::KindMismatch, "reconstruct expects A/B-variable u and v");
    const NcFunction u = parse_function(u_text, kind);
    const NcFunction v = parse_function(v_text, kind);
    const Reconstructed rec = reconstruct(u, v);

    json j;
    j["u"] = serialize(u);
    j["v"] = serialize(v);
    j["seed"] = g.seed;
    std::string failing;

    CrOptions copt;
    copt.sizes = g.sizes;
    copt.samples_per_size = g.samples;
    copt.tol_fd = g.tol_fd;
    copt.fail_threshold = g.fail_threshold;
    const CrReport cr = cr_check(u, v, RandomStream(g.seed), copt);
    j["cauchy_riemann"] = cr.to_json();
    if (cr.verdict == Verdict::Fail) failing = "cauchy_riemann";

    std::vector<CheckReport> fdiff;
    for (int n : g.sizes) {
        RandomStream st = RandomStream(g.seed).substream(1000 + n);
        const MatTuple ab = random_herm_tuple(kind.var_count(), n, st);
        for (const NcFunction* w : {&u, &v}) {
            CheckReport r = f_diff_check(*w, ab, st);
            r.seed = st.master_seed();
            fdiff.push_back(std::move(r));
        }
    }
    j["f_diff"] = reports_to_json(fdiff);
    if (failing.empty())
        for (const auto& r : fdiff)
            if (r.failed()) failing = "f_differentiability";

    SuiteOptions sopt;
    sopt.space = Space::Cnc;
    sopt.sizes = g.sizes;
    sopt.samples = g.samples;
    sopt.tol_algebraic = g.tol_alg;
    sopt.fail_threshold = g.fail_threshold;
    const auto suite = run_suite(rec.f, sopt, g.seed);
    j["axioms"] = reports_to_json(suite);
    if (failing.empty())
        for (const auto& r : suite)
            if (r.failed()) failing = r.check;

    std::vector<CheckReport> comm;
    for (int n : g.sizes) {
        RandomStream st = RandomStream(g.seed).substream(2000 + n);
        const MatTuple x = random_gaussian_tuple(kind.d, n, n, st);
        CheckReport r = commutator_identity_check(rec, x, st.gaussian(n), g.tol_fd);
        r.seed = st.master_seed();
        comm.push_back(std::move(r));
    }
    j["commutator_identity"] = reports_to_json(comm);
    if (failing.empty())
        for (const auto& r : comm)
            if (r.failed()) failing = "commutator_identity";

    const bool yes = failing.empty();
    j["nc_function"] = yes ? "yes" : "no";
    if (!yes) j["failing_law"] = failing;
    emit(j, g);
    std::fprintf(stderr, "nc-function: %s%s%s\n", yes ? "yes" : "no",
                 yes ? "" : " — failing law: ", yes ? "" : failing.c_str());
    return yes ? 0 : 1;
}

int cmd_decompose(const GlobalOpts& g, const ExprSpec& es, const std::string& point_path) {
    const VarKind kind = infer_kind(es.text, es.d);
    if (kind.real()) raise(ErrKind::KindMismatch, "decompose expects an X-variable expression");
    const NcFunction f = parse_function(es.text, kind);
    const Decomposition dec = decompose(f);

    const json pj = load_json_file(point_path);
    const HermPoint p = pj.is_object() && pj.contains("A") ? herm_point_from_json(pj)
                                                           : HermPoint(tuple_from_json(pj));
    if (p.d() != kind.d) raise(ErrKind::ArityMismatch, "point arity does not match expression");

    const CMat uval = dec.u(p.tuple());
    const CMat vval = dec.v(p.tuple());
    const CMat fval = f(p.to_complex());

    json j;
    j["expr"] = serialize(f);
    j["u"] = mat_to_json(uval);
    j["v"] = mat_to_json(vval);
    j["u_herm_defect"] = uval.herm_defect();
    j["v_herm_defect"] = vval.herm_defect();
    j["roundtrip_residual"] = frob_dist(uval + Complex(0.0, 1.0) * vval, fval);
    emit(j, g);
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"calculus of free noncommutative functions on matrix tuples"};
    app.set_config("--config", "", "flat key=value config file; flags override");

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master random seed (recorded in every report)");
    app.add_option("--sizes", g.sizes, "matrix sizes to sample")->delimiter(',');
    app.add_option("--samples", g.samples, "samples per size");
    app.add_option("--tol-alg", g.tol_alg, "pass tolerance for algebraic checks");
    app.add_option("--tol-fd", g.tol_fd, "pass tolerance for fd-based checks");
    app.add_option("--fail-threshold", g.fail_threshold, "residual above this fails outright");
    app.add_option("--out", g.out, "write the JSON report here instead of stdout");
    app.require_subcommand(1);

    ExprSpec es;
    std::string point_path, dir_path, method = "both", space = "cnc", route = "auto";
    std::string u_text, v_text, f_text;

    auto* eval_cmd = app.add_subcommand("eval", "evaluate an expression at a point");
    eval_cmd->add_option("-e,--expr", es.text, "expression")->required();
    eval_cmd->add_option("-d,--arity", es.d, "number of variables (default: inferred)");
    eval_cmd->add_option("--point", point_path, "point file (matrix JSON)")->required();

    auto* derive_cmd = app.add_subcommand("derive", "directional derivative at a point");
    derive_cmd->add_option("-e,--expr", es.text, "expression")->required();
    derive_cmd->add_option("-d,--arity", es.d, "number of variables");
    derive_cmd->add_option("--point", point_path, "point file")->required();
    derive_cmd->add_option("--dir", dir_path, "direction file")->required();
    derive_cmd->add_option("--method", method, "alg | fd | both")
        ->check(CLI::IsMember({"alg", "fd", "both"}));

    auto* check_cmd = app.add_subcommand("check", "run a verification suite");
    auto* ax = check_cmd->add_subcommand("axioms", "nc-function laws over seeded witnesses");
    ax->add_option("-e,--expr", es.text, "expression")->required();
    ax->add_option("-d,--arity", es.d, "number of variables");
    ax->add_option("--space", space, "cnc | hnc")->check(CLI::IsMember({"cnc", "hnc"}));
    auto* crc = check_cmd->add_subcommand("cr", "Cauchy-Riemann equations");
    crc->add_option("-u", u_text, "real part expression (A/B-variables)");
    crc->add_option("-v", v_text, "imaginary part expression");
    crc->add_option("-e,--expr", f_text, "X-variable source; checks its decomposition");
    crc->add_option("-d,--arity", es.d, "number of variables");
    crc->add_option("--route", route, "auto | fd | alg")
        ->check(CLI::IsMember({"auto", "fd", "alg"}));
    auto* fd = check_cmd->add_subcommand("fdiff", "F-differentiability remainder decay");
    fd->add_option("-e,--expr", es.text, "expression")->required();
    fd->add_option("-d,--arity", es.d, "number of variables");
    auto* dg = check_cmd->add_subcommand("diag", "diagonal-respect block identities");
    dg->add_option("-e,--expr", es.text, "X-variable expression")->required();
    dg->add_option("-d,--arity", es.d, "number of variables");
    check_cmd->require_subcommand(1);

    auto* rec_cmd = app.add_subcommand("reconstruct", "decide whether u + iv is an nc function");
    rec_cmd->add_option("-u", u_text, "real part expression")->required();
    rec_cmd->add_option("-v", v_text, "imaginary part expression")->required();
    rec_cmd->add_option("-d,--arity", es.d, "number of variables");

    auto* dec_cmd = app.add_subcommand("decompose", "real and imaginary part at a point");
    dec_cmd->add_option("-e,--expr", es.text, "X-variable expression")->required();
    dec_cmd->add_option("-d,--arity", es.d, "number of variables");
    dec_cmd->add_option("--point", point_path, "HermPoint file {\"A\": [...], \"B\": [...]}")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (eval_cmd->parsed()) return cmd_eval(g, es, point_path);
    if (derive_cmd->parsed()) return cmd_derive(g, es, point_path, dir_path, method);
    if (check_cmd->parsed()) {
        if (ax->parsed()) return cmd_check_axioms(g, es, space);
        if (crc->parsed()) return cmd_check_cr(g, u_text, v_text, f_text, route, es.d);
        if (fd->parsed()) return cmd_check_fdiff(g, es);
        if (dg->parsed()) return cmd_check_diag(g, es);
    }
    if (rec_cmd->parsed()) return cmd_reconstruct(g, u_text, v_text, es.d);
    if (dec_cmd->parsed()) return cmd_decompose(g, es, point_path);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const NcError& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrKind::SyntaxError:
            case ErrKind::UnknownVariable:
            case ErrKind::ArityError:
                if (e.pos() != NcError::npos)
                    std::cerr << "  at position " << e.pos() << "\n";
                return 2;
            case ErrKind::DomainViolation:
            case ErrKind::NotPSD:
            case ErrKind::NotHermitian:
            case ErrKind::KindMismatch:
            case ErrKind::ArityMismatch:
                return 3;
            case ErrKind::IoError:
                return 4;
            case ErrKind::MethodRefused:
            case ErrKind::InconsistentR:
                return 5;
            default:
                return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
