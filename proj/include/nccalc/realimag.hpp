#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nccalc/calculus.hpp"
#include "nccalc/cmat.hpp"
#include "nccalc/errors.hpp"
#include "nccalc/expr.hpp"
#include "nccalc/io.hpp"
#include "nccalc/random.hpp"
#include "nccalc/report.hpp"
#include "nccalc/tuple.hpp"

namespace nccalc {

// ---------------------------------------------------------------------------
// f  ->  (u, v)
// ---------------------------------------------------------------------------

/// Real and imaginary part of a function of X-variables:
///   u(A,B) = (f(A+iB) + f(A+iB)*) / 2,   v(A,B) = (f(A+iB) - f(A+iB)*) / 2i.
/// Both are Hermitian-valued on Hermitian pairs by construction.
struct Decomposition {
    NcFunction source;  // f over X-variables
    NcFunction u, v;    // A/B-variable evaluators
};

inline Decomposition decompose(const NcFunction& f) {
    if (f.vars.real()) raise(ErrKind::KindMismatch, "decompose expects an X-variable function");
    const int d = f.vars.d;

    Decomposition dec;
    dec.source = f;

    auto eval_f = [f, d](const MatTuple& ab) {
        MatTuple a(std::vector<CMat>(ab.mats.begin(), ab.mats.begin() + d));
        MatTuple b(std::vector<CMat>(ab.mats.begin() + d, ab.mats.end()));
        return f(combine(a, b));
    };

    dec.u.vars = VarKind::real_pairs(d);
    dec.u.fn = [eval_f](const MatTuple& ab) { return re_part(eval_f(ab)); };
    dec.u.label = "Re[" + serialize(f) + "]";

    dec.v.vars = VarKind::real_pairs(d);
    dec.v.fn = [eval_f](const MatTuple& ab) { return im_part(eval_f(ab)); };
    dec.v.label = "Im[" + serialize(f) + "]";
    return dec;
}

// ---------------------------------------------------------------------------
// (u, v)  ->  f
// ---------------------------------------------------------------------------

/// f(A+iB) = u(A,B) + i v(A,B) on the Cartesian split of the argument. The
/// result is graded and respects direct sums and unitary equivalence
/// unconditionally; whether it respects similarities is exactly what the
/// axiom suite decides.
struct Reconstructed {
    NcFunction f;  // X-variable evaluator
    NcFunction u, v;
};

inline Reconstructed reconstruct(const NcFunction& u, const NcFunction& v) {
    if (!u.vars.real() || !v.vars.real() || !(u.vars == v.vars))
        raise(ErrKind::KindMismatch, "reconstruct expects two A/B-variable functions of one kind");

    Reconstructed rec;
    rec.u = u;
    rec.v = v;
    rec.f.vars = VarKind::complex_vars(u.vars.d);
    rec.f.fn = [u, v](const MatTuple& x) {
        auto [a, b] = split(x);
        const MatTuple ab = concat(a, b);
        return u(ab) + Complex(0.0, 1.0) * v(ab);
    };
    rec.f.label = "reconstruct(" + serialize(u) + ", " + serialize(v) + ")";
    return rec;
}

/// The candidate derivative of a reconstructed f:
///   Du(A,B)(Z1,Z2) + i Dv(A,B)(Z1,Z2),
/// finite differences on u and v.
inline CMat dtilde_derivative(const NcFunction& u, const NcFunction& v, const MatTuple& x,
                              const MatTuple& z, const StepSchedule& sched = StepSchedule{}) {
    auto [a, b] = split(x);
    auto [z1, z2] = split(z);
    const MatTuple ab = concat(a, b);
    const MatTuple z12 = concat(z1, z2);
    const CMat du = g_derivative_fd(u, ab, z12, sched).value;
    const CMat dv = g_derivative_fd(v, ab, z12, sched).value;
    return du + Complex(0.0, 1.0) * dv;
}

// ---------------------------------------------------------------------------
// Cauchy-Riemann verification
// ---------------------------------------------------------------------------

enum class CrRoute { Auto, Fd, Algebraic };

struct CrOptions {
    std::vector<int> sizes{2, 3};
    int samples_per_size = 10;
    CrRoute route = CrRoute::Auto;
    double tol_fd = 1e-5;
    double tol_algebraic = 1e-9;
    double fail_threshold = 1e-4;
    StepSchedule sched{};
};

struct CrReport {
    std::vector<CheckReport> samples;
    double max_residual = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Pass;
    std::string route;
    std::uint64_t seed = 0;

    bool passed() const { return verdict == Verdict::Pass; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["check"] = "cauchy_riemann";
        j["verdict"] = verdict_name(verdict);
        j["route"] = route;
        j["max_residual"] = max_residual;
        j["tolerance"] = tolerance;
        j["seed"] = seed;
        j["samples"] = reports_to_json(samples);
        return j;
    }
};

/// One CR sample at size n, drawn entirely from `sub`; rerunning with the
/// same stream seed reproduces the witness and residual exactly.
inline CheckReport cr_sample(const NcFunction& u, const NcFunction& v, int n, RandomStream& sub,
                             bool algebraic, const NcFunction* source_f, double tol,
                             double fail_threshold, const StepSchedule& sched) {
    const int d = u.vars.d;
    const MatTuple a = random_herm_tuple(d, n, sub);
    const MatTuple b = random_herm_tuple(d, n, sub);
    MatTuple z1 = random_herm_tuple(d, n, sub);
    MatTuple z2 = random_herm_tuple(d, n, sub);
    const double nrm = std::max(pair_norm(z1), pair_norm(z2));
    if (nrm > 0.0) {
        z1 *= Complex(1.0 / nrm, 0.0);
        z2 *= Complex(1.0 / nrm, 0.0);
    }

    CMat lhs, rhs;
    if (algebraic) {
        const MatTuple x = combine(a, b);
        lhs = re_part(delta_op(*source_f, x, x, combine(z1, z2)).value);
        rhs = im_part(
            delta_op(*source_f, x, x, combine(Complex(-1.0, 0.0) * MatTuple(z2), z1)).value);
    } else {
        const MatTuple ab = concat(a, b);
        lhs = g_derivative_fd(u, ab, concat(z1, z2), sched).value;
        rhs = g_derivative_fd(v, ab, concat(Complex(-1.0, 0.0) * MatTuple(z2), z1), sched).value;
    }
    const double res = frob_dist(lhs, rhs);

    CheckReport cr = make_report("cauchy_riemann", res, tol, fail_threshold);
    cr.seed = sub.master_seed();
    cr.witness["n"] = n;
    cr.witness["A"] = tuple_to_json(a);
    cr.witness["B"] = tuple_to_json(b);
    cr.witness["Z1"] = tuple_to_json(z1);
    cr.witness["Z2"] = tuple_to_json(z2);
    return cr;
}

/// Residual of Du(A,B)(Z1,Z2) = Dv(A,B)(-Z2,Z1) over sampled Hermitian points
/// and directions. `source_f` enables the algebraic route, which replaces
/// both derivatives by blocks of the difference-differential of f.
inline CrReport cr_check(const NcFunction& u, const NcFunction& v, RandomStream stream,
                         const CrOptions& opt = CrOptions{},
                         const NcFunction* source_f = nullptr) {
    if (!u.vars.real() || !(u.vars == v.vars))
        raise(ErrKind::KindMismatch, "cr_check expects A/B-variable functions of one kind");

    bool algebraic = false;
    switch (opt.route) {
        case CrRoute::Fd: break;
        case CrRoute::Algebraic:
            if (!source_f || !source_f->polynomial())
                raise(ErrKind::MethodRefused,
                      "algebraic CR route needs a polynomial X-variable source");
            algebraic = true;
            break;
        case CrRoute::Auto: algebraic = source_f && source_f->polynomial(); break;
    }

    CrReport rep;
    rep.route = algebraic ? "algebraic" : "fd";
    rep.tolerance = algebraic ? opt.tol_algebraic : opt.tol_fd;
    rep.seed = stream.master_seed();

    int sample_id = 0;
    for (int n : opt.sizes) {
        for (int s = 0; s < opt.samples_per_size; ++s, ++sample_id) {
            RandomStream sub = stream.substream(static_cast<std::uint64_t>(sample_id) + 1);
            CheckReport cr = cr_sample(u, v, n, sub, algebraic, source_f, rep.tolerance,
                                       opt.fail_threshold, opt.sched);
            rep.max_residual = std::max(rep.max_residual, cr.residual);
            rep.samples.push_back(std::move(cr));
        }
    }
    rep.verdict = classify(rep.max_residual, rep.tolerance, opt.fail_threshold);
    return rep;
}

/// Checks that the algebraic derivative of f splits into the fd derivatives
/// of its real and imaginary parts: Du = Re Df, Dv = Im Df.
inline CheckReport du_dv_consistency(const NcFunction& f, const MatTuple& x, const MatTuple& z,
                                     double tol = 1e-5, const StepSchedule& sched = StepSchedule{}) {
    const Decomposition dec = decompose(f);
    const CMat df = g_derivative_algebraic(f, x, z).value;

    auto [a, b] = split(x);
    auto [z1, z2] = split(z);
    const MatTuple ab = concat(a, b);
    const MatTuple z12 = concat(z1, z2);
    const CMat du = g_derivative_fd(dec.u, ab, z12, sched).value;
    const CMat dv = g_derivative_fd(dec.v, ab, z12, sched).value;

    const double res = std::max(frob_dist(re_part(df), du), frob_dist(im_part(df), dv));
    CheckReport rep = make_report("du_dv_consistency", res, tol);
    rep.witness["X"] = tuple_to_json(x);
    rep.witness["Z"] = tuple_to_json(z);
    rep.witness["expr"] = serialize(f);
    return rep;
}

// ---------------------------------------------------------------------------
// Commutator identity  Df(X)([T, X]) = [T, f(X)]
// ---------------------------------------------------------------------------

namespace detail {

/// Hermitian direction pair of [T, X]: with T = T1 + iT2, X = A + iB,
///   Z1 = [iT1, B] + [iT2, A],   Z2 = [iT1, -A] + [iT2, B].
inline std::pair<MatTuple, MatTuple> commutator_direction(const CMat& t, const MatTuple& a,
                                                          const MatTuple& b) {
    const CMat t1 = re_part(t), t2 = im_part(t);
    const Complex i(0.0, 1.0);
    const MatTuple z1 = i * (commutator(t1, b) + commutator(t2, a));
    const MatTuple z2 = i * (commutator(t2, b) - commutator(t1, a));
    return {z1, z2};
}

}  // namespace detail

/// Finite-difference route through u and v.
inline CheckReport commutator_identity_check(const Reconstructed& rec, const MatTuple& x,
                                             const CMat& t, double tol = 1e-5,
                                             const StepSchedule& sched = StepSchedule{}) {
    auto [a, b] = split(x);
    auto [z1, z2] = detail::commutator_direction(t, a, b);
    const MatTuple ab = concat(a, b);
    const MatTuple z12 = concat(z1, z2);

    const CMat du = g_derivative_fd(rec.u, ab, z12, sched).value;
    const CMat dv = g_derivative_fd(rec.v, ab, z12, sched).value;
    const CMat lhs = du + Complex(0.0, 1.0) * dv;
    const CMat rhs = commutator(t, rec.f(x));

    CheckReport rep = make_report("commutator_identity", frob_dist(lhs, rhs), tol);
    rep.witness["X"] = tuple_to_json(x);
    rep.witness["T"] = mat_to_json(t);
    rep.notes = "fd route";
    return rep;
}

/// Algebraic route for a polynomial f.
inline CheckReport commutator_identity_check(const NcFunction& f, const MatTuple& x, const CMat& t,
                                             double tol = 1e-9) {
    const MatTuple dir = commutator(t, x);
    const CMat lhs = g_derivative_algebraic(f, x, dir).value;
    const CMat rhs = commutator(t, f(x));
    CheckReport rep = make_report("commutator_identity", frob_dist(lhs, rhs), tol);
    rep.witness["X"] = tuple_to_json(x);
    rep.witness["T"] = mat_to_json(t);
    rep.witness["expr"] = serialize(f);
    rep.notes = "algebraic route";
    return rep;
}

// ---------------------------------------------------------------------------
// Complex homogeneity of the reconstructed derivative
// ---------------------------------------------------------------------------

inline std::vector<Complex> default_homogeneity_samples() {
    const double th = std::numbers::pi_v<double> / 3.0;
    const double qu = std::numbers::pi_v<double> / 4.0;
    return {Complex(0.0, 1.0), Complex(-1.0, 0.0), Complex(std::cos(th), std::sin(th)),
            2.0 * Complex(std::cos(-qu), std::sin(-qu))};
}

/// D~f(X)(zZ) = z D~f(X)(Z) for complex z, using the rotation decomposition
/// of zZ into a Hermitian pair. Runs a CR probe at X first and reports
/// `skipped` when the probe fails, since homogeneity presupposes CR.
inline CheckReport homogeneity_check(const NcFunction& u, const NcFunction& v, const MatTuple& x,
                                     const MatTuple& z,
                                     std::vector<Complex> z_samples = default_homogeneity_samples(),
                                     double tol = 1e-5, double cr_threshold = 1e-4,
                                     const StepSchedule& sched = StepSchedule{}) {
    auto [a, b] = split(x);
    auto [z1, z2] = split(z);
    const MatTuple ab = concat(a, b);

    const CMat du = g_derivative_fd(u, ab, concat(z1, z2), sched).value;
    const CMat dv = g_derivative_fd(v, ab, concat(z1, z2), sched).value;

    // CR probe in the direction at hand
    const CMat dv_rot =
        g_derivative_fd(v, ab, concat(Complex(-1.0, 0.0) * MatTuple(z2), z1), sched).value;
    const double cr_res = frob_dist(du, dv_rot);

    CheckReport rep;
    rep.check = "homogeneity";
    rep.tolerance = tol;
    rep.witness["X"] = tuple_to_json(x);
    rep.witness["Z"] = tuple_to_json(z);
    if (cr_res > cr_threshold) {
        rep.verdict = Verdict::Skipped;
        rep.residual = cr_res;
        rep.notes = "CrViolated: CR probe residual " + std::to_string(cr_res) +
                    " exceeds threshold; homogeneity not meaningful";
        return rep;
    }

    const CMat base = du + Complex(0.0, 1.0) * dv;
    double worst = 0.0;
    for (const Complex zc : z_samples) {
        const double r = std::abs(zc);
        const double theta = std::arg(zc);
        const double c = std::cos(theta), s = std::sin(theta);
        MatTuple z1t = Complex(c, 0.0) * MatTuple(z1) - Complex(s, 0.0) * MatTuple(z2);
        MatTuple z2t = Complex(s, 0.0) * MatTuple(z1) + Complex(c, 0.0) * MatTuple(z2);
        z1t *= Complex(r, 0.0);
        z2t *= Complex(r, 0.0);
        const CMat du_z = g_derivative_fd(u, ab, concat(z1t, z2t), sched).value;
        const CMat dv_z = g_derivative_fd(v, ab, concat(z1t, z2t), sched).value;
        const CMat lhs = du_z + Complex(0.0, 1.0) * dv_z;
        worst = std::max(worst, frob_dist(lhs, zc * base));
    }
    rep.residual = worst;
    rep.verdict = classify(worst, tol);
    return rep;
}

// ---------------------------------------------------------------------------
// Diagonal respect
// ---------------------------------------------------------------------------

namespace detail {

/// The Hermitian block pair ([[A, Z/2], [Z*/2, C]], [[B, -iZ/2], [iZ*/2, D]]).
inline MatTuple diag_block_point(const MatTuple& a, const MatTuple& b, const MatTuple& c,
                                 const MatTuple& d, const MatTuple& z) {
    const Complex half(0.5, 0.0), mih(0.0, -0.5), pih(0.0, 0.5);
    std::vector<CMat> e_part, f_part;
    for (int k = 0; k < a.arity(); ++k) {
        e_part.push_back(block2_assemble(a[k], half * z[k], half * z[k].adjoint(), c[k]));
        f_part.push_back(block2_assemble(b[k], mih * z[k], pih * z[k].adjoint(), d[k]));
    }
    return concat(MatTuple(std::move(e_part)), MatTuple(std::move(f_part)));
}

}  // namespace detail

/// Full diagonal-respect verification for a polynomial f: the decomposition's
/// u, v evaluated at the canonical block point have diagonal blocks u(A,B),
/// u(C,D) (resp. v) and off-diagonal blocks Delta f / 2 and -i Delta f / 2.
/// When the two points coincide, additionally Du = T1 + T1*, Dv = T2 + T2*.
inline std::vector<CheckReport> diag_respect_check(const NcFunction& f, const MatTuple& a,
                                                   const MatTuple& b, const MatTuple& c,
                                                   const MatTuple& d, const MatTuple& z,
                                                   double tol_block = 1e-9,
                                                   double tol_deriv = 1e-5,
                                                   const StepSchedule& sched = StepSchedule{}) {
    const Decomposition dec = decompose(f);
    const int n = a.dim(), m = c.dim();
    if (z.rows() != n || z.cols() != m)
        raise(ErrKind::DimensionMismatch, "diag_respect_check: Z must be n x m");

    const MatTuple block_point = detail::diag_block_point(a, b, c, d, z);
    const CMat u_block = dec.u(block_point);
    const CMat v_block = dec.v(block_point);

    const CMat u11 = dec.u(concat(a, b)), u22 = dec.u(concat(c, d));
    const CMat v11 = dec.v(concat(a, b)), v22 = dec.v(concat(c, d));

    const CMat delta = delta_op(f, combine(a, b), combine(c, d), z).value;
    const CMat t1 = Complex(0.5, 0.0) * delta;
    const CMat t2 = Complex(0.0, -0.5) * delta;

    const Block2 ub = block2_extract(u_block, n, n);
    const Block2 vb = block2_extract(v_block, n, n);
    const double scale = std::max({1.0, u_block.frob(), v_block.frob()});
    const double res = std::max({frob_dist(ub.a, u11), frob_dist(ub.d, u22),
                                 frob_dist(ub.b, t1), frob_dist(ub.c, t1.adjoint()),
                                 frob_dist(vb.a, v11), frob_dist(vb.d, v22),
                                 frob_dist(vb.b, t2), frob_dist(vb.c, t2.adjoint())}) /
                       scale;

    std::vector<CheckReport> out;
    CheckReport blocks = make_report("diag_respect_blocks", res, tol_block);
    blocks.witness["A"] = tuple_to_json(a);
    blocks.witness["B"] = tuple_to_json(b);
    blocks.witness["C"] = tuple_to_json(c);
    blocks.witness["D"] = tuple_to_json(d);
    blocks.witness["Z"] = tuple_to_json(z);
    blocks.witness["expr"] = serialize(f);
    blocks.notes = "residual relative to max(1, ||u(E,F)||, ||v(E,F)||)";
    out.push_back(std::move(blocks));

    const bool same_point = (n == m) && (a - c).max_frob() == 0.0 && (b - d).max_frob() == 0.0;
    if (same_point) {
        auto [z1, z2] = split(z);
        const MatTuple ab = concat(a, b);
        const CMat du = g_derivative_fd(dec.u, ab, concat(z1, z2), sched).value;
        const CMat dv = g_derivative_fd(dec.v, ab, concat(z1, z2), sched).value;
        const double dres = std::max(frob_dist(du, t1 + t1.adjoint()),
                                     frob_dist(dv, t2 + t2.adjoint()));
        CheckReport deriv = make_report("diag_respect_derivative", dres, tol_deriv);
        deriv.witness["Z"] = tuple_to_json(z);
        deriv.witness["expr"] = serialize(f);
        out.push_back(std::move(deriv));
    }
    return out;
}

/// Diagonal-block test for an arbitrary real function w at the canonical
/// block point: w(E,F) must carry w(A,B) and w(C,D) on its diagonal. Most
/// real functions fail this for Z != 0.
inline CheckReport diag_block_check(const NcFunction& w, const MatTuple& a, const MatTuple& b,
                                    const MatTuple& c, const MatTuple& d, const MatTuple& z,
                                    double tol = 1e-9) {
    if (!w.vars.real()) raise(ErrKind::KindMismatch, "diag_block_check expects A/B-variables");
    const int n = a.dim();
    const MatTuple block_point = detail::diag_block_point(a, b, c, d, z);
    const CMat w_block = w(block_point);
    const CMat w11 = w(concat(a, b)), w22 = w(concat(c, d));
    const Block2 wb = block2_extract(w_block, n, n);
    const double scale = std::max(1.0, w_block.frob());
    const double res = std::max(frob_dist(wb.a, w11), frob_dist(wb.d, w22)) / scale;
    CheckReport rep = make_report("diag_blocks", res, tol);
    rep.witness["Z"] = tuple_to_json(z);
    rep.witness["expr"] = serialize(w);
    return rep;
}

// ---------------------------------------------------------------------------
// The two off-diagonal compatibility conditions
// ---------------------------------------------------------------------------

struct DiagConditions {
    bool con1 = false;  // Z1 Z1* = Z2 Z2*  and  Z1* Z1 = Z2* Z2
    bool con2 = false;  // Z1 Z2* = -Z2 Z1*  and  Z1* Z2 = -Z2* Z1
    bool both = false;
    double res_con1 = 0.0;
    double res_con2 = 0.0;
    double dist_z2_plus_iz1 = 0.0;   // ||Z2 + iZ1||; 0 when Z2 = -iZ1
    double dist_z2_minus_iz1 = 0.0;  // ||Z2 - iZ1||; 0 when Z2 = +iZ1
};

inline DiagConditions diag_conditions_demo(const MatTuple& z1, const MatTuple& z2,
                                           double tol = 1e-10) {
    if (z1.arity() != z2.arity() || z1.rows() != z2.rows() || z1.cols() != z2.cols())
        raise(ErrKind::ShapeMismatch, "diag_conditions_demo: shapes differ");

    DiagConditions out;
    double scale = 1.0;
    for (int k = 0; k < z1.arity(); ++k) {
        const CMat &p = z1[k], &q = z2[k];
        scale = std::max({scale, p.frob() * p.frob(), q.frob() * q.frob()});
        out.res_con1 = std::max({out.res_con1,
                                 frob_dist(p * p.adjoint(), q * q.adjoint()),
                                 frob_dist(p.adjoint() * p, q.adjoint() * q)});
        out.res_con2 = std::max({out.res_con2,
                                 (p * q.adjoint() + q * p.adjoint()).frob(),
                                 (p.adjoint() * q + q.adjoint() * p).frob()});
        out.dist_z2_plus_iz1 = std::max(out.dist_z2_plus_iz1, (q + Complex(0.0, 1.0) * p).frob());
        out.dist_z2_minus_iz1 = std::max(out.dist_z2_minus_iz1, (q - Complex(0.0, 1.0) * p).frob());
    }
    out.con1 = out.res_con1 <= tol * scale;
    out.con2 = out.res_con2 <= tol * scale;
    out.both = out.con1 && out.con2;
    return out;
}

}  // namespace nccalc
