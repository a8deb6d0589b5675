#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nccalc/cmat.hpp"
#include "nccalc/errors.hpp"
#include "nccalc/expr.hpp"
#include "nccalc/io.hpp"
#include "nccalc/random.hpp"
#include "nccalc/report.hpp"
#include "nccalc/spectral.hpp"
#include "nccalc/tuple.hpp"

namespace nccalc {

struct StepSchedule {
    std::vector<double> steps{1e-2, 1e-3, 1e-4, 1e-5};
    int richardson_order = 2;

    void validate() const {
        if (steps.size() < 2) raise(ErrKind::ShapeMismatch, "schedule needs at least two steps");
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i] <= 0.0) raise(ErrKind::ShapeMismatch, "steps must be positive");
            if (i > 0 && steps[i] >= steps[i - 1])
                raise(ErrKind::ShapeMismatch, "steps must be strictly decreasing");
        }
    }
};

struct DerivativeReport {
    enum class Method { AlgebraicBlock, CentralDiff, Richardson };

    CMat value;
    Method method = Method::AlgebraicBlock;
    double r_used = 1.0;             // AlgebraicBlock
    std::vector<double> steps_used;  // finite differences
    double cross_check_residual = 0.0;
    bool consistent = true;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["method"] = method == Method::AlgebraicBlock ? "algebraic_block"
                      : method == Method::CentralDiff ? "central_diff"
                                                      : "richardson";
        if (method == Method::AlgebraicBlock) j["r"] = r_used;
        if (!steps_used.empty()) j["steps"] = steps_used;
        j["cross_check_residual"] = cross_check_residual;
        j["consistent"] = consistent;
        j["value"] = mat_to_json(value);
        return j;
    }
};

struct DeltaResult {
    CMat value;
    double block_residual = 0.0;  // deviation of the (1,1),(2,2),(2,1) blocks
};

namespace detail {

inline void require_delta_applicable(const NcFunction& f) {
    if (f.vars.real())
        raise(ErrKind::MethodRefused, "difference-differential needs X-variables");
    if (f.expression_backed() && contains_involution(f.expr))
        raise(ErrKind::MethodRefused,
              "algebraic derivative refused for expressions with adjoint or sqrtm");
}

}  // namespace detail

/// Right difference-differential: f evaluated at [[X, rZ], [0, Y]]; the value
/// is the (1,2) block over r. The other three blocks must reproduce f(X),
/// f(Y), 0 — a deviation means f is not an nc function at this point.
inline DeltaResult delta_op(const NcFunction& f, const MatTuple& x, const MatTuple& y,
                            const MatTuple& z, Complex r = 1.0) {
    detail::require_delta_applicable(f);
    if (r == Complex{}) raise(ErrKind::ShapeMismatch, "delta_op: r must be nonzero");
    const int d = f.vars.var_count();
    if (x.arity() != d || y.arity() != d || z.arity() != d)
        raise(ErrKind::ArityMismatch, "delta_op: tuple arity mismatch");
    const int n = x.dim(), m = y.dim();
    if (z.rows() != n || z.cols() != m)
        raise(ErrKind::DimensionMismatch, "delta_op: Z must be n x m");

    std::vector<CMat> block;
    block.reserve(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
        block.push_back(block2_assemble(x[k], r * z[k], CMat::zero(m, n), y[k]));
    const CMat fb = f(MatTuple(std::move(block)));
    const CMat fx = f(x), fy = f(y);

    const Block2 parts = block2_extract(fb, n, n);
    const double scale = std::max(1.0, fb.frob());
    const double res = std::max({frob_dist(parts.a, fx), frob_dist(parts.d, fy), parts.c.frob()});
    if (res > 1e-9 * scale)
        raise(ErrKind::BlockStructureViolation,
              "delta_op: block structure residual " + std::to_string(res));

    DeltaResult out;
    out.value = (Complex(1.0, 0.0) / r) * parts.b;
    out.block_residual = res;
    return out;
}

/// ||delta(aZ + Z') - a delta(Z) - delta(Z')||, for the linearity property.
inline double delta_linearity_residual(const NcFunction& f, const MatTuple& x, const MatTuple& y,
                                       const MatTuple& z1, const MatTuple& z2, Complex alpha,
                                       Complex r = 1.0) {
    const CMat lhs = delta_op(f, x, y, alpha * MatTuple(z1) + z2, r).value;
    const CMat rhs = alpha * delta_op(f, x, y, z1, r).value + delta_op(f, x, y, z2, r).value;
    return frob_dist(lhs, rhs);
}

/// Algebraic G-derivative Df(X)(Z) = delta f(X, X)(Z), evaluated at r = 1 and
/// cross-checked at r = 1/2; the two must agree for nc-regular f.
inline DerivativeReport g_derivative_algebraic(const NcFunction& f, const MatTuple& x,
                                               const MatTuple& z) {
    const DeltaResult d1 = delta_op(f, x, x, z, Complex(1.0, 0.0));
    const DeltaResult d2 = delta_op(f, x, x, z, Complex(0.5, 0.0));
    const double scale = std::max(1.0, d1.value.frob());
    const double res = frob_dist(d1.value, d2.value);
    if (res > 1e-10 * scale)
        raise(ErrKind::InconsistentR,
              "derivative differs between r=1 and r=1/2: " + std::to_string(res));

    DerivativeReport rep;
    rep.value = d1.value;
    rep.method = DerivativeReport::Method::AlgebraicBlock;
    rep.r_used = 1.0;
    rep.cross_check_residual = res;
    rep.consistent = true;
    return rep;
}

/// Central differences over the schedule with one Richardson extrapolation
/// step; t stays real for both variable kinds. Steps whose evaluation leaves
/// the domain are dropped; fewer than two usable steps is an error.
inline DerivativeReport g_derivative_fd(const NcFunction& w, const MatTuple& x, const MatTuple& z,
                                        const StepSchedule& sched = StepSchedule{}) {
    sched.validate();
    x.require_conformant(z);
    if (w.vars.real() && !z.is_hermitian(1e-10))
        raise(ErrKind::KindMismatch, "direction must be Hermitian for A/B-variables");

    std::vector<double> used;
    std::vector<CMat> central;
    for (double h : sched.steps) {
        try {
            const CMat fwd = w(x + Complex(h, 0.0) * MatTuple(z));
            const CMat bwd = w(x + Complex(-h, 0.0) * MatTuple(z));
            central.push_back(Complex(1.0 / (2.0 * h), 0.0) * (fwd - bwd));
            used.push_back(h);
        } catch (const NcError& e) {
            if (e.kind() != ErrKind::DomainViolation && e.kind() != ErrKind::NotPSD) throw;
        }
    }
    if (central.size() < 2)
        raise(ErrKind::DomainViolation, "g_derivative_fd: fewer than two usable steps");

    std::vector<CMat> extrap;
    for (std::size_t i = 0; i + 1 < central.size(); ++i) {
        const double rho = used[i] / used[i + 1];
        const double w2 = rho * rho;
        extrap.push_back(Complex(1.0 / (w2 - 1.0), 0.0) *
                         (Complex(w2, 0.0) * central[i + 1] - central[i]));
    }

    DerivativeReport rep;
    rep.method = extrap.size() >= 1 ? DerivativeReport::Method::Richardson
                                    : DerivativeReport::Method::CentralDiff;
    rep.steps_used = used;
    rep.value = extrap.back();
    rep.cross_check_residual = extrap.size() >= 2
                                   ? frob_dist(extrap[extrap.size() - 1], extrap[extrap.size() - 2])
                                   : frob_dist(extrap.back(), central.back());
    rep.consistent = rep.cross_check_residual <= 1e-5 * std::max(1.0, rep.value.frob());
    return rep;
}

/// Directional-derivative operator with the route picked automatically:
/// algebraic for involution-free X-variable expressions, finite differences
/// otherwise.
inline CMat g_derivative(const NcFunction& w, const MatTuple& x, const MatTuple& z,
                         const StepSchedule& sched = StepSchedule{}) {
    if (!w.vars.real() && w.polynomial()) return g_derivative_algebraic(w, x, z).value;
    return g_derivative_fd(w, x, z, sched).value;
}

struct FDiffOptions {
    int n_dirs = 20;
    std::vector<double> magnitudes{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    double final_tol = 1e-4;
    double monotone_factor = 2.0;
    StepSchedule sched{};
};

/// First-order remainder test: per magnitude, the median over random
/// directions of ||w(X+Z) - w(X) - Dw(X)(Z)|| / ||Z||. Passes when the
/// medians are nonincreasing (up to a factor) and the last one is small.
inline CheckReport f_diff_check(const NcFunction& w, const MatTuple& x, RandomStream stream,
                                const FDiffOptions& opt = FDiffOptions{}) {
    const int n = x.dim();
    const int arity = x.arity();
    const CMat wx = w(x);

    std::vector<MatTuple> dirs;
    std::vector<CMat> derivs;
    for (int j = 0; j < opt.n_dirs; ++j) {
        MatTuple dir = w.vars.real() ? random_herm_tuple(arity, n, stream)
                                     : random_gaussian_tuple(arity, n, n, stream);
        const double nrm = pair_norm(dir);
        if (nrm == 0.0) continue;
        dir *= Complex(1.0 / nrm, 0.0);
        try {
            derivs.push_back(g_derivative(w, x, dir, opt.sched));
        } catch (const NcError&) {
            throw NcError(ErrKind::DerivativeUnavailable,
                          "f_diff_check: derivative failed in a sampled direction");
        }
        dirs.push_back(std::move(dir));
    }
    if (dirs.empty()) raise(ErrKind::DerivativeUnavailable, "f_diff_check: no usable directions");

    std::vector<double> medians;
    for (double mag : opt.magnitudes) {
        std::vector<double> ratios;
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            try {
                const CMat wxz = w(x + Complex(mag, 0.0) * MatTuple(dirs[j]));
                const CMat rem = wxz - wx - Complex(mag, 0.0) * derivs[j];
                ratios.push_back(rem.frob() / mag);
            } catch (const NcError& e) {
                if (e.kind() != ErrKind::DomainViolation && e.kind() != ErrKind::NotPSD) throw;
            }
        }
        if (ratios.empty()) continue;
        std::sort(ratios.begin(), ratios.end());
        medians.push_back(ratios[ratios.size() / 2]);
    }

    bool monotone = medians.size() >= 2;
    for (std::size_t i = 0; i + 1 < medians.size(); ++i)
        if (medians[i + 1] > opt.monotone_factor * medians[i]) monotone = false;

    CheckReport rep;
    rep.check = "f_diff";
    rep.residual = medians.empty() ? std::numeric_limits<double>::infinity() : medians.back();
    rep.tolerance = opt.final_tol;
    rep.verdict = (monotone && rep.residual <= opt.final_tol) ? Verdict::Pass : Verdict::Fail;
    rep.seed = stream.master_seed();
    rep.witness["X"] = tuple_to_json(x);
    rep.witness["expr"] = serialize(w);
    rep.witness["medians"] = medians;
    if (!monotone) rep.notes = "remainder medians fail to decay monotonically";
    return rep;
}

/// Off-diagonal direction identity: the derivative of w at X (+) X in the
/// direction [[0, Z], [Z, 0]] equals [[0, Dw(X)(Z)], [Dw(X)(Z), 0]].
inline CheckReport block_derivative_check(const NcFunction& w, const MatTuple& x, const MatTuple& z,
                                          const StepSchedule& sched = StepSchedule{},
                                          double tol = 1e-6) {
    const int n = x.dim();
    if (!x.is_hermitian(1e-10) || !z.is_hermitian(1e-10))
        raise(ErrKind::NotHermitian, "block_derivative_check: inputs must be Hermitian");

    const CMat d_small = g_derivative_fd(w, x, z, sched).value;

    const MatTuple xx = direct_sum(x, x);
    std::vector<CMat> off;
    off.reserve(z.mats.size());
    for (const auto& zk : z.mats)
        off.push_back(block2_assemble(CMat::zero(n), zk, zk, CMat::zero(n)));
    const CMat d_big = g_derivative_fd(w, xx, MatTuple(std::move(off)), sched).value;

    const CMat expected = block2_assemble(CMat::zero(n), d_small, d_small, CMat::zero(n));
    const double scale = std::max(1.0, expected.frob());
    const double res = frob_dist(d_big, expected) / scale;

    CheckReport rep = make_report("block_derivative", res, tol);
    rep.witness["X"] = tuple_to_json(x);
    rep.witness["Z"] = tuple_to_json(z);
    rep.witness["expr"] = serialize(w);
    rep.notes = "residual relative to max(1, ||rhs||)";
    return rep;
}

}  // namespace nccalc
