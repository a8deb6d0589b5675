#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include "nccalc/cmat.hpp"
#include "nccalc/errors.hpp"
#include "nccalc/tuple.hpp"

namespace nccalc {

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    CMat vectors;                     // unitary, columns are eigenvectors
};

namespace detail {

/// Frobenius norm of the strict off-diagonal part.
inline double off_diagonal_norm(const CMat& a) {
    double s = 0.0;
    const int n = a.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

/// One complex Jacobi rotation annihilating a(p, q). The 2x2 rotation is a
/// real Givens rotation composed with a phase that makes a(p, q) real.
inline void jacobi_rotate(CMat& a, CMat& v, int p, int q) {
    const Complex apq = a(p, q);
    const double bmag = std::abs(apq);
    if (bmag == 0.0) return;

    const Complex u = apq / bmag;  // phase of the pivot
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * bmag);
    const double t = (tau == 0.0) ? 1.0 : -std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double cs = 1.0 / std::sqrt(1.0 + t * t);
    const double sn = t * cs;

    // G restricted to the (p, q) plane:
    //   [ cs        -sn      ]
    //   [ conj(u)sn  conj(u)cs ]
    const Complex gpp = cs, gpq = -sn;
    const Complex gqp = std::conj(u) * sn, gqq = std::conj(u) * cs;

    const int n = a.rows();
    for (int k = 0; k < n; ++k) {  // A <- A G
        const Complex akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * gpp + akq * gqp;
        a(k, q) = akp * gpq + akq * gqq;
    }
    for (int k = 0; k < n; ++k) {  // A <- G* A
        const Complex apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
        a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = Complex(a(p, p).real(), 0.0);
    a(q, q) = Complex(a(q, q).real(), 0.0);

    for (int k = 0; k < n; ++k) {  // V <- V G
        const Complex vkp = v(k, p), vkq = v(k, q);
        v(k, p) = vkp * gpp + vkq * gqp;
        v(k, q) = vkp * gpq + vkq * gqq;
    }
}

}  // namespace detail

/// Spectral decomposition of a Hermitian matrix by cyclic complex Jacobi
/// sweeps. Stops when the off-diagonal Frobenius norm drops below
/// 1e-13 * max(1, ||H||_F); gives up after 100 sweeps.
inline EigResult herm_eig(const CMat& h, double herm_tol = 1e-12) {
    const int n = h.n();
    if (!h.is_hermitian(herm_tol)) raise(ErrKind::NotHermitian, "herm_eig: input not Hermitian");

    CMat a = h;
    CMat v = CMat::identity(n);
    const double stop = 1e-13 * std::max(1.0, h.frob());
    constexpr int kMaxSweeps = 100;

    bool converged = (n == 1);
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        if (detail::off_diagonal_norm(a) <= stop) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
        if (detail::off_diagonal_norm(a) <= stop) converged = true;
    }
    if (!converged) raise(ErrKind::NoConvergence, "herm_eig: Jacobi sweeps exhausted");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigResult r;
    r.eigenvalues.resize(n);
    r.vectors = CMat(n, n);
    for (int j = 0; j < n; ++j) {
        r.eigenvalues[j] = a(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

/// U diag(g(lambda)) U* for a Hermitian input, reusing one decomposition.
template <typename Fn>
inline CMat herm_map(const EigResult& eig, Fn&& g) {
    const int n = eig.vectors.rows();
    CMat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = g(eig.eigenvalues[i]);
    return eig.vectors * d * eig.vectors.adjoint();
}

/// PSD square root. Eigenvalue dust down to -1e-10 * ||P|| is clamped to 0;
/// anything below that is a genuine violation.
inline CMat sqrt_psd(const CMat& p, double herm_tol = 1e-12) {
    const EigResult eig = herm_eig(p, herm_tol);
    const double scale =
        eig.eigenvalues.empty()
            ? 0.0
            : std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    const double clamp = -1e-10 * scale;
    for (double lam : eig.eigenvalues)
        if (lam < clamp) raise(ErrKind::NotPSD, "sqrt_psd: eigenvalue below clamp threshold");
    return herm_map(eig, [](double lam) { return std::sqrt(std::max(lam, 0.0)); });
}

/// Largest singular value via the spectrum of Z*Z.
inline double op_norm(const CMat& z) {
    if (z.rows() == 0 || z.cols() == 0) return 0.0;
    const CMat g = z.adjoint() * z;
    const EigResult eig = herm_eig(hermitize(g), 1e-9);
    return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

/// max_k ||Z_k||: the tuple norm.
inline double pair_norm(const MatTuple& z) {
    double m = 0.0;
    for (const auto& c : z.mats) m = std::max(m, op_norm(c));
    return m;
}

struct PolarResult {
    CMat unitary;
    CMat positive;
};

/// S = U P with P = (S*S)^{1/2}. Requires sigma_min(S) > 1e-10 * sigma_max(S).
inline PolarResult polar(const CMat& s) {
    const int n = s.n();
    const CMat g = hermitize(s.adjoint() * s);
    const EigResult eig = herm_eig(g, 1e-9);
    const double smax = std::sqrt(std::max(0.0, eig.eigenvalues.back()));
    const double smin = std::sqrt(std::max(0.0, eig.eigenvalues.front()));
    if (!(smin > 1e-10 * smax) || smax == 0.0)
        raise(ErrKind::Singular, "polar: smallest singular value too small");

    PolarResult r;
    r.positive = herm_map(eig, [](double lam) { return std::sqrt(std::max(lam, 0.0)); });
    const CMat p_inv = herm_map(eig, [](double lam) { return 1.0 / std::sqrt(lam); });
    r.unitary = s * p_inv;
    (void)n;
    return r;
}

struct DefectRotation {
    CMat d_t;       // (I - T*T)^{1/2}
    CMat d_t_star;  // (I - TT*)^{1/2}
    CMat u_t;       // [[T, D_{T*}], [D_T, -T*]]
    CMat t;         // the (possibly normalized) contraction actually used
};

/// Defect matrices and the rotation unitary of a contraction. With
/// `normalize`, T is first rescaled to operator norm 1.
inline DefectRotation defect_rotation(const CMat& t0, bool normalize = false) {
    CMat t = t0;
    const double nrm = op_norm(t);
    if (normalize) {
        if (nrm == 0.0) raise(ErrKind::ZeroMatrix, "defect_rotation: cannot normalize 0");
        t *= Complex(1.0 / nrm, 0.0);
    } else if (nrm > 1.0 + 1e-12) {
        raise(ErrKind::NotContraction, "defect_rotation: ||T|| exceeds 1");
    }

    DefectRotation r;
    r.t = t;
    const CMat im = CMat::identity(t.cols());
    const CMat in = CMat::identity(t.rows());
    r.d_t = sqrt_psd(hermitize(im - t.adjoint() * t), 1e-9);
    r.d_t_star = sqrt_psd(hermitize(in - t * t.adjoint()), 1e-9);
    r.u_t = block2_assemble(t, r.d_t_star, r.d_t, -t.adjoint());
    return r;
}

struct NormCompare {
    bool lower_ok;  // ||(Z1,Z2)|| <= ||Z1+iZ2||
    bool upper_ok;  // ||Z1+iZ2|| <= 2 ||(Z1,Z2)||
    double ratio;   // ||Z1+iZ2|| / ||(Z1,Z2)||
    double pair;    // ||(Z1,Z2)||
    double combined;
};

/// The two-sided comparison between the pair norm of Hermitian (Z1, Z2) and
/// the norm of Z1 + iZ2, with slack 1e-10.
inline NormCompare norm_compare(const MatTuple& z1, const MatTuple& z2, double herm_tol = 1e-12) {
    z1.require_conformant(z2);
    if (!z1.is_hermitian(herm_tol) || !z2.is_hermitian(herm_tol))
        raise(ErrKind::NotHermitian, "norm_compare: inputs must be Hermitian tuples");

    NormCompare r;
    r.pair = std::max(pair_norm(z1), pair_norm(z2));
    r.combined = pair_norm(combine(z1, z2));
    constexpr double slack = 1e-10;
    r.lower_ok = r.pair <= r.combined + slack;
    r.upper_ok = r.combined <= 2.0 * r.pair + slack;
    r.ratio = (r.pair == 0.0) ? 1.0 : r.combined / r.pair;
    return r;
}

/// Gauss-Jordan inverse with partial pivoting.
inline CMat inverse(const CMat& m) {
    const int n = m.n();
    CMat a = m;
    CMat inv = CMat::identity(n);
    const double scale = std::max(1.0, m.max_abs());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int i = col + 1; i < n; ++i) {
            const double v = std::abs(a(i, col));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= 1e-14 * scale) raise(ErrKind::Singular, "inverse: pivot vanishes");
        if (piv != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(inv(col, j), inv(piv, j));
            }
        }
        const Complex d = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            const Complex f = a(i, col);
            if (f == Complex{}) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

inline double cond_estimate(const CMat& s) { return op_norm(s) * op_norm(inverse(s)); }

inline bool is_unitary(const CMat& u, double tol = 1e-10) {
    if (!u.square()) return false;
    return frob_dist(u.adjoint() * u, CMat::identity(u.n())) <= tol;
}

}  // namespace nccalc
