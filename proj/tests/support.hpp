#pragma once

#include <string>
#include <vector>

#include "nccalc/nccalc.hpp"

namespace ncs {

using namespace nccalc;

inline CMat sigma_x() { return CMat(2, 2, {0, 1, 1, 0}); }
inline CMat sigma_y() { return CMat(2, 2, {0, Complex(0, -1), Complex(0, 1), 0}); }
inline CMat sigma_z() { return CMat(2, 2, {1, 0, 0, -1}); }

/// Random nc polynomial with monomials of degree <= max_degree: a sum of
/// scalar multiples of variable products.
inline ExprPtr random_poly_expr(int var_count, int max_degree, RandomStream& st,
                                bool real_coeffs = false) {
    const int terms = 1 + static_cast<int>(st.uniform() * 4);
    ExprPtr acc;
    for (int t = 0; t < terms; ++t) {
        const int deg = 1 + static_cast<int>(st.uniform() * max_degree);
        ExprPtr mono;
        for (int k = 0; k < deg; ++k) {
            ExprPtr v = var(static_cast<int>(st.uniform() * var_count));
            mono = mono ? mul(std::move(mono), std::move(v)) : std::move(v);
        }
        const Complex c = real_coeffs ? Complex(st.normal(), 0.0) : st.complex_normal();
        ExprPtr term = smul(c, std::move(mono));
        acc = acc ? add(std::move(acc), std::move(term)) : std::move(term);
    }
    return acc;
}

inline NcFunction random_poly_function(VarKind kind, int max_degree, RandomStream& st,
                                       bool real_coeffs = false) {
    NcFunction f;
    f.vars = kind;
    f.expr = random_poly_expr(kind.var_count(), max_degree, st, real_coeffs);
    f.label = serialize(f.expr, kind);
    return f;
}

/// Random AST in the parser's canonical form: Mul never has a Const left
/// child (the parser rewrites those to ScalarMul).
inline ExprPtr random_canonical_ast(int depth, int var_count, RandomStream& st) {
    const double roll = st.uniform();
    if (depth <= 0 || roll < 0.25) {
        if (st.uniform() < 0.6) return var(static_cast<int>(st.uniform() * var_count));
        const double re = std::round(st.normal() * 8.0) / 4.0;
        const double im = st.uniform() < 0.5 ? 0.0 : std::round(st.normal() * 8.0) / 4.0;
        return cnst(Complex(re, im));
    }
    if (roll < 0.40) return add(random_canonical_ast(depth - 1, var_count, st),
                                random_canonical_ast(depth - 1, var_count, st));
    if (roll < 0.55) return sub(random_canonical_ast(depth - 1, var_count, st),
                                random_canonical_ast(depth - 1, var_count, st));
    if (roll < 0.70) {
        ExprPtr l = random_canonical_ast(depth - 1, var_count, st);
        if (l->kind == NodeKind::Const) l = var(static_cast<int>(st.uniform() * var_count));
        return mul(std::move(l), random_canonical_ast(depth - 1, var_count, st));
    }
    if (roll < 0.82) {
        const double re = std::round(st.normal() * 8.0) / 4.0;
        const double im = st.uniform() < 0.5 ? 0.0 : std::round(st.normal() * 8.0) / 4.0;
        return smul(Complex(re, im), random_canonical_ast(depth - 1, var_count, st));
    }
    if (roll < 0.92) return adj(random_canonical_ast(depth - 1, var_count, st));
    return sqrtpos(random_canonical_ast(depth - 1, var_count, st));
}

/// Random expression that is Hermitian-valued on Hermitian points: built from
/// variables, real constants, real scalings, sums, symmetrized products,
/// squares, and sqrtm of squares.
inline ExprPtr random_herm_form(int depth, int var_count, RandomStream& st) {
    if (depth <= 0 || st.uniform() < 0.3) {
        if (st.uniform() < 0.7) return var(static_cast<int>(st.uniform() * var_count));
        return cnst(Complex(std::round(st.normal() * 4.0) / 2.0, 0.0));
    }
    const double roll = st.uniform();
    if (roll < 0.25) return add(random_herm_form(depth - 1, var_count, st),
                                random_herm_form(depth - 1, var_count, st));
    if (roll < 0.45) return sub(random_herm_form(depth - 1, var_count, st),
                                random_herm_form(depth - 1, var_count, st));
    if (roll < 0.60) {
        return smul(Complex(std::round(st.normal() * 4.0) / 2.0, 0.0),
                    random_herm_form(depth - 1, var_count, st));
    }
    if (roll < 0.80) {  // symmetrized product
        ExprPtr a = random_herm_form(depth - 1, var_count, st);
        ExprPtr b = random_herm_form(depth - 1, var_count, st);
        return add(mul(a, b), mul(b, a));
    }
    if (roll < 0.92) {  // square
        ExprPtr a = random_herm_form(depth - 1, var_count, st);
        return mul(a, a);
    }
    ExprPtr a = random_herm_form(depth - 1, var_count, st);
    return sqrtpos(mul(a, a));
}

}  // namespace ncs
