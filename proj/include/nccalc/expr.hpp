#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nccalc/cmat.hpp"
#include "nccalc/errors.hpp"
#include "nccalc/spectral.hpp"
#include "nccalc/tuple.hpp"

namespace nccalc {

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class NodeKind { Var, Const, Add, Sub, Mul, ScalarMul, Adjoint, SqrtPos };

struct NcExpr;
using ExprPtr = std::shared_ptr<const NcExpr>;

struct NcExpr {
    NodeKind kind;
    int var_index = 0;       // Var
    Complex value = 0.0;     // Const / ScalarMul coefficient
    ExprPtr left, right;     // children (unary nodes use left)
};

inline ExprPtr var(int index) {
    return std::make_shared<NcExpr>(NcExpr{NodeKind::Var, index, 0.0, nullptr, nullptr});
}
inline ExprPtr cnst(Complex c) {
    return std::make_shared<NcExpr>(NcExpr{NodeKind::Const, 0, c, nullptr, nullptr});
}
inline ExprPtr add(ExprPtr l, ExprPtr r) {
    return std::make_shared<NcExpr>(NcExpr{NodeKind::Add, 0, 0.0, std::move(l), std::move(r)});
}
inline ExprPtr sub(ExprPtr l, ExprPtr r) {
    return std::make_shared<NcExpr>(NcExpr{NodeKind::Sub, 0, 0.0, std::move(l), std::move(r)});
}
inline ExprPtr mul(ExprPtr l, ExprPtr r) {
    return std::make_shared<NcExpr>(NcExpr{NodeKind::Mul, 0, 0.0, std::move(l), std::move(r)});
}
inline ExprPtr smul(Complex c, ExprPtr e) {
    return std::make_shared<NcExpr>(NcExpr{NodeKind::ScalarMul, 0, c, std::move(e), nullptr});
}
inline ExprPtr adj(ExprPtr e) {
    return std::make_shared<NcExpr>(NcExpr{NodeKind::Adjoint, 0, 0.0, std::move(e), nullptr});
}
inline ExprPtr sqrtpos(ExprPtr e) {
    return std::make_shared<NcExpr>(NcExpr{NodeKind::SqrtPos, 0, 0.0, std::move(e), nullptr});
}

inline bool struct_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Var: return a->var_index == b->var_index;
        case NodeKind::Const: return a->value == b->value;
        case NodeKind::ScalarMul:
            return a->value == b->value && struct_equal(a->left, b->left);
        case NodeKind::Adjoint:
        case NodeKind::SqrtPos: return struct_equal(a->left, b->left);
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
            return struct_equal(a->left, b->left) && struct_equal(a->right, b->right);
    }
    return false;
}

template <typename Fn>
inline void walk(const ExprPtr& e, Fn&& visit) {
    if (!e) return;
    visit(e);
    walk(e->left, visit);
    walk(e->right, visit);
}

inline bool contains_involution(const ExprPtr& e) {
    bool found = false;
    walk(e, [&](const ExprPtr& n) {
        if (n->kind == NodeKind::Adjoint || n->kind == NodeKind::SqrtPos) found = true;
    });
    return found;
}

inline int max_var_index(const ExprPtr& e) {
    int mx = -1;
    walk(e, [&](const ExprPtr& n) {
        if (n->kind == NodeKind::Var) mx = std::max(mx, n->var_index);
    });
    return mx;
}

// ---------------------------------------------------------------------------
// Variable kinds
// ---------------------------------------------------------------------------

struct VarKind {
    enum class Tag { ComplexVars, RealPairs };
    Tag tag = Tag::ComplexVars;
    int d = 1;

    static VarKind complex_vars(int d) { return {Tag::ComplexVars, d}; }
    static VarKind real_pairs(int d) { return {Tag::RealPairs, d}; }

    bool real() const { return tag == Tag::RealPairs; }
    int var_count() const { return real() ? 2 * d : d; }

    friend bool operator==(const VarKind& a, const VarKind& b) {
        return a.tag == b.tag && a.d == b.d;
    }
};

// ---------------------------------------------------------------------------
// Domain guards
// ---------------------------------------------------------------------------

struct DomainGuard {
    enum class Kind { All, SpectrumIn, NormLt };
    Kind kind = Kind::All;
    double lo = 0.0, hi = 0.0;         // SpectrumIn
    double bound = 0.0;                // NormLt
    std::vector<ExprPtr> applies_to;   // SpectrumIn targets; empty means the variables

    static DomainGuard all() { return {}; }
    static DomainGuard spectrum_in(double lo, double hi, std::vector<ExprPtr> targets = {}) {
        DomainGuard g;
        g.kind = Kind::SpectrumIn;
        g.lo = lo;
        g.hi = hi;
        g.applies_to = std::move(targets);
        return g;
    }
    static DomainGuard norm_lt(double bound) {
        DomainGuard g;
        g.kind = Kind::NormLt;
        g.bound = bound;
        return g;
    }
};

struct GuardVerdict {
    bool ok = true;
    double min_eig = std::numeric_limits<double>::quiet_NaN();
    std::string detail;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline CMat eval_node(const NcExpr& e, const MatTuple& point) {
    switch (e.kind) {
        case NodeKind::Var: return point[e.var_index];
        case NodeKind::Const: return CMat::scalar(point.dim(), e.value);
        case NodeKind::Add: return eval_node(*e.left, point) + eval_node(*e.right, point);
        case NodeKind::Sub: return eval_node(*e.left, point) - eval_node(*e.right, point);
        case NodeKind::Mul: return eval_node(*e.left, point) * eval_node(*e.right, point);
        case NodeKind::ScalarMul: return e.value * eval_node(*e.left, point);
        case NodeKind::Adjoint: return eval_node(*e.left, point).adjoint();
        case NodeKind::SqrtPos: return sqrt_psd(eval_node(*e.left, point));
    }
    raise(ErrKind::ShapeMismatch, "eval: unknown node");
}

}  // namespace detail

inline GuardVerdict check_guard(const DomainGuard& g, const MatTuple& point) {
    GuardVerdict v;
    switch (g.kind) {
        case DomainGuard::Kind::All: return v;
        case DomainGuard::Kind::NormLt: {
            for (const auto& m : point.mats) {
                const double nm = op_norm(m);
                if (!(nm < g.bound)) {
                    v.ok = false;
                    v.detail = "component norm " + std::to_string(nm) + " not below bound";
                    return v;
                }
            }
            return v;
        }
        case DomainGuard::Kind::SpectrumIn: {
            std::vector<CMat> targets;
            if (g.applies_to.empty()) {
                targets = point.mats;
            } else {
                for (const auto& e : g.applies_to) targets.push_back(detail::eval_node(*e, point));
            }
            double mn = std::numeric_limits<double>::infinity();
            for (const auto& t : targets) {
                if (!t.is_hermitian(1e-10)) {
                    v.ok = false;
                    v.detail = "spectrum guard target is not Hermitian";
                    return v;
                }
                const EigResult eig = herm_eig(t, 1e-10);
                mn = std::min(mn, eig.eigenvalues.front());
                if (eig.eigenvalues.front() < g.lo || eig.eigenvalues.back() > g.hi) {
                    v.ok = false;
                    v.min_eig = mn;
                    v.detail = "spectrum leaves the guard interval";
                    return v;
                }
            }
            v.min_eig = mn;
            return v;
        }
    }
    return v;
}

/// One function value type for everything: expression-backed functions built
/// by the parser, and derived evaluators (real/imaginary parts, rebuilt
/// complex functions) carrying a plain callable.
struct NcFunction {
    VarKind vars;
    DomainGuard guard;
    ExprPtr expr;                                // null for derived evaluators
    std::function<CMat(const MatTuple&)> fn;     // used when expr is null
    std::string label;                           // report name for derived evaluators

    bool expression_backed() const { return expr != nullptr; }
    bool polynomial() const { return expression_backed() && !contains_involution(expr); }

    void validate_point(const MatTuple& point) const {
        if (point.arity() != vars.var_count())
            raise(ErrKind::KindMismatch, "point arity does not match variable kind");
        const int n = point.dim();
        for (const auto& m : point.mats) {
            m.check_finite();
            if (m.n() != n) raise(ErrKind::DimensionMismatch, "point components differ in size");
            if (vars.real() && !m.is_hermitian(1e-10))
                raise(ErrKind::KindMismatch, "real-variable point component is not Hermitian");
        }
    }

    CMat operator()(const MatTuple& point) const {
        validate_point(point);
        const GuardVerdict gv = check_guard(guard, point);
        if (!gv.ok) raise(ErrKind::DomainViolation, gv.detail);
        CMat out = expr ? detail::eval_node(*expr, point) : fn(point);
        if (out.rows() != point.dim() || out.cols() != point.dim())
            raise(ErrKind::ShapeMismatch, "gradedness violated: output size differs from input");
        return out;
    }

    CMat operator()(const HermPoint& point) const { return (*this)(point.tuple()); }
};

inline CMat eval(const NcFunction& f, const MatTuple& point) { return f(point); }
inline CMat eval(const NcFunction& f, const HermPoint& point) { return f(point.tuple()); }

struct DomainReport {
    bool ok = true;
    GuardVerdict guard;
    // one entry per SqrtPos node, in traversal order
    struct SqrtEntry {
        bool ok;
        double min_eig;
        std::string detail;
    };
    std::vector<SqrtEntry> sqrt_args;
};

/// Guard verdict plus PSD diagnostics for every SqrtPos argument at `point`.
inline DomainReport check_domain(const NcFunction& f, const MatTuple& point) {
    DomainReport rep;
    rep.guard = check_guard(f.guard, point);
    rep.ok = rep.guard.ok;
    if (!f.expr) return rep;
    std::vector<ExprPtr> args;
    walk(f.expr, [&](const ExprPtr& n) {
        if (n->kind == NodeKind::SqrtPos) args.push_back(n->left);
    });
    for (const auto& a : args) {
        DomainReport::SqrtEntry e{true, std::numeric_limits<double>::quiet_NaN(), ""};
        try {
            const CMat val = detail::eval_node(*a, point);
            if (!val.is_hermitian(1e-10)) {
                e.ok = false;
                e.detail = "sqrtm argument is not Hermitian";
            } else {
                const EigResult eig = herm_eig(val, 1e-10);
                e.min_eig = eig.eigenvalues.front();
                const double scale = std::max(std::abs(eig.eigenvalues.front()),
                                              std::abs(eig.eigenvalues.back()));
                if (e.min_eig < -1e-10 * scale) {
                    e.ok = false;
                    e.detail = "sqrtm argument has a negative eigenvalue";
                }
            }
        } catch (const NcError& err) {
            e.ok = false;
            e.detail = err.what();
        }
        rep.ok = rep.ok && e.ok;
        rep.sqrt_args.push_back(std::move(e));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

enum class Tok { End, Plus, Minus, Star, Quote, LParen, RParen, Sqrtm, Var, Number };

struct Token {
    Tok kind = Tok::End;
    std::size_t pos = 0;   // byte offset of the first character
    bool glued = false;    // no whitespace between this token and the previous one
    char letter = 0;       // Var
    int index = 0;         // Var
    double number = 0.0;   // Number
    bool imag = false;     // Number carries a trailing 'i'
    std::string text;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { tokens_ = lex(); }
    const std::vector<Token>& tokens() const { return tokens_; }

private:
    std::vector<Token> lex() {
        std::vector<Token> out;
        std::size_t i = 0;
        std::size_t prev_end = 0;
        bool first = true;
        while (i < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[i]))) {
                ++i;
                continue;
            }
            Token t;
            t.pos = i;
            t.glued = !first && (i == prev_end);
            const char c = src_[i];
            if (c == '+') { t.kind = Tok::Plus; ++i; }
            else if (c == '-') { t.kind = Tok::Minus; ++i; }
            else if (c == '*') { t.kind = Tok::Star; ++i; }
            else if (c == '\'') { t.kind = Tok::Quote; ++i; }
            else if (c == '^') {
                if (i + 1 >= src_.size() || src_[i + 1] != '*')
                    raise(ErrKind::SyntaxError, "expected '*' after '^'", i);
                t.kind = Tok::Quote;
                i += 2;
            }
            else if (c == '(') { t.kind = Tok::LParen; ++i; }
            else if (c == ')') { t.kind = Tok::RParen; ++i; }
            else if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < src_.size() && std::isalpha(static_cast<unsigned char>(src_[j]))) ++j;
                const std::string_view word = src_.substr(i, j - i);
                if (word == "sqrtm") {
                    t.kind = Tok::Sqrtm;
                    i = j;
                } else if (word.size() == 1 && (c == 'X' || c == 'A' || c == 'B')) {
                    std::size_t k = j;
                    while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
                    if (k == j)
                        raise(ErrKind::SyntaxError, "variable needs a numeric index", i);
                    t.kind = Tok::Var;
                    t.letter = c;
                    t.index = 0;
                    for (std::size_t m = j; m < k; ++m) t.index = t.index * 10 + (src_[m] - '0');
                    t.text = std::string(src_.substr(i, k - i));
                    i = k;
                } else {
                    std::size_t k = j;
                    while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
                    raise(ErrKind::UnknownVariable,
                          "unknown name '" + std::string(src_.substr(i, k - i)) + "'", i);
                }
            }
            else if (std::isdigit(static_cast<unsigned char>(c)) ||
                     (c == '.' && i + 1 < src_.size() &&
                      std::isdigit(static_cast<unsigned char>(src_[i + 1])))) {
                double val = 0.0;
                const char* begin = src_.data() + i;
                const char* end = src_.data() + src_.size();
                auto res = std::from_chars(begin, end, val);
                if (res.ec != std::errc{})
                    raise(ErrKind::SyntaxError, "malformed number", i);
                i = static_cast<std::size_t>(res.ptr - src_.data());
                t.kind = Tok::Number;
                t.number = val;
                if (i < src_.size() && src_[i] == 'i') {
                    t.imag = true;
                    ++i;
                }
            }
            else {
                raise(ErrKind::SyntaxError, std::string("unexpected character '") + c + "'", i);
            }
            prev_end = i;
            first = false;
            out.push_back(std::move(t));
        }
        Token end;
        end.kind = Tok::End;
        end.pos = src_.size();
        out.push_back(end);
        return out;
    }

    std::string_view src_;
    std::vector<Token> tokens_;
};

class Parser {
public:
    Parser(std::string_view src, VarKind vars) : lexer_(src), vars_(vars) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        if (cur().kind != Tok::End)
            raise(ErrKind::SyntaxError, "unexpected trailing input", cur().pos);
        return e;
    }

private:
    const Token& cur() const { return lexer_.tokens()[pos_]; }
    const Token& peek(std::size_t k = 1) const {
        const auto& ts = lexer_.tokens();
        return ts[std::min(pos_ + k, ts.size() - 1)];
    }
    void advance() { ++pos_; }

    static bool starts_atom(Tok k) {
        return k == Tok::Var || k == Tok::Number || k == Tok::LParen || k == Tok::Sqrtm;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
            const bool plus = cur().kind == Tok::Plus;
            advance();
            ExprPtr rhs = parse_term();
            lhs = plus ? add(std::move(lhs), std::move(rhs)) : sub(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor(true);
        for (;;) {
            if (cur().kind == Tok::Star) {
                advance();
                lhs = make_mul(std::move(lhs), parse_factor(true));
            } else if (starts_atom(cur().kind)) {
                // juxtaposition; a leading '-' is never part of a juxtaposed factor
                lhs = make_mul(std::move(lhs), parse_factor(false));
            } else {
                break;
            }
        }
        return lhs;
    }

    // A '-' applied to a constant folds into the constant, so serialized
    // negative literals round-trip structurally.
    ExprPtr parse_factor(bool allow_minus) {
        bool neg = false;
        if (allow_minus && cur().kind == Tok::Minus) {
            neg = true;
            advance();
        }
        ExprPtr e = parse_atom();
        if (cur().kind == Tok::Quote) {
            advance();
            e = adj(std::move(e));
        }
        if (neg) {
            if (e->kind == NodeKind::Const) return cnst(-e->value);
            return smul(Complex(-1.0, 0.0), std::move(e));
        }
        return e;
    }

    ExprPtr parse_atom() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::LParen: {
                advance();
                ExprPtr e = parse_expr();
                expect(Tok::RParen, "expected ')'");
                return e;
            }
            case Tok::Sqrtm: {
                advance();
                expect(Tok::LParen, "expected '(' after sqrtm");
                ExprPtr e = parse_expr();
                expect(Tok::RParen, "expected ')'");
                return sqrtpos(std::move(e));
            }
            case Tok::Var: {
                const int slot = var_slot(t);
                advance();
                return var(slot);
            }
            case Tok::Number: {
                // a+bi / a-bi literals require the sign and both parts to be
                // written without spaces; "a + bi" is an addition instead
                Complex c = t.imag ? Complex(0.0, t.number) : Complex(t.number, 0.0);
                advance();
                if (!t.imag && (cur().kind == Tok::Plus || cur().kind == Tok::Minus) &&
                    cur().glued && peek().kind == Tok::Number && peek().imag && peek().glued) {
                    const double sign = cur().kind == Tok::Plus ? 1.0 : -1.0;
                    advance();
                    c = Complex(c.real(), sign * cur().number);
                    advance();
                }
                return cnst(c);
            }
            default:
                raise(ErrKind::SyntaxError, "expected a variable, number, or '('", t.pos);
        }
    }

    static ExprPtr make_mul(ExprPtr l, ExprPtr r) {
        if (l->kind == NodeKind::Const) return smul(l->value, std::move(r));
        return mul(std::move(l), std::move(r));
    }

    int var_slot(const Token& t) const {
        const bool complex_kind = vars_.tag == VarKind::Tag::ComplexVars;
        if (complex_kind && t.letter != 'X')
            raise(ErrKind::UnknownVariable,
                  "variable '" + t.text + "' is not available with X-variables", t.pos);
        if (!complex_kind && t.letter == 'X')
            raise(ErrKind::UnknownVariable,
                  "variable '" + t.text + "' is not available with A/B-variables", t.pos);
        if (t.index < 1 || t.index > vars_.d)
            raise(ErrKind::ArityError, "variable index out of range in '" + t.text + "'", t.pos);
        if (complex_kind || t.letter == 'A') return t.index - 1;
        return vars_.d + t.index - 1;  // B-block
    }

    void expect(Tok k, const char* msg) {
        if (cur().kind != k) raise(ErrKind::SyntaxError, msg, cur().pos);
        advance();
    }

    Lexer lexer_;
    VarKind vars_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline ExprPtr parse(std::string_view text, VarKind vars) {
    return detail::Parser(text, vars).parse();
}

inline NcFunction parse_function(std::string_view text, VarKind vars,
                                 DomainGuard guard = DomainGuard::all()) {
    NcFunction f;
    f.vars = vars;
    f.guard = std::move(guard);
    f.expr = parse(text, vars);
    f.label = std::string(text);
    return f;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// Canonical literal: pure parts print bare; two-part literals print glued
/// and parenthesized so they re-lex as one constant.
inline std::string const_to_string(Complex c) {
    if (c.imag() == 0.0) return format_double(c.real());
    if (c.real() == 0.0) return format_double(c.imag()) + "i";
    if (c.real() < 0.0) {
        // -(a -+ bi) so the leading sign folds back into the constant
        return "-(" + format_double(-c.real()) + (c.imag() < 0.0 ? "+" : "-") +
               format_double(std::abs(c.imag())) + "i)";
    }
    return "(" + format_double(c.real()) + (c.imag() < 0.0 ? "-" : "+") +
           format_double(std::abs(c.imag())) + "i)";
}

inline std::string var_name(int slot, VarKind vars) {
    if (!vars.real()) return "X" + std::to_string(slot + 1);
    if (slot < vars.d) return "A" + std::to_string(slot + 1);
    return "B" + std::to_string(slot - vars.d + 1);
}

// precedence: Add/Sub 1, Mul/ScalarMul 2, unary minus 3, Adjoint 4, atoms 5.
// A constant that prints with a leading '-' re-lexes through the unary-minus
// rule, so it ranks as 3 rather than as an atom.
inline int precedence(const NcExpr& e) {
    switch (e.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::ScalarMul: return 2;
        case NodeKind::Adjoint: return 4;
        case NodeKind::Const: return const_to_string(e.value).front() == '-' ? 3 : 5;
        default: return 5;
    }
}

inline std::string serialize_node(const NcExpr& e, VarKind vars, int min_prec) {
    std::string s;
    switch (e.kind) {
        case NodeKind::Var: s = var_name(e.var_index, vars); break;
        case NodeKind::Const: s = const_to_string(e.value); break;
        case NodeKind::Add:
            s = serialize_node(*e.left, vars, 1) + " + " + serialize_node(*e.right, vars, 2);
            break;
        case NodeKind::Sub:
            s = serialize_node(*e.left, vars, 1) + " - " + serialize_node(*e.right, vars, 2);
            break;
        case NodeKind::Mul:
            s = serialize_node(*e.left, vars, 2) + " * " + serialize_node(*e.right, vars, 3);
            break;
        case NodeKind::ScalarMul:
            s = const_to_string(e.value) + " * " + serialize_node(*e.left, vars, 3);
            break;
        case NodeKind::Adjoint: s = serialize_node(*e.left, vars, 5) + "'"; break;
        case NodeKind::SqrtPos: s = "sqrtm(" + serialize_node(*e.left, vars, 1) + ")"; break;
    }
    if (precedence(e) < min_prec) return "(" + s + ")";
    return s;
}

}  // namespace detail

/// Canonical text form; parse(serialize(e)) is structurally identical to e
/// for parser-produced trees.
inline std::string serialize(const ExprPtr& e, VarKind vars) {
    return detail::serialize_node(*e, vars, 0);
}

inline std::string serialize(const NcFunction& f) {
    if (f.expr) return serialize(f.expr, f.vars);
    return f.label.empty() ? std::string("<derived>") : f.label;
}

}  // namespace nccalc
