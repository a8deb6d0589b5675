#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <ostream>
#include <tuple>
#include <utility>
#include <vector>

#include "nccalc/errors.hpp"

namespace nccalc {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Dense complex matrix, row-major. Evaluation points are square; the
/// rectangular case exists for off-diagonal blocks and intertwiners.
class CMat {
public:
    CMat() = default;

    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) raise(ErrKind::ShapeMismatch, "negative dimension");
    }

    CMat(int rows, int cols, std::initializer_list<Complex> entries) : CMat(rows, cols) {
        if (entries.size() != a_.size()) raise(ErrKind::ShapeMismatch, "initializer size mismatch");
        std::copy(entries.begin(), entries.end(), a_.begin());
        check_finite();
    }

    static CMat zero(int rows, int cols) { return CMat(rows, cols); }
    static CMat zero(int n) { return CMat(n, n); }

    static CMat identity(int n) {
        CMat I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    static CMat scalar(int n, Complex c) {
        CMat M(n, n);
        for (int i = 0; i < n; ++i) M(i, i) = c;
        return M;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    /// Dimension of a square matrix.
    int n() const {
        if (!square()) raise(ErrKind::ShapeMismatch, "matrix is not square");
        return rows_;
    }

    Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    Complex operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<Complex>& data() const { return a_; }

    bool same_shape(const CMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    CMat& operator+=(const CMat& o) {
        require_same_shape(o, "add");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    CMat& operator-=(const CMat& o) {
        require_same_shape(o, "sub");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    CMat& operator*=(Complex c) {
        for (auto& z : a_) z *= c;
        return *this;
    }

    friend CMat operator+(CMat a, const CMat& b) { return a += b; }
    friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
    friend CMat operator*(Complex c, CMat a) { return a *= c; }
    friend CMat operator*(CMat a, Complex c) { return a *= c; }
    friend CMat operator-(CMat a) { return a *= Complex(-1.0, 0.0); }

    friend CMat operator*(const CMat& a, const CMat& b) {
        if (a.cols_ != b.rows_) raise(ErrKind::DimensionMismatch, "mul: inner dimensions differ");
        CMat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        }
        return r;
    }

    /// Conjugate transpose.
    CMat adjoint() const {
        CMat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (int i = 0; i < n(); ++i) t += (*this)(i, i);
        return t;
    }

    double frob() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    bool finite() const {
        for (const auto& z : a_)
            if (!is_finite(z)) return false;
        return true;
    }

    void check_finite() const {
        if (!finite()) raise(ErrKind::NotFinite, "matrix contains NaN/Inf entries");
    }

    double herm_defect() const { return (*this - adjoint()).frob(); }

    bool is_hermitian(double tol = 1e-12) const {
        if (!square()) return false;
        return herm_defect() <= tol * std::max(1.0, frob());
    }

    friend bool operator==(const CMat& a, const CMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    void require_same_shape(const CMat& o, const char* what) const {
        if (!same_shape(o)) raise(ErrKind::DimensionMismatch, std::string(what) + ": shapes differ");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> a_;
};

inline CMat adjoint(const CMat& m) { return m.adjoint(); }

inline double frob_dist(const CMat& a, const CMat& b) { return (a - b).frob(); }

/// (M + M*)/2 and (M - M*)/(2i): the Cartesian (Hermitian) parts.
inline CMat re_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }
inline CMat im_part(const CMat& m) { return Complex(0.0, -0.5) * (m - m.adjoint()); }

/// Exact symmetrisation; used to scrub conjugation dust off points that are
/// Hermitian up to rounding.
inline CMat hermitize(const CMat& m) { return re_part(m); }

inline CMat commutator(const CMat& s, const CMat& q) {
    if (s.n() != q.n()) raise(ErrKind::DimensionMismatch, "commutator: sizes differ");
    return s * q - q * s;
}

inline CMat direct_sum(const CMat& x, const CMat& y) {
    CMat r(x.rows() + y.rows(), x.cols() + y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r(i, j) = x(i, j);
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) r(x.rows() + i, x.cols() + j) = y(i, j);
    return r;
}

/// [[a, b], [c, d]] with conformant rectangular blocks.
inline CMat block2_assemble(const CMat& a, const CMat& b, const CMat& c, const CMat& d) {
    if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
        raise(ErrKind::ShapeMismatch, "block2_assemble: incompatible block shapes");
    const int r1 = a.rows(), r2 = c.rows(), c1 = a.cols(), c2 = b.cols();
    CMat m(r1 + r2, c1 + c2);
    for (int i = 0; i < r1; ++i) {
        for (int j = 0; j < c1; ++j) m(i, j) = a(i, j);
        for (int j = 0; j < c2; ++j) m(i, c1 + j) = b(i, j);
    }
    for (int i = 0; i < r2; ++i) {
        for (int j = 0; j < c1; ++j) m(r1 + i, j) = c(i, j);
        for (int j = 0; j < c2; ++j) m(r1 + i, c1 + j) = d(i, j);
    }
    return m;
}

struct Block2 {
    CMat a, b, c, d;
};

/// Split at row r1 / column c1. Inverse of block2_assemble on conformant input.
inline Block2 block2_extract(const CMat& m, int r1, int c1) {
    if (r1 < 0 || c1 < 0 || r1 > m.rows() || c1 > m.cols())
        raise(ErrKind::ShapeMismatch, "block2_extract: split out of range");
    const int r2 = m.rows() - r1, c2 = m.cols() - c1;
    Block2 b{CMat(r1, c1), CMat(r1, c2), CMat(r2, c1), CMat(r2, c2)};
    for (int i = 0; i < r1; ++i) {
        for (int j = 0; j < c1; ++j) b.a(i, j) = m(i, j);
        for (int j = 0; j < c2; ++j) b.b(i, j) = m(i, c1 + j);
    }
    for (int i = 0; i < r2; ++i) {
        for (int j = 0; j < c1; ++j) b.c(i, j) = m(r1 + i, j);
        for (int j = 0; j < c2; ++j) b.d(i, j) = m(r1 + i, c1 + j);
    }
    return b;
}

inline std::ostream& operator<<(std::ostream& os, const CMat& m) {
    for (int i = 0; i < m.rows(); ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < m.cols(); ++j) {
            const Complex z = m(i, j);
            os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
            if (j + 1 < m.cols()) os << ", ";
        }
        os << (i + 1 == m.rows() ? "]" : ";\n");
    }
    return os;
}

}  // namespace nccalc
