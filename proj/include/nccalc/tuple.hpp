#pragma once

#include <utility>
#include <vector>

#include "nccalc/cmat.hpp"
#include "nccalc/errors.hpp"

namespace nccalc {

/// A d-tuple of matrices of one common size. The point type of everything:
/// evaluation points, directions, and rectangular off-diagonal data.
struct MatTuple {
    std::vector<CMat> mats;

    MatTuple() = default;
    explicit MatTuple(std::vector<CMat> m) : mats(std::move(m)) { validate(); }
    MatTuple(std::initializer_list<CMat> m) : mats(m) { validate(); }

    int arity() const { return static_cast<int>(mats.size()); }
    int rows() const { return mats.empty() ? 0 : mats.front().rows(); }
    int cols() const { return mats.empty() ? 0 : mats.front().cols(); }
    bool square() const { return rows() == cols(); }

    /// Common dimension of a square tuple.
    int dim() const {
        if (!square()) raise(ErrKind::ShapeMismatch, "tuple components are not square");
        return rows();
    }

    const CMat& operator[](int k) const { return mats[static_cast<std::size_t>(k)]; }
    CMat& operator[](int k) { return mats[static_cast<std::size_t>(k)]; }

    void validate() const {
        for (const auto& m : mats)
            if (m.rows() != rows() || m.cols() != cols())
                raise(ErrKind::ShapeMismatch, "tuple components differ in size");
    }

    MatTuple& operator+=(const MatTuple& o) {
        require_conformant(o);
        for (int k = 0; k < arity(); ++k) mats[k] += o.mats[k];
        return *this;
    }
    MatTuple& operator-=(const MatTuple& o) {
        require_conformant(o);
        for (int k = 0; k < arity(); ++k) mats[k] -= o.mats[k];
        return *this;
    }
    MatTuple& operator*=(Complex c) {
        for (auto& m : mats) m *= c;
        return *this;
    }

    friend MatTuple operator+(MatTuple a, const MatTuple& b) { return a += b; }
    friend MatTuple operator-(MatTuple a, const MatTuple& b) { return a -= b; }
    friend MatTuple operator*(Complex c, MatTuple a) { return a *= c; }

    double max_frob() const {
        double m = 0.0;
        for (const auto& x : mats) m = std::max(m, x.frob());
        return m;
    }

    bool is_hermitian(double tol = 1e-12) const {
        for (const auto& m : mats)
            if (!m.is_hermitian(tol)) return false;
        return true;
    }

    void require_conformant(const MatTuple& o) const {
        if (arity() != o.arity()) raise(ErrKind::ArityMismatch, "tuple arities differ");
        if (rows() != o.rows() || cols() != o.cols())
            raise(ErrKind::DimensionMismatch, "tuple sizes differ");
    }
};

inline MatTuple direct_sum(const MatTuple& x, const MatTuple& y) {
    if (x.arity() != y.arity()) raise(ErrKind::ArityMismatch, "direct_sum: arities differ");
    std::vector<CMat> out;
    out.reserve(x.mats.size());
    for (int k = 0; k < x.arity(); ++k) out.push_back(direct_sum(x[k], y[k]));
    return MatTuple(std::move(out));
}

/// Componentwise commutator; a single matrix broadcasts across the tuple.
inline MatTuple commutator(const MatTuple& s, const MatTuple& q) {
    s.require_conformant(q);
    std::vector<CMat> out;
    for (int k = 0; k < s.arity(); ++k) out.push_back(commutator(s[k], q[k]));
    return MatTuple(std::move(out));
}

inline MatTuple commutator(const CMat& s, const MatTuple& q) {
    std::vector<CMat> out;
    for (const auto& qk : q.mats) out.push_back(commutator(s, qk));
    return MatTuple(std::move(out));
}

inline MatTuple commutator(const MatTuple& s, const CMat& q) {
    std::vector<CMat> out;
    for (const auto& sk : s.mats) out.push_back(commutator(sk, q));
    return MatTuple(std::move(out));
}

inline MatTuple hermitize(const MatTuple& t) {
    std::vector<CMat> out;
    for (const auto& m : t.mats) out.push_back(hermitize(m));
    return MatTuple(std::move(out));
}

/// Componentwise A + iB.
inline MatTuple combine(const MatTuple& a, const MatTuple& b) {
    a.require_conformant(b);
    std::vector<CMat> out;
    for (int k = 0; k < a.arity(); ++k) out.push_back(a[k] + Complex(0.0, 1.0) * b[k]);
    return MatTuple(std::move(out));
}

/// Componentwise Cartesian split X = A + iB with Hermitian A, B.
inline std::pair<MatTuple, MatTuple> split(const MatTuple& x) {
    std::vector<CMat> a, b;
    for (const auto& m : x.mats) {
        a.push_back(re_part(m));
        b.push_back(im_part(m));
    }
    return {MatTuple(std::move(a)), MatTuple(std::move(b))};
}

inline MatTuple concat(const MatTuple& a, const MatTuple& b) {
    a.require_conformant(a);
    std::vector<CMat> out = a.mats;
    out.insert(out.end(), b.mats.begin(), b.mats.end());
    return MatTuple(std::move(out));
}

/// A Hermitian 2d-tuple read as (A, B): the evaluation point of real
/// functions of pairs.
class HermPoint {
public:
    static constexpr double kDefaultHermTol = 1e-12;

    HermPoint(MatTuple tup, double herm_tol = kDefaultHermTol)
        : tup_(std::move(tup)), herm_tol_(herm_tol) {
        if (tup_.arity() % 2 != 0) raise(ErrKind::ArityMismatch, "HermPoint needs even arity");
        for (const auto& m : tup_.mats) {
            if (!m.square()) raise(ErrKind::ShapeMismatch, "HermPoint component not square");
            if (!m.is_hermitian(herm_tol_))
                raise(ErrKind::NotHermitian, "HermPoint component exceeds herm_tol");
        }
    }

    HermPoint(MatTuple a, MatTuple b, double herm_tol = kDefaultHermTol)
        : HermPoint(concat(a, b), herm_tol) {}

    int d() const { return tup_.arity() / 2; }
    int dim() const { return tup_.dim(); }
    double herm_tol() const { return herm_tol_; }

    const MatTuple& tuple() const { return tup_; }

    MatTuple a() const {
        return MatTuple(std::vector<CMat>(tup_.mats.begin(), tup_.mats.begin() + d()));
    }
    MatTuple b() const {
        return MatTuple(std::vector<CMat>(tup_.mats.begin() + d(), tup_.mats.end()));
    }

    /// The complex point A + iB this pair corresponds to.
    MatTuple to_complex() const { return combine(a(), b()); }

private:
    MatTuple tup_;
    double herm_tol_;
};

}  // namespace nccalc
