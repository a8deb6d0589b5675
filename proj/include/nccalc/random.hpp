#pragma once

#include <cmath>
#include <numbers>
#include <cstdint>
#include <random>
#include <vector>

#include "nccalc/cmat.hpp"
#include "nccalc/errors.hpp"
#include "nccalc/spectral.hpp"
#include "nccalc/tuple.hpp"

namespace nccalc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x2545f4914f6cdd1dULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    return splitmix64(s) ^ a;
}

}  // namespace detail

/// Deterministic sample source: draw k of RandomStream(seed) depends only on
/// (seed, k). Distributions are hand-rolled on top of mt19937_64 so output
/// is identical across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t master_seed, std::uint64_t index = 0)
        : master_seed_(master_seed), index_(index) {}

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t index() const { return index_; }

    /// Independent stream for a named sub-task; does not advance this stream.
    RandomStream substream(std::uint64_t tag) const {
        return RandomStream(detail::mix_seed(master_seed_, tag ^ 0x7c3b9d2f15ca81e7ULL));
    }

    /// uniform in [0, 1)
    double uniform() { return ((engine_for_next()() >> 11)) * 0x1.0p-53; }

    double normal() {
        auto eng = engine_for_next();
        const double u1 = ((eng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = (eng() >> 11) * 0x1.0p-53;        // [0, 1)
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    Complex complex_normal() {
        auto eng = engine_for_next();
        const double u1 = ((eng() >> 11) + 1) * 0x1.0p-53;
        const double u2 = (eng() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return Complex(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
    }

    /// n x m matrix with independent standard complex Gaussian entries.
    CMat gaussian(int n, int m) {
        auto eng = engine_for_next();
        CMat g(n, m);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                const double u1 = ((eng() >> 11) + 1) * 0x1.0p-53;
                const double u2 = (eng() >> 11) * 0x1.0p-53;
                const double r = std::sqrt(-2.0 * std::log(u1));
                g(i, j) = Complex(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
            }
        }
        return g;
    }
    CMat gaussian(int n) { return gaussian(n, n); }

private:
    std::mt19937_64 engine_for_next() {
        return std::mt19937_64(detail::mix_seed(master_seed_, index_++));
    }

    std::uint64_t master_seed_;
    std::uint64_t index_;
};

inline CMat random_herm(int n, RandomStream& stream) {
    const CMat g = stream.gaussian(n);
    return 0.5 * (g + g.adjoint());
}

/// Modified Gram-Schmidt on Gaussian columns, then a per-column phase fix:
/// the first entry of modulus > 1e-12 is rotated to the positive real axis.
inline CMat random_unitary(int n, RandomStream& stream) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        CMat g = stream.gaussian(n);
        bool degenerate = false;
        for (int j = 0; j < n && !degenerate; ++j) {
            for (int k = 0; k < j; ++k) {
                Complex dot = 0.0;
                for (int i = 0; i < n; ++i) dot += std::conj(g(i, k)) * g(i, j);
                for (int i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
            }
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) nrm += std::norm(g(i, j));
            nrm = std::sqrt(nrm);
            if (nrm < 1e-8) {
                degenerate = true;
                break;
            }
            for (int i = 0; i < n; ++i) g(i, j) /= nrm;
        }
        if (degenerate) continue;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (std::abs(g(i, j)) > 1e-12) {
                    const Complex phase = std::conj(g(i, j)) / std::abs(g(i, j));
                    for (int k = 0; k < n; ++k) g(k, j) *= phase;
                    break;
                }
            }
        }
        return g;
    }
    raise(ErrKind::GenerationFailure, "random_unitary: degenerate Gaussian draws");
}

inline CMat random_invertible(int n, RandomStream& stream) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        CMat g = stream.gaussian(n);
        const CMat gram = hermitize(g.adjoint() * g);
        const EigResult eig = herm_eig(gram, 1e-9);
        const double smin = std::sqrt(std::max(0.0, eig.eigenvalues.front()));
        if (smin >= 0.05) return g;
    }
    raise(ErrKind::GenerationFailure, "random_invertible: min singular value stayed below 0.05");
}

inline CMat random_contraction(int n, RandomStream& stream) {
    CMat g = stream.gaussian(n);
    const double nrm = op_norm(g);
    if (nrm > 0.9) g *= Complex(0.9 / nrm, 0.0);
    return g;
}

/// Real-coefficient polynomial of degree <= n-1 in a Hermitian X; commutes
/// with X by construction.
inline CMat random_herm_commuting_with(const CMat& x, RandomStream& stream) {
    const int n = x.n();
    if (!x.is_hermitian(1e-10)) raise(ErrKind::NotHermitian, "commuting draw needs Hermitian X");
    std::vector<double> coeff(static_cast<std::size_t>(n));
    for (auto& c : coeff) c = stream.normal();
    CMat acc = CMat::scalar(n, coeff[0]);
    CMat pw = CMat::identity(n);
    for (int k = 1; k < n; ++k) {
        pw = pw * x;
        acc += Complex(coeff[static_cast<std::size_t>(k)], 0.0) * pw;
    }
    return hermitize(acc);
}

enum class RandKind { Herm, Unitary, Invertible, Contraction };

inline CMat random_gen(RandKind kind, int n, RandomStream& stream) {
    switch (kind) {
        case RandKind::Herm: return random_herm(n, stream);
        case RandKind::Unitary: return random_unitary(n, stream);
        case RandKind::Invertible: return random_invertible(n, stream);
        case RandKind::Contraction: return random_contraction(n, stream);
    }
    raise(ErrKind::GenerationFailure, "random_gen: unknown kind");
}

inline MatTuple random_herm_tuple(int d, int n, RandomStream& stream) {
    std::vector<CMat> mats;
    mats.reserve(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) mats.push_back(random_herm(n, stream));
    return MatTuple(std::move(mats));
}

inline MatTuple random_gaussian_tuple(int d, int n, int m, RandomStream& stream) {
    std::vector<CMat> mats;
    mats.reserve(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) mats.push_back(stream.gaussian(n, m));
    return MatTuple(std::move(mats));
}

}  // namespace nccalc
