#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace nccalc;

TEST_CASE("streams are pure functions of (seed, index)") {
    RandomStream a(99), b(99);
    CHECK(frob_dist(a.gaussian(4), b.gaussian(4)) == 0.0);
    CHECK(a.normal() == b.normal());
    CHECK(a.uniform() == b.uniform());

    // skipping ahead reproduces the same sample
    RandomStream c(99, 2);
    RandomStream d(99);
    d.gaussian(1);
    d.gaussian(1);
    CHECK(frob_dist(c.gaussian(3), d.gaussian(3)) == 0.0);

    RandomStream e(100);
    CHECK(frob_dist(RandomStream(99).gaussian(3), e.gaussian(3)) > 0.0);
}

TEST_CASE("substreams are independent of the parent position") {
    RandomStream a(5);
    a.gaussian(3);
    RandomStream b(5);
    CHECK(frob_dist(a.substream(7).gaussian(2), b.substream(7).gaussian(2)) == 0.0);
}

TEST_CASE("hermitian draws satisfy the invariant") {
    RandomStream st(1);
    for (int rep = 0; rep < 50; ++rep) {
        const CMat h = random_herm(1 + rep % 6, st);
        CHECK(h.is_hermitian(1e-15));
    }
}

TEST_CASE("unitary draws: orthonormal with deterministic phase fix") {
    RandomStream st(2);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 1 + rep % 6;
        const CMat u = random_unitary(n, st);
        CHECK(frob_dist(u.adjoint() * u, CMat::identity(n)) <= 1e-12);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (std::abs(u(i, j)) > 1e-12) {
                    CHECK(u(i, j).imag() == Catch::Approx(0.0).margin(1e-13));
                    CHECK(u(i, j).real() > 0.0);
                    break;
                }
            }
        }
    }
}

TEST_CASE("invertible draws keep the smallest singular value above 0.05") {
    RandomStream st(3);
    for (int rep = 0; rep < 20; ++rep) {
        const CMat g = random_invertible(2 + rep % 4, st);
        const EigResult e = herm_eig(hermitize(g.adjoint() * g), 1e-9);
        CHECK(std::sqrt(std::max(0.0, e.eigenvalues.front())) >= 0.05);
    }
}

TEST_CASE("contraction draws have norm at most 0.9") {
    RandomStream st(4);
    for (int rep = 0; rep < 20; ++rep)
        CHECK(op_norm(random_contraction(1 + rep % 5, st)) <= 0.9 + 1e-12);
}

TEST_CASE("commuting draws commute and are Hermitian") {
    RandomStream st(5);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + rep % 4;
        const CMat x = random_herm(n, st);
        const CMat p = random_herm_commuting_with(x, st);
        CHECK(p.is_hermitian(1e-12));
        const double scale = std::max(1.0, op_norm(p) * op_norm(x));
        CHECK(commutator(p, x).frob() <= 1e-10 * scale);
    }
    CHECK_THROWS_AS(random_herm_commuting_with(CMat(2, 2, {0, 1, 0, 0}), st), NcError);
}
