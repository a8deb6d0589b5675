#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace nccalc;
using ncs::sigma_x;
using ncs::sigma_y;
using ncs::sigma_z;

TEST_CASE("adjoint is the conjugate transpose") {
    const CMat m(2, 2, {0, 1, 0, 0});
    const CMat expected(2, 2, {0, 0, 1, 0});
    CHECK(frob_dist(m.adjoint(), expected) == 0.0);

    const CMat c(2, 2, {Complex(1, 2), Complex(3, -4), 0, Complex(0, 1)});
    CHECK(frob_dist(c.adjoint().adjoint(), c) == 0.0);
}

TEST_CASE("pauli products") {
    const CMat expected(2, 2, {0, -1, 1, 0});
    CHECK(frob_dist(sigma_x() * sigma_z(), expected) == 0.0);

    const CMat iI = Complex(0, 1) * CMat::identity(2);
    CHECK(iI(0, 0) == Complex(0, 1));
    CHECK(iI(0, 1) == Complex(0, 0));
}

TEST_CASE("dimension mismatches are rejected") {
    const CMat a(2, 2), b(3, 3), r(2, 3);
    CHECK_THROWS_AS(a + b, NcError);
    CHECK_THROWS_AS(a * b, NcError);
    CHECK_NOTHROW(a * r);
    CHECK_THROWS_AS(r.n(), NcError);
}

TEST_CASE("non-finite entries are rejected at construction") {
    CHECK_THROWS_AS(CMat(1, 1, {Complex(std::numeric_limits<double>::quiet_NaN(), 0)}), NcError);
    CHECK_THROWS_AS(CMat(1, 1, {Complex(0, std::numeric_limits<double>::infinity())}), NcError);
}

TEST_CASE("direct sum of scalars and tuples") {
    const CMat one(1, 1, {1}), two(1, 1, {2});
    const CMat expected(2, 2, {1, 0, 0, 2});
    CHECK(frob_dist(direct_sum(one, two), expected) == 0.0);

    const MatTuple x({sigma_x()}), y({sigma_x()});
    const MatTuple s = direct_sum(x, y);
    REQUIRE(s[0].n() == 4);
    CHECK(op_norm(s[0]) == Catch::Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(direct_sum(MatTuple({one}), MatTuple({one, one})), NcError);
}

TEST_CASE("direct sum spectrum is the union") {
    RandomStream st(11);
    const CMat x = random_herm(3, st);
    const CMat padded = direct_sum(x, CMat::zero(1));
    const auto ex = herm_eig(x).eigenvalues;
    auto ep = herm_eig(padded).eigenvalues;
    std::vector<double> expect = ex;
    expect.push_back(0.0);
    std::sort(expect.begin(), expect.end());
    for (std::size_t i = 0; i < ep.size(); ++i) CHECK(ep[i] == Catch::Approx(expect[i]).margin(1e-11));
}

TEST_CASE("block2 assemble and extract") {
    RandomStream st(3);
    const CMat a = st.gaussian(2, 2), b = st.gaussian(2, 1), c = st.gaussian(1, 2),
               d = st.gaussian(1, 1);
    const CMat m = block2_assemble(a, b, c, d);
    REQUIRE(m.rows() == 3);
    REQUIRE(m.cols() == 3);
    const Block2 parts = block2_extract(m, 2, 2);
    CHECK(frob_dist(parts.a, a) == 0.0);
    CHECK(frob_dist(parts.b, b) == 0.0);
    CHECK(frob_dist(parts.c, c) == 0.0);
    CHECK(frob_dist(parts.d, d) == 0.0);

    CHECK_THROWS_AS(block2_assemble(a, b, b, d), NcError);
}

TEST_CASE("commutator identities") {
    const CMat expected(2, 2, {0, -2, 2, 0});
    CHECK(frob_dist(commutator(sigma_x(), sigma_z()), expected) == 0.0);

    RandomStream st(17);
    const CMat x = st.gaussian(4);
    CHECK(commutator(x, x).frob() == 0.0);

    // [iZ1, Z2] is Hermitian for Hermitian Z1, Z2
    for (int k = 0; k < 20; ++k) {
        const CMat z1 = random_herm(3, st), z2 = random_herm(3, st);
        const CMat c = commutator(Complex(0, 1) * z1, z2);
        CHECK(c.is_hermitian(1e-12));
    }
}

TEST_CASE("commutator broadcasts a single matrix over a tuple") {
    RandomStream st(5);
    const MatTuple x = random_herm_tuple(2, 3, st);
    const CMat t = st.gaussian(3);
    const MatTuple c = commutator(t, x);
    REQUIRE(c.arity() == 2);
    CHECK(frob_dist(c[1], t * x[1] - x[1] * t) == 0.0);
}

TEST_CASE("re/im parts recombine exactly") {
    RandomStream st(23);
    const CMat m = st.gaussian(4);
    CHECK(re_part(m).is_hermitian(0.0));
    CHECK(im_part(m).is_hermitian(0.0));
    CHECK(frob_dist(re_part(m) + Complex(0, 1) * im_part(m), m) <= 1e-15 * m.frob());
}
