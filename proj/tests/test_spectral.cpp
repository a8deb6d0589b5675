#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace nccalc;
using ncs::sigma_x;
using ncs::sigma_y;
using ncs::sigma_z;

TEST_CASE("herm_eig on fixed matrices") {
    const EigResult ez = herm_eig(sigma_z());
    CHECK(ez.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-13));
    CHECK(ez.eigenvalues[1] == Catch::Approx(1.0).margin(1e-13));

    const EigResult ex = herm_eig(sigma_x());
    CHECK(ex.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(ex.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));

    const EigResult ec = herm_eig(CMat::scalar(3, 2.5));
    for (double lam : ec.eigenvalues) CHECK(lam == Catch::Approx(2.5).margin(1e-13));
    CHECK(is_unitary(ec.vectors, 1e-11));
}

TEST_CASE("herm_eig postconditions on random Hermitian inputs") {
    RandomStream st(101);
    for (int n : {1, 2, 3, 5, 8}) {
        for (int rep = 0; rep < 10; ++rep) {
            const CMat h = random_herm(n, st);
            const EigResult e = herm_eig(h);
            CMat d(n, n);
            for (int i = 0; i < n; ++i) d(i, i) = e.eigenvalues[i];
            const double scale = std::max(1.0, op_norm(h));
            CHECK(frob_dist(e.vectors.adjoint() * h * e.vectors, d) <= 1e-11 * scale);
            CHECK(frob_dist(e.vectors.adjoint() * e.vectors, CMat::identity(n)) <= 1e-11);
            double sum = 0.0;
            for (double lam : e.eigenvalues) sum += lam;
            CHECK(sum == Catch::Approx(h.trace().real()).margin(1e-10 * scale));
            CHECK(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
        }
    }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    CHECK_THROWS_AS(herm_eig(CMat(2, 2, {0, 1, 0, 0})), NcError);
}

TEST_CASE("sqrt_psd fixed values") {
    CHECK(frob_dist(sqrt_psd(CMat::scalar(3, 4.0)), CMat::scalar(3, 2.0)) <= 1e-12);
    CHECK(sqrt_psd(CMat::zero(2)).frob() == 0.0);

    // sqrt(sigma_x + I) = (sigma_x + I) / sqrt(2), from the eigenvalues {0, 2}
    const CMat p = sigma_x() + CMat::identity(2);
    const CMat expected = Complex(1.0 / std::sqrt(2.0), 0) * p;
    const CMat r = sqrt_psd(p);
    CHECK(frob_dist(r, expected) <= 1e-12);
    CHECK(frob_dist(r * r, p) <= 1e-9 * std::max(1.0, op_norm(p)));
}

TEST_CASE("sqrt_psd rejects indefinite input, tolerates dust") {
    CHECK_THROWS_AS(sqrt_psd(-CMat::identity(2)), NcError);
    const CMat dusty = CMat::scalar(2, -1e-14);
    CHECK(sqrt_psd(dusty).frob() <= 1e-6);
}

TEST_CASE("sqrt_psd squares back on random PSD matrices") {
    RandomStream st(7);
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 2 + rep % 4;
        const CMat g = st.gaussian(n);
        const CMat p = hermitize(g * g.adjoint());
        const CMat r = sqrt_psd(p);
        CHECK(r.is_hermitian(1e-10));
        CHECK(frob_dist(r * r, p) <= 1e-9 * std::max(1.0, op_norm(p)));
    }
}

TEST_CASE("polar decomposition") {
    const CMat d(2, 2, {2, 0, 0, 3});
    const PolarResult pr = polar(d);
    CHECK(frob_dist(pr.unitary, CMat::identity(2)) <= 1e-11);
    CHECK(frob_dist(pr.positive, d) <= 1e-11);

    RandomStream st(19);
    const CMat u0 = random_unitary(3, st);
    const PolarResult pu = polar(u0);
    CHECK(frob_dist(pu.unitary, u0) <= 1e-9);
    CHECK(frob_dist(pu.positive, CMat::identity(3)) <= 1e-9);

    const PolarResult ps = polar(Complex(2, 0) * sigma_x());
    CHECK(frob_dist(ps.unitary, sigma_x()) <= 1e-10);
    CHECK(frob_dist(ps.positive, CMat::scalar(2, 2.0)) <= 1e-10);

    for (int rep = 0; rep < 20; ++rep) {
        const CMat s = random_invertible(4, st);
        const PolarResult p = polar(s);
        CHECK(is_unitary(p.unitary, 1e-9));
        CHECK(frob_dist(p.unitary * p.positive, s) <= 1e-9 * std::max(1.0, op_norm(s)));
        CHECK(herm_eig(p.positive).eigenvalues.front() > 0.0);
    }

    CHECK_THROWS_AS(polar(CMat(2, 2, {1, 0, 0, 0})), NcError);
}

TEST_CASE("defect rotation fixed cases") {
    const DefectRotation z = defect_rotation(CMat::zero(2));
    CHECK(frob_dist(z.d_t, CMat::identity(2)) <= 1e-12);
    CHECK(frob_dist(z.u_t, block2_assemble(CMat::zero(2), CMat::identity(2), CMat::identity(2),
                                           CMat::zero(2))) <= 1e-12);

    const DefectRotation one = defect_rotation(CMat::identity(2));
    CHECK(one.d_t.frob() <= 1e-9);
    CHECK(frob_dist(one.u_t, block2_assemble(CMat::identity(2), CMat::zero(2), CMat::zero(2),
                                             -CMat::identity(2))) <= 1e-9);

    const DefectRotation h = defect_rotation(Complex(0.5, 0) * sigma_x());
    CHECK(frob_dist(h.u_t.adjoint() * h.u_t, CMat::identity(4)) <= 1e-10);
}

TEST_CASE("defect rotation errors and normalization") {
    CHECK_THROWS_AS(defect_rotation(CMat::scalar(2, 2.0)), NcError);
    CHECK_THROWS_AS(defect_rotation(CMat::zero(2), true), NcError);

    RandomStream st(31);
    const CMat t = st.gaussian(3);
    const DefectRotation dr = defect_rotation(t, true);
    CHECK(op_norm(dr.t) == Catch::Approx(1.0).margin(1e-10));
    CHECK(is_unitary(dr.u_t, 1e-9));
}

TEST_CASE("defect rotation unitary on random contractions") {
    RandomStream st(43);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 1 + rep % 5;
        const DefectRotation dr = defect_rotation(random_contraction(n, st));
        CHECK(frob_dist(dr.u_t.adjoint() * dr.u_t, CMat::identity(2 * n)) <= 1e-9);
    }
}

TEST_CASE("operator norm") {
    CHECK(op_norm(CMat::identity(3)) == Catch::Approx(1.0).margin(1e-12));
    CHECK(op_norm(CMat(2, 2, {0, 2, 0, 0})) == Catch::Approx(2.0).margin(1e-12));
    CHECK(op_norm(sigma_x() + Complex(0, 1) * sigma_y()) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("pair norm comparison attains both bounds") {
    const NormCompare lower = norm_compare(MatTuple({sigma_x()}), MatTuple({CMat::zero(2)}));
    CHECK(lower.lower_ok);
    CHECK(lower.upper_ok);
    CHECK(lower.ratio == Catch::Approx(1.0).margin(1e-10));

    const NormCompare upper = norm_compare(MatTuple({sigma_x()}), MatTuple({sigma_y()}));
    CHECK(upper.lower_ok);
    CHECK(upper.upper_ok);
    CHECK(upper.ratio == Catch::Approx(2.0).margin(1e-10));
}

TEST_CASE("pair norm inequalities hold on random Hermitian pairs") {
    RandomStream st(57);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 1 + rep % 5;
        const int d = 1 + rep % 2;
        const NormCompare nc =
            norm_compare(random_herm_tuple(d, n, st), random_herm_tuple(d, n, st));
        CHECK(nc.lower_ok);
        CHECK(nc.upper_ok);
    }
    CHECK_THROWS_AS(norm_compare(MatTuple({CMat(2, 2, {0, 1, 0, 0})}), MatTuple({sigma_x()})),
                    NcError);
}

TEST_CASE("inverse") {
    RandomStream st(71);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + rep % 5;
        const CMat s = random_invertible(n, st);
        CHECK(frob_dist(s * inverse(s), CMat::identity(n)) <= 1e-10 * std::max(1.0, op_norm(s)));
    }
    CHECK_THROWS_AS(inverse(CMat::zero(3)), NcError);
}
