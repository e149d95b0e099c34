#include <doctest.h>

#include <random>

#include "dirac/core.hpp"
#include "dirac/determinant.hpp"

using namespace dirac;

TEST_CASE("minors of the classic boundary conditions") {
    auto m = check_regularity(BoundaryPair::periodic());
    CHECK(m.j12 == cplx(1.0));
    CHECK(m.j34 == cplx(1.0));
    CHECK(m.j32 == cplx(-1.0));
    CHECK(m.j14 == cplx(-1.0));
    CHECK(m.regular);
    // the projected determinants of the regularity test coincide with the minors
    CHECK(std::abs(m.det_proj_pm - m.j32) < 1e-15);
    CHECK(std::abs(m.det_proj_mp - m.j14) < 1e-15);

    // both conditions at x = 0: zero column minor
    auto both0 = check_regularity(BoundaryPair::from_rows({1, 0, 0, 0}, {0, 1, 0, 0}));
    CHECK(both0.j14 == cplx(0.0));
    CHECK_FALSE(both0.regular);

    auto sep = check_regularity(BoundaryPair::from_rows({1, 1, 0, 0}, {0, 0, 2, 1}));
    CHECK(sep.j14 == cplx(1.0));
    CHECK(sep.j32 == cplx(-2.0));
    CHECK(sep.regular);
}

TEST_CASE("rank-deficient block is rejected") {
    CHECK_THROWS_AS(check_regularity(BoundaryPair::from_rows({1, 2, 3, 4}, {2, 4, 6, 8})),
                    InvalidBoundaryError);
}

TEST_CASE("reduction to normal form") {
    auto red = reduce_bc(BoundaryPair::periodic());
    CHECK(std::abs(red.bc.a - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(red.bc.b) < 1e-15);
    CHECK(std::abs(red.bc.c) < 1e-15);
    CHECK(std::abs(red.bc.d - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(red.scale - cplx(-1.0)) < 1e-15);  // det A14^{-1}

    auto anti = reduce_bc(BoundaryPair::antiperiodic());
    CHECK(std::abs(anti.bc.a - cplx(1.0)) < 1e-15);
    CHECK(std::abs(anti.bc.d - cplx(1.0)) < 1e-15);

    // idempotence on an already-reduced pair
    ReducedBC bc{cplx(0.3, 0.1), cplx(-1.2, 0.4), cplx(0.7, -0.9), cplx(1.1, 0.2)};
    auto again = reduce_bc(bc.rows());
    CHECK(std::abs(again.bc.a - bc.a) < 1e-14);
    CHECK(std::abs(again.bc.b - bc.b) < 1e-14);
    CHECK(std::abs(again.bc.c - bc.c) < 1e-14);
    CHECK(std::abs(again.bc.d - bc.d) < 1e-14);

    CHECK_THROWS_AS(reduce_bc(BoundaryPair::from_rows({1, 0, 0, 0}, {0, 1, 0, 0})),
                    NotReducibleError);
}

TEST_CASE("adjoint boundary conditions") {
    Weights dirac(-1.0, 1.0);
    // separated a=d=0, b=1, c=-2 with k=1 stays separated
    BoundaryPair adj = adjoint_bc(ReducedBC::separated(1.0, -2.0), dirac);
    CHECK(std::abs(adj.row(0)(0) - cplx(1.0)) < 1e-15);  // y1(0) + y2(0)
    CHECK(std::abs(adj.row(0)(1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(adj.row(0)(3)) < 1e-15);
    CHECK(std::abs(adj.row(1)(2) - cplx(1.0)) < 1e-15);  // y1(1) - 2 y2(1)
    CHECK(std::abs(adj.row(1)(3) - cplx(-2.0)) < 1e-15);

    // periodic reduced stays periodic
    BoundaryPair padj = adjoint_bc(ReducedBC::periodic(), dirac);
    CHECK(std::abs(padj.row(0)(1) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(padj.row(0)(3) - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(padj.row(1)(0) - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(padj.row(1)(2) - cplx(1.0)) < 1e-15);

    // Q = 0 maps to Q* = 0
    PotentialGrid zero = PotentialGrid::zero(8);
    CHECK(adjoint_potential(zero).l1_norm() == 0.0);
}

TEST_CASE("adjoint is an involution up to conjugation") {
    Weights w(-0.7, 1.3);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        ReducedBC bc{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)),
                     cplx(u(rng), u(rng))};
        if (std::abs(bc.det()) < 0.05) continue;
        ReducedBC r1 = reduce_bc(adjoint_bc(bc, w)).bc;
        ReducedBC r2 = reduce_bc(adjoint_bc(r1, w)).bc;
        CHECK(std::abs(r2.a - bc.a) < 1e-12);
        CHECK(std::abs(r2.b - bc.b) < 1e-12);
        CHECK(std::abs(r2.c - bc.c) < 1e-12);
        CHECK(std::abs(r2.d - bc.d) < 1e-12);
    }
    // potential side of the involution
    int m = 16;
    std::vector<cplx> q12(m + 1), q21(m + 1);
    for (int i = 0; i <= m; ++i) {
        q12[i] = cplx(0.3 * i, -0.1);
        q21[i] = cplx(-0.2, 0.05 * i);
    }
    PotentialGrid q(m, q12, q21);
    PotentialGrid back = adjoint_potential(adjoint_potential(q));
    for (int i = 0; i <= m; ++i) {
        CHECK(back.q12()[i] == q.q12()[i]);
        CHECK(back.q21()[i] == q.q21()[i]);
    }
}

TEST_CASE("gauge transformation of a diagonal potential") {
    Weights w(-1.0, 1.0);
    const double qv = 0.8;
    const int m = 64;
    std::vector<cplx> q12(m + 1, 0.0), q21(m + 1, 0.0), q11(m + 1, qv), q22(m + 1, 0.0);
    DiracProblem p{w, PotentialGrid(m, q12, q21, q11, q22), BoundaryPair::periodic()};
    auto g = gauge_reduce(p);
    CHECK(std::abs(g.w1_end - std::exp(cplx(0, qv))) < 1e-12);
    CHECK(std::abs(g.w2_end - cplx(1.0)) < 1e-15);
    CHECK(g.problem.potential.off_diagonal());
    // k(x) = exp(-i q x): scales D column 1 by w1(1)
    CHECK(std::abs(g.problem.bc.D(0, 0) - cplx(-1.0) * std::exp(cplx(0, qv))) < 1e-12);

    // an already off-diagonal potential is untouched
    DiracProblem off{w, PotentialGrid::constant(1.0, 2.0, m), BoundaryPair::periodic()};
    auto gid = gauge_reduce(off);
    CHECK(std::abs(gid.w1_end - cplx(1.0)) < 1e-15);
    CHECK(std::abs(gid.w2_end - cplx(1.0)) < 1e-15);
    CHECK(std::abs(gid.problem.potential.q12()[m / 2] - cplx(1.0)) < 1e-15);
}

TEST_CASE("row scaling leaves regularity and the zero set unchanged") {
    Weights w(-1.0, std::sqrt(2.0));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::Vector4cd r1, r2;
        for (int k = 0; k < 4; ++k) {
            r1(k) = cplx(u(rng), u(rng));
            r2(k) = cplx(u(rng), u(rng));
        }
        BoundaryPair bc = BoundaryPair::from_rows(r1, r2);
        cplx s1(u(rng) + 2.0, u(rng)), s2(u(rng) - 2.0, u(rng));
        BoundaryPair scaled = BoundaryPair::from_rows(s1 * r1, s2 * r2);
        auto ma = check_regularity(bc);
        auto mb = check_regularity(scaled);
        CHECK(ma.regular == mb.regular);
        // the scaled determinant is s1 s2 times the original at every lambda
        for (double lam : {0.3, 1.7, -2.2}) {
            cplx da = delta0_eval(ma, w, lam);
            cplx db = delta0_eval(mb, w, lam);
            CHECK(std::abs(db - s1 * s2 * da) < 1e-12 * (1.0 + std::abs(db)));
        }
    }
}

TEST_CASE("rational probe is diagnostic only") {
    CHECK_FALSE(Weights(-1.0, std::sqrt(2.0)).probe_rational().has_value());
    auto probe = Weights(-2.0, 3.0).probe_rational();
    REQUIRE(probe.has_value());
    CHECK(probe->first == 2);
    CHECK(probe->second == 3);
    // the tag itself must be consistent
    CHECK_THROWS_AS(Weights(-1.0, 1.0, std::make_pair(2L, 3L)), std::invalid_argument);
    auto tagged = Weights(-2.0, 4.0, std::make_pair(2L, 4L));
    CHECK(tagged.rational() == std::make_pair(1L, 2L));  // normalized coprime
}
