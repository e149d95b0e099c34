#include <doctest.h>

#include <cstdio>

#include "dirac/core.hpp"
#include "dirac/kernels.hpp"
#include "dirac/propagator.hpp"

using namespace dirac;

namespace {
const cplx kI(0.0, 1.0);

PotentialGrid wavy_potential(int m) {
    std::vector<cplx> q12(m + 1), q21(m + 1);
    for (int i = 0; i <= m; ++i) {
        double x = double(i) / m;
        q12[i] = cplx(1.0, 0.3) * (1.0 + x);
        q21[i] = cplx(std::sin(2.0 * x), -0.2);
    }
    return PotentialGrid(m, q12, q21);
}
}  // namespace

TEST_CASE("zero potential has zero kernels") {
    Weights w(-1.0, 1.0);
    auto ks = build_kernels(PotentialGrid::zero(16), w, TriangleGrid(16));
    CHECK(kernel_norms(ks.r).xinf_max == 0.0);
    CHECK(kernel_norms(ks.kplus).xinf_max == 0.0);
    for (int j = 0; j <= 16; ++j) {
        CHECK(ks.pplus.p1[j] == cplx(0.0));
        CHECK(ks.pminus.p2[j] == cplx(0.0));
    }
}

TEST_CASE("constant upper-triangular potential: closed-form kernel") {
    Weights w(-1.0, 1.0);  // a1 = -1, a2 = 1
    const double q = 0.7;
    const int n = 32;
    auto ks = build_kernels(PotentialGrid::constant(q, 0.0, n), w, TriangleGrid(n));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= i; ++j) {
            CHECK(std::abs(ks.r.at(1, i, j) - kI * q / 2.0) < 1e-14);  // R12 = iq/2
            CHECK(std::abs(ks.r.at(0, i, j)) < 1e-14);
            CHECK(std::abs(ks.r.at(2, i, j)) < 1e-14);
            CHECK(std::abs(ks.r.at(3, i, j)) < 1e-14);
            // K^pm = [[pm iq/2, iq/2], [0, 0]]
            CHECK(std::abs(ks.kplus.at(0, i, j) - kI * q / 2.0) < 1e-14);
            CHECK(std::abs(ks.kminus.at(0, i, j) + kI * q / 2.0) < 1e-14);
            CHECK(std::abs(ks.kplus.at(1, i, j) - kI * q / 2.0) < 1e-14);
            CHECK(std::abs(ks.kplus.at(2, i, j)) < 1e-14);
        }
        CHECK(std::abs(ks.pplus.p1[i] - kI * q / 2.0) < 1e-14);
        CHECK(std::abs(ks.pminus.p1[i] + kI * q / 2.0) < 1e-14);
        CHECK(std::abs(ks.pplus.p2[i]) < 1e-14);
    }
    // side conditions: edge K(x,0) B^{-1}(1, pm 1) = 0 and jump K(x,x)
    PotentialGrid qg = PotentialGrid::constant(q, 0.0, n);
    CHECK(edge_residual(ks.kplus, w, +1) < 1e-14);
    CHECK(edge_residual(ks.kminus, w, -1) < 1e-14);
    CHECK(jump_residual(ks.kplus, qg, w) < 1e-14);
    CHECK(jump_residual(ks.kminus, qg, w) < 1e-14);
}

TEST_CASE("transform reproduces the closed-form solution") {
    Weights w(-1.0, 1.0);
    const double q = 1.0;
    const int n = 128;
    auto ks = build_kernels(PotentialGrid::constant(q, 0.0, n), w, TriangleGrid(n));
    for (cplx lam : {cplx(0.0), cplx(3.0), cplx(5.0, 0.5)}) {
        auto e = apply_transform(ks.kplus, w, lam, +1);
        for (int i = 0; i <= n; ++i) {
            double x = double(i) / n;
            cplx a1 = std::exp(-kI * lam * x);
            a1 += (lam == cplx(0.0)) ? kI * q * x : kI * q * std::sin(lam * x) / lam;
            CHECK(std::abs(e[i](0) - a1) < 2e-4);
            CHECK(std::abs(e[i](1) - std::exp(kI * lam * x)) < 2e-4);
        }
    }
}

TEST_CASE("Goursat residuals vanish on the converged field") {
    Weights w(-1.0, 1.0);
    PotentialGrid q = PotentialGrid::constant(1.0, 1.0, 256);
    auto ks = build_kernels(q, w, TriangleGrid(256));
    CHECK(goursat_residual(ks.r, q, w) < 1e-6);
    CHECK(volterra_residual(ks.r, w, ks.pplus) < 1e-8);
    CHECK(volterra_residual(ks.r, w, ks.pminus) < 1e-8);
    CHECK(jump_residual(ks.kplus, q, w) < 1e-3);
    CHECK(edge_residual(ks.kplus, w, +1) < 1e-3);
    CHECK(edge_residual(ks.kminus, w, -1) < 1e-3);
}

TEST_CASE("transform agrees with the propagator at first order or better") {
    Weights w(-1.0, std::sqrt(2.0));
    PotentialGrid q = wavy_potential(512);
    double prev = -1.0;
    for (int n : {64, 128, 256}) {
        auto ks = build_kernels(q, w, TriangleGrid(n));
        double err = 0.0;
        for (cplx lam : {cplx(0.0), cplx(3.0), cplx(5.0, 0.5)}) {
            auto et = apply_transform(ks.kplus, w, lam, +1);
            DiracProblem p{w, q.resampled(n), BoundaryPair::periodic()};
            auto ep = solve_cauchy_pm(p, lam, +1);
            for (size_t i = 0; i < et.size(); ++i)
                err = std::max(err, (et[i] - ep[i]).cwiseAbs().maxCoeff());
        }
        if (prev > 0.0) CHECK(err < 0.55 * prev);  // observed order ~2
        prev = err;
    }
}

TEST_CASE("phi via kernel traces") {
    Weights w(-1.0, 1.0);
    // Q = 0: phi = diag of exponentials
    {
        auto ks = build_kernels(PotentialGrid::zero(16), w, TriangleGrid(16));
        cplx lam(1.7, -0.3);
        Eigen::Matrix2cd phi = phi_via_kernels(ks.rplus, ks.rminus, w, lam);
        CHECK(std::abs(phi(0, 0) - std::exp(-kI * lam)) < 1e-13);
        CHECK(std::abs(phi(1, 1) - std::exp(kI * lam)) < 1e-13);
        CHECK(std::abs(phi(0, 1)) < 1e-13);
        CHECK(std::abs(phi(1, 0)) < 1e-13);
    }
    // constant case: phi12(1, lambda) = iq sin(lambda)/lambda
    {
        const double q = 0.9;
        const int n = 256;
        auto ks = build_kernels(PotentialGrid::constant(q, 0.0, n), w, TriangleGrid(n));
        cplx lam(2.2, 0.0);
        Eigen::Matrix2cd phi = phi_via_kernels(ks.rplus, ks.rminus, w, lam);
        CHECK(std::abs(phi(0, 1) - kI * q * std::sin(lam) / lam) < 1e-4);
    }
    // generic potential against the propagator
    {
        Weights w2(-1.0, std::sqrt(2.0));
        PotentialGrid q = wavy_potential(512);
        double prev = -1.0;
        for (int n : {64, 128}) {
            auto ks = build_kernels(q, w2, TriangleGrid(n));
            cplx lam(2.0, 0.4);
            Eigen::Matrix2cd phik = phi_via_kernels(ks.rplus, ks.rminus, w2, lam);
            DiracProblem p{w2, q, BoundaryPair::periodic()};
            double err = (phik - propagate_end(p, lam)).cwiseAbs().maxCoeff();
            if (prev > 0.0) CHECK(err < 0.55 * prev);
            prev = err;
        }
    }
}

TEST_CASE("trace profiles reproduce the determinant") {
    Weights w(-1.0, std::sqrt(2.0));
    PotentialGrid q = wavy_potential(512);
    ReducedBC bc{cplx(0.5, 0.2), cplx(1.1, -0.4), cplx(-0.3, 0.7), cplx(-0.8, 0.1)};
    auto ks = build_kernels(q, w, TriangleGrid(128));
    auto handle = kernel_determinant(ks, bc, w);
    DiracProblem p{w, q, bc.rows()};
    for (int k = 0; k < 20; ++k) {
        cplx lam(0.7 * k - 7.0, 0.3 * ((k % 3) - 1));
        cplx dp = delta_via_propagator(p, lam);
        CHECK(std::abs(handle(lam) - dp) < 1e-3 * delta_scale(w, lam));
    }
    // Q = 0: traces vanish and Delta = Delta0
    auto ks0 = build_kernels(PotentialGrid::zero(16), w, TriangleGrid(16));
    TraceG g0 = trace_g(ks0.rplus, ks0.rminus, bc);
    for (const cplx& v : g0.g1) CHECK(std::abs(v) < 1e-14);
    for (const cplx& v : g0.g2) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("grid norms") {
    Weights w(-1.0, 1.0);
    // constant field 1 on the triangle
    KernelField f(TriangleGrid(64), KernelRole::R);
    for (int i = 0; i <= 64; ++i)
        for (int j = 0; j <= i; ++j)
            for (int jk = 0; jk < 4; ++jk) f.at(jk, i, j) = 1.0;
    KernelNorms n = kernel_norms(f);
    CHECK(n.x1_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n.xinf_max == doctest::Approx(1.0).epsilon(1e-12));

    const double q = 0.6;
    auto ks = build_kernels(PotentialGrid::constant(q, 0.0, 64), w, TriangleGrid(64));
    KernelNorms nk = kernel_norms(ks.kplus);
    CHECK(nk.xinf_max == doctest::Approx(q / 2).epsilon(1e-10));
    CHECK(nk.x1_max == doctest::Approx(q / 2).epsilon(1e-10));
}

TEST_CASE("discrete Volterra operator norm equals the X1 norm") {
    Weights w(-1.0, std::sqrt(2.0));
    auto ks = build_kernels(wavy_potential(256), w, TriangleGrid(64));
    KernelNorms n = kernel_norms(ks.r);
    for (int row = 1; row <= 2; ++row)
        for (int col = 1; col <= 2; ++col) {
            const int jk = KernelField::idx(row, col);
            double opn = discrete_l1_operator_norm(ks.r, jk);
            CHECK(opn == doctest::Approx(n.x1[row - 1][col - 1]).epsilon(0.05));
        }
}

TEST_CASE("binary dump round trip") {
    Weights w(-1.0, std::sqrt(2.0));
    auto ks = build_kernels(wavy_potential(64), w, TriangleGrid(24));
    const std::string path = "kernel_dump_test.bin";
    write_kernel(ks.kplus, w, path);
    auto [back, wback] = read_kernel(path);
    CHECK(back.grid().n == 24);
    CHECK(back.role() == KernelRole::Kplus);
    CHECK(wback.b1() == w.b1());
    CHECK(wback.b2() == w.b2());
    CHECK(back.sup_distance(ks.kplus) == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("divergence error reports the last update") {
    Weights w(-1.0, 1.0);
    PicardOptions opts;
    opts.max_sweeps = 1;
    CHECK_THROWS_AS(solve_R(PotentialGrid::constant(1.0, 1.0, 16), w, TriangleGrid(16), opts),
                    KernelDivergenceError);
}
