#include "dirac/core.hpp"

#include <cmath>

namespace dirac {

std::optional<std::pair<long, long>> Weights::probe_rational() const {
    // continued-fraction expansion of alpha = -b1/b2, denominators capped at 64
    const double target = alpha();
    const double tol = 1e-9;
    long p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // convergents of the expansion
    double x = target;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(x);
        long ai = long(a);
        long p2 = ai * p0 + p1;
        long q2 = ai * q0 + q1;
        if (q2 > 64 || q2 <= 0) break;
        if (std::abs(target - double(p2) / double(q2)) < tol) {
            if (p2 <= 0) break;
            long g = std::gcd(p2, q2);
            return std::make_pair(p2 / g, q2 / g);
        }
        p1 = p0; q1 = q0; p0 = p2; q0 = q2;
        double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    return std::nullopt;
}

PotentialGrid PotentialGrid::resampled(int new_m) const {
    auto sample = [&](const std::vector<cplx>& v) {
        if (v.empty()) return std::vector<cplx>{};
        std::vector<cplx> out(new_m + 1);
        for (int i = 0; i <= new_m; ++i) out[i] = at(v, double(i) / new_m);
        return out;
    };
    return PotentialGrid(new_m, sample(q12_), sample(q21_), sample(q11_), sample(q22_));
}

GeneralProblem as_general(const DiracProblem& p) {
    GeneralProblem g;
    g.b = Eigen::Vector2d(p.weights.b1(), p.weights.b2());
    g.q_nodes.reserve(p.potential.m() + 1);
    for (int i = 0; i <= p.potential.m(); ++i) g.q_nodes.push_back(p.potential.node(i));
    g.C = p.bc.C;
    g.D = p.bc.D;
    return g;
}

static cplx minor2(const Eigen::Vector4cd& r1, const Eigen::Vector4cd& r2, int j, int k) {
    return r1(j) * r2(k) - r1(k) * r2(j);
}

RegularityMinors check_regularity(const BoundaryPair& bc) {
    if (bc.rank() < 2)
        throw InvalidBoundaryError("check_regularity: rank(C D) < 2");
    const Eigen::Vector4cd r1 = bc.row(0), r2 = bc.row(1);
    RegularityMinors m;
    m.j12 = minor2(r1, r2, 0, 1);
    m.j13 = minor2(r1, r2, 0, 2);
    m.j14 = minor2(r1, r2, 0, 3);
    m.j32 = minor2(r1, r2, 2, 1);
    m.j34 = minor2(r1, r2, 2, 3);
    m.j42 = minor2(r1, r2, 3, 1);

    // spectral projections of B = diag(b1, b2), b1 < 0 < b2:
    // P+ = diag(0,1), P- = diag(1,0)
    Eigen::Matrix2cd pp = Eigen::Matrix2cd::Zero(), pm = Eigen::Matrix2cd::Zero();
    pp(1, 1) = 1.0;
    pm(0, 0) = 1.0;
    m.det_proj_pm = (bc.C * pp + bc.D * pm).determinant();
    m.det_proj_mp = (bc.C * pm + bc.D * pp).determinant();

    m.regular = m.j14 * m.j32 != cplx(0.0);
    return m;
}

Reduction reduce_bc(const BoundaryPair& bc) {
    const Eigen::Vector4cd r1 = bc.row(0), r2 = bc.row(1);
    Eigen::Matrix2cd a14;
    a14 << r1(0), r1(3), r2(0), r2(3);
    cplx j14 = a14.determinant();
    double scale_ref = a14.cwiseAbs().maxCoeff();
    if (std::abs(j14) <= 1e-14 * std::max(1.0, scale_ref * scale_ref))
        throw NotReducibleError("reduce_bc: J14 = 0, conditions are not regular");
    Eigen::Matrix2cd inv = a14.inverse();
    Eigen::Matrix<cplx, 2, 4> cd;
    cd << bc.C, bc.D;
    Eigen::Matrix<cplx, 2, 4> red = inv * cd;
    Reduction out;
    out.bc = ReducedBC{red(0, 2), red(0, 1), red(1, 2), red(1, 1)};
    out.scale = inv.determinant();
    return out;
}

BoundaryPair adjoint_bc(const ReducedBC& bc, const Weights& w) {
    const double k = -w.b2() / w.b1();
    Eigen::Vector4cd r1{k * std::conj(bc.b), 1.0, 0.0, std::conj(bc.d)};
    Eigen::Vector4cd r2{std::conj(bc.a), 0.0, 1.0, std::conj(bc.c) / k};
    return BoundaryPair::from_rows(r1, r2);
}

PotentialGrid adjoint_potential(const PotentialGrid& q) {
    if (!q.off_diagonal())
        throw std::invalid_argument("adjoint_potential: potential must be off-diagonal");
    std::vector<cplx> q12(q.m() + 1), q21(q.m() + 1);
    for (int i = 0; i <= q.m(); ++i) {
        q12[i] = std::conj(q.q21()[i]);
        q21[i] = std::conj(q.q12()[i]);
    }
    return PotentialGrid(q.m(), std::move(q12), std::move(q21));
}

DiracProblem adjoint_problem(const Weights& w, const PotentialGrid& q,
                             const ReducedBC& bc) {
    return DiracProblem{w, adjoint_potential(q), adjoint_bc(bc, w)};
}

GaugeResult gauge_reduce(const DiracProblem& p) {
    const int m = p.potential.m();
    const double h = p.potential.dx();
    const cplx I(0.0, 1.0);

    // cumulative trapezoid integrals of the diagonal entries
    std::vector<cplx> w1(m + 1), w2(m + 1), k(m + 1);
    cplx s1 = 0.0, s2 = 0.0;
    w1[0] = w2[0] = k[0] = 1.0;
    for (int i = 1; i <= m; ++i) {
        s1 += 0.5 * h * (p.potential.q11_node(i - 1) + p.potential.q11_node(i));
        s2 += 0.5 * h * (p.potential.q22_node(i - 1) + p.potential.q22_node(i));
        w1[i] = std::exp(-I * p.weights.b1() * s1);
        w2[i] = std::exp(-I * p.weights.b2() * s2);
        k[i] = w2[i] / w1[i];
    }

    std::vector<cplx> q12(m + 1), q21(m + 1);
    for (int i = 0; i <= m; ++i) {
        q12[i] = k[i] * p.potential.q12()[i];
        q21[i] = p.potential.q21()[i] / k[i];
    }

    BoundaryPair bc = p.bc;
    bc.D.col(0) *= w1[m];
    bc.D.col(1) *= w2[m];

    GaugeResult out{
        DiracProblem{p.weights, PotentialGrid(m, std::move(q12), std::move(q21)), bc},
        w1[m], w2[m]};
    return out;
}

}  // namespace dirac
