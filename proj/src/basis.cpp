#include "dirac/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dirac/core.hpp"
#include "dirac/propagator.hpp"

namespace dirac {

cplx grid_inner(const std::vector<Eigen::Vector2cd>& u, const std::vector<Eigen::Vector2cd>& v) {
    const int m = int(u.size()) - 1;
    const double h = 1.0 / m;
    cplx acc = 0.0;
    for (int i = 0; i <= m; ++i) {
        double wgt = (i == 0 || i == m) ? 0.5 : 1.0;
        acc += wgt * (u[i](0) * std::conj(v[i](0)) + u[i](1) * std::conj(v[i](1)));
    }
    return acc * h;
}

double grid_norm(const std::vector<Eigen::Vector2cd>& u) {
    return std::sqrt(std::abs(grid_inner(u, u)));
}

std::vector<RootPair> eigenpair_functions(const DiracProblem& p, const ReducedBC& rbc,
                                          const EigenvalueRecord& record, int grid_m) {
    DiracProblem prob{p.weights, p.potential.resampled(grid_m), p.bc};
    Trajectory traj = propagate(prob, record.lambda);
    const Eigen::Matrix2cd u = prob.bc.C + prob.bc.D * traj.end();

    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(u, Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(1);
    const double small = 1e-6 * std::max(1.0, smax);
    if (smin > small) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "eigenpair_functions: U(lambda) is regular (sigma_min %.3e)", smin);
        throw NotAnEigenvalueError(buf);
    }
    const bool double_null = smax <= small;

    DiracProblem adj = adjoint_problem(p.weights, prob.potential, rbc);
    Trajectory atraj = propagate(adj, std::conj(record.lambda));
    const Eigen::Matrix2cd ua = adj.bc.C + adj.bc.D * atraj.end();
    Eigen::JacobiSVD<Eigen::Matrix2cd> asvd(ua, Eigen::ComputeFullV);

    auto build = [&](const Trajectory& t, const Eigen::Vector2cd& v) {
        std::vector<Eigen::Vector2cd> out(t.phi.size());
        for (size_t i = 0; i < t.phi.size(); ++i) out[i] = t.phi[i] * v;
        return out;
    };

    std::vector<RootPair> pairs;
    const int copies = double_null ? 2 : 1;
    for (int k = 0; k < copies; ++k) {
        RootPair rp;
        rp.n = record.n;
        rp.lambda = record.lambda;
        rp.f = build(traj, svd.matrixV().col(1 - k));
        rp.g = build(atraj, asvd.matrixV().col(1 - k));
        pairs.push_back(std::move(rp));
    }
    if (copies == 2) {
        // pick the g-assignment with the stronger diagonal pairing
        const cplx p11 = grid_inner(pairs[0].f, pairs[0].g);
        const cplx p22 = grid_inner(pairs[1].f, pairs[1].g);
        const cplx p12 = grid_inner(pairs[0].f, pairs[1].g);
        const cplx p21 = grid_inner(pairs[1].f, pairs[0].g);
        if (std::abs(p11) + std::abs(p22) < std::abs(p12) + std::abs(p21))
            std::swap(pairs[0].g, pairs[1].g);
    }
    return pairs;
}

void normalize_biorthogonal(std::vector<RootPair>& pairs) {
    for (RootPair& rp : pairs) {
        const double fn = grid_norm(rp.f);
        const double gn = grid_norm(rp.g);
        if (fn == 0.0 || gn == 0.0) {
            rp.degenerate = true;
            continue;
        }
        for (auto& v : rp.f) v /= fn;
        rp.f_norm = fn;
        const cplx pairing = grid_inner(rp.f, rp.g);
        rp.pairing = pairing * fn;  // value for the original f
        if (std::abs(rp.pairing) < 1e-10 * fn * gn) {
            rp.degenerate = true;
            for (auto& v : rp.g) v /= gn;
            continue;
        }
        // (f/|f|, c g) = conj(c) (f,g)/|f| = 1  =>  c = |f| ... / conj pairing
        const cplx c = 1.0 / std::conj(pairing);
        for (auto& v : rp.g) v *= c;
    }
}

namespace {

Eigen::MatrixXcd gram_of(const std::vector<const RootPair*>& ps) {
    const int n = int(ps.size());
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = grid_inner(ps[i]->f, ps[j]->f);
    return g;
}

double cond_of(const Eigen::MatrixXcd& g) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1)
                               : std::numeric_limits<double>::infinity();
}

}  // namespace

GramReport gram_diagnostics(const std::vector<RootPair>& pairs) {
    std::vector<const RootPair*> live;
    int degenerate = 0;
    for (const auto& rp : pairs) {
        if (rp.degenerate)
            ++degenerate;
        else
            live.push_back(&rp);
    }
    if (int(live.size()) < 5)
        throw InsufficientDataError("gram_diagnostics: need at least 5 non-degenerate pairs");

    GramReport rep;
    rep.window = int(live.size());
    rep.degenerate_count = degenerate;

    for (size_t i = 0; i < live.size(); ++i)
        for (size_t j = 0; j < live.size(); ++j) {
            const cplx cross = grid_inner(live[i]->f, live[j]->g);
            const double want = (i == j) ? 1.0 : 0.0;
            rep.max_cross_residual = std::max(rep.max_cross_residual, std::abs(cross - want));
        }

    Eigen::MatrixXcd g = gram_of(live);
    rep.cond = cond_of(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (g + g.adjoint()));
    rep.bessel = es.eigenvalues().maxCoeff();

    // half window: the |n|-smallest half of the pairs
    std::vector<const RootPair*> half = live;
    std::sort(half.begin(), half.end(), [](const RootPair* a, const RootPair* b) {
        return std::abs(a->n) != std::abs(b->n) ? std::abs(a->n) < std::abs(b->n)
                                                : a->n < b->n;
    });
    half.resize(std::max<size_t>(5, half.size() / 2));
    Eigen::MatrixXcd gh = gram_of(half);
    rep.cond_half = cond_of(gh);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esh(0.5 * (gh + gh.adjoint()));
    rep.bessel_half = esh.eigenvalues().maxCoeff();
    return rep;
}

double block_gram_condition(const std::vector<RootPair>& pairs,
                            const std::vector<std::vector<int>>& blocks) {
    // within-block Gram-Schmidt, then the Gram of the resulting system
    std::vector<std::vector<Eigen::Vector2cd>> ortho;
    for (const auto& block : blocks) {
        std::vector<std::vector<Eigen::Vector2cd>> local;
        for (int idx : block) {
            std::vector<Eigen::Vector2cd> v = pairs[idx].f;
            for (const auto& u : local) {
                const cplx proj = grid_inner(v, u);
                for (size_t i = 0; i < v.size(); ++i) v[i] -= proj * u[i];
            }
            const double nrm = grid_norm(v);
            if (nrm < 1e-12) continue;  // linearly dependent inside the block
            for (auto& x : v) x /= nrm;
            local.push_back(std::move(v));
        }
        for (auto& v : local) ortho.push_back(std::move(v));
    }
    const int n = int(ortho.size());
    if (n == 0) return 1.0;
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = grid_inner(ortho[i], ortho[j]);
    return cond_of(g);
}

double equation_residual(const DiracProblem& p, cplx lambda,
                         const std::vector<Eigen::Vector2cd>& fgrid) {
    const int m = int(fgrid.size()) - 1;
    const double h = 1.0 / m;
    PotentialGrid q = p.potential.resampled(m);
    double res = 0.0;
    const cplx mi(0.0, -1.0);
    for (int i = 1; i < m; ++i) {
        Eigen::Vector2cd df = (fgrid[i + 1] - fgrid[i - 1]) / (2.0 * h);
        Eigen::Vector2cd lhs;
        lhs(0) = mi * df(0) / p.weights.b1();
        lhs(1) = mi * df(1) / p.weights.b2();
        lhs += q.node(i) * fgrid[i] - lambda * fgrid[i];
        res = std::max(res, lhs.cwiseAbs().maxCoeff());
    }
    return res;
}

}  // namespace dirac
