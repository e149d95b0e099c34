#include "dirac/propagator.hpp"

#include <cmath>

#include "dirac/core.hpp"
#include "dirac/expm.hpp"

namespace dirac {

void check_strip_height(cplx lambda, double bmax) {
    if (std::abs(lambda.imag()) * bmax > 700.0)
        throw StripTooTallError("propagate: |Im lambda| * max|b| > 700 overflows exp");
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw std::invalid_argument("propagate: non-finite lambda");
}

static Eigen::Matrix2cd step_matrix(const Weights& w, const Eigen::Matrix2cd& qmid,
                                    cplx lambda, double h) {
    const cplx I(0.0, 1.0);
    Eigen::Matrix2cd a = -qmid;
    a(0, 0) += lambda;
    a(1, 1) += lambda;
    a.row(0) *= I * w.b1() * h;
    a.row(1) *= I * w.b2() * h;
    return expm(a);
}

Trajectory propagate(const DiracProblem& p, cplx lambda) {
    check_strip_height(lambda, std::max(-p.weights.b1(), p.weights.b2()));
    const int m = p.potential.m();
    const double h = p.potential.dx();
    Trajectory out;
    out.lambda = lambda;
    out.phi.resize(m + 1);
    out.phi[0] = Eigen::Matrix2cd::Identity();
    for (int i = 0; i < m; ++i)
        out.phi[i + 1] = step_matrix(p.weights, p.potential.mid(i), lambda, h) * out.phi[i];
    return out;
}

Eigen::Matrix2cd propagate_end(const DiracProblem& p, cplx lambda) {
    check_strip_height(lambda, std::max(-p.weights.b1(), p.weights.b2()));
    const int m = p.potential.m();
    const double h = p.potential.dx();
    Eigen::Matrix2cd phi = Eigen::Matrix2cd::Identity();
    for (int i = 0; i < m; ++i)
        phi = step_matrix(p.weights, p.potential.mid(i), lambda, h) * phi;
    return phi;
}

static Eigen::MatrixXcd step_matrix_n(const Eigen::VectorXd& b, const Eigen::MatrixXcd& qmid,
                                      cplx lambda, double h) {
    const cplx I(0.0, 1.0);
    Eigen::MatrixXcd a = -qmid;
    a.diagonal().array() += lambda;
    for (int j = 0; j < b.size(); ++j) a.row(j) *= I * b(j) * h;
    return expm(a);
}

TrajectoryN propagate(const GeneralProblem& p, cplx lambda) {
    check_strip_height(lambda, p.b.cwiseAbs().maxCoeff());
    const int m = p.m();
    const double h = 1.0 / m;
    TrajectoryN out;
    out.lambda = lambda;
    out.phi.resize(m + 1);
    out.phi[0] = Eigen::MatrixXcd::Identity(p.dim(), p.dim());
    for (int i = 0; i < m; ++i) {
        Eigen::MatrixXcd qmid = 0.5 * (p.q_nodes[i] + p.q_nodes[i + 1]);
        out.phi[i + 1] = step_matrix_n(p.b, qmid, lambda, h) * out.phi[i];
    }
    return out;
}

Eigen::MatrixXcd propagate_end(const GeneralProblem& p, cplx lambda) {
    check_strip_height(lambda, p.b.cwiseAbs().maxCoeff());
    const int m = p.m();
    const double h = 1.0 / m;
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Identity(p.dim(), p.dim());
    for (int i = 0; i < m; ++i) {
        Eigen::MatrixXcd qmid = 0.5 * (p.q_nodes[i] + p.q_nodes[i + 1]);
        phi = step_matrix_n(p.b, qmid, lambda, h) * phi;
    }
    return phi;
}

std::vector<Eigen::Vector2cd> solve_cauchy_pm(const DiracProblem& p, cplx lambda, int sign) {
    Trajectory t = propagate(p, lambda);
    Eigen::Vector2cd init(1.0, sign >= 0 ? 1.0 : -1.0);
    std::vector<Eigen::Vector2cd> out(t.phi.size());
    for (size_t i = 0; i < t.phi.size(); ++i) out[i] = t.phi[i] * init;
    return out;
}

Trajectory adjoint_propagate(const DiracProblem& p, cplx lambda) {
    DiracProblem adj{p.weights, adjoint_potential(p.potential), p.bc};
    return propagate(adj, lambda);
}

Eigen::Vector2cd e0_pm(const Weights& w, cplx lambda, double x, int sign) {
    const cplx I(0.0, 1.0);
    return {std::exp(I * w.b1() * lambda * x),
            (sign >= 0 ? 1.0 : -1.0) * std::exp(I * w.b2() * lambda * x)};
}

}  // namespace dirac
