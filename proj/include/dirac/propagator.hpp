#pragma once

#include "dirac/types.hpp"

namespace dirac {

/// Fundamental matrix Phi(x_i, lambda) on the uniform grid, Phi(0) = I.
struct Trajectory {
    cplx lambda;
    std::vector<Eigen::Matrix2cd> phi;  // m+1 nodes

    int m() const { return int(phi.size()) - 1; }
    const Eigen::Matrix2cd& end() const { return phi.back(); }
};

struct TrajectoryN {
    cplx lambda;
    std::vector<Eigen::MatrixXcd> phi;

    int m() const { return int(phi.size()) - 1; }
    const Eigen::MatrixXcd& end() const { return phi.back(); }
};

/// Guard shared by all determinant/propagation evaluations: the scheme
/// overflows once |Im lambda| * max|b_j| exceeds the exp range.
void check_strip_height(cplx lambda, double bmax);

/// Integrate y' = iB(lambda I - Q(x)) y with the midpoint-exponential
/// (commutator-free Magnus order 2) scheme; exact when Q = 0.
Trajectory propagate(const DiracProblem& p, cplx lambda);
TrajectoryN propagate(const GeneralProblem& p, cplx lambda);

/// End value Phi(1, lambda) without storing the trajectory.
Eigen::Matrix2cd propagate_end(const DiracProblem& p, cplx lambda);
Eigen::MatrixXcd propagate_end(const GeneralProblem& p, cplx lambda);

/// e_pm(x; lambda) = Phi(x, lambda) (1, s)^T, s = +1 or -1.
std::vector<Eigen::Vector2cd> solve_cauchy_pm(const DiracProblem& p, cplx lambda, int sign);

/// Trajectory of the adjoint system -iB^{-1}y' + Q*(x)y = lambda y.
Trajectory adjoint_propagate(const DiracProblem& p, cplx lambda);

/// Unperturbed solution e0_pm(x; lambda) = (e^{i b1 lambda x}, s e^{i b2 lambda x}).
Eigen::Vector2cd e0_pm(const Weights& w, cplx lambda, double x, int sign);

}  // namespace dirac
