#pragma once

#include "dirac/spectra.hpp"
#include "dirac/types.hpp"

namespace dirac {

/// Eigenfunction / adjoint-eigenfunction pair sampled on the x-grid.
struct RootPair {
    int n = 0;
    cplx lambda;
    std::vector<Eigen::Vector2cd> f;  // normalized eigenfunction
    std::vector<Eigen::Vector2cd> g;  // biorthogonal partner
    cplx pairing = 0.0;               // (f, g) before normalization
    double f_norm = 0.0;              // ||f|| before normalization
    bool degenerate = false;
};

/// L2 inner product (u, v) = int <u(x), v(x)> dx by trapezoid quadrature.
cplx grid_inner(const std::vector<Eigen::Vector2cd>& u, const std::vector<Eigen::Vector2cd>& v);
double grid_norm(const std::vector<Eigen::Vector2cd>& u);

/// Construct the (un-normalized) root pair(s) at a located eigenvalue: the
/// eigenfunction is Phi(., lambda) v with v the smallest singular direction
/// of U(lambda) = C + D Phi(1, lambda); the adjoint partner comes from the
/// adjoint problem at conj(lambda).  Two pairs are returned when both
/// singular values vanish (geometric multiplicity 2).
std::vector<RootPair> eigenpair_functions(const DiracProblem& p, const ReducedBC& rbc,
                                          const EigenvalueRecord& record, int grid_m);

/// Normalize f to unit norm and scale g so that (f, g) = 1; pairs whose
/// pairing is below 1e-10 relative are flagged degenerate and left with a
/// unit-norm g.
void normalize_biorthogonal(std::vector<RootPair>& pairs);

struct GramReport {
    int window = 0;                  // number of pairs used
    double max_cross_residual = 0;   // max |(f_n, g_m) - delta_nm|, non-degenerate only
    double cond = 1.0;               // condition number of the Gram matrix of {f_n}
    double bessel = 0.0;             // largest eigenvalue of the Gram matrix
    double cond_half = 1.0;          // same at window N/2 (growth trend)
    double bessel_half = 0.0;
    int degenerate_count = 0;
};

/// Truncated Bari-criterion diagnostics over the given pairs; requires at
/// least 5 non-degenerate pairs.
GramReport gram_diagnostics(const std::vector<RootPair>& pairs);

/// Gram condition number after orthonormalizing the eigenfunctions inside
/// each parenthesis block (the basis-of-subspaces surrogate).
double block_gram_condition(const std::vector<RootPair>& pairs,
                            const std::vector<std::vector<int>>& blocks);

/// Residual of -i B^{-1} f' + Q f - lambda f by central differences, for the
/// grid eigenfunction (diagnostic; first-order accurate at the ends).
double equation_residual(const DiracProblem& p, cplx lambda,
                         const std::vector<Eigen::Vector2cd>& fgrid);

}  // namespace dirac
