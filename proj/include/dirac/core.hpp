#pragma once

#include "dirac/types.hpp"

namespace dirac {

/// The six 2x2 minors J_jk = det(A_jk) of the block (C D), where A_jk picks
/// columns j and k, together with the projected determinants of the
/// regularity test det(C P+ + D P-) and det(C P- + D P+).
struct RegularityMinors {
    cplx j12, j13, j14, j32, j34, j42;
    cplx det_proj_pm;  // det(C P+ + D P-) = J32
    cplx det_proj_mp;  // det(C P- + D P+) = J14
    bool regular;      // J14 * J32 != 0
};

/// Evaluate the minors and the regularity criterion J14*J32 != 0.
/// Throws InvalidBoundaryError when rank(C D) < 2.
RegularityMinors check_regularity(const BoundaryPair& bc);

struct Reduction {
    ReducedBC bc;
    cplx scale;  // det A14^{-1}; multiplies the characteristic determinant
};

/// Normalize boundary conditions by A14^{-1} to the reduced form with
/// J14 = 1.  Throws NotReducibleError when J14 = 0.
Reduction reduce_bc(const BoundaryPair& bc);

/// Boundary rows of the adjoint problem for reduced conditions (a,b,c,d):
///   U*1(y) = k conj(b) y1(0) + y2(0) + conj(d) y2(1),
///   U*2(y) = conj(a) y1(0) + y1(1) + k^{-1} conj(c) y2(1),
/// with k = -b2/b1.
BoundaryPair adjoint_bc(const ReducedBC& bc, const Weights& w);

/// Adjoint potential Q*(x) = codiag(conj Q21, conj Q12) (off-diagonal Q).
PotentialGrid adjoint_potential(const PotentialGrid& q);

/// Full adjoint problem; requires an off-diagonal potential and reduced BC.
DiracProblem adjoint_problem(const Weights& w, const PotentialGrid& q,
                             const ReducedBC& bc);

struct GaugeResult {
    DiracProblem problem;  // off-diagonal potential, reweighted D columns
    cplx w1_end, w2_end;   // w_j(1)
};

/// Remove the diagonal of the potential by the similarity
/// w_j(x) = exp(-i b_j int_0^x Q_jj); the spectrum is preserved while the
/// columns of D pick up the factors w_1(1), w_2(1).
GaugeResult gauge_reduce(const DiracProblem& p);

}  // namespace dirac
