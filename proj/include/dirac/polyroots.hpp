#pragma once

#include <vector>

#include "dirac/types.hpp"

namespace dirac {

/// All roots of c[0] + c[1] z + ... + c[n] z^n via companion-matrix
/// eigenvalues.  Leading zero coefficients are stripped first.
std::vector<cplx> poly_roots(std::vector<cplx> coeffs);

/// Cluster a root list into (center, multiplicity) pairs: roots closer than
/// tol are merged and averaged.  Sorted by (Re, Im) for determinism.
std::vector<std::pair<cplx, int>> cluster_roots(std::vector<cplx> roots, double tol);

/// Smallest pairwise distance (infinity for fewer than two roots).
double min_root_gap(const std::vector<cplx>& roots);

}  // namespace dirac
