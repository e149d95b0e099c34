#pragma once

#include <map>
#include <string>

#include "dirac/determinant.hpp"
#include "dirac/types.hpp"

namespace dirac {

enum class StrictVerdict { yes, no, undetermined };

/// Decision record of the strict-regularity classifier.  `branch` names the
/// criterion that fired; `witnesses` holds the evaluated quantities.
struct RegularityVerdict {
    bool regular = false;
    StrictVerdict strict = StrictVerdict::undetermined;
    std::string branch;
    std::vector<std::pair<std::string, double>> witnesses;
    std::string numerical_hint;  // filled by numerical_separation when attached

    double witness(const std::string& name) const {
        for (const auto& [k, v] : witnesses)
            if (k == name) return v;
        throw std::out_of_range("no witness " + name);
    }
};

/// Algebraic classifier for the reduced conditions (a, b, c, d).  Branch
/// order: non-regular, separated, rational polynomial (needs the exact tag),
/// bc = 0 criteria, a = 0 criteria, undetermined.  The untagged ratio is
/// treated as irrational; a continued-fraction probe only annotates.
RegularityVerdict classify_strict(const ReducedBC& bc, const Weights& w);

/// The a = 0 rational criterion n1^n1 n2^n2 (-d)^{n1+n2} != (n1+n2)^{n1+n2} (-bc)^{n2}
/// evaluated directly (exposed for cross-validation against the polynomial
/// branch); returns |lhs - rhs| and the verdict.
std::pair<bool, double> a0_rational_criterion(const ReducedBC& bc, long n1, long n2);

/// Critical d* = -(alpha+1) (|bc| alpha^{-alpha})^{1/(alpha+1)} of the a = 0
/// irrational criterion.
double a0_critical_d(double alpha, double abs_bc);

/// Real-axis zero extraction for a = 0, bc < 0 real, d real, irrational
/// alpha < 1: per admissible interval solve the monotone equation
/// f(x) = -d by bisection and lift to lambda = (pi x + i y)/b2.
std::vector<cplx> a0_real_zeros(const ReducedBC& bc, const Weights& w,
                                double re_min, double re_max);

/// Windowed separation diagnostic: minimum pairwise gap among zeros in the
/// outer half of windows T0 * 2^k, k = 0..k_max.
struct SeparationReport {
    std::vector<double> windows;
    std::vector<double> min_gaps;
    std::vector<int> counts;
    std::string hint;  // separated | collapsing | inconclusive
};
SeparationReport numerical_separation(const DeterminantHandle& f, double strip_h,
                                      double t0, int k_max = 3);

/// Search the deterministic candidate list for w such that
/// P_w(z) = z^{n1+n2} + J12 z^{n1} + w J34 z^{n2} + w J32 has simple roots
/// (minors normalized to J14 = 1).  Throws WeightSearchError after 64 tries.
struct StrictifyingWeight {
    cplx w;
    std::vector<cplx> roots;
    double min_gap;
};
StrictifyingWeight find_strictifying_weight(const BoundaryPair& bc, const Weights& w);

}  // namespace dirac
