#pragma once

#include "dirac/spectra.hpp"
#include "dirac/types.hpp"

namespace dirac {

/// Damped Timoshenko beam data on [0, length]: material profiles sampled on
/// a uniform grid (m intervals), damping profiles, boundary parameters.
struct BeamCoefficients {
    double length = 1.0;
    std::vector<double> rho, irho, shear, flex;  // rho, I_rho, K, EI
    std::vector<cplx> p1, p2;                    // damping
    cplx alpha1 = 0, alpha2 = 0, beta1 = 0, beta2 = 0;

    int m() const { return int(rho.size()) - 1; }
    void validate() const;

    static BeamCoefficients constant(double rho_v, double irho_v, double shear_v,
                                     double flex_v, cplx p1_v, cplx p2_v, int m,
                                     double length = 1.0);
};

/// nu(x) = EI rho / (K I_rho) must be constant (relative spread < 1e-8).
double validate_nu(const BeamCoefficients& c);

/// The 4x4 Dirac-type reduction of the beam: B, C, D, Q(t) on t in [0,1],
/// plus the change of variable and the endpoint impedances h_j(l).
struct BeamReduction {
    Eigen::Vector4d b_diag;                  // (-b1, b1, -b2, b2)
    double b1 = 0, b2 = 0;
    double h1_end = 0, h2_end = 0;           // h_j(length)
    std::vector<Eigen::Matrix4cd> q_nodes;   // Q(t_j) on the uniform t-grid
    Eigen::Matrix4cd C, D;
    std::vector<double> t_of_x;              // t(x_i) on the beam grid
    std::vector<double> gamma;               // gamma(x_i)
    cplx alpha1 = 0, alpha2 = 0, beta1 = 0, beta2 = 0;

    int m() const { return int(q_nodes.size()) - 1; }
    /// general 4x4 problem with the off-diagonal coupling blocks scaled
    GeneralProblem problem(double coupling_scale = 1.0) const;
};

BeamReduction build_reduction(const BeamCoefficients& c);

/// Block decoupling for beta1 = beta2 = 0: two 2x2 Dirac problems with
/// separated conditions U(y) = y1(0) + y2(0), V(y) = (a-h) y1(1) + (a+h) y2(1),
/// and the sup norm of the discarded coupling block.
struct Decoupled {
    DiracProblem sub1, sub2;
    double coupling_sup = 0.0;
};
Decoupled decouple(const BeamReduction& r);

/// Zeros of det(C + D Phi4(1, lambda)) over the window.  The strip height
/// defaults to the decoupled families' height plus 1 + |coupling|.
std::vector<EigenvalueRecord> beam_spectrum(const BeamReduction& r, double re_min,
                                            double re_max, double coupling_scale = 1.0,
                                            std::optional<double> strip_h = std::nullopt,
                                            StripSearchOptions opts = {});

/// Closed-form eigenvalues of one decoupled sub-problem with zero damping.
std::optional<ZeroListing> decoupled_closed_form(const BeamReduction& r, int which,
                                                 double re_min, double re_max);

}  // namespace dirac
