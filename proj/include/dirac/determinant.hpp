#pragma once

#include <functional>
#include <memory>

#include "dirac/core.hpp"
#include "dirac/types.hpp"

namespace dirac {

/// Delta0(lambda) = d + a e^{i(b1+b2)l} + (ad-bc) e^{i b1 l} + e^{i b2 l}.
cplx delta0_eval(const ReducedBC& bc, const Weights& w, cplx lambda);

/// Unreduced form J12 + J34 e^{i(b1+b2)l} + J32 e^{i b1 l} + J14 e^{i b2 l}.
cplx delta0_eval(const RegularityMinors& m, const Weights& w, cplx lambda);

/// det(C + D Phi(1, lambda)) through the propagator.
cplx delta_via_propagator(const DiracProblem& p, cplx lambda);
cplx delta_via_propagator(const GeneralProblem& p, cplx lambda);

/// Growth envelope e^{-b1 Im l} + e^{-b2 Im l} used to scale residuals.
double delta_scale(const Weights& w, cplx lambda);

/// Closed-form zero family of Delta0 for the special boundary classes.
struct ZeroListing {
    std::vector<std::pair<cplx, int>> zeros;  // (location, multiplicity), Re-sorted
    double max_abs_imag = 0.0;
    std::string branch;  // bc0 | separated | rational-poly
};

/// Returns the zeros of Delta0 with Re in [re_min, re_max] when a closed form
/// exists: (i) bc = 0 (two arithmetic progressions), (ii) a = d = 0 (single
/// progression), (iii) exact-rational ratio (polynomial in e^{i b lambda}).
/// Otherwise nullopt: use the strip search.
std::optional<ZeroListing> delta0_zero_family(const ReducedBC& bc, const Weights& w,
                                              double re_min, double re_max);

/// The characteristic polynomial P(z) = z^{n1+n2} + a z^{n2} + d z^{n1}
/// + (ad - bc) of the rational-ratio case, coefficients in ascending order.
std::vector<cplx> delta0_polynomial(const ReducedBC& bc, long n1, long n2);

/// Evaluation handle unifying the three determinant modes.
class DeterminantHandle {
public:
    enum class Mode { closed_form, propagator, kernel_trace };

    static DeterminantHandle closed_form(const ReducedBC& bc, const Weights& w);
    static DeterminantHandle closed_form(const RegularityMinors& m, const Weights& w);
    static DeterminantHandle via_propagator(DiracProblem p);
    static DeterminantHandle via_propagator(GeneralProblem p, const Weights& strip_weights);
    /// Delta0 plus the kernel-trace corrections int g_j(t) e^{i b_j l t} dt;
    /// g1, g2 sampled on the uniform grid of [0,1].
    static DeterminantHandle kernel_trace(const ReducedBC& bc, const Weights& w,
                                          std::vector<cplx> g1, std::vector<cplx> g2);

    cplx operator()(cplx lambda) const { return eval_(lambda); }
    double scale(cplx lambda) const { return delta_scale(weights_, lambda); }
    const Weights& weights() const { return weights_; }
    Mode mode() const { return mode_; }

private:
    DeterminantHandle(Mode mode, Weights w, std::function<cplx(cplx)> eval)
        : mode_(mode), weights_(w), eval_(std::move(eval)) {}

    Mode mode_;
    Weights weights_;
    std::function<cplx(cplx)> eval_;
};

}  // namespace dirac
