#include "dirac/timoshenko.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dirac/core.hpp"
#include "dirac/determinant.hpp"

namespace dirac {

void BeamCoefficients::validate() const {
    const size_t n = rho.size();
    if (n < 3 || irho.size() != n || shear.size() != n || flex.size() != n ||
        p1.size() != n || p2.size() != n)
        throw InvalidProfileError("BeamCoefficients: inconsistent sample counts");
    if (!(length > 0.0)) throw InvalidProfileError("BeamCoefficients: length <= 0");
    for (size_t i = 0; i < n; ++i) {
        if (!(rho[i] > 0.0 && irho[i] > 0.0 && shear[i] > 0.0 && flex[i] > 0.0))
            throw InvalidProfileError("BeamCoefficients: profiles must be positive");
        if (!std::isfinite(std::abs(p1[i])) || !std::isfinite(std::abs(p2[i])))
            throw InvalidProfileError("BeamCoefficients: non-finite damping sample");
    }
}

BeamCoefficients BeamCoefficients::constant(double rho_v, double irho_v, double shear_v,
                                            double flex_v, cplx p1_v, cplx p2_v, int m,
                                            double length) {
    BeamCoefficients c;
    c.length = length;
    c.rho.assign(m + 1, rho_v);
    c.irho.assign(m + 1, irho_v);
    c.shear.assign(m + 1, shear_v);
    c.flex.assign(m + 1, flex_v);
    c.p1.assign(m + 1, p1_v);
    c.p2.assign(m + 1, p2_v);
    return c;
}

double validate_nu(const BeamCoefficients& c) {
    c.validate();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (size_t i = 0; i < c.rho.size(); ++i) {
        const double nu = c.flex[i] * c.rho[i] / (c.shear[i] * c.irho[i]);
        lo = std::min(lo, nu);
        hi = std::max(hi, nu);
    }
    if ((hi - lo) > 1e-8 * hi) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "validate_nu: nu(x) varies by %.3e relative (must be constant)",
                      (hi - lo) / hi);
        throw ReductionHypothesisError(buf);
    }
    return 0.5 * (lo + hi);
}

BeamReduction build_reduction(const BeamCoefficients& c) {
    const double nu = validate_nu(c);
    const int m = c.m();
    const double dx = c.length / m;

    // sqrt(I_rho/EI) = b1 * gamma with int gamma = 1
    std::vector<double> graw(m + 1);
    for (int i = 0; i <= m; ++i) graw[i] = std::sqrt(c.irho[i] / c.flex[i]);
    double b1 = 0.0;
    for (int i = 0; i < m; ++i) b1 += 0.5 * dx * (graw[i] + graw[i + 1]);
    if (!(b1 > 0.0)) throw InvalidProfileError("build_reduction: gamma not integrable");
    const double b2 = b1 * std::sqrt(nu);

    BeamReduction r;
    r.b1 = b1;
    r.b2 = b2;
    r.b_diag = Eigen::Vector4d(-b1, b1, -b2, b2);
    r.gamma.resize(m + 1);
    for (int i = 0; i <= m; ++i) r.gamma[i] = graw[i] / b1;

    std::vector<double> h1(m + 1), h2(m + 1), dh1(m + 1), dh2(m + 1);
    for (int i = 0; i <= m; ++i) {
        h1[i] = std::sqrt(c.flex[i] * c.irho[i]);
        h2[i] = std::sqrt(c.shear[i] * c.rho[i]);
    }
    for (int i = 0; i <= m; ++i) {
        if (i == 0) {
            dh1[i] = (h1[1] - h1[0]) / dx;
            dh2[i] = (h2[1] - h2[0]) / dx;
        } else if (i == m) {
            dh1[i] = (h1[m] - h1[m - 1]) / dx;
            dh2[i] = (h2[m] - h2[m - 1]) / dx;
        } else {
            dh1[i] = (h1[i + 1] - h1[i - 1]) / (2 * dx);
            dh2[i] = (h2[i + 1] - h2[i - 1]) / (2 * dx);
        }
    }
    r.h1_end = h1[m];
    r.h2_end = h2[m];

    auto qhat = [&](int i) {
        Eigen::Matrix4cd mmat;
        const cplx p1 = c.p1[i], p2 = c.p2[i];
        mmat << p1 + dh1[i], p1 - dh1[i], h2[i], -h2[i],
                p1 + dh1[i], p1 - dh1[i], h2[i], -h2[i],
                -h2[i], -h2[i], p2 + dh2[i], p2 - dh2[i],
                h2[i], h2[i], p2 + dh2[i], p2 - dh2[i];
        const cplx wtop = cplx(0.0, 0.5) / c.irho[i];  // 1/(-2i I_rho)
        const cplx wbot = cplx(0.0, 0.5) / c.rho[i];
        mmat.topRows<2>() *= wtop;
        mmat.bottomRows<2>() *= wbot;
        return mmat;
    };

    // change of variable t(x) (normalized to t(l) = 1 exactly)
    r.t_of_x.assign(m + 1, 0.0);
    for (int i = 1; i <= m; ++i)
        r.t_of_x[i] = r.t_of_x[i - 1] + 0.5 * dx * (r.gamma[i - 1] + r.gamma[i]);
    const double tend = r.t_of_x[m];
    for (double& t : r.t_of_x) t /= tend;

    // resample Q-hat onto the uniform t-grid
    r.q_nodes.resize(m + 1);
    int seg = 0;
    for (int j = 0; j <= m; ++j) {
        const double t = double(j) / m;
        while (seg + 1 < m && r.t_of_x[seg + 1] < t) ++seg;
        const double t0 = r.t_of_x[seg], t1 = r.t_of_x[seg + 1];
        const double u = (t1 > t0) ? std::min(std::max((t - t0) / (t1 - t0), 0.0), 1.0) : 0.0;
        r.q_nodes[j] = (1.0 - u) * qhat(seg) + u * qhat(seg + 1);
    }

    r.C = Eigen::Matrix4cd::Zero();
    r.C(0, 0) = r.C(0, 1) = 1.0;
    r.C(2, 2) = r.C(2, 3) = 1.0;
    r.D = Eigen::Matrix4cd::Zero();
    r.D(1, 0) = c.alpha1 - r.h1_end;
    r.D(1, 1) = c.alpha1 + r.h1_end;
    r.D(1, 2) = c.beta1;
    r.D(1, 3) = c.beta1;
    r.D(3, 0) = c.beta2;
    r.D(3, 1) = c.beta2;
    r.D(3, 2) = c.alpha2 - r.h2_end;
    r.D(3, 3) = c.alpha2 + r.h2_end;
    r.alpha1 = c.alpha1;
    r.alpha2 = c.alpha2;
    r.beta1 = c.beta1;
    r.beta2 = c.beta2;
    return r;
}

GeneralProblem BeamReduction::problem(double coupling_scale) const {
    GeneralProblem g;
    g.b = b_diag;
    g.q_nodes.reserve(q_nodes.size());
    for (const auto& q : q_nodes) {
        Eigen::MatrixXcd qs = q;
        qs.block<2, 2>(0, 2) *= coupling_scale;
        qs.block<2, 2>(2, 0) *= coupling_scale;
        g.q_nodes.push_back(std::move(qs));
    }
    g.C = C;
    g.D = D;
    return g;
}

Decoupled decouple(const BeamReduction& r) {
    if (r.beta1 != cplx(0.0) || r.beta2 != cplx(0.0))
        throw NotDecoupledError("decouple: requires beta1 = beta2 = 0");
    const double h[2] = {r.h1_end, r.h2_end};
    const cplx alpha[2] = {r.alpha1, r.alpha2};
    const double bj[2] = {r.b1, r.b2};
    const int m = r.m();

    double sup = 0.0;
    for (const auto& q : r.q_nodes) {
        sup = std::max(sup, q.block<2, 2>(0, 2).cwiseAbs().maxCoeff());
        sup = std::max(sup, q.block<2, 2>(2, 0).cwiseAbs().maxCoeff());
    }

    std::optional<DiracProblem> subs[2];
    for (int j = 0; j < 2; ++j) {
        if (std::abs(alpha[j] - h[j]) <= 1e-12 * (std::abs(alpha[j]) + h[j] + 1.0) ||
            std::abs(alpha[j] + h[j]) <= 1e-12 * (std::abs(alpha[j]) + h[j] + 1.0)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf),
                          "decouple: alpha_%d = +-h_%d(l), separated conditions degenerate",
                          j + 1, j + 1);
            throw InvalidBoundaryError(buf);
        }
        std::vector<cplx> q11(m + 1), q12(m + 1), q21(m + 1), q22(m + 1);
        const int off = 2 * j;
        for (int i = 0; i <= m; ++i) {
            q11[i] = r.q_nodes[i](off, off);
            q12[i] = r.q_nodes[i](off, off + 1);
            q21[i] = r.q_nodes[i](off + 1, off);
            q22[i] = r.q_nodes[i](off + 1, off + 1);
        }
        Weights w(-bj[j], bj[j], std::make_pair(1L, 1L));
        PotentialGrid q(m, std::move(q12), std::move(q21), std::move(q11), std::move(q22));
        BoundaryPair bc = BoundaryPair::from_rows(
            {1, 1, 0, 0}, {0, 0, alpha[j] - h[j], alpha[j] + h[j]});
        subs[j] = DiracProblem{w, std::move(q), bc};
    }
    return Decoupled{std::move(*subs[0]), std::move(*subs[1]), sup};
}

std::optional<ZeroListing> decoupled_closed_form(const BeamReduction& r, int which,
                                                 double re_min, double re_max) {
    const double h = which == 1 ? r.h1_end : r.h2_end;
    const cplx alpha = which == 1 ? r.alpha1 : r.alpha2;
    const double bj = which == 1 ? r.b1 : r.b2;
    const cplx ratio = (alpha - h) / (alpha + h);
    if (ratio == cplx(0.0)) return std::nullopt;
    Weights w(-bj, bj, std::make_pair(1L, 1L));
    return delta0_zero_family(ReducedBC::separated(1.0, ratio), w, re_min, re_max);
}

std::vector<EigenvalueRecord> beam_spectrum(const BeamReduction& r, double re_min,
                                            double re_max, double coupling_scale,
                                            std::optional<double> strip_h,
                                            StripSearchOptions opts) {
    double h = 0.0;
    if (strip_h) {
        h = *strip_h;
    } else {
        for (int which = 1; which <= 2; ++which)
            if (auto listing = decoupled_closed_form(r, which, re_min, re_max))
                h = std::max(h, listing->max_abs_imag);
        double sup = 0.0;
        for (const auto& q : r.q_nodes) sup = std::max(sup, q.cwiseAbs().maxCoeff());
        h += 1.0 + sup;
    }
    const double span = r.b1 + r.b2;  // box cap 2*pi / (sum |b_j|) = pi/(b1+b2)
    Weights strip_weights(-span, span);
    auto handle = DeterminantHandle::via_propagator(r.problem(coupling_scale), strip_weights);
    return find_zeros_strip(handle, Strip(h, re_min, re_max), opts);
}

}  // namespace dirac
