#include "dirac/determinant.hpp"

#include <algorithm>
#include <cmath>

#include "dirac/polyroots.hpp"
#include "dirac/propagator.hpp"

namespace dirac {

cplx delta0_eval(const ReducedBC& bc, const Weights& w, cplx lambda) {
    check_strip_height(lambda, std::max(-w.b1(), w.b2()));
    const cplx I(0.0, 1.0);
    return bc.d + bc.a * std::exp(I * (w.b1() + w.b2()) * lambda) +
           bc.det() * std::exp(I * w.b1() * lambda) + std::exp(I * w.b2() * lambda);
}

cplx delta0_eval(const RegularityMinors& m, const Weights& w, cplx lambda) {
    check_strip_height(lambda, std::max(-w.b1(), w.b2()));
    const cplx I(0.0, 1.0);
    return m.j12 + m.j34 * std::exp(I * (w.b1() + w.b2()) * lambda) +
           m.j32 * std::exp(I * w.b1() * lambda) + m.j14 * std::exp(I * w.b2() * lambda);
}

cplx delta_via_propagator(const DiracProblem& p, cplx lambda) {
    return (p.bc.C + p.bc.D * propagate_end(p, lambda)).determinant();
}

cplx delta_via_propagator(const GeneralProblem& p, cplx lambda) {
    return (p.C + p.D * propagate_end(p, lambda)).determinant();
}

double delta_scale(const Weights& w, cplx lambda) {
    return std::exp(-w.b1() * lambda.imag()) + std::exp(-w.b2() * lambda.imag());
}

std::vector<cplx> delta0_polynomial(const ReducedBC& bc, long n1, long n2) {
    std::vector<cplx> c(size_t(n1 + n2 + 1), cplx(0.0));
    c[0] += bc.det();
    c[size_t(n1)] += bc.d;
    c[size_t(n2)] += bc.a;
    c[size_t(n1 + n2)] += 1.0;
    return c;
}

namespace {

/// Append lambda = re0 + n*step + i*im with Re in window, n in Z.
void emit_progression(std::vector<std::pair<cplx, int>>& out, double re0, double step,
                      double im, double re_min, double re_max) {
    if (step < 0) {
        step = -step;  // reindexing n -> -n keeps the same set
    }
    long n_lo = long(std::ceil((re_min - re0) / step - 1e-12));
    long n_hi = long(std::floor((re_max - re0) / step + 1e-12));
    for (long n = n_lo; n <= n_hi; ++n)
        out.emplace_back(cplx(re0 + double(n) * step, im), 1);
}

void merge_coincident(std::vector<std::pair<cplx, int>>& zeros, double tol) {
    std::sort(zeros.begin(), zeros.end(), [](const auto& a, const auto& b) {
        return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                                : a.first.imag() < b.first.imag();
    });
    std::vector<std::pair<cplx, int>> merged;
    for (const auto& z : zeros) {
        if (!merged.empty() && std::abs(merged.back().first - z.first) <= tol)
            merged.back().second += z.second;
        else
            merged.push_back(z);
    }
    zeros.swap(merged);
}

}  // namespace

std::optional<ZeroListing> delta0_zero_family(const ReducedBC& bc, const Weights& w,
                                              double re_min, double re_max) {
    const cplx prod = bc.b * bc.c;
    ZeroListing out;

    if (bc.b * bc.c == cplx(0.0) && bc.a != cplx(0.0) && bc.d != cplx(0.0)) {
        // Delta0 = (1 + a e^{i b1 l})(d + e^{i b2 l})
        out.branch = "bc0";
        double im1 = std::log(std::abs(bc.a)) / w.b1();
        double re1 = std::arg(-1.0 / bc.a) / w.b1();
        emit_progression(out.zeros, re1, 2.0 * M_PI / w.b1(), im1, re_min, re_max);
        double im2 = -std::log(std::abs(bc.d)) / w.b2();
        double re2 = std::arg(-bc.d) / w.b2();
        emit_progression(out.zeros, re2, 2.0 * M_PI / w.b2(), im2, re_min, re_max);
        merge_coincident(out.zeros, 1e-9);
        out.max_abs_imag = std::max(std::abs(im1), std::abs(im2));
        return out;
    }

    if (bc.a == cplx(0.0) && bc.d == cplx(0.0) && prod != cplx(0.0)) {
        // Delta0 = e^{i b2 l} - bc e^{i b1 l}: zeros of e^{i(b2-b1)l} = bc
        out.branch = "separated";
        double span = w.span();
        double im = -std::log(std::abs(prod)) / span;
        double re = std::arg(prod) / span;
        emit_progression(out.zeros, re, 2.0 * M_PI / span, im, re_min, re_max);
        out.max_abs_imag = std::abs(im);
        return out;
    }

    if (w.has_rational()) {
        out.branch = "rational-poly";
        auto [n1, n2] = w.rational();
        const double base = w.rational_base();
        auto roots = poly_roots(delta0_polynomial(bc, n1, n2));
        double rmax = 1.0;
        for (const cplx& z : roots) rmax = std::max(rmax, std::abs(z));
        auto clusters = cluster_roots(roots, 1e-7 * rmax);
        for (const auto& [z, mult] : clusters) {
            if (std::abs(z) == 0.0) continue;  // cannot happen for regular bc
            double im = -std::log(std::abs(z)) / base;
            double re = std::arg(z) / base;
            out.max_abs_imag = std::max(out.max_abs_imag, std::abs(im));
            std::vector<std::pair<cplx, int>> prog;
            emit_progression(prog, re, 2.0 * M_PI / base, im, re_min, re_max);
            for (auto& p : prog) out.zeros.emplace_back(p.first, mult);
        }
        merge_coincident(out.zeros, 1e-9);
        return out;
    }

    return std::nullopt;
}

DeterminantHandle DeterminantHandle::closed_form(const ReducedBC& bc, const Weights& w) {
    return DeterminantHandle(Mode::closed_form, w,
                             [bc, w](cplx l) { return delta0_eval(bc, w, l); });
}

DeterminantHandle DeterminantHandle::closed_form(const RegularityMinors& m, const Weights& w) {
    return DeterminantHandle(Mode::closed_form, w,
                             [m, w](cplx l) { return delta0_eval(m, w, l); });
}

DeterminantHandle DeterminantHandle::via_propagator(DiracProblem p) {
    Weights w = p.weights;
    auto shared = std::make_shared<DiracProblem>(std::move(p));
    return DeterminantHandle(Mode::propagator, w,
                             [shared](cplx l) { return delta_via_propagator(*shared, l); });
}

DeterminantHandle DeterminantHandle::via_propagator(GeneralProblem p, const Weights& sw) {
    auto shared = std::make_shared<GeneralProblem>(std::move(p));
    return DeterminantHandle(Mode::propagator, sw,
                             [shared](cplx l) { return delta_via_propagator(*shared, l); });
}

DeterminantHandle DeterminantHandle::kernel_trace(const ReducedBC& bc, const Weights& w,
                                                  std::vector<cplx> g1, std::vector<cplx> g2) {
    auto eval = [bc, w, g1 = std::move(g1), g2 = std::move(g2)](cplx lambda) {
        const cplx I(0.0, 1.0);
        cplx total = delta0_eval(bc, w, lambda);
        const int n = int(g1.size()) - 1;
        const double h = 1.0 / n;
        cplx s1 = 0.0, s2 = 0.0;
        for (int j = 0; j <= n; ++j) {
            double t = j * h;
            double wgt = (j == 0 || j == n) ? 0.5 : 1.0;
            s1 += wgt * g1[j] * std::exp(I * w.b1() * lambda * t);
            s2 += wgt * g2[j] * std::exp(I * w.b2() * lambda * t);
        }
        return total + h * (s1 + s2);
    };
    return DeterminantHandle(Mode::kernel_trace, w, std::move(eval));
}

}  // namespace dirac
