#include "dirac/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "dirac/core.hpp"
#include "dirac/polyroots.hpp"
#include "dirac/spectra.hpp"

namespace dirac {

std::pair<bool, double> a0_rational_criterion(const ReducedBC& bc, long n1, long n2) {
    const cplx lhs = std::pow(double(n1), double(n1)) * std::pow(double(n2), double(n2)) *
                     std::pow(-bc.d, double(n1 + n2));
    const cplx rhs = std::pow(double(n1 + n2), double(n1 + n2)) *
                     std::pow(-bc.b * bc.c, double(n2));
    const double dist = std::abs(lhs - rhs);
    return {dist > 1e-9 * (std::abs(lhs) + std::abs(rhs) + 1.0), dist};
}

double a0_critical_d(double alpha, double abs_bc) {
    return -(alpha + 1.0) * std::pow(abs_bc * std::pow(alpha, -alpha), 1.0 / (alpha + 1.0));
}

RegularityVerdict classify_strict(const ReducedBC& bc, const Weights& w) {
    RegularityVerdict v;
    const cplx det = bc.det();
    v.regular = det != cplx(0.0);
    if (!v.regular) {
        v.strict = StrictVerdict::no;
        v.branch = "non-regular";
        v.witnesses.emplace_back("abs_det", 0.0);
        return v;
    }

    if (bc.a == cplx(0.0) && bc.d == cplx(0.0)) {
        v.strict = StrictVerdict::yes;
        v.branch = "separated";
        v.witnesses.emplace_back("abs_bc", std::abs(bc.b * bc.c));
        return v;
    }

    if (w.has_rational()) {
        auto [n1, n2] = w.rational();
        auto roots = poly_roots(delta0_polynomial(bc, n1, n2));
        // companion eigenvalues of a multiple root scatter at the sqrt(eps)
        // scale, so the clustering tolerance sits above it
        double rmax = 1.0;
        for (const cplx& z : roots) rmax = std::max(rmax, std::abs(z));
        auto clusters = cluster_roots(roots, 1e-7 * rmax);
        bool simple = true;
        for (const auto& [z, mult] : clusters) simple = simple && mult == 1;
        v.strict = simple ? StrictVerdict::yes : StrictVerdict::no;
        if (n1 == 1 && n2 == 1) {
            v.branch = "dirac-discriminant";
            const cplx disc = (bc.a - bc.d) * (bc.a - bc.d) + 4.0 * bc.b * bc.c;
            v.witnesses.emplace_back("disc", std::abs(disc));
        } else {
            v.branch = "rational-poly";
            v.witnesses.emplace_back("min_root_gap", min_root_gap(roots));
        }
        return v;
    }

    const cplx prod = bc.b * bc.c;
    if (prod == cplx(0.0)) {
        const double crit = w.b1() * std::log(std::abs(bc.d)) +
                            w.b2() * std::log(std::abs(bc.a));
        v.witnesses.emplace_back("crit", crit);
        if (std::abs(crit) > 1e-12 * (1.0 + std::abs(w.b1() * std::log(std::abs(bc.d))) +
                                      std::abs(w.b2() * std::log(std::abs(bc.a))))) {
            v.strict = StrictVerdict::yes;
            v.branch = "bc0-i";
        } else {
            // untagged ratio is treated as irrational (Lemma (ii)); the tagged
            // rational case is already caught by the polynomial branch
            v.strict = StrictVerdict::no;
            v.branch = "bc0-ii";
        }
        return v;
    }

    if (bc.a == cplx(0.0) && prod.imag() == 0.0 && prod.real() != 0.0 &&
        bc.d.imag() == 0.0 && bc.d.real() != 0.0) {
        const double alpha = w.alpha();
        const double dstar = a0_critical_d(alpha, std::abs(prod.real()));
        v.witnesses.emplace_back("critical_d", dstar);
        v.witnesses.emplace_back("d", bc.d.real());
        v.strict = std::abs(bc.d.real() - dstar) > 1e-12 * (1.0 + std::abs(dstar))
                       ? StrictVerdict::yes
                       : StrictVerdict::no;
        v.branch = "a0-irrational";
        return v;
    }

    v.strict = StrictVerdict::undetermined;
    v.branch = "undetermined";
    if (auto probe = w.probe_rational()) {
        v.witnesses.emplace_back("probe_num", double(probe->first));
        v.witnesses.emplace_back("probe_den", double(probe->second));
    }
    v.numerical_hint = "run numerical_separation";
    return v;
}

namespace {

struct A0System {
    double alpha;
    double abs_bc;

    double r(double x) const { return std::sin(alpha * M_PI * x) / std::sin(M_PI * x); }
    double f(double x) const {
        return std::pow(abs_bc * r(x), 1.0 / (alpha + 1.0)) *
               std::sin((alpha + 1.0) * M_PI * x) / std::sin(alpha * M_PI * x);
    }
    double y_of(double x) const { return -std::log(abs_bc * r(x)) / (alpha + 1.0); }
};

}  // namespace

std::vector<cplx> a0_real_zeros(const ReducedBC& bc, const Weights& w,
                                double re_min, double re_max) {
    const cplx prod = bc.b * bc.c;
    if (bc.a != cplx(0.0) || prod.imag() != 0.0 || prod.real() >= 0.0 ||
        bc.d.imag() != 0.0 || bc.d.real() == 0.0)
        throw std::invalid_argument("a0_real_zeros: requires a = 0, bc < 0 real, d real");
    const double alpha = w.alpha();
    if (!(alpha < 1.0))
        throw std::invalid_argument("a0_real_zeros: requires alpha = -b1/b2 < 1");
    const double d = bc.d.real();
    A0System sys{alpha, -prod.real()};

    const double x_lo = w.b2() * re_min / M_PI;
    const double x_hi = w.b2() * re_max / M_PI;
    std::vector<cplx> out;

    for (long n = long(std::floor(x_lo)) - 1; n <= long(std::ceil(x_hi)); ++n) {
        // admissible subinterval of (n, n+1): same sign of sin(pi x), sin(alpha pi x)
        double lo = double(n), hi = double(n + 1);
        double cut = 0.0;
        bool has_cut = false;
        long m_lo = long(std::ceil(alpha * lo - 1e-12));
        for (long m = m_lo; m <= long(std::floor(alpha * hi + 1e-12)); ++m) {
            double c = double(m) / alpha;
            if (c > lo + 1e-12 && c < hi - 1e-12) {
                cut = c;
                has_cut = true;
                break;  // alpha < 1: at most one cut
            }
        }
        auto admissible = [&](double a, double b) {
            double mid = 0.5 * (a + b);
            return std::sin(M_PI * mid) * std::sin(alpha * M_PI * mid) > 0.0;
        };
        double ilo = 0, ihi = 0;
        if (!has_cut) {
            if (!admissible(lo, hi)) continue;
            ilo = lo;
            ihi = hi;
        } else if (admissible(lo, cut)) {
            ilo = lo;
            ihi = cut;
        } else if (admissible(cut, hi)) {
            ilo = cut;
            ihi = hi;
        } else {
            continue;
        }

        // bracket the single root of the monotone f(x) = -d by probing toward
        // the endpoints, where |f| blows up with opposite signs
        const double len = ihi - ilo;
        auto g = [&](double x) { return sys.f(x) + d; };
        double pa = 0, pb = 0;
        bool found = false;
        for (double eps = 0.25; eps > 1e-13; eps *= 0.25) {
            pa = ilo + eps * len;
            pb = ihi - eps * len;
            if (pa >= pb) continue;
            if (g(pa) * g(pb) < 0.0) {
                found = true;
                break;
            }
        }
        if (!found) continue;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (pa + pb);
            if (g(pa) * g(mid) <= 0.0)
                pb = mid;
            else
                pa = mid;
            if (pb - pa < 1e-15 * std::max(1.0, std::abs(pa))) break;
        }
        const double x = 0.5 * (pa + pb);
        if (x < x_lo - 1e-9 || x > x_hi + 1e-9) continue;
        const double y = sys.y_of(x);
        out.emplace_back((M_PI * x + cplx(0.0, 1.0) * y) / w.b2());
    }
    std::sort(out.begin(), out.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    return out;
}

SeparationReport numerical_separation(const DeterminantHandle& f, double strip_h,
                                      double t0, int k_max) {
    SeparationReport rep;
    const double delta0 = 0.01 * 2.0 * M_PI / f.weights().span();
    bool insufficient = false;
    for (int k = 0; k <= k_max; ++k) {
        const double t = t0 * std::pow(2.0, k);
        auto records = find_zeros_strip(f, Strip(strip_h, -t, t));
        // gaps among Re-consecutive records touching the outer half |Re| > t/2
        double gap = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < records.size(); ++i) {
            const bool outer_i = std::abs(records[i].lambda.real()) > 0.5 * t;
            if (outer_i && records[i].multiplicity > 1) gap = 0.0;
            if (i + 1 < records.size() &&
                (outer_i || std::abs(records[i + 1].lambda.real()) > 0.5 * t))
                gap = std::min(gap, std::abs(records[i].lambda - records[i + 1].lambda));
        }
        rep.windows.push_back(t);
        rep.counts.push_back(int(records.size()));
        rep.min_gaps.push_back(gap);
        if (gap == std::numeric_limits<double>::infinity()) insufficient = true;
    }
    if (insufficient) {
        rep.hint = "inconclusive";
        return rep;
    }
    double gmin = *std::min_element(rep.min_gaps.begin(), rep.min_gaps.end());
    bool decreasing = true;
    for (size_t k = 1; k < rep.min_gaps.size(); ++k)
        decreasing = decreasing && rep.min_gaps[k] < rep.min_gaps[k - 1];
    if (gmin < delta0)
        rep.hint = "collapsing";
    else if (decreasing && rep.min_gaps.back() < 0.6 * rep.min_gaps.front())
        rep.hint = "collapsing";
    else
        rep.hint = "separated";
    return rep;
}

StrictifyingWeight find_strictifying_weight(const BoundaryPair& bc, const Weights& w) {
    if (!w.has_rational())
        throw std::invalid_argument("find_strictifying_weight: exact-rational ratio required");
    RegularityMinors m = check_regularity(bc);
    if (!m.regular)
        throw InvalidBoundaryError("find_strictifying_weight: conditions are not regular");
    auto [n1, n2] = w.rational();
    const cplx j12 = m.j12 / m.j14, j34 = m.j34 / m.j14, j32 = m.j32 / m.j14;

    auto candidate = [](int k) -> cplx {
        switch (k) {
            case 0: return {1.5, 0.0};
            case 1: return {2.0, 0.0};
            case 2: return {3.0, 0.0};
            case 3: return {1.0, 1.0};
            default:
                return {1.0 + 0.5 * (k - 3), 0.25 * double((k - 3) % 3)};
        }
    };

    double last_gap = 0.0;
    for (int k = 0; k < 64; ++k) {
        const cplx wcand = candidate(k);
        std::vector<cplx> c(size_t(n1 + n2 + 1), cplx(0.0));
        c[0] += wcand * j32;
        c[size_t(n1)] += j12;
        c[size_t(n2)] += wcand * j34;
        c[size_t(n1 + n2)] += 1.0;
        auto roots = poly_roots(c);
        const double gap = min_root_gap(roots);
        last_gap = gap;
        if (int(roots.size()) == n1 + n2 && gap > 1e-6)
            return StrictifyingWeight{wcand, std::move(roots), gap};
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "find_strictifying_weight: 64 candidates exhausted (last gap %.3e)",
                  last_gap);
    throw WeightSearchError(buf);
}

}  // namespace dirac
