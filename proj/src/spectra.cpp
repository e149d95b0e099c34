#include "dirac/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <limits>
#include <numeric>

namespace dirac {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

EigenvalueRecord make_record(cplx lambda, int multiplicity) {
    EigenvalueRecord r;
    r.lambda = lambda;
    r.multiplicity = multiplicity;
    return r;
}

struct BoundarySample {
    cplx z;
    cplx logderiv;  // f'/f by central difference
    cplx value;
};

struct EvalCtx {
    const DeterminantHandle& f;
    int budget;
    double min_ratio = std::numeric_limits<double>::infinity();  // min |f|/scale seen

    BoundarySample sample(cplx z) {
        if (--budget < 0)
            throw BoundaryNearZeroError("count_zeros_rect: sample budget exhausted");
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        const cplx fv = f(z);
        min_ratio = std::min(min_ratio, std::abs(fv) / f.scale(z));
        if (std::abs(fv) < 1e-280)
            throw BoundaryNearZeroError("count_zeros_rect: |f| vanishes on the contour");
        const cplx fp = (f(z + h) - f(z - h)) / (2.0 * h);
        return {z, fp / fv, fv};
    }
};

struct Integrals {
    cplx winding = 0.0;  // int f'/f dz
    cplx moment = 0.0;   // int (z - c) f'/f dz, c = box center
    cplx moment2 = 0.0;  // int (z - c)^2 f'/f dz

    Integrals& operator+=(const Integrals& o) {
        winding += o.winding;
        moment += o.moment;
        moment2 += o.moment2;
        return *this;
    }
};

Integrals trapezoid_piece(const BoundarySample& a, const BoundarySample& b, cplx c) {
    const cplx za = a.z - c, zb = b.z - c;
    Integrals out;
    out.winding = 0.5 * (a.logderiv + b.logderiv) * (b.z - a.z);
    out.moment = 0.5 * (za * a.logderiv + zb * b.logderiv) * (b.z - a.z);
    out.moment2 = 0.5 * (za * za * a.logderiv + zb * zb * b.logderiv) * (b.z - a.z);
    return out;
}

/// Adaptive trapezoid of f'/f over [a, b]: a segment is accepted when its
/// one-panel and two-panel estimates agree within the length-proportional
/// tolerance and the phase of f advances by less than pi/2 per panel.
Integrals adaptive_segment(EvalCtx& ctx, const BoundarySample& a,
                           const BoundarySample& b, cplx c, double tol_density, int depth) {
    const BoundarySample mid = ctx.sample(0.5 * (a.z + b.z));
    const Integrals t1 = trapezoid_piece(a, b, c);
    Integrals t2 = trapezoid_piece(a, mid, c);
    t2 += trapezoid_piece(mid, b, c);
    const bool phase_ok = std::abs(std::arg(mid.value / a.value)) < M_PI / 2.0 &&
                          std::abs(std::arg(b.value / mid.value)) < M_PI / 2.0;
    const double len = std::abs(b.z - a.z);
    if (phase_ok && std::abs(t2.winding - t1.winding) < tol_density * len) {
        Integrals out;
        out.winding = (4.0 * t2.winding - t1.winding) / 3.0;
        out.moment = (4.0 * t2.moment - t1.moment) / 3.0;
        out.moment2 = (4.0 * t2.moment2 - t1.moment2) / 3.0;
        return out;
    }
    if (depth >= 36 || len < 1e-12 * std::max(1.0, std::abs(a.z))) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "count_zeros_rect: refinement stalled near (%g,%g)", a.z.real(),
                      a.z.imag());
        throw BoundaryNearZeroError(buf);
    }
    Integrals out = adaptive_segment(ctx, a, mid, c, tol_density, depth + 1);
    out += adaptive_segment(ctx, mid, b, c, tol_density, depth + 1);
    return out;
}

/// Trapezoid of f'/f along one straight edge with adaptive refinement.
Integrals edge_integral(EvalCtx& ctx, cplx za, cplx zb, cplx c, double tol_density) {
    const int initial = 8;
    std::vector<BoundarySample> pts;
    for (int k = 0; k <= initial; ++k)
        pts.push_back(ctx.sample(za + (zb - za) * (double(k) / initial)));
    Integrals total;
    for (int k = 0; k < initial; ++k)
        total += adaptive_segment(ctx, pts[k], pts[k + 1], c, tol_density, 0);
    return total;
}

struct Counted {
    int count = 0;
    cplx centroid = 0.0;     // zero centroid from the first moment, count > 0
    double min_ratio = 0.0;  // min |f|/scale along the contour
    cplx pair_a = 0.0, pair_b = 0.0;  // the two roots recovered from the
    bool pair_valid = false;          // second moment when count == 2
};

Counted winding_moments(const DeterminantHandle& f, const Rect& rect, int max_samples) {
    const cplx c = rect.center();
    EvalCtx ctx{f, max_samples};
    const double perimeter = 2.0 * (rect.width() + rect.height());
    const double tol_density = 2e-3 * kTwoPi / perimeter;
    const cplx z00(rect.re0, rect.im0), z10(rect.re1, rect.im0);
    const cplx z11(rect.re1, rect.im1), z01(rect.re0, rect.im1);
    Integrals total = edge_integral(ctx, z00, z10, c, tol_density);
    total += edge_integral(ctx, z10, z11, c, tol_density);
    total += edge_integral(ctx, z11, z01, c, tol_density);
    total += edge_integral(ctx, z01, z00, c, tol_density);
    const cplx w = total.winding / cplx(0.0, kTwoPi);
    const long rounded = std::lround(w.real());
    if (std::abs(w.real() - double(rounded)) + std::abs(w.imag()) >= 1e-3) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "count_zeros_rect: winding %.6f%+.2ei not integral on "
                      "[%g,%g]x[%g,%g]",
                      w.real(), w.imag(), rect.re0, rect.re1, rect.im0, rect.im1);
        throw BoundaryNearZeroError(buf);
    }
    if (rounded < 0)
        throw LocalizationFailureError("count_zeros_rect: negative winding (pole?)");
    Counted out;
    out.count = int(rounded);
    out.min_ratio = ctx.min_ratio;
    if (out.count > 0) {
        const cplx s1 = total.moment / cplx(0.0, kTwoPi);  // sum of (z_k - c)
        out.centroid = c + s1 / double(out.count);
        // clip into the rectangle (quadrature error can push it outside)
        out.centroid = cplx(std::min(std::max(out.centroid.real(), rect.re0), rect.re1),
                            std::min(std::max(out.centroid.imag(), rect.im0), rect.im1));
        if (out.count == 2) {
            // Newton's identities recover a zero pair from the first two moments
            const cplx s2 = total.moment2 / cplx(0.0, kTwoPi);
            const cplx split = std::sqrt(2.0 * s2 - s1 * s1);
            out.pair_a = c + 0.5 * (s1 + split);
            out.pair_b = c + 0.5 * (s1 - split);
            out.pair_valid = true;
        }
    }
    return out;
}

}  // namespace

int count_zeros_rect(const DeterminantHandle& f, const Rect& rect, int max_samples) {
    return winding_moments(f, rect, max_samples).count;
}

namespace {

double cut_line_quality(const DeterminantHandle& f, double c, bool vertical, double lo,
                        double hi) {
    double minval = std::numeric_limits<double>::infinity();
    for (int q = 0; q <= 64; ++q) {
        const double s = lo + (hi - lo) * double(q) / 64.0;
        const cplx z = vertical ? cplx(c, s) : cplx(s, c);
        minval = std::min(minval, std::abs(f(z)) / f.scale(z));
    }
    return minval;
}

/// Pick a cut coordinate near `want` such that |f| stays away from zero along
/// the cut line.  Deterministic nudge sequence eps, 2eps, ... alternating
/// sides, then coarse fractions of the span; falls back to the best line seen.
double choose_cut(const DeterminantHandle& f, double want, bool vertical, double lo,
                  double hi, double span, int max_nudges) {
    const double eps = 1e-4 * span;
    double best_c = want, best_q = -1.0;
    auto probe = [&](double c) {
        const double q = cut_line_quality(f, c, vertical, lo, hi);
        if (q > best_q) {
            best_q = q;
            best_c = c;
        }
        return q > 5e-2;  // comfortably far from any zero: stop probing
    };
    for (int k = 0; k <= max_nudges; ++k) {
        for (int sign = +1; sign >= -1; sign -= 2) {
            if (k == 0 && sign < 0) continue;
            if (probe(want + sign * k * eps)) return best_c;
        }
    }
    for (double frac : {0.125, -0.125, 0.25, -0.25, 0.375, -0.375, 0.0625, -0.0625})
        if (probe(want + frac * span)) return best_c;
    if (best_q > 1e-12) return best_c;
    throw LocalizationFailureError("find_zeros_strip: no admissible cut found");
}

struct Searcher {
    const DeterminantHandle& f;
    StripSearchOptions opts;

    /// Newton on f' for a double zero (a simple zero of the derivative);
    /// pin-points the location well below the |f| noise floor.
    std::optional<cplx> newton_derivative(cplx z0) const {
        auto df = [&](cplx z) {
            const double h = 1e-6 * std::max(1.0, std::abs(z));
            return (f(z + h) - f(z - h)) / (2.0 * h);
        };
        cplx z = z0;
        for (int it = 0; it < 40; ++it) {
            const cplx g = df(z);
            const double h = 1e-6 * std::max(1.0, std::abs(z));
            const cplx gp = (df(z + h) - df(z - h)) / (2.0 * h);
            if (std::abs(gp) == 0.0) return std::nullopt;
            const cplx step = g / gp;
            z -= step;
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
            if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) break;
        }
        if (std::abs(z - z0) > 1e-2 * std::max(1.0, std::abs(z0))) return std::nullopt;
        if (std::abs(f(z)) > opts.record_tol * f.scale(z)) return std::nullopt;
        return z;
    }

    std::optional<cplx> newton(cplx z0, const Rect& box) const {
        cplx z = z0;
        // iterate to step convergence: at a double zero the residual test
        // alone stalls ~1e-6 away while the steps keep halving
        for (int it = 0; it < 80; ++it) {
            const cplx fv = f(z);
            const double h = 1e-7 * std::max(1.0, std::abs(z));
            const cplx fp = (f(z + h) - f(z - h)) / (2.0 * h);
            if (std::abs(fp) == 0.0) break;
            const cplx step = fv / fp;
            z -= step;
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
            if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) break;
        }
        const double pad_x = 0.05 * box.width() + 1e-12, pad_y = 0.05 * box.height() + 1e-12;
        if (z.real() < box.re0 - pad_x || z.real() > box.re1 + pad_x ||
            z.imag() < box.im0 - pad_y || z.imag() > box.im1 + pad_y)
            return std::nullopt;
        if (std::abs(f(z)) > opts.record_tol * f.scale(z)) return std::nullopt;
        return z;
    }

    Counted robust_count(const Rect& box) const {
        // retries expand the box by the deterministic geometric sequence (a
        // zero close to an edge makes the winding integral arbitrarily hard)
        Rect r = box;
        for (int k = 0;; ++k) {
            try {
                return winding_moments(f, r, 16384);
            } catch (const BoundaryNearZeroError&) {
                if (k >= opts.max_nudges) throw;
                const double step = std::min(0.02, 1e-4 * std::pow(3.0, k + 1));
                const double ex = step * std::max(box.width(), 1e-6);
                const double ey = step * std::max(box.height(), 1e-6);
                r = Rect{box.re0 - ex, box.re1 + ex, box.im0 - ey, box.im1 + ey};
            }
        }
    }

    void process(const Rect& box, const Counted& info, int depth,
                 std::vector<EigenvalueRecord>& out) const {
        if (info.count == 0) return;
        // a cluster is sealed once the box is tiny or once the boundary values
        // sink to the double-precision noise floor of the determinant, where
        // the centroid is already far more accurate than the box size
        if (box.diameter() < opts.cluster_diameter ||
            (info.count > 1 && info.min_ratio < 1e-10 && box.diameter() < 1e-3)) {
            cplx where = info.centroid;
            if (info.count == 2) {
                if (auto z = newton_derivative(info.centroid)) where = *z;
            }
            out.push_back(make_record(where, info.count));
            return;
        }
        if (depth > 200) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "find_zeros_strip: box [%g,%g]x[%g,%g] with count %d not shrinking",
                          box.re0, box.re1, box.im0, box.im1, info.count);
            throw LocalizationFailureError(buf);
        }
        if (info.count == 1) {
            if (auto z = newton(info.centroid, box)) {
                out.push_back(make_record(*z, 1));
                return;
            }
        } else if (info.count == 2 && info.pair_valid) {
            // polish the moment-recovered pair; a coincident result is a
            // genuine double zero
            auto za = newton(info.pair_a, box);
            auto zb = newton(info.pair_b, box);
            if (za && zb) {
                // plain Newton cannot resolve below ~sqrt(eps): points closer
                // than the noise radius are one (multiple) zero
                if (std::abs(*za - *zb) > std::max(1e-6, 1e-9 * std::abs(*za))) {
                    out.push_back(make_record(*za, 1));
                    out.push_back(make_record(*zb, 1));
                    return;
                }
                // coincident polish: either a true double zero or both Newton
                // runs fell into the same simple zero; a tiny recount decides
                cplx where = 0.5 * (*za + *zb);
                if (auto zd = newton_derivative(where)) where = *zd;
                const double r = std::max(1e-6, 1e-9 * std::abs(where));
                Counted tiny = robust_count(Rect{where.real() - r, where.real() + r,
                                                 where.imag() - r, where.imag() + r});
                if (tiny.count == 2) {
                    out.push_back(make_record(where, 2));
                    return;
                }
            }
        }
        if (info.count >= 2) {
            // shrink onto the cluster centroid while all zeros stay inside
            Rect sub{std::max(box.re0, info.centroid.real() - 0.3 * box.width()),
                     std::min(box.re1, info.centroid.real() + 0.3 * box.width()),
                     std::max(box.im0, info.centroid.imag() - 0.3 * box.height()),
                     std::min(box.im1, info.centroid.imag() + 0.3 * box.height())};
            Counted inner = robust_count(sub);
            if (inner.count == info.count) {
                process(sub, inner, depth + 1, out);
                return;
            }
        }
        // separated zeros (or a stubborn simple one): split across the longer side
        const bool vertical = box.width() >= box.height();
        const double want = vertical ? 0.5 * (box.re0 + box.re1) : 0.5 * (box.im0 + box.im1);
        const double lo = vertical ? box.im0 : box.re0;
        const double hi = vertical ? box.im1 : box.re1;
        const double cut =
            choose_cut(f, want, vertical, lo, hi, vertical ? box.width() : box.height(),
                       opts.max_nudges);
        Rect first = vertical ? Rect{box.re0, cut, box.im0, box.im1}
                              : Rect{box.re0, box.re1, box.im0, cut};
        Rect second = vertical ? Rect{cut, box.re1, box.im0, box.im1}
                               : Rect{box.re0, box.re1, cut, box.im1};
        Counted c1 = robust_count(first);
        Counted c2 = robust_count(second);
        if (c1.count + c2.count != info.count) {
            // a zero sits on the cut: count again with the halves nudged apart
            const double shift = vertical ? 1e-3 * box.width() : 1e-3 * box.height();
            Rect first2 = vertical ? Rect{box.re0, cut - shift, box.im0, box.im1}
                                   : Rect{box.re0, box.re1, box.im0, cut - shift};
            Rect second2 = vertical ? Rect{cut - shift, box.re1, box.im0, box.im1}
                                    : Rect{box.re0, box.re1, cut - shift, box.im1};
            c1 = robust_count(first2);
            c2 = robust_count(second2);
            first = first2;
            second = second2;
            if (c1.count + c2.count != info.count)
                throw LocalizationFailureError(
                    "find_zeros_strip: count not conserved across a cut");
        }
        process(first, c1, depth + 1, out);
        process(second, c2, depth + 1, out);
    }
};

int thread_count(const StripSearchOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    if (const char* env = std::getenv("DIRAC_SPECTRA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace

std::vector<EigenvalueRecord> find_zeros_strip(const DeterminantHandle& f,
                                               const Strip& strip, StripSearchOptions opts) {
    const double box_cap = kTwoPi / f.weights().span();
    const double len = strip.re_max - strip.re_min;
    const int nboxes = std::max(1, int(std::ceil(len / box_cap)));
    Searcher searcher{f, opts};

    // validated vertical cuts give a consistent partition of the window
    std::vector<double> cuts(nboxes + 1);
    cuts[0] = strip.re_min;
    cuts[nboxes] = strip.re_max;
    for (int k = 1; k < nboxes; ++k)
        cuts[k] = choose_cut(f, strip.re_min + len * double(k) / nboxes, true, -strip.h,
                             strip.h, box_cap, opts.max_nudges);
    cuts[0] = choose_cut(f, strip.re_min, true, -strip.h, strip.h, box_cap, opts.max_nudges);
    cuts[nboxes] =
        choose_cut(f, strip.re_max, true, -strip.h, strip.h, box_cap, opts.max_nudges);

    auto run_box = [&](int k) {
        std::vector<EigenvalueRecord> local;
        Rect box{cuts[k], cuts[k + 1], -strip.h, strip.h};
        Counted info = searcher.robust_count(box);
        searcher.process(box, info, 0, local);
        return local;
    };

    std::vector<EigenvalueRecord> records;
    const int threads = std::min(thread_count(opts), nboxes);
    if (threads <= 1) {
        for (int k = 0; k < nboxes; ++k) {
            auto local = run_box(k);
            records.insert(records.end(), local.begin(), local.end());
        }
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            std::vector<EigenvalueRecord> local;
            for (int k = next++; k < nboxes; k = next++) {
                auto part = run_box(k);
                local.insert(local.end(), part.begin(), part.end());
            }
            return local;
        };
        std::vector<std::future<std::vector<EigenvalueRecord>>> pool;
        for (int t = 0; t < threads; ++t)
            pool.push_back(std::async(std::launch::async, worker));
        for (auto& fu : pool) {
            auto part = fu.get();
            records.insert(records.end(), part.begin(), part.end());
        }
    }

    // de-duplicate zeros polished into a neighboring box
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real()
                                                  : a.lambda.imag() < b.lambda.imag();
    });
    std::vector<EigenvalueRecord> unique;
    for (const auto& r : records) {
        // records closer than the cluster scale are the same zero found twice
        // through overlapping (nudged) boxes
        const double same = std::max(opts.cluster_diameter, 1e-12 * std::abs(r.lambda));
        if (!unique.empty() && std::abs(unique.back().lambda - r.lambda) < same)
            unique.back().multiplicity = std::max(unique.back().multiplicity, r.multiplicity);
        else
            unique.push_back(r);
    }
    // drop zeros nudged in from outside the requested window
    std::vector<EigenvalueRecord> windowed;
    for (const auto& r : unique)
        if (r.lambda.real() >= strip.re_min - 1e-9 && r.lambda.real() <= strip.re_max + 1e-9)
            windowed.push_back(r);
    assign_indices(windowed);
    return windowed;
}

void assign_indices(std::vector<EigenvalueRecord>& records) {
    if (records.empty()) return;
    size_t ref = 0;
    for (size_t i = 1; i < records.size(); ++i) {
        const double cur = std::abs(records[i].lambda.real());
        const double best = std::abs(records[ref].lambda.real());
        if (cur < best - 1e-15 ||
            (std::abs(cur - best) <= 1e-15 && records[i].lambda.real() >= 0 &&
             records[ref].lambda.real() < 0))
            ref = i;
    }
    for (size_t i = 0; i < records.size(); ++i) records[i].n = int(i) - int(ref);
}

PairingReport pair_with_unperturbed(std::vector<EigenvalueRecord>& records,
                                    const std::vector<EigenvalueRecord>& unperturbed,
                                    double re_min, double re_max) {
    auto flatten = [](const std::vector<EigenvalueRecord>& rs) {
        std::vector<cplx> out;
        for (const auto& r : rs)
            for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.lambda);
        std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        return out;
    };
    const std::vector<cplx> flat = flatten(records);
    const std::vector<cplx> flat0 = flatten(unperturbed);
    if (flat.size() != flat0.size()) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "pair_with_unperturbed: %zu zeros vs %zu unperturbed", flat.size(),
                      flat0.size());
        throw PairingError(buf);
    }

    PairingReport rep;
    const double center = 0.5 * (re_min + re_max);
    const double half = 0.5 * (re_max - re_min);
    size_t slot = 0;
    for (auto& r : records) {
        double gap = 0.0;
        for (int k = 0; k < r.multiplicity; ++k, ++slot)
            gap = std::max(gap, std::abs(flat[slot] - flat0[slot]));
        // slots of a record are adjacent after sorting because its lambda repeats
        size_t first_slot = slot - r.multiplicity;
        r.lambda0 = flat0[first_slot];
        r.gap = gap;
        const double off_center = std::abs(r.lambda.real() - center);
        if (off_center > 0.5 * half)
            rep.max_gap_outer = std::max(rep.max_gap_outer, gap);
        else
            rep.max_gap_inner = std::max(rep.max_gap_inner, gap);
    }
    return rep;
}

std::vector<std::vector<int>> group_parentheses(const std::vector<EigenvalueRecord>& records,
                                                double eps) {
    if (eps <= 0.0) throw std::invalid_argument("group_parentheses: eps must be positive");
    const int n = int(records.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(records[i].lambda - records[j].lambda) <= 2.0 * eps)
                parent[find(i)] = find(j);
    std::vector<std::vector<int>> blocks;
    std::vector<int> where(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (where[r] < 0) {
            where[r] = int(blocks.size());
            blocks.emplace_back();
        }
        blocks[where[r]].push_back(i);
    }
    return blocks;
}

std::vector<EigenvalueRecord> records_from_listing(const ZeroListing& listing) {
    std::vector<EigenvalueRecord> out;
    out.reserve(listing.zeros.size());
    for (const auto& [z, mult] : listing.zeros) out.push_back(make_record(z, mult));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real()
                                                  : a.lambda.imag() < b.lambda.imag();
    });
    assign_indices(out);
    return out;
}

}  // namespace dirac
