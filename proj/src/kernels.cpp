#include "dirac/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dirac/propagator.hpp"

namespace dirac {

namespace {
constexpr cplx kI(0.0, 1.0);
}

cplx KernelField::sample(int jk, double x, double t) const {
    const int n = grid_.n;
    double s = std::min(std::max(x, 0.0), 1.0) * n;
    double u = std::min(std::max(t, 0.0), x) * n;
    int i0 = std::min(int(s), n - 1);
    int j0 = std::min(int(u), n - 1);
    double du = s - i0;
    double dv = u - j0;
    if (j0 > i0) {  // only possible through rounding right at the diagonal
        j0 = i0;
        dv = std::min(du, u - j0);
    }
    const cplx f00 = at(jk, i0, j0);
    const cplx f10 = at(jk, i0 + 1, j0);
    const cplx f11 = at(jk, i0 + 1, j0 + 1);
    if (j0 + 1 <= i0) {
        const cplx f01 = at(jk, i0, j0 + 1);
        return (1 - du) * (1 - dv) * f00 + du * (1 - dv) * f10 + (1 - du) * dv * f01 +
               du * dv * f11;
    }
    // diagonal cell: affine interpolation on the admissible corners
    return f00 + du * (f10 - f00) + dv * (f11 - f10);
}

double KernelField::sup_distance(const KernelField& other) const {
    double d = 0.0;
    for (int jk = 0; jk < 4; ++jk) {
        const auto& a = data_[jk];
        const auto& b = other.data_[jk];
        for (size_t q = 0; q < a.size(); ++q) d = std::max(d, std::abs(a[q] - b[q]));
    }
    return d;
}

namespace {

struct RSystem {
    const PotentialGrid& q;
    double a1, a2;
    int n;
    double h;

    cplx qjk(int j, double x) const { return j == 1 ? q.q12_at(x) : q.q21_at(x); }

    // Characteristic form of the diagonal equations: integrating
    // a_k (D_x + D_t) R_kk = -i Q_kj R_jk along t - x = const gives
    // R_kk(x,t) = -(i/a_k) int_{x-t}^{x} Q_kj(xi) R_jk(xi, xi-x+t) dxi.
    // The integrand points are grid nodes: xi_m = (i-j+m)h, second arg m*h.
    cplx rhs_diag(const KernelField& r, int k, int i, int j) const {
        if (j == 0) return 0.0;
        const int other = (k == 1) ? 2 : 1;
        const double ak = (k == 1) ? a1 : a2;
        const int jk_other = KernelField::idx(other, k);  // partner entry R_{jk}
        // Q_kj is Q12 when k = 1 (j = 2), Q21 when k = 2
        cplx acc = 0.0;
        for (int m = 0; m <= j; ++m) {
            double wgt = (m == 0 || m == j) ? 0.5 : 1.0;
            double xi = (i - j + m) * h;
            acc += wgt * qjk(k, xi) * r.at(jk_other, i - j + m, m);
        }
        return -(kI / ak) * acc * h;
    }

    // Off-diagonal characteristics (dx/ds, dt/ds) = (a_j, a_k) start on the
    // diagonal where R_jk = i Q_jk/(a_k - a_j):
    // R_jk(x,t) = i Q_jk(xi_jk)/(a_k - a_j)
    //             - (i/a_j) int_{xi_jk}^{x} Q_jk(xi) R_kk(xi, kappa(xi-x)+t) dxi.
    cplx rhs_offdiag(const KernelField& r, int j, int k, int i, int jj) const {
        const double aj = (j == 1) ? a1 : a2;
        const double ak = (k == 1) ? a1 : a2;
        const double kappa = ak / aj;
        const double x = i * h, t = jj * h;
        const double xi0 = (ak * x - aj * t) / (ak - aj);
        const int jk_diag = (k == 1) ? KernelField::idx(1, 1) : KernelField::idx(2, 2);
        cplx acc = 0.0;
        const double len = x - xi0;
        if (len > 0.0) {
            int panels = std::max(1, int(std::ceil(len / h - 1e-12)));
            double step = len / panels;
            for (int m = 0; m <= panels; ++m) {
                double wgt = (m == 0 || m == panels) ? 0.5 : 1.0;
                double xi = xi0 + m * step;
                double v = kappa * (xi - x) + t;
                acc += wgt * qjk(j, xi) * r.sample(jk_diag, xi, v);
            }
            acc *= step;
        }
        return (kI / (ak - aj)) * qjk(j, xi0) - (kI / aj) * acc;
    }
};

}  // namespace

KernelField solve_R(const PotentialGrid& q, const Weights& w, TriangleGrid grid,
                    PicardOptions opts) {
    if (!q.off_diagonal())
        throw std::invalid_argument("solve_R: potential must be off-diagonal");
    const int n = grid.n;
    RSystem sys{q, w.a1(), w.a2(), n, grid.dx()};
    KernelField r(grid, KernelRole::R);

    double update = 0.0;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        update = 0.0;
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= i; ++j) {
                // off-diagonal entries first: their data term seeds the sweep
                cplx v12 = sys.rhs_offdiag(r, 1, 2, i, j);
                update = std::max(update, std::abs(v12 - r.at(1, i, j)));
                r.at(1, i, j) = v12;
                cplx v21 = sys.rhs_offdiag(r, 2, 1, i, j);
                update = std::max(update, std::abs(v21 - r.at(2, i, j)));
                r.at(2, i, j) = v21;
                cplx v11 = sys.rhs_diag(r, 1, i, j);
                update = std::max(update, std::abs(v11 - r.at(0, i, j)));
                r.at(0, i, j) = v11;
                cplx v22 = sys.rhs_diag(r, 2, i, j);
                update = std::max(update, std::abs(v22 - r.at(3, i, j)));
                r.at(3, i, j) = v22;
            }
        }
        if (update < opts.tol) return r;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "solve_R: no convergence after %d sweeps (last update %.3e)",
                  opts.max_sweeps, update);
    throw KernelDivergenceError(buf);
}

double goursat_residual(const KernelField& r, const PotentialGrid& q, const Weights& w) {
    const int n = r.grid().n;
    RSystem sys{q, w.a1(), w.a2(), n, r.grid().dx()};
    double res = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= i; ++j) {
            res = std::max(res, std::abs(sys.rhs_offdiag(r, 1, 2, i, j) - r.at(1, i, j)));
            res = std::max(res, std::abs(sys.rhs_offdiag(r, 2, 1, i, j) - r.at(2, i, j)));
            res = std::max(res, std::abs(sys.rhs_diag(r, 1, i, j) - r.at(0, i, j)));
            res = std::max(res, std::abs(sys.rhs_diag(r, 2, i, j) - r.at(3, i, j)));
        }
    }
    return res;
}

ConvolutionProfile solve_P(const KernelField& r, const Weights& w, int sign) {
    const int n = r.grid().n;
    const double h = r.grid().dx();
    const double a1 = w.a1(), a2 = w.a2();
    const double s = sign >= 0 ? 1.0 : -1.0;
    ConvolutionProfile p{sign >= 0 ? +1 : -1, std::vector<cplx>(n + 1), std::vector<cplx>(n + 1)};

    for (int i = 0; i <= n; ++i) {
        // known part of the trapezoid sums (nodes 0..i-1)
        cplx t1 = 0.0, t2 = 0.0;
        for (int m = 0; m < i; ++m) {
            double wgt = (m == 0) ? 0.5 : 1.0;
            t1 += wgt * (a1 * r.at(0, i, m) * p.p1[m] + s * a2 * r.at(1, i, m) * p.p2[m]);
            t2 += wgt * (a1 * r.at(2, i, m) * p.p1[m] + s * a2 * r.at(3, i, m) * p.p2[m]);
        }
        t1 *= h;
        t2 *= h;
        const cplx rhs1 = -s * a2 * r.at(1, i, 0) - t1;
        const cplx rhs2 = -a1 * r.at(2, i, 0) - t2;
        const double hw = (i == 0) ? 0.0 : 0.5 * h;
        Eigen::Matrix2cd m2;
        m2 << a1 + hw * a1 * r.at(0, i, i), hw * s * a2 * r.at(1, i, i),
              hw * a1 * r.at(2, i, i), s * a2 + hw * s * a2 * r.at(3, i, i);
        Eigen::Vector2cd sol = m2.partialPivLu().solve(Eigen::Vector2cd(rhs1, rhs2));
        p.p1[i] = sol(0);
        p.p2[i] = sol(1);
    }
    return p;
}

double volterra_residual(const KernelField& r, const Weights& w, const ConvolutionProfile& p) {
    const int n = r.grid().n;
    const double h = r.grid().dx();
    const double a1 = w.a1(), a2 = w.a2();
    const double s = p.sign;
    double res = 0.0;
    for (int i = 0; i <= n; ++i) {
        cplx t1 = 0.0, t2 = 0.0;
        for (int m = 0; m <= i; ++m) {
            double wgt = (m == 0 || m == i) ? 0.5 : 1.0;
            t1 += wgt * (a1 * r.at(0, i, m) * p.p1[m] + s * a2 * r.at(1, i, m) * p.p2[m]);
            t2 += wgt * (a1 * r.at(2, i, m) * p.p1[m] + s * a2 * r.at(3, i, m) * p.p2[m]);
        }
        if (i == 0) { t1 = 0.0; t2 = 0.0; }
        res = std::max(res, std::abs(a1 * p.p1[i] + h * t1 + s * a2 * r.at(1, i, 0)));
        res = std::max(res, std::abs(s * a2 * p.p2[i] + h * t2 + a1 * r.at(2, i, 0)));
    }
    return res;
}

KernelField assemble_K(const KernelField& r, const ConvolutionProfile& p) {
    const int n = r.grid().n;
    const double h = r.grid().dx();
    KernelField k(r.grid(), p.sign >= 0 ? KernelRole::Kplus : KernelRole::Kminus);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= i; ++j) {
            for (int row = 1; row <= 2; ++row) {
                for (int col = 1; col <= 2; ++col) {
                    const int jk = KernelField::idx(row, col);
                    const std::vector<cplx>& pc = (col == 1) ? p.p1 : p.p2;
                    cplx v = r.at(jk, i, j);
                    if (row == col) v += pc[i - j];
                    if (i > j) {
                        cplx acc = 0.0;
                        for (int m = 0; m <= i - j; ++m) {
                            double wgt = (m == 0 || m == i - j) ? 0.5 : 1.0;
                            acc += wgt * r.at(jk, i, j + m) * pc[m];
                        }
                        v += h * acc;
                    }
                    k.at(jk, i, j) = v;
                }
            }
        }
    }
    return k;
}

double jump_residual(const KernelField& k, const PotentialGrid& q, const Weights& w) {
    const int n = k.grid().n;
    double res = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = double(i) / n;
        res = std::max(res, std::abs(k.at(1, i, i) * (w.a2() - w.a1()) - kI * q.q12_at(x)));
        res = std::max(res, std::abs(k.at(2, i, i) * (w.a1() - w.a2()) - kI * q.q21_at(x)));
    }
    return res;
}

double edge_residual(const KernelField& k, const Weights& w, int sign) {
    const int n = k.grid().n;
    const double s = sign >= 0 ? 1.0 : -1.0;
    double res = 0.0;
    for (int i = 0; i <= n; ++i) {
        res = std::max(res, std::abs(w.a1() * k.at(0, i, 0) + s * w.a2() * k.at(1, i, 0)));
        res = std::max(res, std::abs(w.a1() * k.at(2, i, 0) + s * w.a2() * k.at(3, i, 0)));
    }
    return res;
}

std::vector<Eigen::Vector2cd> apply_transform(const KernelField& k, const Weights& w,
                                              cplx lambda, int sign) {
    const int n = k.grid().n;
    const double h = k.grid().dx();
    std::vector<Eigen::Vector2cd> e(n + 1);
    std::vector<Eigen::Vector2cd> e0(n + 1);
    for (int j = 0; j <= n; ++j) e0[j] = e0_pm(w, lambda, j * h, sign);
    for (int i = 0; i <= n; ++i) {
        Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
        if (i > 0) {
            for (int j = 0; j <= i; ++j) {
                double wgt = (j == 0 || j == i) ? 0.5 : 1.0;
                Eigen::Matrix2cd km;
                km << k.at(0, i, j), k.at(1, i, j), k.at(2, i, j), k.at(3, i, j);
                acc += wgt * (km * e0[j]);
            }
            acc *= h;
        }
        e[i] = e0[i] + acc;
    }
    return e;
}

std::pair<KernelField, KernelField> sym_R_pm(const KernelField& kp, const KernelField& km) {
    const int n = kp.grid().n;
    KernelField rp(kp.grid(), KernelRole::RplusSym), rm(kp.grid(), KernelRole::RminusSym);
    for (int jk = 0; jk < 4; ++jk)
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= i; ++j) {
                rp.at(jk, i, j) = 0.5 * (kp.at(jk, i, j) + km.at(jk, i, j));
                rm.at(jk, i, j) = 0.5 * (kp.at(jk, i, j) - km.at(jk, i, j));
            }
    return {std::move(rp), std::move(rm)};
}

Eigen::Matrix2cd phi_via_kernels(const KernelField& rp, const KernelField& rm,
                                 const Weights& w, cplx lambda) {
    const int n = rp.grid().n;
    const double h = rp.grid().dx();
    cplx i11 = 0, i12 = 0, i21 = 0, i22 = 0;   // traces against e^{i b1 l t}
    cplx j11 = 0, j12 = 0, j21 = 0, j22 = 0;   // traces against e^{i b2 l t}
    for (int j = 0; j <= n; ++j) {
        double wgt = (j == 0 || j == n) ? 0.5 : 1.0;
        double t = j * h;
        cplx e1 = std::exp(kI * w.b1() * lambda * t);
        cplx e2 = std::exp(kI * w.b2() * lambda * t);
        i11 += wgt * rp.at(0, n, j) * e1;
        j11 += wgt * rm.at(1, n, j) * e2;
        i12 += wgt * rm.at(0, n, j) * e1;
        j12 += wgt * rp.at(1, n, j) * e2;
        i21 += wgt * rp.at(2, n, j) * e1;
        j21 += wgt * rm.at(3, n, j) * e2;
        i22 += wgt * rm.at(2, n, j) * e1;
        j22 += wgt * rp.at(3, n, j) * e2;
    }
    Eigen::Matrix2cd phi;
    phi(0, 0) = std::exp(kI * w.b1() * lambda) + h * (i11 + j11);
    phi(0, 1) = h * (i12 + j12);
    phi(1, 0) = h * (i21 + j21);
    phi(1, 1) = std::exp(kI * w.b2() * lambda) + h * (i22 + j22);
    return phi;
}

TraceG trace_g(const KernelField& rp, const KernelField& rm, const ReducedBC& bc) {
    const int n = rp.grid().n;
    TraceG g{std::vector<cplx>(n + 1), std::vector<cplx>(n + 1)};
    const cplx det = bc.det();
    for (int j = 0; j <= n; ++j) {
        g.g1[j] = det * rp.at(0, n, j) + rm.at(2, n, j) + bc.c * rm.at(0, n, j) -
                  bc.b * rp.at(2, n, j);
        g.g2[j] = det * rm.at(1, n, j) + rp.at(3, n, j) + bc.c * rp.at(1, n, j) -
                  bc.b * rm.at(3, n, j);
    }
    return g;
}

KernelSet build_kernels(const PotentialGrid& q, const Weights& w, TriangleGrid grid,
                        PicardOptions opts) {
    KernelField r = solve_R(q, w, grid, opts);
    ConvolutionProfile pp = solve_P(r, w, +1);
    ConvolutionProfile pm = solve_P(r, w, -1);
    KernelField kp = assemble_K(r, pp);
    KernelField km = assemble_K(r, pm);
    auto [rp, rmn] = sym_R_pm(kp, km);
    return KernelSet{std::move(r), std::move(kp), std::move(km),
                     std::move(rp), std::move(rmn), std::move(pp), std::move(pm)};
}

DeterminantHandle kernel_determinant(const KernelSet& ks, const ReducedBC& bc,
                                     const Weights& w) {
    TraceG g = trace_g(ks.rplus, ks.rminus, bc);
    return DeterminantHandle::kernel_trace(bc, w, std::move(g.g1), std::move(g.g2));
}

KernelNorms kernel_norms(const KernelField& f) {
    const int n = f.grid().n;
    const double h = f.grid().dx();
    KernelNorms out{};
    out.x1_max = out.xinf_max = 0.0;
    for (int row = 1; row <= 2; ++row) {
        for (int col = 1; col <= 2; ++col) {
            const int jk = KernelField::idx(row, col);
            double x1 = 0.0;
            for (int j = 0; j <= n; ++j) {
                double acc = 0.0;
                for (int i = j; i <= n; ++i) {
                    double wgt = (i == j || i == n) ? 0.5 : 1.0;
                    acc += wgt * std::abs(f.at(jk, i, j));
                }
                x1 = std::max(x1, (j == n ? 0.0 : 1.0) * acc * h);
            }
            double xinf = 0.0;
            for (int i = 0; i <= n; ++i) {
                double acc = 0.0;
                for (int j = 0; j <= i; ++j) {
                    double wgt = (j == 0 || j == i) ? 0.5 : 1.0;
                    acc += wgt * std::abs(f.at(jk, i, j));
                }
                xinf = std::max(xinf, (i == 0 ? 0.0 : 1.0) * acc * h);
            }
            out.x1[row - 1][col - 1] = x1;
            out.xinf[row - 1][col - 1] = xinf;
            out.x1_max = std::max(out.x1_max, x1);
            out.xinf_max = std::max(out.xinf_max, xinf);
        }
    }
    return out;
}

double discrete_l1_operator_norm(const KernelField& f, int jk) {
    const int n = f.grid().n;
    const double h = f.grid().dx();
    double norm = 0.0;
    for (int j = 0; j <= n; ++j) {
        double col = 0.0;
        for (int i = std::max(j, 1); i <= n; ++i) {
            double wgt = (j == 0 || j == i) ? 0.5 : 1.0;
            col += h * wgt * std::abs(f.at(jk, i, j));
        }
        norm = std::max(norm, col);
    }
    return norm;
}

void write_kernel(const KernelField& f, const Weights& w, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_kernel: cannot open " + path);
    const int n = f.grid().n;
    double header[8] = {double(n), double(int(f.role())), w.b1(), w.b2(), 0, 0, 0, 0};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (int jk = 0; jk < 4; ++jk)
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                cplx v = (j <= i) ? f.at(jk, i, j) : cplx(0.0);
                double re = v.real(), im = v.imag();
                out.write(reinterpret_cast<const char*>(&re), sizeof(double));
                out.write(reinterpret_cast<const char*>(&im), sizeof(double));
            }
    if (!out) throw Error("write_kernel: write failed for " + path);
}

std::pair<KernelField, Weights> read_kernel(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_kernel: cannot open " + path);
    double header[8];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in) throw Error("read_kernel: truncated header in " + path);
    const int n = int(header[0]);
    KernelField f{TriangleGrid(n), KernelRole(int(header[1]))};
    Weights w(header[2], header[3]);
    for (int jk = 0; jk < 4; ++jk)
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                double re, im;
                in.read(reinterpret_cast<char*>(&re), sizeof(double));
                in.read(reinterpret_cast<char*>(&im), sizeof(double));
                if (j <= i) f.at(jk, i, j) = cplx(re, im);
            }
    if (!in) throw Error("read_kernel: truncated data in " + path);
    return {std::move(f), w};
}

}  // namespace dirac
