#pragma once

#include <string>

#include "dirac/determinant.hpp"
#include "dirac/types.hpp"

namespace dirac {

/// Uniform grid on the triangle Omega = {0 <= t <= x <= 1}: nodes
/// (x_i, t_j) = (i/n, j/n) with 0 <= j <= i <= n.
struct TriangleGrid {
    int n;

    explicit TriangleGrid(int n_) : n(n_) {
        if (n < 4) throw std::invalid_argument("TriangleGrid: need N >= 4");
    }
    double dx() const { return 1.0 / n; }
};

enum class KernelRole { R, Kplus, Kminus, RplusSym, RminusSym };

/// Matrix kernel on the triangle grid; entries stored as dense (n+1)^2 blocks
/// with the t > x half unused.
class KernelField {
public:
    KernelField(TriangleGrid grid, KernelRole role)
        : grid_(grid), role_(role),
          data_(4, std::vector<cplx>(size_t(grid.n + 1) * size_t(grid.n + 1), cplx(0.0))) {}

    const TriangleGrid& grid() const { return grid_; }
    KernelRole role() const { return role_; }
    void set_role(KernelRole r) { role_ = r; }

    /// entry index: jk in {0:11, 1:12, 2:21, 3:22}
    cplx& at(int jk, int i, int j) { return data_[jk][size_t(i) * (grid_.n + 1) + j]; }
    cplx at(int jk, int i, int j) const { return data_[jk][size_t(i) * (grid_.n + 1) + j]; }
    static int idx(int row, int col) { return (row - 1) * 2 + (col - 1); }

    /// bilinear sample at (x, t), 0 <= t <= x <= 1; cells cut by the diagonal
    /// fall back to barycentric interpolation on the lower triangle.
    cplx sample(int jk, double x, double t) const;

    Eigen::Matrix2cd sample_matrix(double x, double t) const {
        Eigen::Matrix2cd m;
        m << sample(0, x, t), sample(1, x, t), sample(2, x, t), sample(3, x, t);
        return m;
    }

    /// sup over nodes of the entrywise difference
    double sup_distance(const KernelField& other) const;

private:
    TriangleGrid grid_;
    KernelRole role_;
    std::vector<std::vector<cplx>> data_;
};

struct PicardOptions {
    double tol = 1e-10;
    int max_sweeps = 100;
};

/// Solve the characteristic-line integral equations for the auxiliary kernel
/// R by Picard sweeps (Gauss-Seidel ordering in x).  Requires an off-diagonal
/// potential.  Throws KernelDivergenceError when the sweeps do not contract.
KernelField solve_R(const PotentialGrid& q, const Weights& w, TriangleGrid grid,
                    PicardOptions opts = {});

/// Residual of the integral-equation system at every node (sup norm),
/// re-evaluating the right-hand sides on the converged field.
double goursat_residual(const KernelField& r, const PotentialGrid& q, const Weights& w);

/// Diagonal convolution profiles P^{s}_j on [0,1] (s = +1 or -1).
struct ConvolutionProfile {
    int sign;
    std::vector<cplx> p1, p2;  // n+1 samples
};

/// Forward-substitution solve of the Volterra system fixing the edge
/// condition K(x,0) B^{-1} (1, s)^T = 0.
ConvolutionProfile solve_P(const KernelField& r, const Weights& w, int sign);

/// Re-substitution residual of the Volterra system (sup norm).
double volterra_residual(const KernelField& r, const Weights& w,
                         const ConvolutionProfile& p);

/// K^s(x,t) = R(x,t) + P^s(x-t) + int_t^x R(x,u) P^s(u-t) du.
KernelField assemble_K(const KernelField& r, const ConvolutionProfile& p);

/// Jump condition K(x,x)B^{-1} - B^{-1}K(x,x) = iQ(x): sup residual over x.
double jump_residual(const KernelField& k, const PotentialGrid& q, const Weights& w);

/// Edge condition K(x,0) B^{-1} (1, s)^T = 0: sup residual over x.
double edge_residual(const KernelField& k, const Weights& w, int sign);

/// e_s(x; lambda) = e0_s + int_0^x K^s(x,t) e0_s(t) dt on the triangle grid.
std::vector<Eigen::Vector2cd> apply_transform(const KernelField& k, const Weights& w,
                                              cplx lambda, int sign);

/// R^{+} = (K^+ + K^-)/2 and R^{-} = (K^+ - K^-)/2.
std::pair<KernelField, KernelField> sym_R_pm(const KernelField& kp, const KernelField& km);

/// phi(1, lambda) from the kernel traces R^{pm}(1, .) against exponentials.
Eigen::Matrix2cd phi_via_kernels(const KernelField& rp, const KernelField& rm,
                                 const Weights& w, cplx lambda);

/// Trace profiles g_1, g_2 of Delta = Delta0 + int g_1 e^{i b1 l t} + int g_2 e^{i b2 l t}.
struct TraceG {
    std::vector<cplx> g1, g2;  // n+1 samples on [0,1]
};
TraceG trace_g(const KernelField& rp, const KernelField& rm, const ReducedBC& bc);

/// All-in-one: build R, P, K, traces for a problem and return the
/// kernel-trace determinant handle.
struct KernelSet {
    KernelField r;
    KernelField kplus, kminus;
    KernelField rplus, rminus;
    ConvolutionProfile pplus, pminus;
};
KernelSet build_kernels(const PotentialGrid& q, const Weights& w, TriangleGrid grid,
                        PicardOptions opts = {});
DeterminantHandle kernel_determinant(const KernelSet& ks, const ReducedBC& bc,
                                     const Weights& w);

/// Grid X1 and Xinf norms per entry and their matrix maxima.
struct KernelNorms {
    double x1[2][2];
    double xinf[2][2];
    double x1_max;
    double xinf_max;
};
KernelNorms kernel_norms(const KernelField& f);

/// Discrete L1 -> L1 operator norm of the Volterra applicator of one entry
/// (trapezoid discretization); equals the X1 norm within grid tolerance.
double discrete_l1_operator_norm(const KernelField& f, int jk);

/// Binary dump: 8 float64 header values {n, role, b1, b2, 0, 0, 0, 0}
/// followed by the four entry grids (11, 12, 21, 22) in row-major order,
/// each value as a float64 (re, im) pair.
void write_kernel(const KernelField& f, const Weights& w, const std::string& path);
std::pair<KernelField, Weights> read_kernel(const std::string& path);

}  // namespace dirac
