#pragma once

#include <complex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dirac {

using cplx = std::complex<double>;

// ------ errors ------ //

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidBoundaryError : Error { using Error::Error; };
struct NotReducibleError : Error { using Error::Error; };
struct StripTooTallError : Error { using Error::Error; };
struct KernelDivergenceError : Error { using Error::Error; };
struct BoundaryNearZeroError : Error { using Error::Error; };
struct LocalizationFailureError : Error { using Error::Error; };
struct PairingError : Error { using Error::Error; };
struct NotAnEigenvalueError : Error { using Error::Error; };
struct InsufficientDataError : Error { using Error::Error; };
struct ReductionHypothesisError : Error { using Error::Error; };
struct InvalidProfileError : Error { using Error::Error; };
struct NotDecoupledError : Error { using Error::Error; };
struct WeightSearchError : Error { using Error::Error; };

// ------ weights ------ //

/// Diagonal weights B = diag(b1, b2) with b1 < 0 < b2.  The optional exact
/// rational tag (n1, n2) asserts b1 = -n1*b, b2 = n2*b for some b > 0; it is
/// trusted only when supplied by the caller and is normalized to be coprime.
class Weights {
public:
    Weights(double b1, double b2,
            std::optional<std::pair<long, long>> rational = std::nullopt)
        : b1_(b1), b2_(b2) {
        if (!(b1 < 0.0 && 0.0 < b2))
            throw std::invalid_argument("Weights: require b1 < 0 < b2");
        if (rational) {
            auto [p, q] = *rational;
            if (p <= 0 || q <= 0)
                throw std::invalid_argument("Weights: rational tag must be positive");
            long g = std::gcd(p, q);
            p /= g;
            q /= g;
            // consistency of the tag: b1/b2 = -p/q exactly up to roundoff
            if (std::abs(b1 * double(q) + b2 * double(p)) >
                1e-12 * (std::abs(b1) * double(q) + b2 * double(p)))
                throw std::invalid_argument("Weights: rational tag inconsistent with b1/b2");
            rational_ = {p, q};
        }
    }

    double b1() const { return b1_; }
    double b2() const { return b2_; }
    double a1() const { return 1.0 / b1_; }
    double a2() const { return 1.0 / b2_; }
    double a(int j) const { return j == 1 ? a1() : a2(); }
    double b(int j) const { return j == 1 ? b1_ : b2_; }

    /// alpha := -b1/b2 (always positive)
    double alpha() const { return -b1_ / b2_; }
    /// b2 - b1, the reciprocal eigenvalue density up to 2*pi
    double span() const { return b2_ - b1_; }

    bool has_rational() const { return rational_.has_value(); }
    /// coprime (n1, n2) with b1 = -n1*b, b2 = n2*b
    std::pair<long, long> rational() const {
        if (!rational_) throw std::logic_error("Weights: no rational tag");
        return *rational_;
    }
    /// the base frequency b of the rational tag
    double rational_base() const { return b2_ / double(rational().second); }

    /// Continued-fraction probe for b1/b2 ~ -p/q: diagnostic only, never a
    /// branch condition (tolerance 1e-9, denominator cap 64).
    std::optional<std::pair<long, long>> probe_rational() const;

private:
    double b1_, b2_;
    std::optional<std::pair<long, long>> rational_;
};

// ------ potential ------ //

/// Complex 2x2 potential sampled on the uniform grid x_i = i/M of [0,1],
/// interpreted as piecewise linear between nodes.  The diagonal entries are
/// optional; when absent the potential is off-diagonal (Q11 = Q22 = 0).
class PotentialGrid {
public:
    PotentialGrid(int m, std::vector<cplx> q12, std::vector<cplx> q21,
                  std::vector<cplx> q11 = {}, std::vector<cplx> q22 = {})
        : m_(m), q12_(std::move(q12)), q21_(std::move(q21)),
          q11_(std::move(q11)), q22_(std::move(q22)) {
        if (m_ < 2) throw std::invalid_argument("PotentialGrid: need M >= 2");
        auto check = [&](const std::vector<cplx>& v, bool required) {
            if (v.empty() && !required) return;
            if (int(v.size()) != m_ + 1)
                throw std::invalid_argument("PotentialGrid: sample count != M+1");
            for (const cplx& z : v)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                    throw std::invalid_argument("PotentialGrid: non-finite sample");
        };
        check(q12_, true);
        check(q21_, true);
        check(q11_, false);
        check(q22_, false);
    }

    static PotentialGrid zero(int m) {
        return PotentialGrid(m, std::vector<cplx>(m + 1, 0.0),
                             std::vector<cplx>(m + 1, 0.0));
    }
    static PotentialGrid constant(cplx q12, cplx q21, int m) {
        return PotentialGrid(m, std::vector<cplx>(m + 1, q12),
                             std::vector<cplx>(m + 1, q21));
    }

    int m() const { return m_; }
    double dx() const { return 1.0 / m_; }
    bool off_diagonal() const {
        auto all_zero = [](const std::vector<cplx>& v) {
            for (const cplx& z : v)
                if (z != cplx(0.0)) return false;
            return true;
        };
        return (q11_.empty() || all_zero(q11_)) && (q22_.empty() || all_zero(q22_));
    }

    const std::vector<cplx>& q12() const { return q12_; }
    const std::vector<cplx>& q21() const { return q21_; }
    bool has_diagonal_samples() const { return !q11_.empty() || !q22_.empty(); }
    cplx q11_node(int i) const { return q11_.empty() ? cplx(0.0) : q11_[i]; }
    cplx q22_node(int i) const { return q22_.empty() ? cplx(0.0) : q22_[i]; }

    Eigen::Matrix2cd node(int i) const {
        Eigen::Matrix2cd q;
        q << q11_node(i), q12_[i], q21_[i], q22_node(i);
        return q;
    }
    /// midpoint value of interval i, exact for the piecewise-linear interpolant
    Eigen::Matrix2cd mid(int i) const { return 0.5 * (node(i) + node(i + 1)); }

    /// piecewise-linear sample of one entry at x in [0,1]
    cplx at(const std::vector<cplx>& v, double x) const {
        if (v.empty()) return 0.0;
        double s = std::min(std::max(x, 0.0), 1.0) * m_;
        int i = std::min(int(s), m_ - 1);
        double u = s - i;
        return (1.0 - u) * v[i] + u * v[i + 1];
    }
    cplx q12_at(double x) const { return at(q12_, x); }
    cplx q21_at(double x) const { return at(q21_, x); }

    /// trapezoid L1 norm of the entrywise max |Q|
    double l1_norm() const {
        double s = 0.0;
        for (int i = 0; i <= m_; ++i) {
            double v = std::max(std::max(std::abs(q12_[i]), std::abs(q21_[i])),
                                std::max(std::abs(q11_node(i)), std::abs(q22_node(i))));
            s += (i == 0 || i == m_) ? 0.5 * v : v;
        }
        return s * dx();
    }

    /// resample onto a grid with new_m intervals (piecewise-linear)
    PotentialGrid resampled(int new_m) const;

private:
    int m_;
    std::vector<cplx> q12_, q21_, q11_, q22_;
};

// ------ boundary conditions ------ //

/// Boundary matrices (C, D) of Cy(0) + Dy(1) = 0; row j of the 2x4 block
/// (C D) holds the coefficients (a_j1, a_j2, a_j3, a_j4).
struct BoundaryPair {
    Eigen::Matrix2cd C, D;

    static BoundaryPair from_rows(const Eigen::Vector4cd& r1, const Eigen::Vector4cd& r2) {
        BoundaryPair bc;
        bc.C << r1(0), r1(1), r2(0), r2(1);
        bc.D << r1(2), r1(3), r2(2), r2(3);
        return bc;
    }
    Eigen::Vector4cd row(int j) const {
        return Eigen::Vector4cd(C(j, 0), C(j, 1), D(j, 0), D(j, 1));
    }
    /// rank of the 2x4 block (C D); the maximality condition requires 2
    int rank(double tol = 1e-12) const {
        Eigen::Matrix<cplx, 2, 4> cd;
        cd << C, D;
        Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>> svd(cd);
        const auto& s = svd.singularValues();
        return (s(0) <= 0.0) ? 0 : (s(1) > tol * s(0) ? 2 : 1);
    }

    static BoundaryPair periodic() {
        return from_rows({1, 0, -1, 0}, {0, 1, 0, -1});
    }
    static BoundaryPair antiperiodic() {
        return from_rows({1, 0, 1, 0}, {0, 1, 0, 1});
    }
};

/// Regular boundary conditions reduced to the normal form
///   U1(y) = y1(0) + b y2(0) + a y1(1) = 0,
///   U2(y) = d y2(0) + c y1(1) + y2(1) = 0.
struct ReducedBC {
    cplx a, b, c, d;

    cplx det() const { return a * d - b * c; }
    bool regular(double tol = 0.0) const { return std::abs(det()) > tol; }

    BoundaryPair rows() const {
        return BoundaryPair::from_rows({1, b, a, 0}, {0, d, c, 1});
    }

    static ReducedBC periodic() { return {-1, 0, 0, -1}; }
    static ReducedBC antiperiodic() { return {1, 0, 0, 1}; }
    /// separated conditions a = d = 0 with bc != 0
    static ReducedBC separated(cplx b, cplx c) { return {0, b, c, 0}; }
};

// ------ strip ------ //

/// Horizontal strip |Im lambda| <= h restricted to a real window.
struct Strip {
    double h;
    double re_min, re_max;

    Strip(double h_, double re_min_, double re_max_)
        : h(h_), re_min(re_min_), re_max(re_max_) {
        if (!(h > 0.0)) throw std::invalid_argument("Strip: h must be positive");
        if (!(re_min < re_max)) throw std::invalid_argument("Strip: empty window");
    }
};

// ------ the 2x2 problem ------ //

struct DiracProblem {
    Weights weights;
    PotentialGrid potential;
    BoundaryPair bc;
};

// ------ generic n x n problem (used by the Timoshenko 4x4 reduction) ------ //

struct GeneralProblem {
    Eigen::VectorXd b;                        // diagonal of B
    std::vector<Eigen::MatrixXcd> q_nodes;    // potential samples on x_i = i/m
    Eigen::MatrixXcd C, D;

    int dim() const { return int(b.size()); }
    int m() const { return int(q_nodes.size()) - 1; }
    double abs_span() const { return b.cwiseAbs().sum(); }
};

GeneralProblem as_general(const DiracProblem& p);

}  // namespace dirac
