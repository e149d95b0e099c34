#pragma once

#include <optional>

#include "dirac/determinant.hpp"
#include "dirac/types.hpp"

namespace dirac {

struct EigenvalueRecord {
    cplx lambda;
    int multiplicity = 1;
    int n = 0;
    std::optional<cplx> lambda0;
    std::optional<double> gap;
};

struct Rect {
    double re0, re1, im0, im1;

    double width() const { return re1 - re0; }
    double height() const { return im1 - im0; }
    cplx center() const { return {0.5 * (re0 + re1), 0.5 * (im0 + im1)}; }
    double diameter() const { return std::hypot(width(), height()); }
};

/// Winding number of f over the rectangle boundary: adaptive trapezoid on
/// f'/f with f' by central differences.  Throws BoundaryNearZeroError when
/// the integral does not settle within 1e-3 of an integer (zero too close to
/// the contour); the caller nudges edges and retries.
int count_zeros_rect(const DeterminantHandle& f, const Rect& rect,
                     int max_samples = 16384);

struct StripSearchOptions {
    double newton_tol = 1e-12;        // Newton target |f| < tol * scale
    double record_tol = 1e-10;        // emitted-record residual bound
    double cluster_diameter = 1e-8;   // box size that seals a multiple zero
    int max_nudges = 8;
    int threads = 0;                  // 0: DIRAC_SPECTRA_THREADS or 1
};

/// Locate all zeros of f in the strip window by box subdivision with
/// argument-principle counts; simple zeros polished by Newton, persistent
/// clusters emitted with their multiplicity.  Records are (Re, Im)-sorted
/// and carry indices centered at the smallest |Re| record.
std::vector<EigenvalueRecord> find_zeros_strip(const DeterminantHandle& f,
                                               const Strip& strip,
                                               StripSearchOptions opts = {});

/// Re-sorted index assignment: n = 0 at the record with minimal |Re|
/// (ties prefer Re >= 0), increasing with Re.
void assign_indices(std::vector<EigenvalueRecord>& records);

struct PairingReport {
    double max_gap_outer = 0.0;
    double max_gap_inner = 0.0;
};

/// Multiplicity-aware nearest pairing of located zeros with the unperturbed
/// family over the same window; fills lambda0/gap and reports the maximal
/// gaps over the outer and inner halves of the window.
PairingReport pair_with_unperturbed(std::vector<EigenvalueRecord>& records,
                                    const std::vector<EigenvalueRecord>& unperturbed,
                                    double re_min, double re_max);

/// Connected components of the union of eps-discs around the records
/// (parenthesis blocks), as index lists ordered by first member.
std::vector<std::vector<int>> group_parentheses(const std::vector<EigenvalueRecord>& records,
                                                double eps);

/// Records from a closed-form listing (for pairing and CLI output).
std::vector<EigenvalueRecord> records_from_listing(const ZeroListing& listing);

}  // namespace dirac
