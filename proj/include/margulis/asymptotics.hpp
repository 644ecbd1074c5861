#pragma once

#include <string>
#include <vector>

#include "margulis/envelope.hpp"

namespace margulis {

/// Outcome of one certified inequality family over an index range. A report
/// with margin_lo > 0 certifies the strict inequality on every checked index.
struct InequalityReport {
    std::string name;
    std::size_t n_lo = 0, n_hi = 0;
    std::size_t checked = 0;
    double margin_lo = 0;               // min over the range of the certified slack
    std::size_t worst_n = 0;
    bool certified = true;              // no certified violation and nothing undetermined
    std::vector<std::size_t> failed;    // certified violations
    std::vector<std::size_t> undecided; // sign not separated at the cap
};

/**
 * The explicit-constant inequality block: strict bounds on r_{n,n+2},
 * delta_n - delta_{n+1}, r_{n,n+1}, the endpoint ratios x/q_n^2 and
 * y/q_{n+1}^2, the delta decay of consecutive norms, and the closest-return
 * bracket and recursion identity. Side conditions (cases on a_{n+1}, a_{n+2},
 * presence, and minimum n) select which indices each family checks; indices
 * whose quotients are out of the stream's reach are skipped.
 */
std::vector<InequalityReport> inequality_suite(const BoundaryContext& ctx, std::size_t n_min,
                                               std::size_t n_max);

/// B(r) <= 1000 sqrt(r) on every breakpoint and an r_count-point log grid
/// with r >= sqrt(2) q_7^2 (convexity of the constituents against concavity
/// of sqrt makes the breakpoint checks decisive; the grid is checked too).
/// When q_7 is out of reach, the range starts at the first breakpoint.
InequalityReport universal_bound_check(const BoundaryContext& ctx, const EnvelopeProfile& prof,
                                       std::size_t r_count);

/// log B(r) / log r, reported for the c(eps) = 1 normalization of the
/// figures (the limit is unaffected; at finite r the additive log c(eps)
/// would mask the slope).
struct SlopeSample {
    double r = 0;
    Ival slope;
    std::size_t constituent_n = 0;
};

std::vector<SlopeSample> slope_profile(const BoundaryContext& ctx, const EnvelopeProfile& prof,
                                       const std::vector<double>& r_grid);

/// One probe per complete constituent at z = sqrt(x y), the scale the
/// Liouville slope collapse happens at.
std::vector<SlopeSample> slope_z_probes(const BoundaryContext& ctx, const EnvelopeProfile& prof);

struct BandResult {
    double ratio_lo = 0;   // certified inf of B(r)/sqrt(r) over the range
    double ratio_hi = 0;   // certified sup
    double c_certified = 0;  // max(ratio_hi, 1/ratio_lo)
    double c_empirical = 0;  // best constant observed at the grid points
};

/// Certified two-sided comparison B(r) ~ sqrt(r) over [r_lo, r_hi] for
/// bounded-type angles (refused otherwise).
BandResult bounded_type_band(const BoundaryContext& ctx, const EnvelopeProfile& prof, double r_lo,
                             double r_hi, int pts_per_decade = 48);

}  // namespace margulis
