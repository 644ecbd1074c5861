#pragma once

#include <gmpxx.h>

#include "margulis/envelope.hpp"
#include "margulis/interval.hpp"

namespace margulis {

/// Values of the rational test functions
///   X(t) = (2t+1)/(t^2-1)
///   Y(t) = (t^2 - 19/20)/(-t^2/20 + 19t/10 + 19/20)
///   Z(t) = (19t^2/20 - 1)/(t^2/20 + 2t + 1)
/// at a rational argument, kept exact. Y has a pole near t ~ 38.5.
struct XyzRational {
    mpq_class X, Y, Z;
};
XyzRational xyz_eval(const mpq_class& t);

struct XyzInterval {
    Ival X, Y, Z;
};
XyzInterval xyz_eval(const Ival& t);

/**
 * Arithmetical context of the presence test at an index n with a_{n+1} = 1:
 * mu = q_n/q_{n-1} (exact), lambda = ||q_n alpha||/||q_{n+1} alpha||, and the
 * ratio (delta_n - delta_{n+1})/(delta_{n-1} - delta_n). The invariant
 * brackets a_n < mu < a_n + 1 and a_{n+2} < lambda < a_{n+2} + 1 are checked
 * at construction, as is the sandwich Z(lambda) < ratio < Y(lambda) for
 * n >= 5.
 */
struct AppendixContext {
    std::size_t n = 0;
    mpq_class mu;
    Ival lambda;
    Ival ratio;
    bool sandwich_checked = false;  // cc3 verified (n >= 5)
};

AppendixContext appendix_context(const BoundaryContext& ctx, std::size_t n);

enum class TableCell { Present, Absent, WhiteCell };

/// The five decided cells of the (a_n, a_{n+2}) table for a_{n+1} = 1, n >= 5.
TableCell table_decide(const Angle& a, std::size_t n);

/// The cc1 test: q_n present iff ratio < X(mu); Overlap when not certified.
Order cc1_compare(const BoundaryContext& ctx, std::size_t n);

}  // namespace margulis
