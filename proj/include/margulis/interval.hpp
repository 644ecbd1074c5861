#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

#include "margulis/errors.hpp"

namespace margulis {

/**
 * Certified enclosure [lo, hi] of a real number, with dyadic endpoints.
 *
 * Every operation rounds the lower endpoint down and the upper endpoint up
 * (MPFR directed rounding), so the true value of any expression built from
 * enclosures of its inputs is guaranteed to lie inside the result. The
 * endpoint precision is carried with the value; binary operations work at
 * the larger of the two operand precisions.
 */
class Ival {
  public:
    Ival();
    explicit Ival(long v, mpfr_prec_t bits = 64);
    Ival(const Ival& o);
    Ival(Ival&& o) noexcept;
    Ival& operator=(const Ival& o);
    Ival& operator=(Ival&& o) noexcept;
    ~Ival();

    static Ival exact_int(const mpz_class& v, mpfr_prec_t bits);
    static Ival from_ratio(const mpz_class& num, const mpz_class& den, mpfr_prec_t bits);
    static Ival from_rational(const mpq_class& q, mpfr_prec_t bits);
    static Ival from_rational_endpoints(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t bits);
    static Ival from_double(double v, mpfr_prec_t bits);
    static Ival pi(mpfr_prec_t bits);
    static Ival sqrt_int(const mpz_class& v, mpfr_prec_t bits);  // sqrt(v), v >= 0
    static Ival hull(const Ival& a, const Ival& b);
    static Ival intersect(const Ival& a, const Ival& b);  // throws ContractViolation if empty

    mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }
    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }
    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_d() const;
    mpq_class lo_q() const;  // exact dyadic endpoint
    mpq_class hi_q() const;

    bool is_positive() const { return mpfr_sgn(lo_) > 0; }
    bool is_nonnegative() const { return mpfr_sgn(lo_) >= 0; }
    bool is_negative() const { return mpfr_sgn(hi_) < 0; }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    bool contains(const mpq_class& v) const;
    bool contains(const Ival& v) const;  // superset test
    bool overlaps(const Ival& o) const;
    bool certainly_lt(const Ival& o) const { return mpfr_less_p(hi_, o.lo_) != 0; }
    bool certainly_gt(const Ival& o) const { return mpfr_greater_p(lo_, o.hi_) != 0; }
    /// -1 if certainly below q, +1 if certainly above, 0 if q inside.
    int cmp(const mpq_class& q) const;

    /// Upper bound on hi - lo, as double (may be +inf).
    double width_d() const;
    /// True when lo > 0 and (hi - lo)/lo <= 2^-g.
    bool rel_width_below(long g) const;
    bool abs_width_below(long g) const;

    Ival round_to(mpfr_prec_t bits) const;  // outward

    friend Ival operator+(const Ival& a, const Ival& b);
    friend Ival operator-(const Ival& a, const Ival& b);
    friend Ival operator-(const Ival& a);
    friend Ival operator*(const Ival& a, const Ival& b);
    friend Ival operator/(const Ival& a, const Ival& b);  // divisor must not contain 0

    Ival mul_int(const mpz_class& k) const;  // k may be negative
    Ival div_int(const mpz_class& k) const;  // k != 0
    Ival add_int(long k) const;

    Ival sqr() const;
    Ival sqrt() const;          // requires lo >= 0
    Ival sqrt_clamped() const;  // clamps a (rounding-only) negative lo to 0
    Ival abs() const;
    Ival recip() const;

    /// Enclosure of sin(pi*x) for x contained in [-0.25, 1.25].
    Ival sin_pi() const;
    /// Enclosure of sin^2(pi*x) for arbitrary real x (reduces mod 1).
    Ival sin_pi_sq_periodic() const;
    Ival cosh() const;
    Ival sinh() const;
    Ival acosh_clamped() const;  // clamps lo to 1
    Ival log() const;            // requires lo > 0
    Ival exp() const;

    static Ival min(const Ival& a, const Ival& b);
    static Ival max(const Ival& a, const Ival& b);

    /// "[lo, hi]" with endpoints printed outward at the given digit count.
    std::string str(int digits = 8) const;
    std::string lo_str(int digits) const;  // rounded down
    std::string hi_str(int digits) const;  // rounded up

  private:
    struct raw_tag {};
    Ival(mpfr_prec_t bits, raw_tag);  // uninitialized-value ctor
    mpfr_t lo_;
    mpfr_t hi_;
};

/// Three-way certified comparison.
enum class Order { Less, Greater, Overlap };

inline Order order_of(const Ival& a, const Ival& b) {
    if (a.certainly_lt(b)) return Order::Less;
    if (a.certainly_gt(b)) return Order::Greater;
    return Order::Overlap;
}

/// Working-precision escalation ladder shared across the library.
struct PrecisionPolicy {
    mpfr_prec_t bits_start = 128;
    mpfr_prec_t bits_cap = 8192;
    std::size_t depth_offset = 8;  // seed depth of norm recurrences past the queried index
};

}  // namespace margulis
