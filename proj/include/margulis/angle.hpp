#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <limits>
#include <optional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "margulis/errors.hpp"
#include "margulis/interval.hpp"

namespace margulis {

/// Exact rational convergent p_n/q_n of a continued fraction.
struct Convergent {
    std::size_t n = 0;
    mpz_class p;
    mpz_class q;
};

/**
 * An irrational rotation angle alpha in (0,1), given by its partial quotient
 * stream a_1, a_2, ... rather than by a decimal value. Three source kinds:
 *
 *  - periodic:  finite prefix followed by a repeating period (all quadratic
 *    irrationals, e.g. the golden mean [1,1,1,...]);
 *  - explicit:  a finite truncation; queries past the list throw
 *    QuotientsExhausted, and certified results are only available up to
 *    max_norm_index();
 *  - liouville: the deterministic growth rule a_{n+1} = ceil(exp(q_n)/q_n),
 *    which makes q_{n+1} land in [exp(q_n), exp(q_n) + 2 q_n]. Generation is
 *    refused (OverflowPolicy) once q_{n+1} would exceed the digit cap.
 *
 * The quotient cache extends lazily under a lock; all queries are safe to
 * issue from concurrent readers.
 */
class Angle {
  public:
    static Angle periodic(std::vector<unsigned long> prefix, std::vector<unsigned long> period);
    static Angle explicit_list(std::vector<unsigned long> quotients);
    static Angle liouville(std::vector<unsigned long> seed_prefix,
                           unsigned long digit_cap = 1000000);

    Angle(const Angle& o);
    Angle& operator=(const Angle&) = delete;

    /// Partial quotient a_n, n >= 1 (big integer: growth rules overflow 64 bits).
    mpz_class quotient(std::size_t n) const;
    /// Whether quotient(n) can be produced without throwing.
    bool quotient_known(std::size_t n) const;
    /// Certified a_n >= 2, decidable for growth rules even past the overflow cap.
    bool quotient_at_least_two(std::size_t n) const;
    /// True iff a_n == 1 (throws where undecidable).
    bool quotient_is_one(std::size_t n) const { return !quotient_at_least_two(n); }

    /// Exact convergent (p_n, q_n); seeds p_0=0,q_0=1 and p_1=1,q_1=a_1.
    Convergent convergent(std::size_t n) const;

    /// For growth rules whose a_{N+1} was refused by the overflow policy:
    /// certified upper bound on the tail t_N = 1/(a_{N+1} + ...), namely
    /// q_N exp(-q_N). Empty for other sources (nothing is known there).
    std::optional<Ival> tail_upper_bound(std::size_t N, mpfr_prec_t bits) const;

    /// Deepest index usable to seed a backward norm recurrence
    /// (the seed at depth N consumes a_{N+1}).
    std::size_t max_seed_depth() const;
    /// Deepest index n for which certified norms can be requested.
    std::size_t max_norm_index() const;
    static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

    /// Enclosure of alpha via the bracket of consecutive convergents.
    Ival value(mpfr_prec_t bits) const;
    /// Exact rational bracket [lo, hi] containing alpha, from convergents at depth >= depth.
    std::pair<mpq_class, mpq_class> rational_bracket(std::size_t depth) const;

    bool is_periodic() const { return kind_ == Kind::Periodic; }
    bool is_explicit() const { return kind_ == Kind::Explicit; }
    bool is_growth_rule() const { return kind_ == Kind::Liouville; }
    /// Certified bounded type (all partial quotients bounded): true for periodic sources.
    bool certified_bounded_type() const { return kind_ == Kind::Periodic; }

    /// Round-trips the CLI grammar, e.g. "periodic:[1;2,3]".
    std::string describe() const;

  private:
    enum class Kind { Periodic, Explicit, Liouville };
    Angle(Kind k) : kind_(k) {}

    // returns number of quotients now available (cache may stop growing at caps)
    std::size_t ensure_quotients(std::size_t n) const;
    void generate_next_locked() const;  // growth rules

    Kind kind_;
    std::vector<unsigned long> prefix_;
    std::vector<unsigned long> period_;  // nonempty iff periodic
    unsigned long digit_cap_ = 0;        // liouville only

    mutable std::mutex mu_;
    mutable std::vector<mpz_class> quotients_;    // 0-based storage of a_1, a_2, ...
    mutable std::vector<Convergent> convergents_; // convergents_[n] = (p_n, q_n)
    mutable bool growth_exhausted_ = false;
};

/// Builds the Liouville-type angle of the growth rule above.
Angle liouville_angle(std::vector<unsigned long> seed_prefix, unsigned long digit_cap = 1000000);

}  // namespace margulis
