#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "margulis/angle.hpp"
#include "margulis/interval.hpp"

namespace margulis {

/**
 * Certified closest-return norms of an angle.
 *
 * The primary sequence is beta_n = |q_n alpha - p_n|, computed through the
 * tail values t_k = [0; a_{k+1}, a_{k+2}, ...] via the backward recurrence
 * t_k = 1/(a_{k+1} + t_{k+1}) seeded at a deeper index with the a-priori
 * bracket t_N in [1/(a_{N+1}+1), 1/a_{N+1}] (or [0,1] past the stream's
 * reach). The recurrence contracts interval width going down, so deepening
 * the seed buys relative precision; beta_n is the running product
 * t_0 t_1 ... t_n. For n >= 1, ||q_n alpha|| = beta_n; for n = 0 one has
 * beta_0 = alpha, which is the norm itself when a_1 >= 2 and the adjusted
 * value 1 - ||q_0 alpha|| when a_1 = 1.
 *
 * Differences beta_n - beta_m are evaluated cancellation-free through the
 * exact integer representation beta_n = A beta_m + B beta_{m+1}.
 */
class NormEngine {
  public:
    explicit NormEngine(const Angle& a, PrecisionPolicy pol = {});

    const Angle& angle() const { return angle_; }
    const PrecisionPolicy& policy() const { return policy_; }

    /// beta_n at working precision >= bits (no relative-width guarantee).
    Ival beta(std::size_t n, mpfr_prec_t bits) const;
    /// beta_n - beta_m for n < m, positive-combination form.
    Ival beta_diff(std::size_t n, std::size_t m, mpfr_prec_t bits) const;
    Ival beta_sum(std::size_t n, std::size_t m, mpfr_prec_t bits) const;
    /// ||q_n alpha||; equal to beta_n except at n = 0 with a_1 = 1.
    Ival norm(std::size_t n, mpfr_prec_t bits) const;
    /// ||j alpha|| for arbitrary j >= 1 via the Ostrowski digits of j.
    Ival norm_any(const mpz_class& j, mpfr_prec_t bits) const;

    bool q0_adjusted() const;  // a_1 == 1
    /// Exact bracket (1/(2 q_{n+1}), 1/q_{n+1}) of Lemma-type strict bounds.
    std::pair<mpq_class, mpq_class> qnp_bracket(std::size_t n) const;
    /// Ostrowski digits c_0..c_m of j (greedy, most significant last).
    std::vector<mpz_class> ostrowski_digits(const mpz_class& j) const;

    /// Escalation ladder: bits values from policy start to cap.
    std::vector<mpfr_prec_t> ladder() const;

  private:
    struct Sweep {
        std::size_t seed_depth = 0;
        std::vector<Ival> tail;  // t_0..t_N
        std::vector<Ival> beta;  // beta_0..beta_N
    };
    const Sweep& sweep_for(std::size_t n, mpfr_prec_t bits) const;
    std::size_t offset_for(mpfr_prec_t bits) const;

    Angle angle_;  // owned copy: engines outlive any caller-provided temporary
    PrecisionPolicy policy_;
    mutable std::mutex mu_;
    mutable std::map<mpfr_prec_t, Sweep> sweeps_;
};

/// Certified enclosure with the precision-escalation handle applied.
struct NormResult {
    Ival value;
    bool q0_adjusted = false;  // value reported per the a_1 = 1 convention
    mpfr_prec_t bits_used = 0;
    // deepest index this angle can certify (truncated sources only)
    std::size_t max_valid_index = Angle::unbounded;
};

/// ||q_n alpha|| with relative width <= 2^-target_bits, escalating to the cap.
NormResult norm_closest(const Angle& a, std::size_t n, long target_bits,
                        PrecisionPolicy pol = {});

/// ||j alpha|| with relative width <= 2^-target_bits.
NormResult norm_any(const Angle& a, const mpz_class& j, long target_bits,
                    PrecisionPolicy pol = {});

struct DiophantineReport {
    unsigned nu = 2;
    std::size_t n_max = 0;
    Ival sup_ratio;             // encloses max_{1<=n<=n_max} q_{n+1}/q_n^(nu-1)
    mpq_class sup_ratio_exact;  // the same ratio, exactly
    bool bounded_type_flag = false;
    mpz_class max_quotient;
};

/// Exact computation of the Diophantine diagnostic sup q_{n+1}/q_n^(nu-1).
DiophantineReport diophantine_report(const Angle& a, unsigned nu, std::size_t n_max);

}  // namespace margulis
