#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "margulis/angle.hpp"
#include "margulis/epsilon.hpp"
#include "margulis/interval.hpp"
#include "margulis/norms.hpp"

namespace margulis {

enum class Presence { Present, Absent, Undetermined };

/// Trichotomy of an ordered triple (k, n, m): fair, near miss, or (after the
/// escalation cap) undetermined, which covers the hypothetical strike case.
struct TripleClass {
    enum class Kind { Fair, NearMiss, Undetermined };
    Kind kind = Kind::Undetermined;
    double undetermined_width = 0;  // achieved separation width at the cap
    bool is_fair() const { return kind == Kind::Fair; }
    bool is_near_miss() const { return kind == Kind::NearMiss; }
    bool is_undetermined() const { return kind == Kind::Undetermined; }
};

/// Crossing radius r_{n,m} of the constituents u_{q_n}, u_{q_m}:
/// r^2 = (q_m^2 - q_n^2)/(delta_n - delta_m), with r_{0,1} = 0 by convention
/// when q_0 = q_1 = 1.
struct Crossing {
    std::size_t n = 0, m = 0;
    Ival r;
    Ival r_squared;
    mpz_class q_gap_sq;  // q_m^2 - q_n^2, exact
    Ival delta_gap;      // delta_n - delta_m
    bool degenerate_zero = false;
};

struct ProfileEntry {
    std::size_t n = 0;
    mpz_class q;
    Presence presence = Presence::Undetermined;
    Ival x, y;  // maximal interval [x, y] where u_{q_n} = B (present entries)
    bool complete = false;  // both endpoints certified
};

struct EnvelopeProfile {
    std::vector<ProfileEntry> entries;
    double valid_r_max = 0;  // queries are answered for r <= valid_r_max
    std::optional<std::size_t> undetermined_at;

    const ProfileEntry* entry_for(std::size_t n) const;
    std::vector<const ProfileEntry*> present_entries() const;
};

struct BoundaryValue {
    Ival value;
    mpz_class argmin_q;
    std::size_t argmin_n = 0;
    bool at_breakpoint = false;  // r fell inside a breakpoint's uncertainty; value hulled
};

/**
 * Certified computations on the boundary function B_alpha of one angle.
 *
 * All precision escalation is deterministic: the ladder doubles working
 * precision from policy.bits_start to policy.bits_cap, and norm seeds deepen
 * along the ladder. Comparison results therefore never depend on evaluation
 * order, and once a comparison separates, it stays separated at every finer
 * level. Presence labels and crossing radii do not depend on epsilon (the
 * common factor c(eps) cancels); only boundary values scale.
 */
class BoundaryContext {
  public:
    BoundaryContext(const Angle& a, EpsilonConfig eps = EpsilonConfig::margulis_default(),
                    PrecisionPolicy pol = {});

    const Angle& angle() const { return norms_.angle(); }
    const NormEngine& norms() const { return norms_; }
    const EpsilonConfig& eps() const { return eps_; }
    const PrecisionPolicy& policy() const { return policy_; }

    /// delta_n = 4 sin^2(pi beta_n).
    Ival delta(std::size_t n, mpfr_prec_t bits) const;
    /// delta_n - delta_m (n < m), via 4 sin(pi(b_n+b_m)) sin(pi(b_n-b_m)).
    Ival delta_diff(std::size_t n, std::size_t m, mpfr_prec_t bits) const;
    Ival crossing_r2(std::size_t n, std::size_t m, mpfr_prec_t bits) const;

    /// Crossing at the policy's default certification width.
    Crossing crossing(std::size_t n, std::size_t m, long target_bits = 48) const;

    TripleClass classify_triple(std::size_t k, std::size_t n, std::size_t m) const;
    Presence is_present(std::size_t n) const;

    /// u_{alpha,j}(r) = c(eps) sqrt(4 sin^2(pi ||j alpha||) r^2 + j^2).
    Ival u_value(const mpz_class& j, const Ival& r, mpfr_prec_t bits) const;
    /// Same, for the constituent of index n (uses delta_n).
    Ival u_of_index(std::size_t n, const Ival& r, mpfr_prec_t bits) const;

    EnvelopeProfile build_profile(std::size_t n_max, bool verify_se_window = true) const;

    BoundaryValue eval(const EnvelopeProfile& prof, const Ival& r) const;
    BoundaryValue eval(const EnvelopeProfile& prof, double r) const;

    /// Certified r with B(r) = t, by monotone bisection on the envelope.
    Ival boundary_inverse(const EnvelopeProfile& prof, const Ival& t, long target_bits = 48) const;

    /// Certified comparison of r_{a.first,a.second} vs r_{b.first,b.second},
    /// escalating along the ladder; Overlap only at the cap.
    Order compare_crossings(std::pair<std::size_t, std::size_t> a,
                            std::pair<std::size_t, std::size_t> b) const;

  private:
    Ival u_from_delta(const Ival& delta, const mpz_class& j, const Ival& r,
                      mpfr_prec_t bits) const;
    // numerator-scaled comparison of two crossings sharing arbitrary indices
    std::pair<Ival, Ival> crossing_cmp_products(std::pair<std::size_t, std::size_t> a,
                                                std::pair<std::size_t, std::size_t> b,
                                                mpfr_prec_t bits) const;

    EpsilonConfig eps_;
    PrecisionPolicy policy_;
    NormEngine norms_;
    mutable std::mutex mu_;
    mutable std::map<std::size_t, Presence> presence_cache_;
};

/// Spec-level wrappers (library users normally hold a BoundaryContext).
Ival u_value(const Angle& a, const mpz_class& j, double r, const EpsilonConfig& eps,
             long target_bits = 48, PrecisionPolicy pol = {});
Ival delta(const Angle& a, std::size_t n, long target_bits = 48, PrecisionPolicy pol = {});

}  // namespace margulis
