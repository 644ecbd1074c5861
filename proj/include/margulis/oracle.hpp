#pragma once

#include <gmpxx.h>

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "margulis/angle.hpp"
#include "margulis/epsilon.hpp"
#include "margulis/geometry.hpp"
#include "margulis/interval.hpp"

namespace margulis {

/// Fixed-precision brute-force reference configuration. bits is deliberately
/// far above the main build's default so oracle enclosures dominate.
struct OracleConfig {
    mpfr_prec_t bits = 512;
    mpz_class j_cap = 5000000;
    std::size_t n_cap = 40;
    std::size_t truncation_depth = 48;
};

/**
 * Independent reference evaluations. Norms come from the exact rational
 * bracket of alpha between two deep consecutive convergents (truncation
 * error certified by the convergent interleaving), never from the backward
 * recurrence the main path uses; envelope minima come from a dense scan of
 * the constituents, never from a profile.
 */
class Oracle {
  public:
    explicit Oracle(const Angle& a, OracleConfig cfg = {});

    const Angle& angle() const { return angle_; }
    const OracleConfig& config() const { return cfg_; }

    /// Exact rational enclosure of ||j alpha||.
    std::pair<mpq_class, mpq_class> norm_bracket(const mpz_class& j) const;
    Ival norm(const mpz_class& j) const;
    /// u_{alpha,j}(r) evaluated one-shot at cfg.bits.
    Ival u(const mpz_class& j, const Ival& r, const EpsilonConfig& eps) const;

    struct MinResult {
        Ival value;
        mpz_class argmin;
        bool argmin_certified = false;  // unique strict minimizer separated from all others
        mpz_class j_scanned;
    };
    /// Dense minimization of u_j(r) over 1 <= j <= J, where J is driven by
    /// the running best via u_j >= c(eps) j.
    MinResult min_u(const Ival& r, const EpsilonConfig& eps) const;

    /// Reference inverse of the boundary function by bisection over min_u.
    Ival inverse(const Ival& t, const EpsilonConfig& eps, double r_hi, long target_bits = 40) const;

  private:
    void deepen(std::size_t depth) const;
    Ival delta_of(const mpz_class& j) const;  // 4 sin^2(pi ||j alpha||), cached
    Angle angle_;  // owned copy
    OracleConfig cfg_;
    mutable std::mutex mu_;
    mutable std::size_t depth_ = 0;
    mutable mpq_class alpha_lo_, alpha_hi_;
    mutable std::map<mpz_class, Ival> delta_cache_;
};

/// Inputs for the formula registry; only the fields a formula uses are read.
struct FormulaInputs {
    const Angle* angle = nullptr;
    mpz_class j;
    std::size_t n = 0, m = 0;
    double r = 0, t = 0;
    std::optional<Point4> x, y;
    EpsilonConfig eps = EpsilonConfig::margulis_default();
    double r_hi = 0;  // bisection reach for "vol"
};

/// One-shot 512-bit reference of a registered closed formula:
/// "UJ" (constituent value), "rr1" (crossing radius), "dn" (delta_n),
/// "dist" (hyperbolic distance), "vol" (leaf volume).
Ival direct_eval(const std::string& formula_id, const FormulaInputs& in, OracleConfig cfg = {});

struct ScanReport {
    std::size_t n_checked = 0;
    bool pass = false;
    std::size_t fail_n = 0;
    mpz_class fail_j;
};

/// Exhaustive closest-return verification: for every n <= n_cap and every
/// 0 < j < q_n, certify ||j alpha|| > ||q_n alpha|| strictly. mutate_index
/// (tests only) corrupts q_n at that index to prove the scan can fail.
ScanReport closest_return_scan(const Angle& a, std::size_t n_cap, OracleConfig cfg = {},
                               std::optional<std::size_t> mutate_index = std::nullopt);

}  // namespace margulis
