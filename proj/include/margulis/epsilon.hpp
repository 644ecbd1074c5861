#pragma once

#include "margulis/interval.hpp"

namespace margulis {

/**
 * The Margulis parameter epsilon and its derived constant
 * c(eps) = 1/sqrt(2 cosh(eps) - 2) = 1/(2 sinh(eps/2)).
 *
 * The default is eps = sqrt(3)/(9 pi), the known lower bound for the
 * Margulis constant of H^4, giving c(eps) = 16.321642... . Explicit values
 * are accepted in (0, sqrt(3)/(9 pi)]. The unit_c mode sets c = 1 exactly,
 * the normalization used for figures and slope diagnostics; it carries no
 * epsilon and only scales boundary values.
 */
class EpsilonConfig {
  public:
    static EpsilonConfig margulis_default() { return EpsilonConfig(Mode::Default, 0.0); }
    static EpsilonConfig explicit_value(double eps);
    static EpsilonConfig unit_c() { return EpsilonConfig(Mode::UnitC, 0.0); }

    /// Enclosure of epsilon (throws for unit_c mode).
    Ival epsilon(mpfr_prec_t bits) const;
    /// Enclosure of c(eps); exactly [1,1] in unit_c mode.
    Ival c(mpfr_prec_t bits) const;

    bool is_unit_c() const { return mode_ == Mode::UnitC; }
    bool is_default() const { return mode_ == Mode::Default; }
    double explicit_eps() const { return eps_; }

    /// Enclosure of the H^4 Margulis-constant lower bound sqrt(3)/(9 pi).
    static Ival eps4_bound(mpfr_prec_t bits);

  private:
    enum class Mode { Default, Explicit, UnitC };
    EpsilonConfig(Mode m, double e) : mode_(m), eps_(e) {}
    Mode mode_;
    double eps_;
};

}  // namespace margulis
