#include "margulis/epsilon.hpp"

#include "margulis/errors.hpp"

namespace margulis {

Ival EpsilonConfig::eps4_bound(mpfr_prec_t bits) {
    return Ival::sqrt_int(3, bits) / Ival::pi(bits).mul_int(9);
}

EpsilonConfig EpsilonConfig::explicit_value(double eps) {
    if (!(eps > 0)) throw PreconditionViolated("epsilon must be positive");
    // certified eps <= sqrt(3)/(9 pi); a double never equals the bound exactly
    for (mpfr_prec_t bits = 128; bits <= 1024; bits *= 2) {
        Ival bound = eps4_bound(bits);
        Ival v = Ival::from_double(eps, bits);
        if (v.certainly_gt(bound)) throw PreconditionViolated("epsilon exceeds sqrt(3)/(9 pi)");
        if (!v.overlaps(bound)) break;
    }
    return EpsilonConfig(Mode::Explicit, eps);
}

Ival EpsilonConfig::epsilon(mpfr_prec_t bits) const {
    switch (mode_) {
        case Mode::Default:
            return eps4_bound(bits);
        case Mode::Explicit:
            return Ival::from_double(eps_, bits);
        case Mode::UnitC:
            throw PreconditionViolated("unit_c normalization carries no epsilon");
    }
    throw ContractViolation("unreachable");
}

Ival EpsilonConfig::c(mpfr_prec_t bits) const {
    if (mode_ == Mode::UnitC) return Ival(1, bits);
    Ival e = epsilon(bits);
    return (e.div_int(2).sinh().mul_int(2)).recip();
}

}  // namespace margulis
