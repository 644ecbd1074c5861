#include "margulis/norms.hpp"

#include <algorithm>

namespace margulis {

NormEngine::NormEngine(const Angle& a, PrecisionPolicy pol) : angle_(a), policy_(pol) {}

std::size_t NormEngine::offset_for(mpfr_prec_t bits) const {
    // deepen the seed together with the working precision; the backward
    // recurrence contracts by at least a golden-ratio-squared factor per
    // level, so bits/2 extra depth keeps the seed error below the rounding
    // error at every rung
    return policy_.depth_offset + static_cast<std::size_t>(bits / 2);
}

const NormEngine::Sweep& NormEngine::sweep_for(std::size_t n, mpfr_prec_t bits) const {
    std::size_t cap = angle_.max_seed_depth();
    // one extra level past the seed is always available with the worst-case
    // tail bound beta_{N+1} in [0, beta_N]
    if (cap != Angle::unbounded && n > cap + 1)
        throw QuotientsExhausted("norm index " + std::to_string(n) +
                                 " beyond the quotient stream's reach");
    std::size_t want = n + offset_for(bits);
    if (want < n) want = n;  // overflow guard
    if (cap != Angle::unbounded && want > cap) want = cap;

    std::lock_guard<std::mutex> g(mu_);
    auto it = sweeps_.find(bits);
    if (it != sweeps_.end() && it->second.seed_depth >= want) return it->second;

    Sweep s;
    s.seed_depth = want;
    std::size_t N = want;
    s.tail.resize(N + 1);
    s.beta.resize(N + 2);
    if (angle_.quotient_known(N + 1)) {
        mpz_class a = angle_.quotient(N + 1);
        s.tail[N] = Ival::from_rational_endpoints(mpq_class(1, a + 1), mpq_class(1, a), bits);
    } else if (auto ub = angle_.tail_upper_bound(N, bits)) {
        s.tail[N] = *ub;
    } else {
        s.tail[N] = Ival::from_rational_endpoints(mpq_class(0), mpq_class(1), bits);
    }
    for (std::size_t k = N; k-- > 0;) {
        Ival den = Ival::exact_int(angle_.quotient(k + 1), bits) + s.tail[k + 1];
        s.tail[k] = den.recip();
    }
    s.beta[0] = s.tail[0];
    for (std::size_t k = 1; k <= N; ++k) s.beta[k] = s.beta[k - 1] * s.tail[k];
    s.beta[N + 1] = Ival::hull(Ival(0, bits), s.beta[N]);
    auto [pos, ignored] = sweeps_.insert_or_assign(bits, std::move(s));
    return pos->second;
}

Ival NormEngine::beta(std::size_t n, mpfr_prec_t bits) const {
    return sweep_for(n, bits).beta[n];
}

Ival NormEngine::beta_diff(std::size_t n, std::size_t m, mpfr_prec_t bits) const {
    if (n >= m) throw PreconditionViolated("beta_diff requires n < m");
    if (!angle_.quotient_known(m + 1)) {
        // stream edge: a_{m+1} unavailable, so the exact-combination route is
        // out of reach. Direct subtraction is well conditioned exactly here,
        // since the unknown tail makes beta_m's upper bound << beta_n.
        const Sweep& s = sweep_for(m, bits);
        return s.beta[n] - s.beta[m];
    }
    const Sweep& s = sweep_for(m + 1, bits);
    // beta_k = A beta_m + B beta_{m+1} with exact integer continuants
    mpz_class A_prev = 0, B_prev = 1;  // beta_{m+1}
    mpz_class A_cur = 1, B_cur = 0;    // beta_m
    for (std::size_t k = m; k-- > n;) {
        mpz_class ak2 = angle_.quotient(k + 2);
        mpz_class A_new = ak2 * A_cur + A_prev;
        mpz_class B_new = ak2 * B_cur + B_prev;
        A_prev = std::move(A_cur);
        B_prev = std::move(B_cur);
        A_cur = std::move(A_new);
        B_cur = std::move(B_new);
    }
    // beta_n - beta_m = (A-1) beta_m + B beta_{m+1}: nonnegative combination
    return s.beta[m].mul_int(A_cur - 1) + s.beta[m + 1].mul_int(B_cur);
}

Ival NormEngine::beta_sum(std::size_t n, std::size_t m, mpfr_prec_t bits) const {
    const Sweep& s = sweep_for(std::max(n, m), bits);
    return s.beta[n] + s.beta[m];
}

Ival NormEngine::norm(std::size_t n, mpfr_prec_t bits) const {
    Ival b = beta(n, bits);
    if (n == 0) {
        Ival one_minus = Ival(1, bits) - b;
        return Ival::min(b, one_minus);
    }
    return b;
}

bool NormEngine::q0_adjusted() const {
    return angle_.quotient(1) == 1;
}

std::pair<mpq_class, mpq_class> NormEngine::qnp_bracket(std::size_t n) const {
    mpz_class q = angle_.convergent(n + 1).q;
    mpq_class lo(1, 2 * q), hi(1, q);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

std::vector<mpz_class> NormEngine::ostrowski_digits(const mpz_class& j) const {
    if (j < 1) throw PreconditionViolated("ostrowski_digits: j >= 1 required");
    // largest m with q_m <= j
    std::size_t m = 0;
    while (angle_.quotient_known(m + 1) && angle_.convergent(m + 1).q <= j) ++m;
    std::vector<mpz_class> digits(m + 1);
    mpz_class rem = j;
    for (std::size_t k = m + 1; k-- > 0;) {
        mpz_class qk = angle_.convergent(k).q;
        mpz_class c = rem / qk;
        digits[k] = c;
        rem -= c * qk;
    }
    if (rem != 0) throw ContractViolation("ostrowski_digits: nonzero remainder");
    return digits;
}

Ival NormEngine::norm_any(const mpz_class& j, mpfr_prec_t bits) const {
    std::vector<mpz_class> digits = ostrowski_digits(j);
    std::size_t m = digits.size() - 1;
    const Sweep& s = sweep_for(m, bits);
    // S = j alpha - sum c_k p_k = sum c_k (-1)^k beta_k, |S| < 1
    Ival S(0, bits);
    for (std::size_t k = 0; k <= m; ++k) {
        if (digits[k] == 0) continue;
        Ival term = s.beta[k].mul_int(digits[k]);
        S = (k % 2 == 0) ? S + term : S - term;
    }
    Ival a = S.abs();
    return Ival::min(a, Ival(1, bits) - a);
}

std::vector<mpfr_prec_t> NormEngine::ladder() const {
    std::vector<mpfr_prec_t> out;
    for (mpfr_prec_t b = policy_.bits_start; b <= policy_.bits_cap; b *= 2) out.push_back(b);
    return out;
}

NormResult norm_closest(const Angle& a, std::size_t n, long target_bits, PrecisionPolicy pol) {
    std::size_t cap = a.max_norm_index();
    if (cap != Angle::unbounded && n > cap)
        throw QuotientsExhausted("norm_closest: index " + std::to_string(n) +
                                 " beyond max_valid_index " + std::to_string(cap));
    NormEngine eng(a, pol);
    bool have_bracket = a.quotient_known(n + 1);
    std::pair<mpq_class, mpq_class> bracket;
    if (have_bracket) bracket = eng.qnp_bracket(n);
    for (mpfr_prec_t bits : eng.ladder()) {
        Ival b = eng.beta(n, bits);
        if (!b.rel_width_below(target_bits)) continue;
        // Lemma qnp(ii) gate, on beta_n per the n = 0 remark
        if (have_bracket) {
            bool inside = (b.lo_q() > bracket.first) && (b.hi_q() < bracket.second);
            if (!inside) continue;
        }
        NormResult r;
        r.value = eng.norm(n, bits);
        r.q0_adjusted = (n == 0) && eng.q0_adjusted();
        r.bits_used = bits;
        r.max_valid_index = a.max_norm_index();
        return r;
    }
    throw PrecisionExceeded("norm_closest: target width 2^-" + std::to_string(target_bits) +
                            " unreachable for n=" + std::to_string(n));
}

NormResult norm_any(const Angle& a, const mpz_class& j, long target_bits, PrecisionPolicy pol) {
    NormEngine eng(a, pol);
    for (mpfr_prec_t bits : eng.ladder()) {
        Ival v = eng.norm_any(j, bits);
        if (v.rel_width_below(target_bits)) {
            NormResult r;
            r.value = std::move(v);
            r.bits_used = bits;
            r.max_valid_index = a.max_norm_index();
            return r;
        }
    }
    throw PrecisionExceeded("norm_any: target width unreachable for j=" + j.get_str());
}

DiophantineReport diophantine_report(const Angle& a, unsigned nu, std::size_t n_max) {
    if (nu < 2) throw PreconditionViolated("diophantine_report: nu >= 2 required");
    DiophantineReport rep;
    rep.nu = nu;
    rep.n_max = n_max;
    rep.max_quotient = 0;
    mpq_class best(0);
    for (std::size_t n = 1; n <= n_max; ++n) {
        mpz_class qn = a.convergent(n).q;
        mpz_class qn1 = a.convergent(n + 1).q;
        mpz_class den;
        mpz_pow_ui(den.get_mpz_t(), qn.get_mpz_t(), nu - 1);
        mpq_class ratio(qn1, den);
        ratio.canonicalize();
        if (ratio > best) best = ratio;
        mpz_class an = a.quotient(n);
        if (an > rep.max_quotient) rep.max_quotient = an;
    }
    rep.sup_ratio_exact = best;
    rep.sup_ratio = Ival::from_rational(best, 128);
    rep.bounded_type_flag = a.certified_bounded_type();
    return rep;
}

}  // namespace margulis
