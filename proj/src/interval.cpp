#include "margulis/interval.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace margulis {

namespace {

mpfr_prec_t join_prec(const Ival& a, const Ival& b) {
    return std::max(a.prec(), b.prec());
}

}  // namespace

Ival::Ival(mpfr_prec_t bits, raw_tag) {
    mpfr_init2(lo_, bits);
    mpfr_init2(hi_, bits);
}

Ival::Ival() : Ival(64, Ival::raw_tag{}) {
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Ival::Ival(long v, mpfr_prec_t bits) : Ival(bits, Ival::raw_tag{}) {
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
}

Ival::Ival(const Ival& o) : Ival(o.prec(), Ival::raw_tag{}) {
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Ival::Ival(Ival&& o) noexcept {
    lo_[0] = o.lo_[0];
    hi_[0] = o.hi_[0];
    // leave o in a destructible state
    mpfr_init2(o.lo_, MPFR_PREC_MIN);
    mpfr_init2(o.hi_, MPFR_PREC_MIN);
}

Ival& Ival::operator=(const Ival& o) {
    if (this == &o) return *this;
    mpfr_set_prec(lo_, o.prec());
    mpfr_set_prec(hi_, o.prec());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
    return *this;
}

Ival& Ival::operator=(Ival&& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
}

Ival::~Ival() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Ival Ival::exact_int(const mpz_class& v, mpfr_prec_t bits) {
    Ival r(bits, Ival::raw_tag{});
    mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
    return r;
}

Ival Ival::from_ratio(const mpz_class& num, const mpz_class& den, mpfr_prec_t bits) {
    mpq_class q(num, den);
    q.canonicalize();
    return from_rational(q, bits);
}

Ival Ival::from_rational(const mpq_class& q, mpfr_prec_t bits) {
    Ival r(bits, Ival::raw_tag{});
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Ival Ival::from_rational_endpoints(const mpq_class& lo, const mpq_class& hi, mpfr_prec_t bits) {
    if (lo > hi) throw ContractViolation("from_rational_endpoints: lo > hi");
    Ival r(bits, Ival::raw_tag{});
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

Ival Ival::from_double(double v, mpfr_prec_t bits) {
    Ival r(bits, Ival::raw_tag{});
    mpfr_set_d(r.lo_, v, MPFR_RNDD);
    mpfr_set_d(r.hi_, v, MPFR_RNDU);
    return r;
}

Ival Ival::pi(mpfr_prec_t bits) {
    Ival r(bits, Ival::raw_tag{});
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Ival Ival::sqrt_int(const mpz_class& v, mpfr_prec_t bits) {
    return exact_int(v, bits + 4).sqrt().round_to(bits);
}

Ival Ival::hull(const Ival& a, const Ival& b) {
    Ival r(join_prec(a, b), Ival::raw_tag{});
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Ival Ival::intersect(const Ival& a, const Ival& b) {
    if (!a.overlaps(b)) throw ContractViolation("intersect: empty intersection");
    Ival r(join_prec(a, b), Ival::raw_tag{});
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

double Ival::mid_d() const {
    return 0.5 * (lo_d() + hi_d());
}

mpq_class Ival::lo_q() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), lo_);
    return q;
}

mpq_class Ival::hi_q() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), hi_);
    return q;
}

bool Ival::contains(const mpq_class& v) const {
    return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

bool Ival::contains(const Ival& v) const {
    return mpfr_lessequal_p(lo_, v.lo_) && mpfr_greaterequal_p(hi_, v.hi_);
}

bool Ival::overlaps(const Ival& o) const {
    return !certainly_lt(o) && !certainly_gt(o);
}

int Ival::cmp(const mpq_class& q) const {
    if (mpfr_cmp_q(hi_, q.get_mpq_t()) < 0) return -1;
    if (mpfr_cmp_q(lo_, q.get_mpq_t()) > 0) return 1;
    return 0;
}

double Ival::width_d() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

bool Ival::rel_width_below(long g) const {
    if (mpfr_sgn(lo_) <= 0) return false;
    mpfr_t w;
    mpfr_init2(w, prec());
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    mpfr_div(w, w, lo_, MPFR_RNDU);
    // compare against 2^-g
    bool ok = mpfr_cmp_ui_2exp(w, 1, -g) <= 0;
    mpfr_clear(w);
    return ok;
}

bool Ival::abs_width_below(long g) const {
    mpfr_t w;
    mpfr_init2(w, prec());
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    bool ok = mpfr_cmp_ui_2exp(w, 1, -g) <= 0;
    mpfr_clear(w);
    return ok;
}

Ival Ival::round_to(mpfr_prec_t bits) const {
    Ival r(bits, Ival::raw_tag{});
    mpfr_set(r.lo_, lo_, MPFR_RNDD);
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Ival operator+(const Ival& a, const Ival& b) {
    Ival r(join_prec(a, b), Ival::raw_tag{});
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Ival operator-(const Ival& a, const Ival& b) {
    Ival r(join_prec(a, b), Ival::raw_tag{});
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
}

Ival operator-(const Ival& a) {
    Ival r(a.prec(), Ival::raw_tag{});
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
}

Ival operator*(const Ival& a, const Ival& b) {
    mpfr_prec_t p = join_prec(a, b);
    Ival r(p, Ival::raw_tag{});
    mpfr_t t;
    mpfr_init2(t, p);
    const mpfr_srcptr as[2] = {a.lo_, a.hi_};
    const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto x : as)
        for (auto y : bs) {
            mpfr_mul(t, x, y, MPFR_RNDD);
            if (first)
                mpfr_set(r.lo_, t, MPFR_RNDD);
            else
                mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            if (first)
                mpfr_set(r.hi_, t, MPFR_RNDU);
            else
                mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Ival operator/(const Ival& a, const Ival& b) {
    if (b.contains_zero()) throw ContractViolation("interval division by an interval containing 0");
    mpfr_prec_t p = join_prec(a, b);
    Ival r(p, Ival::raw_tag{});
    mpfr_t t;
    mpfr_init2(t, p);
    const mpfr_srcptr as[2] = {a.lo_, a.hi_};
    const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    bool first = true;
    for (auto x : as)
        for (auto y : bs) {
            mpfr_div(t, x, y, MPFR_RNDD);
            if (first)
                mpfr_set(r.lo_, t, MPFR_RNDD);
            else
                mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
            mpfr_div(t, x, y, MPFR_RNDU);
            if (first)
                mpfr_set(r.hi_, t, MPFR_RNDU);
            else
                mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Ival Ival::mul_int(const mpz_class& k) const {
    Ival r(prec(), Ival::raw_tag{});
    if (mpz_sgn(k.get_mpz_t()) >= 0) {
        mpfr_mul_z(r.lo_, lo_, k.get_mpz_t(), MPFR_RNDD);
        mpfr_mul_z(r.hi_, hi_, k.get_mpz_t(), MPFR_RNDU);
    } else {
        mpfr_mul_z(r.lo_, hi_, k.get_mpz_t(), MPFR_RNDD);
        mpfr_mul_z(r.hi_, lo_, k.get_mpz_t(), MPFR_RNDU);
    }
    return r;
}

Ival Ival::div_int(const mpz_class& k) const {
    if (mpz_sgn(k.get_mpz_t()) == 0) throw ContractViolation("div_int by zero");
    Ival r(prec(), Ival::raw_tag{});
    if (mpz_sgn(k.get_mpz_t()) > 0) {
        mpfr_div_z(r.lo_, lo_, k.get_mpz_t(), MPFR_RNDD);
        mpfr_div_z(r.hi_, hi_, k.get_mpz_t(), MPFR_RNDU);
    } else {
        mpfr_div_z(r.lo_, hi_, k.get_mpz_t(), MPFR_RNDD);
        mpfr_div_z(r.hi_, lo_, k.get_mpz_t(), MPFR_RNDU);
    }
    return r;
}

Ival Ival::add_int(long k) const {
    Ival r(prec(), Ival::raw_tag{});
    mpfr_add_si(r.lo_, lo_, k, MPFR_RNDD);
    mpfr_add_si(r.hi_, hi_, k, MPFR_RNDU);
    return r;
}

Ival Ival::sqr() const {
    Ival r(prec(), Ival::raw_tag{});
    if (is_nonnegative()) {
        mpfr_sqr(r.lo_, lo_, MPFR_RNDD);
        mpfr_sqr(r.hi_, hi_, MPFR_RNDU);
    } else if (is_negative()) {
        mpfr_sqr(r.lo_, hi_, MPFR_RNDD);
        mpfr_sqr(r.hi_, lo_, MPFR_RNDU);
    } else {
        mpfr_set_zero(r.lo_, 1);
        mpfr_t t;
        mpfr_init2(t, prec());
        mpfr_sqr(t, lo_, MPFR_RNDU);
        mpfr_sqr(r.hi_, hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
    }
    return r;
}

Ival Ival::sqrt() const {
    if (mpfr_sgn(lo_) < 0) throw ContractViolation("sqrt of interval with negative lower endpoint");
    Ival r(prec(), Ival::raw_tag{});
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Ival Ival::sqrt_clamped() const {
    if (mpfr_sgn(hi_) < 0) throw ContractViolation("sqrt_clamped of a negative interval");
    Ival r(prec(), Ival::raw_tag{});
    if (mpfr_sgn(lo_) < 0)
        mpfr_set_zero(r.lo_, 1);
    else
        mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Ival Ival::abs() const {
    if (is_nonnegative()) return *this;
    if (is_negative()) return -*this;
    Ival r(prec(), Ival::raw_tag{});
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, prec());
    mpfr_neg(t, lo_, MPFR_RNDU);
    mpfr_max(r.hi_, hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

Ival Ival::recip() const {
    return Ival(1, prec()) / *this;
}

Ival Ival::sin_pi() const {
    // Argument restricted to a neighborhood of [0, 1]; sin(pi*.) there is
    // unimodal with a single max at 1/2, so endpoint values bound the range
    // from below, and the max is either an endpoint value or exactly 1.
    mpfr_prec_t p = prec() + 8;
    mpfr_t pi_d, pi_u, alo, ahi, s1, s2;
    mpfr_inits2(p, pi_d, pi_u, alo, ahi, s1, s2, (mpfr_ptr) nullptr);
    mpfr_const_pi(pi_d, MPFR_RNDD);
    mpfr_const_pi(pi_u, MPFR_RNDU);

    if (mpfr_cmp_d(lo_, -0.25) < 0 || mpfr_cmp_d(hi_, 1.25) > 0) {
        mpfr_clears(pi_d, pi_u, alo, ahi, s1, s2, (mpfr_ptr) nullptr);
        throw ContractViolation("sin_pi argument outside [-0.25, 1.25]");
    }

    // outward enclosure of the argument range pi*[lo, hi]
    if (mpfr_sgn(lo_) >= 0)
        mpfr_mul(alo, pi_d, lo_, MPFR_RNDD);
    else
        mpfr_mul(alo, pi_u, lo_, MPFR_RNDD);
    if (mpfr_sgn(hi_) >= 0)
        mpfr_mul(ahi, pi_u, hi_, MPFR_RNDU);
    else
        mpfr_mul(ahi, pi_d, hi_, MPFR_RNDU);

    Ival r(prec(), Ival::raw_tag{});
    // lower endpoint: min of endpoint sines (valid for unimodal sin on this range)
    mpfr_sin(s1, alo, MPFR_RNDD);
    mpfr_sin(s2, ahi, MPFR_RNDD);
    mpfr_min(r.lo_, s1, s2, MPFR_RNDD);
    // upper endpoint: 1 if the argument range may contain pi/2, else endpoint max
    mpfr_t half_pi_d, half_pi_u;
    mpfr_inits2(p, half_pi_d, half_pi_u, (mpfr_ptr) nullptr);
    mpfr_div_ui(half_pi_d, pi_d, 2, MPFR_RNDD);
    mpfr_div_ui(half_pi_u, pi_u, 2, MPFR_RNDU);
    bool may_contain_peak =
        mpfr_lessequal_p(alo, half_pi_u) && mpfr_greaterequal_p(ahi, half_pi_d);
    if (may_contain_peak) {
        mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
    } else {
        mpfr_sin(s1, alo, MPFR_RNDU);
        mpfr_sin(s2, ahi, MPFR_RNDU);
        mpfr_max(r.hi_, s1, s2, MPFR_RNDU);
    }
    mpfr_clears(pi_d, pi_u, alo, ahi, s1, s2, half_pi_d, half_pi_u, (mpfr_ptr) nullptr);
    return r;
}

Ival Ival::sin_pi_sq_periodic() const {
    // reduce mod 1, then square the sin_pi enclosure piecewise
    mpfr_t fl;
    mpfr_init2(fl, prec());
    mpfr_floor(fl, lo_);
    Ival shifted(prec(), Ival::raw_tag{});
    mpfr_sub(shifted.lo_, lo_, fl, MPFR_RNDD);
    mpfr_sub(shifted.hi_, hi_, fl, MPFR_RNDU);
    mpfr_clear(fl);
    if (mpfr_cmp_ui(shifted.hi_, 1) <= 0) return shifted.sin_pi().sqr();
    if (mpfr_cmp_ui(shifted.hi_, 2) <= 0) {
        // straddles an integer: split into [lo,1] and [0, hi-1]
        Ival a(prec(), Ival::raw_tag{}), b(prec(), Ival::raw_tag{});
        mpfr_set(a.lo_, shifted.lo_, MPFR_RNDD);
        mpfr_set_ui(a.hi_, 1, MPFR_RNDU);
        mpfr_set_zero(b.lo_, 1);
        mpfr_sub_ui(b.hi_, shifted.hi_, 1, MPFR_RNDU);
        return hull(a.sin_pi().sqr(), b.sin_pi().sqr());
    }
    // interval at least one period wide
    Ival full(prec(), Ival::raw_tag{});
    mpfr_set_zero(full.lo_, 1);
    mpfr_set_ui(full.hi_, 1, MPFR_RNDU);
    return full;
}

Ival Ival::cosh() const {
    Ival r(prec(), Ival::raw_tag{});
    // cosh decreasing on (-inf,0], increasing on [0,inf)
    if (is_nonnegative()) {
        mpfr_cosh(r.lo_, lo_, MPFR_RNDD);
        mpfr_cosh(r.hi_, hi_, MPFR_RNDU);
    } else if (is_negative()) {
        mpfr_cosh(r.lo_, hi_, MPFR_RNDD);
        mpfr_cosh(r.hi_, lo_, MPFR_RNDU);
    } else {
        mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
        mpfr_t t;
        mpfr_init2(t, prec());
        mpfr_cosh(t, lo_, MPFR_RNDU);
        mpfr_cosh(r.hi_, hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
    }
    return r;
}

Ival Ival::sinh() const {
    Ival r(prec(), Ival::raw_tag{});
    mpfr_sinh(r.lo_, lo_, MPFR_RNDD);
    mpfr_sinh(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Ival Ival::acosh_clamped() const {
    if (mpfr_cmp_ui(hi_, 1) < 0) throw ContractViolation("acosh of interval below 1");
    Ival r(prec(), Ival::raw_tag{});
    if (mpfr_cmp_ui(lo_, 1) <= 0)
        mpfr_set_zero(r.lo_, 1);
    else
        mpfr_acosh(r.lo_, lo_, MPFR_RNDD);
    mpfr_acosh(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Ival Ival::log() const {
    if (mpfr_sgn(lo_) <= 0) throw ContractViolation("log of interval touching 0");
    Ival r(prec(), Ival::raw_tag{});
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Ival Ival::exp() const {
    Ival r(prec(), Ival::raw_tag{});
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Ival Ival::min(const Ival& a, const Ival& b) {
    Ival r(join_prec(a, b), Ival::raw_tag{});
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Ival Ival::max(const Ival& a, const Ival& b) {
    Ival r(join_prec(a, b), Ival::raw_tag{});
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

std::string Ival::lo_str(int digits) const {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.*R*e", digits, MPFR_RNDD, lo_);
    return buf;
}

std::string Ival::hi_str(int digits) const {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.*R*e", digits, MPFR_RNDU, hi_);
    return buf;
}

std::string Ival::str(int digits) const {
    return "[" + lo_str(digits) + ", " + hi_str(digits) + "]";
}

}  // namespace margulis
