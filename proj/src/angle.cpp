#include "margulis/angle.hpp"

#include <mpfr.h>

#include <algorithm>
#include <sstream>

namespace margulis {

namespace {

void check_positive(const std::vector<unsigned long>& v, const char* what) {
    for (unsigned long a : v)
        if (a == 0) throw PreconditionViolated(std::string(what) + ": partial quotients must be >= 1");
}

}  // namespace

Angle::Angle(const Angle& o) : kind_(o.kind_) {
    std::lock_guard<std::mutex> g(o.mu_);
    prefix_ = o.prefix_;
    period_ = o.period_;
    digit_cap_ = o.digit_cap_;
    quotients_ = o.quotients_;
    convergents_ = o.convergents_;
    growth_exhausted_ = o.growth_exhausted_;
}

Angle Angle::periodic(std::vector<unsigned long> prefix, std::vector<unsigned long> period) {
    check_positive(prefix, "periodic");
    check_positive(period, "periodic");
    if (period.empty()) throw PreconditionViolated("periodic: empty period");
    Angle a(Kind::Periodic);
    a.prefix_ = std::move(prefix);
    a.period_ = std::move(period);
    return a;
}

Angle Angle::explicit_list(std::vector<unsigned long> quotients) {
    check_positive(quotients, "explicit");
    if (quotients.empty()) throw PreconditionViolated("explicit: empty quotient list");
    Angle a(Kind::Explicit);
    a.prefix_ = std::move(quotients);
    return a;
}

Angle Angle::liouville(std::vector<unsigned long> seed_prefix, unsigned long digit_cap) {
    check_positive(seed_prefix, "liouville");
    if (seed_prefix.empty()) throw PreconditionViolated("liouville: empty seed prefix");
    Angle a(Kind::Liouville);
    a.prefix_ = std::move(seed_prefix);
    a.digit_cap_ = digit_cap;
    return a;
}

Angle liouville_angle(std::vector<unsigned long> seed_prefix, unsigned long digit_cap) {
    return Angle::liouville(std::move(seed_prefix), digit_cap);
}

void Angle::generate_next_locked() const {
    // a_{n+1} = ceil(exp(q_n)/q_n), with n = current count. Needs convergents
    // up to n, which only involve quotients already present.
    std::size_t n = quotients_.size();
    // compute q_n from cached quotients
    mpz_class q_prev = 1, q = n >= 1 ? quotients_[0] : 1;  // q_0, q_1
    for (std::size_t k = 2; k <= n; ++k) {
        mpz_class next = quotients_[k - 1] * q + q_prev;
        q_prev = q;
        q = next;
    }
    // refuse once q_{n+1} ~ exp(q_n) would exceed digit_cap decimal digits
    // (log10(e) ~ 0.4343, so the cap on q_n is digit_cap / log10(e))
    mpz_class qn_cap(static_cast<unsigned long>(2.302585 * static_cast<double>(digit_cap_)));
    if (q > qn_cap) {
        growth_exhausted_ = true;
        return;
    }
    unsigned long qn = mpz_get_ui(q.get_mpz_t());
    // certified ceil(exp(q_n)/q_n): exp(q_n)/q_n is irrational, so the
    // enclosure eventually excludes every integer
    mpfr_prec_t bits = static_cast<mpfr_prec_t>(1.4427 * static_cast<double>(qn)) + 64;
    for (int round = 0; round < 4; ++round) {
        mpfr_t lo, hi;
        mpfr_inits2(bits, lo, hi, (mpfr_ptr) nullptr);
        mpfr_set_ui(lo, qn, MPFR_RNDD);
        mpfr_exp(lo, lo, MPFR_RNDD);
        mpfr_div_ui(lo, lo, qn, MPFR_RNDD);
        mpfr_set_ui(hi, qn, MPFR_RNDU);
        mpfr_exp(hi, hi, MPFR_RNDU);
        mpfr_div_ui(hi, hi, qn, MPFR_RNDU);
        mpfr_ceil(lo, lo);
        mpfr_ceil(hi, hi);
        bool agreed = mpfr_equal_p(lo, hi);
        mpz_class a;
        if (agreed) mpfr_get_z(a.get_mpz_t(), lo, MPFR_RNDN);
        mpfr_clears(lo, hi, (mpfr_ptr) nullptr);
        if (agreed) {
            quotients_.push_back(a);
            return;
        }
        bits *= 2;
    }
    throw PrecisionExceeded("liouville: could not certify ceil(exp(q_n)/q_n)");
}

std::size_t Angle::ensure_quotients(std::size_t n) const {
    std::lock_guard<std::mutex> g(mu_);
    if (quotients_.empty()) {
        for (unsigned long a : prefix_) quotients_.emplace_back(a);
    }
    while (quotients_.size() < n) {
        switch (kind_) {
            case Kind::Periodic:
                quotients_.emplace_back(period_[(quotients_.size() - prefix_.size()) % period_.size()]);
                break;
            case Kind::Explicit:
                return quotients_.size();
            case Kind::Liouville:
                if (growth_exhausted_) return quotients_.size();
                generate_next_locked();
                break;
        }
    }
    return quotients_.size();
}

mpz_class Angle::quotient(std::size_t n) const {
    if (n == 0) throw PreconditionViolated("quotient index is 1-based");
    std::size_t have = ensure_quotients(n);
    if (have < n) {
        if (kind_ == Kind::Explicit)
            throw QuotientsExhausted("explicit quotient list has only " + std::to_string(have) +
                                     " terms, a_" + std::to_string(n) + " requested");
        throw OverflowPolicy("growth rule refused to generate a_" + std::to_string(n) +
                             " (q would exceed " + std::to_string(digit_cap_) + " digits)");
    }
    std::lock_guard<std::mutex> g(mu_);
    return quotients_[n - 1];
}

bool Angle::quotient_known(std::size_t n) const {
    if (n == 0) return false;
    return ensure_quotients(n) >= n;
}

bool Angle::quotient_at_least_two(std::size_t n) const {
    if (quotient_known(n)) return quotient(n) >= 2;
    if (kind_ == Kind::Liouville && n > prefix_.size()) {
        // generated quotients satisfy a = ceil(exp(q)/q) >= e > 2 for q >= 1
        return true;
    }
    throw QuotientsExhausted("a_" + std::to_string(n) + " unavailable");
}

Convergent Angle::convergent(std::size_t n) const {
    {
        std::lock_guard<std::mutex> g(mu_);
        if (n < convergents_.size()) return convergents_[n];
    }
    if (n >= 1) quotient(n);  // materialize (throws if unavailable)
    std::lock_guard<std::mutex> g(mu_);
    if (convergents_.empty()) convergents_.push_back({0, 0, 1});
    while (convergents_.size() <= n) {
        std::size_t k = convergents_.size();
        const mpz_class& ak = quotients_[k - 1];
        Convergent c;
        c.n = k;
        if (k == 1) {
            c.p = 1;
            c.q = ak;
        } else {
            c.p = ak * convergents_[k - 1].p + convergents_[k - 2].p;
            c.q = ak * convergents_[k - 1].q + convergents_[k - 2].q;
        }
        convergents_.push_back(std::move(c));
    }
    return convergents_[n];
}

std::size_t Angle::max_seed_depth() const {
    switch (kind_) {
        case Kind::Periodic:
            return unbounded;
        case Kind::Explicit:
            return prefix_.size() - 1;  // seed at depth N consumes a_{N+1}
        case Kind::Liouville: {
            // deepest n with a_{n+1} known; one more level (worst-case seed) is
            // handled by the norm engine itself
            std::size_t have = ensure_quotients(std::size_t(-2));
            return have;  // a_1..a_have known: t_{have-1} seeded by a_have; t_have in [0,1]
        }
    }
    return 0;
}

std::size_t Angle::max_norm_index() const {
    switch (kind_) {
        case Kind::Periodic:
            return unbounded;
        case Kind::Explicit:
            return prefix_.size() >= 2 ? prefix_.size() - 2 : 0;
        case Kind::Liouville:
            return max_seed_depth();
    }
    return 0;
}

std::optional<Ival> Angle::tail_upper_bound(std::size_t N, mpfr_prec_t bits) const {
    if (kind_ != Kind::Liouville) return std::nullopt;
    if (quotient_known(N + 1) || !quotient_known(N)) return std::nullopt;
    // a_{N+1} = ceil(exp(q_N)/q_N) was refused only because q_N is huge, so
    // t_N <= 1/a_{N+1} <= q_N exp(-q_N)
    mpz_class qN = convergent(N).q;
    Ival ub(0, bits);
    if (qN > 1000000) {
        // q e^-q < 2^-500000 already for q >= 10^6
        mpq_class tiny(mpz_class(1), mpz_class(1) << 500000);
        ub = Ival::from_rational_endpoints(mpq_class(0), tiny, bits);
    } else {
        Ival e = (-Ival::exact_int(qN, bits)).exp().mul_int(qN);
        ub = Ival::hull(Ival(0, bits), e);
    }
    return ub;
}

std::pair<mpq_class, mpq_class> Angle::rational_bracket(std::size_t depth) const {
    std::size_t d = std::max<std::size_t>(depth, 1);
    // clip to available quotients
    std::size_t have = ensure_quotients(d + 1);
    if (have < 2) throw QuotientsExhausted("need at least two quotients for a bracket");
    if (d + 1 > have) d = have - 1;
    Convergent a = convergent(d), b = convergent(d + 1);
    mpq_class qa(a.p, a.q), qb(b.p, b.q);
    qa.canonicalize();
    qb.canonicalize();
    if (qa < qb) return {qa, qb};
    return {qb, qa};
}

Ival Angle::value(mpfr_prec_t bits) const {
    // deepen until the bracket is narrower than 2^-bits or the stream ends
    std::size_t d = 2;
    for (;;) {
        auto [lo, hi] = rational_bracket(d);
        mpq_class w = hi - lo;
        // width < 2^-bits  <=>  num * 2^bits < den
        mpz_class scaled = w.get_num() << bits;
        if (scaled < w.get_den() || !quotient_known(d + 2)) {
            return Ival::from_rational_endpoints(lo, hi, bits + 16);
        }
        d += 2;
    }
}

std::string Angle::describe() const {
    std::ostringstream os;
    auto list = [&os](const std::vector<unsigned long>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    };
    switch (kind_) {
        case Kind::Periodic:
            os << "periodic:[";
            if (!prefix_.empty()) {
                list(prefix_);
                os << ";";
            }
            list(period_);
            os << "]";
            break;
        case Kind::Explicit:
            os << "explicit:[";
            list(prefix_);
            os << "]";
            break;
        case Kind::Liouville:
            os << "liouville:[";
            list(prefix_);
            os << "]";
            break;
    }
    return os.str();
}

}  // namespace margulis
