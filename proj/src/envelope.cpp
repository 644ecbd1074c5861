#include "margulis/envelope.hpp"

#include <algorithm>
#include <cmath>

namespace margulis {

namespace {

mpz_class q_sq_gap(const Angle& a, std::size_t n, std::size_t m) {
    mpz_class qn = a.convergent(n).q, qm = a.convergent(m).q;
    return qm * qm - qn * qn;
}

bool degenerate_pair(const Angle& a, std::size_t n, std::size_t m) {
    return n == 0 && m == 1 && a.quotient(1) == 1;  // q_0 = q_1 = 1
}

}  // namespace

const ProfileEntry* EnvelopeProfile::entry_for(std::size_t n) const {
    for (const auto& e : entries)
        if (e.n == n) return &e;
    return nullptr;
}

std::vector<const ProfileEntry*> EnvelopeProfile::present_entries() const {
    std::vector<const ProfileEntry*> out;
    for (const auto& e : entries)
        if (e.presence == Presence::Present) out.push_back(&e);
    return out;
}

BoundaryContext::BoundaryContext(const Angle& a, EpsilonConfig eps, PrecisionPolicy pol)
    : eps_(eps), policy_(pol), norms_(a, pol) {}

Ival BoundaryContext::delta(std::size_t n, mpfr_prec_t bits) const {
    return norms_.beta(n, bits).sin_pi().sqr().mul_int(4);
}

Ival BoundaryContext::delta_diff(std::size_t n, std::size_t m, mpfr_prec_t bits) const {
    if (n >= m) throw PreconditionViolated("delta_diff requires n < m");
    if (degenerate_pair(angle(), n, m))
        throw ContractViolation("delta_0 - delta_1 vanishes identically when q_0 = q_1");
    // sin^2 A - sin^2 B = sin(A+B) sin(A-B); both beta sums/differences are
    // evaluated without cancellation, and the sum stays below 1
    Ival s = norms_.beta_sum(n, m, bits);
    Ival d = norms_.beta_diff(n, m, bits);
    return (s.sin_pi() * d.sin_pi()).mul_int(4);
}

Ival BoundaryContext::crossing_r2(std::size_t n, std::size_t m, mpfr_prec_t bits) const {
    if (degenerate_pair(angle(), n, m)) return Ival(0, bits);
    return Ival::exact_int(q_sq_gap(angle(), n, m), bits) / delta_diff(n, m, bits);
}

Crossing BoundaryContext::crossing(std::size_t n, std::size_t m, long target_bits) const {
    if (n >= m) throw PreconditionViolated("crossing requires n < m");
    Crossing c;
    c.n = n;
    c.m = m;
    c.q_gap_sq = q_sq_gap(angle(), n, m);
    if (degenerate_pair(angle(), n, m)) {
        c.degenerate_zero = true;
        c.r = Ival(0, policy_.bits_start);
        c.r_squared = c.r;
        c.delta_gap = Ival(0, policy_.bits_start);
        return c;
    }
    for (mpfr_prec_t bits : norms_.ladder()) {
        Ival dg = delta_diff(n, m, bits);
        if (!dg.is_positive()) continue;
        Ival r2 = Ival::exact_int(c.q_gap_sq, bits) / dg;
        if (!r2.rel_width_below(target_bits)) continue;
        c.delta_gap = dg;
        c.r_squared = r2;
        c.r = r2.sqrt();
        return c;
    }
    throw PrecisionExceeded("crossing r_{" + std::to_string(n) + "," + std::to_string(m) +
                            "}: certification width unreachable");
}

std::pair<Ival, Ival> BoundaryContext::crossing_cmp_products(
    std::pair<std::size_t, std::size_t> a, std::pair<std::size_t, std::size_t> b,
    mpfr_prec_t bits) const {
    // r_a^2 = numA/deltaA, r_b^2 = numB/deltaB  =>  compare numA*deltaB vs numB*deltaA
    mpz_class numA = q_sq_gap(angle(), a.first, a.second);
    mpz_class numB = q_sq_gap(angle(), b.first, b.second);
    Ival dA = delta_diff(a.first, a.second, bits);
    Ival dB = delta_diff(b.first, b.second, bits);
    return {dB.mul_int(numA), dA.mul_int(numB)};
}

Order BoundaryContext::compare_crossings(std::pair<std::size_t, std::size_t> a,
                                         std::pair<std::size_t, std::size_t> b) const {
    bool dega = degenerate_pair(angle(), a.first, a.second);
    bool degb = degenerate_pair(angle(), b.first, b.second);
    if (dega && degb) return Order::Overlap;
    if (dega) return Order::Less;     // r_{0,1} = 0 < every other crossing
    if (degb) return Order::Greater;
    for (mpfr_prec_t bits : norms_.ladder()) {
        auto [lhs, rhs] = crossing_cmp_products(a, b, bits);
        Order o = order_of(lhs, rhs);
        if (o != Order::Overlap) return o;
    }
    return Order::Overlap;
}

TripleClass BoundaryContext::classify_triple(std::size_t k, std::size_t n, std::size_t m) const {
    if (!(k < n && n < m)) throw PreconditionViolated("classify_triple requires k < n < m");
    TripleClass tc;
    if (degenerate_pair(angle(), k, n)) {
        // (0,1,m) with q_0 = q_1: a fair triple by convention
        tc.kind = TripleClass::Kind::Fair;
        return tc;
    }
    Order main = compare_crossings({k, n}, {n, m});
    if (main == Order::Overlap) {
        tc.kind = TripleClass::Kind::Undetermined;
        mpfr_prec_t cap = policy_.bits_cap;
        Ival r1 = crossing_r2(k, n, cap).sqrt_clamped();
        Ival r2 = crossing_r2(n, m, cap).sqrt_clamped();
        tc.undetermined_width = Ival::hull(r1, r2).width_d();
        return tc;
    }
    // the middle crossing r_{k,m} must sit between the outer two; a certified
    // contradiction here would be an implementation bug
    Order left = compare_crossings({k, n}, {k, m});
    Order right = compare_crossings({k, m}, {n, m});
    if (main == Order::Less) {
        if (left == Order::Greater || right == Order::Greater)
            throw ContractViolation("trichotomy ordering violated (fair case)");
        tc.kind = TripleClass::Kind::Fair;
    } else {
        if (left == Order::Less || right == Order::Less)
            throw ContractViolation("trichotomy ordering violated (near-miss case)");
        tc.kind = TripleClass::Kind::NearMiss;
    }
    return tc;
}

Presence BoundaryContext::is_present(std::size_t n) const {
    {
        std::lock_guard<std::mutex> g(mu_);
        auto it = presence_cache_.find(n);
        if (it != presence_cache_.end()) return it->second;
    }
    Presence p;
    if (n == 0) {
        p = Presence::Present;  // j = q_0 = 1 is always present
    } else if (angle().quotient_at_least_two(n + 1)) {
        p = Presence::Present;
    } else {
        TripleClass tc = classify_triple(n - 1, n, n + 1);
        p = tc.is_fair()        ? Presence::Present
            : tc.is_near_miss() ? Presence::Absent
                                : Presence::Undetermined;
    }
    std::lock_guard<std::mutex> g(mu_);
    presence_cache_[n] = p;
    return p;
}

Ival BoundaryContext::u_from_delta(const Ival& dlt, const mpz_class& j, const Ival& r,
                                   mpfr_prec_t bits) const {
    Ival inner = dlt * r.sqr() + Ival::exact_int(j * j, bits);
    return eps_.c(bits) * inner.sqrt_clamped();
}

Ival BoundaryContext::u_value(const mpz_class& j, const Ival& r, mpfr_prec_t bits) const {
    if (j < 1) throw PreconditionViolated("u_value: j >= 1");
    Ival dlt = norms_.norm_any(j, bits).sin_pi().sqr().mul_int(4);
    return u_from_delta(dlt, j, r, bits);
}

Ival BoundaryContext::u_of_index(std::size_t n, const Ival& r, mpfr_prec_t bits) const {
    return u_from_delta(delta(n, bits), angle().convergent(n).q, r, bits);
}

EnvelopeProfile BoundaryContext::build_profile(std::size_t n_max, bool verify_se_window) const {
    if (n_max < 2) throw PreconditionViolated("build_profile: n_max >= 2");
    EnvelopeProfile prof;
    prof.entries.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        ProfileEntry& e = prof.entries[n];
        e.n = n;
        e.q = angle().convergent(n).q;
        e.presence = is_present(n);
        if (e.presence == Presence::Undetermined && !prof.undetermined_at)
            prof.undetermined_at = n;
    }

    // chain of present indices; break at the first undetermined label
    std::vector<std::size_t> chain;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (prof.undetermined_at && n >= *prof.undetermined_at) break;
        if (prof.entries[n].presence == Presence::Present) chain.push_back(n);
    }

    // the next present index past n_max closes the last entry's interval
    std::optional<std::size_t> closer;
    if (!prof.undetermined_at && !chain.empty()) {
        try {
            Presence p1 = is_present(n_max + 1);
            if (p1 == Presence::Present)
                closer = n_max + 1;
            else if (p1 == Presence::Absent) {
                Presence p2 = is_present(n_max + 2);
                if (p2 == Presence::Present) closer = n_max + 2;
            }
        } catch (const Error&) {
            // stream exhausted past n_max: last entry stays open
        }
    }

    std::vector<std::size_t> full = chain;
    if (closer) full.push_back(*closer);

    if (!chain.empty()) prof.entries[chain[0]].x = Ival(0, policy_.bits_start);
    for (std::size_t i = 0; i + 1 < full.size(); ++i) {
        std::size_t u = full[i], v = full[i + 1];
        if (v - u > 2) throw ContractViolation("consecutive present indices more than 2 apart");
        if (v - u == 2 && angle().quotient(u + 2) != 1)
            throw ContractViolation("present gap of 2 with a_{n+2} != 1");
        Crossing cr = crossing(u, v);
        if (u <= n_max) prof.entries[u].y = cr.r;
        if (v <= n_max) prof.entries[v].x = cr.r;

        if (verify_se_window && !cr.degenerate_zero) {
            for (std::size_t m = v + 1; m <= u + 6; ++m) {
                if (!angle().quotient_known(m + 1)) break;  // honest clip at stream end
                if (compare_crossings({u, v}, {u, m}) == Order::Greater)
                    throw ContractViolation("r_{n,m} with m > n* undercuts the chosen y");
            }
        }
    }

    // completeness and certified coverage
    for (std::size_t i = 0; i < chain.size(); ++i) {
        std::size_t u = chain[i];
        bool has_y = (i + 1 < full.size());
        prof.entries[u].complete = has_y;
        if (has_y) prof.valid_r_max = prof.entries[u].y.lo_d();
    }
    return prof;
}

BoundaryValue BoundaryContext::eval(const EnvelopeProfile& prof, double r) const {
    return eval(prof, Ival::from_double(r, policy_.bits_start));
}

BoundaryValue BoundaryContext::eval(const EnvelopeProfile& prof, const Ival& r) const {
    if (!r.is_nonnegative()) throw OutOfRange("eval: r >= 0 required");
    if (r.lo_d() > prof.valid_r_max) throw OutOfRange("eval: r beyond valid_r_max");
    std::vector<const ProfileEntry*> pres = prof.present_entries();
    if (pres.empty()) throw OutOfRange("eval: empty profile");

    auto value_at = [&](const ProfileEntry& e, long target) {
        for (mpfr_prec_t bits : norms_.ladder()) {
            Ival v = u_of_index(e.n, r.round_to(bits), bits);
            if (v.rel_width_below(target)) return v;
        }
        return u_of_index(e.n, r.round_to(policy_.bits_cap), policy_.bits_cap);
    };

    for (std::size_t i = 0; i < pres.size(); ++i) {
        const ProfileEntry& e = *pres[i];
        if (!e.complete) break;
        if (r.certainly_gt(e.y)) continue;
        if (r.certainly_lt(e.y)) {
            BoundaryValue bv;
            bv.value = value_at(e, 48);
            bv.argmin_q = e.q;
            bv.argmin_n = e.n;
            return bv;
        }
        // r inside the breakpoint's uncertainty: evaluate both neighbors and
        // return the hull; deterministic argmin tie-break to the left entry
        BoundaryValue bv;
        bv.at_breakpoint = true;
        bv.argmin_q = e.q;
        bv.argmin_n = e.n;
        if (i + 1 < pres.size()) {
            bv.value = Ival::hull(value_at(e, 48), value_at(*pres[i + 1], 48));
        } else {
            bv.value = value_at(e, 48);
        }
        return bv;
    }
    throw OutOfRange("eval: r not covered by the completed profile range");
}

Ival BoundaryContext::boundary_inverse(const EnvelopeProfile& prof, const Ival& t,
                                       long target_bits) const {
    mpfr_prec_t pb = std::max<mpfr_prec_t>(policy_.bits_start, target_bits + 32);
    Ival c1 = eps_.c(pb);  // B(0) = c(eps) * 1
    if (!t.certainly_gt(c1)) throw OutOfRange("boundary_inverse: t must exceed c(eps)");
    Ival hi = Ival::from_double(prof.valid_r_max, pb);
    {
        BoundaryValue top = eval(prof, hi);
        if (!(t.certainly_lt(top.value) || top.value.contains(t)))
            throw OutOfRange("boundary_inverse: t beyond the profile's reach");
        if (top.value.certainly_lt(t)) throw OutOfRange("boundary_inverse: t beyond profile");
    }
    Ival lo(0, pb);
    // invariant: B(lo) < t < B(hi) certified at the endpoints
    for (int iter = 0; iter < 4 * (target_bits + 64); ++iter) {
        Ival gap = hi - lo;
        if (gap.hi_d() <= std::max(1.0, lo.lo_d()) * std::ldexp(1.0, -static_cast<int>(target_bits)))
            break;
        Ival mid = (lo + hi).div_int(2).round_to(pb);
        // collapse mid to an exact dyadic point
        Ival midpt = Ival::from_double(0, pb);
        {
            mpq_class q = mid.lo_q();
            midpt = Ival::from_rational(q, pb);
        }
        BoundaryValue v = eval(prof, midpt);
        if (v.value.certainly_lt(t))
            lo = midpt;
        else if (v.value.certainly_gt(t))
            hi = midpt;
        else
            break;  // t inside the envelope value's own width: bracket is final
    }
    return Ival::hull(lo, hi);
}

Ival u_value(const Angle& a, const mpz_class& j, double r, const EpsilonConfig& eps,
             long target_bits, PrecisionPolicy pol) {
    BoundaryContext ctx(a, eps, pol);
    for (mpfr_prec_t bits : ctx.norms().ladder()) {
        Ival v = ctx.u_value(j, Ival::from_double(r, bits), bits);
        if (v.rel_width_below(target_bits)) return v;
    }
    throw PrecisionExceeded("u_value: target width unreachable");
}

Ival delta(const Angle& a, std::size_t n, long target_bits, PrecisionPolicy pol) {
    BoundaryContext ctx(a, EpsilonConfig::margulis_default(), pol);
    for (mpfr_prec_t bits : ctx.norms().ladder()) {
        Ival v = ctx.delta(n, bits);
        if (v.rel_width_below(target_bits)) return v;
    }
    throw PrecisionExceeded("delta: target width unreachable");
}

}  // namespace margulis
