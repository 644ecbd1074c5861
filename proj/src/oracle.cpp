#include "margulis/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace margulis {

namespace {

// exact distance from the rational interval [a, b] (width < 1/2) to the
// nearest integer, as an exact rational interval
std::pair<mpq_class, mpq_class> dist_to_z(const mpq_class& a, const mpq_class& b) {
    auto nearest_dist = [](const mpq_class& x) {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        mpq_class frac = x - mpq_class(fl);
        mpq_class other = mpq_class(1) - frac;
        return frac < other ? frac : other;
    };
    mpz_class fl_a, fl_b;
    mpq_class ga = nearest_dist(a), gb = nearest_dist(b);
    // integer inside [a,b]?
    mpz_fdiv_q(fl_a.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    mpz_class k = fl_a + 1;
    if (mpq_class(k) <= b || a == mpq_class(fl_a)) {
        // distance reaches 0; max is the larger endpoint distance
        return {mpq_class(0), std::max(ga, gb)};
    }
    // half-integer inside [a,b]?
    mpq_class two_a = 2 * a;
    mpz_class fl2;
    mpz_fdiv_q(fl2.get_mpz_t(), two_a.get_num_mpz_t(), two_a.get_den_mpz_t());
    mpz_class h = fl2 + 1;  // 2x of the first half-point above a
    bool half_inside = (h % 2 != 0) && mpq_class(h, 2) <= b;
    if (half_inside) return {std::min(ga, gb), mpq_class(1, 2)};
    return {std::min(ga, gb), std::max(ga, gb)};
}

}  // namespace

Oracle::Oracle(const Angle& a, OracleConfig cfg) : angle_(a), cfg_(cfg) {
    deepen(cfg_.truncation_depth);
}

void Oracle::deepen(std::size_t depth) const {
    std::lock_guard<std::mutex> g(mu_);
    if (depth_ >= depth) return;
    auto [lo, hi] = angle_.rational_bracket(depth);
    alpha_lo_ = lo;
    alpha_hi_ = hi;
    depth_ = depth;
}

std::pair<mpq_class, mpq_class> Oracle::norm_bracket(const mpz_class& j) const {
    if (j < 1) throw PreconditionViolated("norm_bracket: j >= 1");
    // deepen the truncation until the propagated width j*(hi-lo) is far below
    // the oracle's working scale (or the stream ends)
    for (int rounds = 0; rounds < 64; ++rounds) {
        mpq_class lo, hi;
        {
            std::lock_guard<std::mutex> g(mu_);
            lo = alpha_lo_;
            hi = alpha_hi_;
        }
        mpq_class width = (hi - lo) * mpq_class(j);
        mpq_class target(mpz_class(1), mpz_class(1) << (cfg_.bits / 2));
        if (width < target || !angle_.quotient_known(depth_ + 9)) {
            if (width >= mpq_class(1, 4))
                throw PrecisionExceeded("norm_bracket: truncation too short for j=" + j.get_str());
            return dist_to_z(mpq_class(j) * lo, mpq_class(j) * hi);
        }
        deepen(depth_ + 8);
    }
    throw PrecisionExceeded("norm_bracket: could not reach target width");
}

Ival Oracle::norm(const mpz_class& j) const {
    auto [lo, hi] = norm_bracket(j);
    return Ival::from_rational_endpoints(lo, hi, cfg_.bits);
}

Ival Oracle::delta_of(const mpz_class& j) const {
    {
        std::lock_guard<std::mutex> g(mu_);
        auto it = delta_cache_.find(j);
        if (it != delta_cache_.end()) return it->second;
    }
    Ival d = norm(j).sin_pi().sqr().mul_int(4);
    std::lock_guard<std::mutex> g(mu_);
    delta_cache_.emplace(j, d);
    return d;
}

Ival Oracle::u(const mpz_class& j, const Ival& r, const EpsilonConfig& eps) const {
    Ival inner = delta_of(j) * r.round_to(cfg_.bits).sqr() + Ival::exact_int(j * j, cfg_.bits);
    return eps.c(cfg_.bits) * inner.sqrt_clamped();
}

Oracle::MinResult Oracle::min_u(const Ival& r, const EpsilonConfig& eps) const {
    Ival c = eps.c(cfg_.bits);
    Ival r2 = r.round_to(cfg_.bits).sqr();
    std::vector<std::pair<mpz_class, Ival>> vals;
    Ival best_hi_v;
    bool have = false;
    mpz_class j = 1;
    for (;; ++j) {
        if (j > cfg_.j_cap) throw ScanBudgetExceeded("min_u: j_cap reached");
        // u_j >= c j, so once c*j clears the running best, no later j can win
        if (have) {
            Ival floor_j = c.mul_int(j);
            if (floor_j.certainly_gt(best_hi_v)) break;
        }
        Ival v = c * (delta_of(j) * r2 + Ival::exact_int(j * j, cfg_.bits)).sqrt_clamped();
        if (!have || v.hi_d() < best_hi_v.hi_d()) {
            best_hi_v = v;
            have = true;
        }
        vals.push_back({j, std::move(v)});
    }
    MinResult out;
    out.j_scanned = j - 1;
    // argmin by smallest upper endpoint; value = [min lo, min hi]
    std::size_t bi = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (mpfr_less_p(vals[i].second.hi(), vals[bi].second.hi())) bi = i;
    }
    Ival value = vals[bi].second;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i == bi) continue;
        value = Ival::min(value, vals[i].second);
    }
    out.value = value;
    out.argmin = vals[bi].first;
    out.argmin_certified = true;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i == bi) continue;
        if (!vals[i].second.certainly_gt(vals[bi].second)) {
            out.argmin_certified = false;
            break;
        }
    }
    return out;
}

Ival Oracle::inverse(const Ival& t, const EpsilonConfig& eps, double r_hi, long target_bits) const {
    mpfr_prec_t pb = cfg_.bits;
    Ival lo(0, pb);
    Ival hi = Ival::from_double(r_hi, pb);
    if (!t.certainly_gt(eps.c(pb))) throw OutOfRange("inverse: t <= c(eps)");
    if (!min_u(hi, eps).value.certainly_gt(t)) throw OutOfRange("inverse: t beyond r_hi reach");
    for (int iter = 0; iter < 4 * (target_bits + 64); ++iter) {
        Ival gap = hi - lo;
        if (gap.hi_d() <= std::max(1.0, lo.lo_d()) * std::ldexp(1.0, -static_cast<int>(target_bits)))
            break;
        Ival mid = Ival::from_rational((lo + hi).div_int(2).lo_q(), pb);
        Ival v = min_u(mid, eps).value;
        if (v.certainly_lt(t))
            lo = mid;
        else if (v.certainly_gt(t))
            hi = mid;
        else
            break;
    }
    return Ival::hull(lo, hi);
}

Ival direct_eval(const std::string& formula_id, const FormulaInputs& in, OracleConfig cfg) {
    mpfr_prec_t bits = cfg.bits;
    if (formula_id == "UJ") {
        Oracle o(*in.angle, cfg);
        return o.u(in.j, Ival::from_double(in.r, bits), in.eps);
    }
    if (formula_id == "dn") {
        Oracle o(*in.angle, cfg);
        return o.norm(in.angle->convergent(in.n).q).sin_pi().sqr().mul_int(4);
    }
    if (formula_id == "rr1") {
        Oracle o(*in.angle, cfg);
        mpz_class qn = in.angle->convergent(in.n).q;
        mpz_class qm = in.angle->convergent(in.m).q;
        if (qn == qm) return Ival(0, bits);  // the r_{0,1} = 0 convention
        Ival dn = o.norm(qn).sin_pi().sqr().mul_int(4);
        Ival dm = o.norm(qm).sin_pi().sqr().mul_int(4);
        return (Ival::exact_int(qm * qm - qn * qn, bits) / (dn - dm)).sqrt_clamped();
    }
    if (formula_id == "dist") {
        const Point4& x = *in.x;
        const Point4& y = *in.y;
        Ival dr = (x.r - y.r).round_to(bits);
        Ival dth = (x.theta - y.theta).round_to(bits);
        Ival dz = (x.z - y.z).round_to(bits);
        Ival dt = (x.t - y.t).round_to(bits);
        Ival chord_sq = (x.r.round_to(bits) * y.r.round_to(bits) * dth.sin_pi_sq_periodic()).mul_int(4);
        Ival dist_sq = dr.sqr() + chord_sq + dz.sqr() + dt.sqr();
        Ival cosh_rho = Ival(1, bits) + dist_sq / (x.t.round_to(bits) * y.t.round_to(bits)).mul_int(2);
        return cosh_rho.acosh_clamped();
    }
    if (formula_id == "vol") {
        Oracle o(*in.angle, cfg);
        Ival t = Ival::from_double(in.t, bits);
        Ival r = o.inverse(t, in.eps, in.r_hi);
        return Ival::pi(bits) * r.sqr() / t.sqr() / t;
    }
    throw UnknownFormula("direct_eval: unknown formula id '" + formula_id + "'");
}

ScanReport closest_return_scan(const Angle& a, std::size_t n_cap, OracleConfig cfg,
                               std::optional<std::size_t> mutate_index) {
    Oracle o(a, cfg);
    ScanReport rep;
    if (a.convergent(n_cap).q > cfg.j_cap)
        throw ScanBudgetExceeded("closest_return_scan: q_{n_cap} exceeds j_cap");
    for (std::size_t n = 1; n <= n_cap; ++n) {
        mpz_class qn = a.convergent(n).q;
        if (mutate_index && *mutate_index == n) qn += 1;
        if (qn == 1) continue;  // q_1 = 1 when a_1 = 1: nothing below it
        auto [qlo, qhi] = o.norm_bracket(qn);
        for (mpz_class j = 1; j < qn; ++j) {
            auto [jlo, jhi] = o.norm_bracket(j);
            ++rep.n_checked;
            if (jlo > qhi) continue;  // certified ||j a|| > ||q_n a||
            // certified violation, or a bracket too wide to certify: both fail
            rep.pass = false;
            rep.fail_n = n;
            rep.fail_j = j;
            return rep;
        }
    }
    rep.pass = true;
    return rep;
}

}  // namespace margulis
