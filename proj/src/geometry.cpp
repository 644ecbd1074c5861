#include "margulis/geometry.hpp"

#include <algorithm>

namespace margulis {

Point4 Point4::at(double r, double theta, double z, double t, mpfr_prec_t bits) {
    if (!(r >= 0)) throw PreconditionViolated("Point4: r >= 0");
    if (!(t > 0)) throw PreconditionViolated("Point4: t > 0");
    Point4 p;
    p.r = Ival::from_double(r, bits);
    p.theta = Ival::from_double(theta, bits);
    p.z = Ival::from_double(z, bits);
    p.t = Ival::from_double(t, bits);
    return p;
}

Ival hyp_distance(const Point4& x, const Point4& y) {
    mpfr_prec_t bits = std::max(x.r.prec(), y.r.prec());
    Ival dr = x.r - y.r;
    Ival dz = x.z - y.z;
    Ival dt = x.t - y.t;
    Ival dth = x.theta - y.theta;
    Ival chord_sq = (x.r * y.r * dth.sin_pi_sq_periodic()).mul_int(4);
    Ival dist_sq = dr.sqr() + chord_sq + dz.sqr() + dt.sqr();
    Ival cosh_rho = Ival(1, bits) + dist_sq / (x.t * y.t).mul_int(2);
    return cosh_rho.acosh_clamped();
}

Point4 apply_screw(const Angle& alpha, const mpz_class& j, const Point4& x) {
    mpfr_prec_t bits = x.r.prec();
    Point4 out = x;
    // j*alpha as an interval; theta is kept unnormalized (chord computations
    // reduce mod 1 themselves)
    Ival a = alpha.value(bits + static_cast<mpfr_prec_t>(mpz_sizeinbase(j.get_mpz_t(), 2)));
    out.theta = x.theta + a.mul_int(j);
    out.z = x.z + Ival::exact_int(j, bits);
    return out;
}

Displacement displacement(const BoundaryContext& ctx, const mpz_class& j, const Point4& x) {
    if (j < 1) throw PreconditionViolated("displacement: j >= 1");
    Displacement d;
    mpfr_prec_t bits = std::max<mpfr_prec_t>(x.r.prec(), ctx.policy().bits_start);
    Ival sin2 = ctx.norms().norm_any(j, bits).sin_pi().sqr();
    Ival num = (sin2 * x.r.sqr()).mul_int(4) + Ival::exact_int(j * j, bits);
    d.cosh_minus_1 = num / x.t.sqr().mul_int(2);
    d.rho = (d.cosh_minus_1 + Ival(1, bits)).acosh_clamped();

    // membership: t > u_j(r), escalating until separated or the cap is hit
    d.in_region = RegionSide::Undetermined;
    for (mpfr_prec_t b : ctx.norms().ladder()) {
        Ival u = ctx.u_value(j, x.r.round_to(b), b);
        Order o = order_of(x.t.round_to(b), u);
        if (o == Order::Greater) {
            d.in_region = RegionSide::Inside;
            break;
        }
        if (o == Order::Less) {
            d.in_region = RegionSide::Outside;
            break;
        }
    }
    return d;
}

LeafVolume leaf_volume(const BoundaryContext& ctx, const EnvelopeProfile& prof, const Ival& t) {
    mpfr_prec_t bits = std::max<mpfr_prec_t>(t.prec(), 128);
    Ival c = ctx.eps().c(bits);
    if (!t.certainly_gt(c)) throw OutOfRange("leaf_volume: t must exceed c(eps)");
    LeafVolume lv;
    lv.radius = ctx.boundary_inverse(prof, t);
    lv.volume = Ival::pi(bits) * lv.radius.sqr() / t.sqr() / t;
    lv.core_length = t.recip();
    return lv;
}

Point4 conjugacy_phi(const BoundaryContext& ctx_alpha, const EnvelopeProfile& prof_alpha,
                     const BoundaryContext& ctx_beta, const EnvelopeProfile& prof_beta,
                     const Point4& x) {
    mpfr_prec_t bits = std::max<mpfr_prec_t>(x.r.prec(), 128);
    BoundaryValue ba = ctx_alpha.eval(prof_alpha, x.r);
    if (!x.t.certainly_gt(ba.value))
        throw NotInRegion("conjugacy_phi: point not certified inside T_alpha");
    BoundaryValue bb = ctx_beta.eval(prof_beta, x.r);
    Ival a = ctx_alpha.angle().value(bits);
    Ival b = ctx_beta.angle().value(bits);
    Point4 out = x;
    out.theta = x.theta + (b - a) * x.z;
    out.t = x.t + bb.value - ba.value;
    return out;
}

WitnessSequence rigidity_witness(const Angle& alpha, const Angle& beta, std::size_t count,
                                 const mpz_class& search_cap, PrecisionPolicy pol) {
    // the two quotient streams must differ within a detectable prefix
    bool differ = false;
    for (std::size_t k = 1; k <= 64; ++k) {
        bool ka = alpha.quotient_known(k), kb = beta.quotient_known(k);
        if (!ka || !kb) {
            differ = ka != kb;
            break;
        }
        if (alpha.quotient(k) != beta.quotient(k)) {
            differ = true;
            break;
        }
    }
    if (!differ) throw PreconditionViolated("rigidity_witness: angles agree on the scanned prefix");

    NormEngine na(alpha, pol), nb(beta, pol);
    std::vector<WitnessPair> cands;
    for (std::size_t n = 1;; ++n) {
        if (!alpha.quotient_known(n + 1)) break;
        mpz_class q = alpha.convergent(n).q;
        if (q > search_cap) break;
        WitnessPair w;
        w.n = q;
        w.norm_alpha = na.norm(n, pol.bits_start * 2);
        w.norm_beta = nb.norm_any(q, pol.bits_start * 2);
        cands.push_back(std::move(w));
    }
    if (cands.empty()) throw SearchExhausted("rigidity_witness: no closest-return moments under the cap");

    // keep the `count` candidates with the largest ||n beta||, then restore
    // index order (any subsequence of q_n keeps ||n alpha|| decreasing)
    std::vector<std::size_t> idx(cands.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return cands[j].norm_beta.lo_d() < cands[i].norm_beta.lo_d();
    });
    if (idx.size() > count) idx.resize(count);
    std::sort(idx.begin(), idx.end());

    WitnessSequence out;
    for (std::size_t i : idx) out.pairs.push_back(cands[i]);
    out.floor_beta = out.pairs.front().norm_beta;
    for (const auto& w : out.pairs) out.floor_beta = Ival::min(out.floor_beta, w.norm_beta);
    return out;
}

RigidityProbe rigidity_probe(const BoundaryContext& ctx_beta, const mpz_class& n, double r) {
    RigidityProbe p;
    p.n = n;
    mpfr_prec_t bits = 256;
    Ival rr = Ival::from_double(r, bits);
    Ival t = ctx_beta.u_value(1, rr, bits);  // probe on the boundary of T_{beta,1}
    Ival sin2 = ctx_beta.norms().norm_any(n, bits).sin_pi().sqr();
    Ival two_t2 = t.sqr().mul_int(2);
    p.lower_bound = (sin2 * rr.sqr()).mul_int(4) / two_t2;
    p.cosh_minus_1 = ((sin2 * rr.sqr()).mul_int(4) + Ival::exact_int(n * n, bits)) / two_t2;
    return p;
}

}  // namespace margulis
