#include "margulis/classifier.hpp"

namespace margulis {

namespace {

// 19/20 and 1/20 kept exact so X/Y/Z at rational arguments are exact
const mpq_class k95(19, 20);
const mpq_class k05(1, 20);

}  // namespace

XyzRational xyz_eval(const mpq_class& t) {
    if (t <= 1) throw PreconditionViolated("xyz_eval: t > 1 required");
    XyzRational out;
    mpq_class t2 = t * t;
    out.X = mpq_class(2 * t + 1) / (t2 - 1);
    mpq_class ydenom = -k05 * t2 + mpq_class(19, 10) * t + k95;
    if (ydenom == 0) throw PoleProximity("Y(t): denominator vanishes");
    out.Y = (t2 - k95) / ydenom;
    out.Z = (k95 * t2 - 1) / (k05 * t2 + 2 * t + 1);
    out.X.canonicalize();
    out.Y.canonicalize();
    out.Z.canonicalize();
    return out;
}

XyzInterval xyz_eval(const Ival& t) {
    mpfr_prec_t bits = t.prec();
    Ival t2 = t.sqr();
    Ival one(1, bits);
    XyzInterval out;
    out.X = (t.mul_int(2) + one) / (t2 - one);
    Ival c95 = Ival::from_rational(k95, bits);
    Ival c05 = Ival::from_rational(k05, bits);
    Ival ydenom = -(c05 * t2) + Ival::from_rational(mpq_class(19, 10), bits) * t + c95;
    if (ydenom.contains_zero())
        throw PoleProximity("Y(t): denominator interval contains 0 (pole near t ~ 38.5)");
    out.Y = (t2 - c95) / ydenom;
    out.Z = (c95 * t2 - one) / (c05 * t2 + t.mul_int(2) + one);
    return out;
}

AppendixContext appendix_context(const BoundaryContext& ctx, std::size_t n) {
    const Angle& a = ctx.angle();
    if (n < 1) throw PreconditionViolated("appendix_context: n >= 1 required");
    if (a.quotient(n + 1) != 1) throw PreconditionViolated("appendix_context: a_{n+1} = 1 required");
    // the MEW bracket is strict only when q_{n-2} < q_{n-1}
    if (n < 2 || a.convergent(n - 2).q >= a.convergent(n - 1).q)
        throw PreconditionViolated("appendix_context: needs q_{n-2} < q_{n-1} (n too small)");

    AppendixContext out;
    out.n = n;
    out.mu = mpq_class(a.convergent(n).q, a.convergent(n - 1).q);
    out.mu.canonicalize();
    mpz_class an = a.quotient(n);
    if (!(out.mu > an && out.mu < an + 1))
        throw ContractViolation("mu bracket a_n < mu < a_n + 1 failed");

    const NormEngine& ne = ctx.norms();
    mpz_class an2 = a.quotient(n + 2);
    bool done = false;
    for (mpfr_prec_t bits : ne.ladder()) {
        Ival lam = ne.beta(n, bits) / ne.beta(n + 1, bits);
        Ival ratio = ctx.delta_diff(n, n + 1, bits) / ctx.delta_diff(n - 1, n, bits);
        // LAM bracket must certify
        if (!(lam.cmp(mpq_class(an2)) > 0 && lam.cmp(mpq_class(an2 + 1)) < 0)) continue;
        if (n >= 5) {
            XyzInterval f = xyz_eval(lam);
            if (order_of(f.Z, ratio) != Order::Less) continue;
            if (order_of(ratio, f.Y) != Order::Less) continue;
            out.sandwich_checked = true;
        }
        out.lambda = lam;
        out.ratio = ratio;
        done = true;
        break;
    }
    if (!done) throw PrecisionExceeded("appendix_context: brackets not certified within the cap");
    return out;
}

TableCell table_decide(const Angle& a, std::size_t n) {
    if (n < 5) throw PreconditionViolated("table_decide: n >= 5 required");
    if (a.quotient(n + 1) != 1) throw PreconditionViolated("table_decide: a_{n+1} = 1 required");
    mpz_class an = a.quotient(n);
    mpz_class an2 = a.quotient(n + 2);
    if (an >= 3 && an2 >= 3) return TableCell::Absent;
    if (an == 2 && an2 >= 5) return TableCell::Absent;
    if (an >= 5 && an2 == 2) return TableCell::Absent;
    if (an == 1 && an2 <= 2) return TableCell::Present;
    if (an == 2 && an2 == 1) return TableCell::Present;
    return TableCell::WhiteCell;
}

Order cc1_compare(const BoundaryContext& ctx, std::size_t n) {
    const Angle& a = ctx.angle();
    if (n < 1 || a.quotient(n + 1) != 1)
        throw PreconditionViolated("cc1_compare: n >= 1 with a_{n+1} = 1 required");
    mpq_class xmu = xyz_eval(mpq_class(a.convergent(n).q, a.convergent(n - 1).q)).X;
    for (mpfr_prec_t bits : ctx.norms().ladder()) {
        Ival ratio = ctx.delta_diff(n, n + 1, bits) / ctx.delta_diff(n - 1, n, bits);
        int c = ratio.cmp(xmu);
        if (c < 0) return Order::Less;
        if (c > 0) return Order::Greater;
    }
    return Order::Overlap;
}

}  // namespace margulis
