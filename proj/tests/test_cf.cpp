#include <doctest.h>

#include <atomic>
#include <thread>

#include "margulis/angle.hpp"
#include "margulis/norms.hpp"

using namespace margulis;

namespace {

Angle golden() { return Angle::periodic({}, {1}); }
Angle one_three() { return Angle::periodic({}, {1, 3}); }
Angle twos() { return Angle::periodic({}, {2}); }

// test-side oracle: alpha for the golden mean is (sqrt(5)-1)/2
Ival golden_alpha(mpfr_prec_t bits) {
    return (Ival::sqrt_int(5, bits) - Ival(1, bits)).div_int(2);
}

}  // namespace

TEST_CASE("convergents: golden mean n=5 gives (5,8) and seeds") {
    Angle a = golden();
    Convergent c5 = a.convergent(5);
    CHECK(c5.p == 5);
    CHECK(c5.q == 8);
    Convergent c0 = a.convergent(0);
    CHECK(c0.p == 0);
    CHECK(c0.q == 1);
}

TEST_CASE("convergents: [1,3,1,3,...] n=4 cross-checked against exact rational evaluation") {
    Angle a = one_three();
    Convergent c = a.convergent(4);
    // oracle: exact rational value of [1,3,1,3] built backward
    mpq_class x(0);
    for (unsigned long q : {3ul, 1ul, 3ul, 1ul}) x = mpq_class(1) / (mpq_class(q) + x);
    CHECK(mpq_class(c.p, c.q) == x);
    CHECK(c.p == 15);
    CHECK(c.q == 19);
    // gcd(p, q) = 1 and q_n > 2 q_{n-2}
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), c.p.get_mpz_t(), c.q.get_mpz_t());
    CHECK(g == 1);
    CHECK(a.convergent(4).q > 2 * a.convergent(2).q);
}

TEST_CASE("golden beta_n encloses alpha^(n+1), n = 1..20") {
    Angle a = golden();
    NormEngine ne(a);
    Ival alpha = golden_alpha(512);
    Ival pw = alpha;
    for (std::size_t n = 1; n <= 20; ++n) {
        pw = pw * alpha;  // alpha^(n+1)
        Ival b = ne.beta(n, 256);
        CHECK(b.overlaps(pw));
        CHECK(b.rel_width_below(64));
    }
}

TEST_CASE("Lemma qnp(ii) strict bracket via norm_closest") {
    for (const Angle& a : {golden(), one_three(), twos()}) {
        NormEngine ne(a);
        for (std::size_t n = 0; n <= 15; ++n) {
            NormResult r = norm_closest(a, n, 48);
            auto [lo, hi] = ne.qnp_bracket(n);
            // the gate applies to beta_n (the adjusted value at n=0, a_1=1)
            Ival b = ne.beta(n, r.bits_used);
            CHECK(b.lo_q() > lo);
            CHECK(b.hi_q() < hi);
            if (n == 0 && a.quotient(1) == 1) CHECK(r.q0_adjusted);
        }
    }
}

TEST_CASE("Lemma qnp(iii) backward identity as interval containment") {
    for (const Angle& a : {golden(), one_three(), twos()}) {
        NormEngine ne(a);
        for (std::size_t n = 0; n <= 12; ++n) {
            Ival lhs = ne.beta(n, 192);
            Ival rhs = ne.beta(n + 1, 192).mul_int(a.quotient(n + 2)) + ne.beta(n + 2, 192);
            CHECK(lhs.overlaps(rhs));
        }
    }
}

TEST_CASE("Lemma qnp(i) sign pattern of q_n alpha - p_n") {
    Angle a = one_three();
    Ival alpha = a.value(256);
    for (std::size_t n = 1; n <= 10; ++n) {
        Convergent c = a.convergent(n);
        Ival signd = alpha.mul_int(c.q) - Ival::exact_int(c.p, 256);
        if (n % 2 == 0)
            CHECK(signd.is_positive());
        else
            CHECK(signd.is_negative());
    }
}

TEST_CASE("norm_any: j = q_n matches norm_closest; values match direct evaluation") {
    Angle a = one_three();
    NormEngine ne(a);
    for (std::size_t n = 2; n <= 8; ++n) {
        mpz_class qn = a.convergent(n).q;
        CHECK(ne.norm_any(qn, 192).overlaps(ne.norm(n, 192)));
    }
    // direct high-precision oracle: j*alpha mod 1 via a deep rational bracket
    auto [alo, ahi] = a.rational_bracket(60);
    for (unsigned long j = 1; j <= 500; ++j) {
        mpq_class lo = j * alo, hi = j * ahi;
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
        mpq_class frac_lo = lo - mpq_class(fl), frac_hi = hi - mpq_class(fl);
        mpq_class one_minus_hi = mpq_class(1) - frac_hi;
        mpq_class one_minus_lo = mpq_class(1) - frac_lo;
        mpq_class d_lo = std::min(frac_lo, one_minus_hi);
        mpq_class d_hi = std::min(frac_hi, one_minus_lo);
        if (d_lo > d_hi) std::swap(d_lo, d_hi);
        Ival direct = Ival::from_rational_endpoints(d_lo, d_hi, 256);
        CHECK(ne.norm_any(j, 192).overlaps(direct));
    }
}

TEST_CASE("norm_any strictly above beta_n between closest returns (Thm mom)") {
    Angle a = golden();
    NormEngine ne(a);
    // j = 4 lies between q_3 = 3 and q_4 = 5
    Ival n4 = ne.norm_any(4, 160);
    Ival b3 = ne.beta(3, 160);
    CHECK(n4.certainly_gt(b3));
}

TEST_CASE("Thm mom at desk scale via norm_any") {
    for (const Angle& a : {golden(), one_three()}) {
        NormEngine ne(a);
        for (std::size_t n = 2; n <= 12; ++n) {
            if (!a.quotient_known(n + 2)) break;
            mpz_class qn = a.convergent(n).q;
            Ival bn = ne.norm(n, 224);
            for (mpz_class j = 1; j < qn; ++j) {
                CHECK(ne.norm_any(j, 224).certainly_gt(bn));
            }
        }
    }
}

TEST_CASE("monotone escalation never flips a certified comparison") {
    Angle a = twos();
    NormEngine ne(a);
    Ival c6 = ne.beta(6, 128), c7 = ne.beta(7, 128);
    REQUIRE(c6.certainly_gt(c7));
    Ival f6 = ne.beta(6, 1024), f7 = ne.beta(7, 1024);
    CHECK(f6.certainly_gt(f7));
    CHECK(c6.overlaps(f6));
    CHECK(c7.overlaps(f7));
}

TEST_CASE("diophantine_report") {
    DiophantineReport r = diophantine_report(golden(), 2, 20);
    // q_2/q_1 = 2 exactly (q_0 = q_1 = 1); every later ratio is below 2
    CHECK(r.sup_ratio_exact <= 2);
    CHECK(r.bounded_type_flag);
    CHECK(r.max_quotient == 1);

    DiophantineReport t = diophantine_report(twos(), 2, 20);
    CHECK(t.max_quotient == 2);
    CHECK(t.bounded_type_flag);

    // sup_ratio monotone nondecreasing in n_max
    Angle lio = liouville_angle({1});
    DiophantineReport l2 = diophantine_report(lio, 2, 2);
    DiophantineReport l3 = diophantine_report(lio, 2, 3);
    CHECK(l3.sup_ratio_exact >= l2.sup_ratio_exact);
    CHECK(l3.sup_ratio_exact > 10);  // unbounded growth shows immediately
    CHECK_FALSE(l3.bounded_type_flag);
}

TEST_CASE("liouville generator: q_{n+1} lands in [exp(q_n), exp(q_n) + 2 q_n]") {
    Angle lio = liouville_angle({1});
    // a_1 = 1, then a_2 = ceil(e/1) = 3, a_3 = ceil(e^4/4) = 14
    CHECK(lio.quotient(1) == 1);
    CHECK(lio.quotient(2) == 3);
    CHECK(lio.quotient(3) == 14);
    for (std::size_t n = 1; n <= 3; ++n) {
        if (!lio.quotient_known(n + 1)) break;
        mpz_class qn = lio.convergent(n).q;
        mpz_class qn1 = lio.convergent(n + 1).q;
        Ival e_qn = Ival::exact_int(qn, 256).exp();
        Ival upper = e_qn + Ival::exact_int(2 * qn, 256);
        Ival q_next = Ival::exact_int(qn1, 256);
        CHECK_FALSE(q_next.certainly_lt(e_qn));   // q_{n+1} >= exp(q_n)
        CHECK_FALSE(q_next.certainly_gt(upper));  // q_{n+1} <= exp(q_n) + 2 q_n
    }
    // every generated quotient is >= 1 (indeed >= 2)
    for (std::size_t n = 2; lio.quotient_known(n); ++n) CHECK(lio.quotient(n) >= 2);
    // overflow policy: deep quotients are refused, not silently wrong
    CHECK_FALSE(lio.quotient_known(6));
    CHECK_THROWS_AS(lio.quotient(6), OverflowPolicy);
    CHECK(lio.quotient_at_least_two(6));
}

TEST_CASE("explicit truncation semantics") {
    Angle a = Angle::explicit_list({1, 1});
    CHECK_THROWS_AS(a.convergent(5), QuotientsExhausted);
    CHECK(a.max_norm_index() == 0);
    CHECK_THROWS_AS(norm_closest(a, 5, 32), QuotientsExhausted);

    std::vector<unsigned long> forty(40, 2);
    Angle b = Angle::explicit_list(forty);
    CHECK(b.max_norm_index() == 38);
    NormResult r = norm_closest(b, 10, 48);
    CHECK(r.value.rel_width_below(48));
}

TEST_CASE("quotient cache extends safely under concurrent readers") {
    Angle a = Angle::periodic({2, 1}, {3, 1, 4});
    std::vector<std::thread> workers;
    std::atomic<bool> ok{true};
    for (int w = 0; w < 6; ++w)
        workers.emplace_back([&] {
            for (std::size_t n = 1; n <= 300; ++n) {
                if (a.convergent(n).q < a.convergent(n >= 2 ? n - 2 : 0).q) ok = false;
            }
        });
    for (auto& t : workers) t.join();
    CHECK(ok);
    // the cached stream stays consistent with a fresh copy
    Angle b = Angle::periodic({2, 1}, {3, 1, 4});
    CHECK(a.convergent(300).q == b.convergent(300).q);
}
