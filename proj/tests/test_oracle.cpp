#include <doctest.h>

#include <cmath>
#include "margulis/norms.hpp"
#include "margulis/oracle.hpp"

using namespace margulis;

namespace {

Angle golden() { return Angle::periodic({}, {1}); }
Angle one_three() { return Angle::periodic({}, {1, 3}); }

}  // namespace

TEST_CASE("oracle norms agree with the norm engine on random j") {
    Angle a = one_three();
    Oracle o(a);
    NormEngine ne(a);
    for (unsigned long j : {1ul, 2ul, 7ul, 19ul, 115ul, 433ul, 500ul}) {
        CHECK(o.norm(j).overlaps(ne.norm_any(j, 256)));
    }
}

TEST_CASE("direct_eval UJ at (golden, j=1, r=0) gives c(eps)") {
    Angle g = golden();
    FormulaInputs in;
    in.angle = &g;
    in.j = 1;
    in.r = 0;
    Ival u = direct_eval("UJ", in);
    CHECK(u.overlaps(EpsilonConfig::margulis_default().c(512)));
}

TEST_CASE("direct_eval dist on the vertical geodesic (0,0,0,1)-(0,0,0,e)") {
    FormulaInputs in;
    double e = std::exp(1.0);
    in.x = Point4::at(0, 0, 0, 1, 256);
    in.y = Point4::at(0, 0, 0, e, 256);
    Ival rho = direct_eval("dist", in);
    // e is a double here, so compare against acosh(1 + (e-1)^2/(2e)) for that dyadic e
    Ival ed = Ival::from_double(e, 512);
    Ival expect = (Ival(1, 512) + (ed - Ival(1, 512)).sqr() / ed.mul_int(2)).acosh_clamped();
    CHECK(rho.overlaps(expect));
    CHECK(std::abs(rho.mid_d() - 1.0) < 1e-15);
}

TEST_CASE("direct_eval unknown formula") {
    FormulaInputs in;
    CHECK_THROWS_AS(direct_eval("nope", in), UnknownFormula);
}

TEST_CASE("min_u: r=0 gives (c, 1); argmin always a q_n (Lemma paq)") {
    Angle a = one_three();
    Oracle o(a);
    EpsilonConfig eps = EpsilonConfig::margulis_default();
    auto m0 = o.min_u(Ival(0, 128), eps);
    CHECK(m0.argmin == 1);
    CHECK(m0.value.overlaps(eps.c(512)));

    // argmin lands on a convergent denominator for every sampled r
    std::vector<mpz_class> qs;
    for (std::size_t n = 0; n <= 12; ++n) qs.push_back(a.convergent(n).q);
    for (double r : {0.5, 2.0, 7.0, 31.0, 144.0, 900.0, 4000.0}) {
        auto m = o.min_u(Ival::from_double(r, 128), eps);
        bool is_q = false;
        for (const auto& q : qs) is_q = is_q || (q == m.argmin);
        CHECK(is_q);
    }
}

TEST_CASE("closest_return_scan passes on golden and [1,3]; mutation fails") {
    OracleConfig cfg;
    ScanReport g = closest_return_scan(golden(), 10, cfg);
    CHECK(g.pass);
    ScanReport t = closest_return_scan(one_three(), 8, cfg);
    CHECK(t.pass);

    // negative control: corrupt q_5 (golden q_5 = 8 -> 9, not a denominator)
    ScanReport bad = closest_return_scan(golden(), 6, cfg, 5);
    CHECK_FALSE(bad.pass);
    CHECK(bad.fail_n == 5);
}

TEST_CASE("scan budget guard") {
    OracleConfig tiny;
    tiny.j_cap = 10;
    CHECK_THROWS_AS(closest_return_scan(golden(), 12, tiny), ScanBudgetExceeded);
}
