#include <doctest.h>
#include <mpfr.h>

#include "margulis/interval.hpp"

using namespace margulis;

TEST_CASE("exact constructions and containment") {
    Ival a = Ival::from_ratio(1, 3, 128);
    CHECK(a.contains(mpq_class(1, 3)));
    CHECK(a.is_positive());
    CHECK(a.rel_width_below(100));

    Ival b = Ival::exact_int(mpz_class("123456789123456789"), 128);
    CHECK(b.lo_q() == b.hi_q());
}

TEST_CASE("arithmetic encloses rational identities") {
    mpq_class x(3, 7), y(5, 11);
    Ival ix = Ival::from_rational(x, 96), iy = Ival::from_rational(y, 96);
    CHECK((ix + iy).contains(x + y));
    CHECK((ix - iy).contains(x - y));
    CHECK((ix * iy).contains(x * y));
    CHECK((ix / iy).contains(x / y));
    CHECK(ix.sqr().contains(x * x));
    CHECK((-ix).contains(-x));
}

TEST_CASE("division by interval containing zero throws") {
    Ival z = Ival::from_double(-1, 64);
    Ival span = Ival::hull(z, Ival(1, 64));
    CHECK_THROWS_AS(Ival(1, 64) / span, ContractViolation);
}

TEST_CASE("sqrt and transcendental monotone enclosures") {
    Ival two(2, 256);
    Ival r = two.sqrt();
    CHECK(r.sqr().contains(mpq_class(2)));
    CHECK(r.rel_width_below(200));

    Ival one(1, 256);
    CHECK(one.exp().contains(one.exp()));  // self-consistency
    CHECK(one.cosh().certainly_gt(one));
    // acosh(cosh(1)) encloses 1
    CHECK(one.cosh().acosh_clamped().contains(mpq_class(1)));
}

TEST_CASE("sin_pi enclosures at rational points") {
    // sin(pi * 1/2) = 1, sin(pi * 1/6) = 1/2
    Ival half = Ival::from_ratio(1, 2, 200);
    CHECK(half.sin_pi().contains(mpq_class(1)));
    Ival sixth = Ival::from_ratio(1, 6, 200);
    CHECK(sixth.sin_pi().contains(mpq_class(1, 2)));
    CHECK(sixth.sin_pi().rel_width_below(150));
    // symmetry: sin(pi(1 - x)) = sin(pi x)
    Ival five_sixth = Ival::from_ratio(5, 6, 200);
    CHECK(five_sixth.sin_pi().contains(mpq_class(1, 2)));
    // peak spanning
    Ival wide = Ival::from_rational_endpoints(mpq_class(1, 4), mpq_class(3, 4), 200);
    Ival s = wide.sin_pi();
    CHECK(s.hi_q() >= 1);
    CHECK(s.contains(mpq_class(1)));
}

TEST_CASE("sin_pi_sq_periodic reduces mod 1") {
    Ival x = Ival::from_ratio(13, 6, 200);  // sin^2(pi * 13/6) = sin^2(pi/6) = 1/4
    CHECK(x.sin_pi_sq_periodic().contains(mpq_class(1, 4)));
    Ival y = Ival::from_ratio(-5, 6, 200);
    CHECK(y.sin_pi_sq_periodic().contains(mpq_class(1, 4)));
    // interval straddling an integer
    Ival z = Ival::from_rational_endpoints(mpq_class(9, 10), mpq_class(11, 10), 200);
    Ival s = z.sin_pi_sq_periodic();
    CHECK(s.lo_q() <= 0);
    CHECK(s.contains(mpq_class(0)));
}

TEST_CASE("certified ordering") {
    Ival a = Ival::from_ratio(1, 3, 64);
    Ival b = Ival::from_ratio(1, 2, 64);
    CHECK(order_of(a, b) == Order::Less);
    CHECK(order_of(b, a) == Order::Greater);
    CHECK(order_of(a, a) == Order::Overlap);
}

TEST_CASE("string output is deterministic and outward") {
    Ival t = Ival::from_ratio(1, 3, 128);
    CHECK(t.lo_str(10) == t.lo_str(10));
    CHECK(t.lo_str(16).substr(0, 6) == "3.3333");
}
