#include <doctest.h>

#include "margulis/classifier.hpp"

using namespace margulis;

namespace {

Angle one_three() { return Angle::periodic({}, {1, 3}); }
Angle threes_one() { return Angle::periodic({}, {3, 1, 3}); }

}  // namespace

TEST_CASE("xyz_eval exact rational values") {
    XyzRational v3 = xyz_eval(mpq_class(3));
    CHECK(v3.X == mpq_class(7, 8));
    CHECK(v3.Z == mpq_class(151, 149));  // 7.55/7.45
    CHECK(v3.Z > v3.X);                  // the first bullet's ordering

    XyzRational v2 = xyz_eval(mpq_class(2));
    CHECK(v2.Y < v3.X);  // Y(2) < X(3), the fifth bullet's ordering
    // chain orderings used by the remaining bullets
    CHECK(xyz_eval(mpq_class(5)).Z > xyz_eval(mpq_class(2)).X);
    CHECK(xyz_eval(mpq_class(2)).Z > xyz_eval(mpq_class(5)).X);
    CHECK(xyz_eval(mpq_class(3)).Y < xyz_eval(mpq_class(2)).X);
}

TEST_CASE("xyz_eval interval form matches the exact values") {
    Ival t = Ival::from_ratio(5, 2, 192);
    XyzInterval vi = xyz_eval(t);
    XyzRational vr = xyz_eval(mpq_class(5, 2));
    CHECK(vi.X.contains(vr.X));
    CHECK(vi.Y.contains(vr.Y));
    CHECK(vi.Z.contains(vr.Z));
}

TEST_CASE("Y pole proximity raises") {
    // the pole of Y sits at 19 + sqrt(390) ~ 38.748
    Ival wide = Ival::from_rational_endpoints(mpq_class(38), mpq_class(39), 128);
    CHECK_THROWS_AS(xyz_eval(wide), PoleProximity);
}

TEST_CASE("appendix_context brackets on [1,3,1,3,...]") {
    Angle a = one_three();
    BoundaryContext ctx(a);
    // odd n have a_{n+1} = 3; even n >= 2 have a_{n+1} = 1
    for (std::size_t n : {4ul, 6ul, 8ul, 10ul}) {
        AppendixContext ac = appendix_context(ctx, n);
        mpz_class an = a.quotient(n);
        CHECK(ac.mu > an);
        CHECK(ac.mu < an + 1);
        mpz_class an2 = a.quotient(n + 2);
        CHECK(ac.lambda.cmp(mpq_class(an2)) > 0);
        CHECK(ac.lambda.cmp(mpq_class(an2 + 1)) < 0);
        if (n >= 5) CHECK(ac.sandwich_checked);
    }
}

TEST_CASE("appendix_context preconditions") {
    Angle a = one_three();
    BoundaryContext ctx(a);
    CHECK_THROWS_AS(appendix_context(ctx, 3), PreconditionViolated);  // a_4 = 3
}

TEST_CASE("table_decide five decided cells") {
    // période (3,1,3): a_n pattern 3,1,3,3,1,3,... gives a_n=3, a_{n+1}=1, a_{n+2}=3 at n=1,4,7,...
    Angle a = threes_one();
    for (std::size_t n : {7ul, 10ul, 13ul}) {
        REQUIRE(a.quotient(n + 1) == 1);
        REQUIRE(a.quotient(n) == 3);
        REQUIRE(a.quotient(n + 2) == 3);
        CHECK(table_decide(a, n) == TableCell::Absent);
    }
    // a_n = 1, a_{n+2} <= 2 -> Present: periodic (1,1,2): pattern 1,1,2 repeating
    Angle b = Angle::periodic({}, {1, 1, 2});
    for (std::size_t n = 5; n <= 20; ++n) {
        if (b.quotient(n + 1) != 1) continue;
        if (b.quotient(n) == 1 && b.quotient(n + 2) <= 2)
            CHECK(table_decide(b, n) == TableCell::Present);
    }
    // a_n = 2, a_{n+2} = 1 -> Present: periodic (2,1,1)
    Angle c = Angle::periodic({}, {2, 1, 1});
    bool saw = false;
    for (std::size_t n = 5; n <= 20; ++n) {
        if (c.quotient(n + 1) != 1) continue;
        if (c.quotient(n) == 2 && c.quotient(n + 2) == 1) {
            CHECK(table_decide(c, n) == TableCell::Present);
            saw = true;
        }
    }
    CHECK(saw);
    // white cell: a_n = 2, a_{n+2} = 3
    Angle d = Angle::periodic({}, {2, 1, 3});
    for (std::size_t n = 5; n <= 20; ++n) {
        if (d.quotient(n + 1) != 1) continue;
        if (d.quotient(n) == 2 && d.quotient(n + 2) == 3) {
            CHECK(table_decide(d, n) == TableCell::WhiteCell);
        }
    }
    CHECK_THROWS_AS(table_decide(a, 4), PreconditionViolated);   // n < 5
    CHECK_THROWS_AS(table_decide(a, 6), PreconditionViolated);   // a_7 = 3 != 1
}

TEST_CASE("decided cells agree with the envelope classifier") {
    for (const Angle& a : {threes_one(), Angle::periodic({}, {1, 1, 2}),
                           Angle::periodic({}, {2, 1, 1}), Angle::periodic({}, {4, 1, 4}),
                           Angle::periodic({}, {1, 1, 5})}) {
        BoundaryContext ctx(a);
        for (std::size_t n = 5; n <= 18; ++n) {
            if (a.quotient(n + 1) != 1) continue;
            TableCell cell = table_decide(a, n);
            if (cell == TableCell::WhiteCell) continue;
            Presence p = ctx.is_present(n);
            REQUIRE(p != Presence::Undetermined);
            CHECK((cell == TableCell::Present) == (p == Presence::Present));
        }
    }
}

TEST_CASE("cc1: presence iff ratio < X(mu), wherever certified") {
    for (const Angle& a : {one_three(), threes_one(), Angle::periodic({}, {2, 1, 3})}) {
        BoundaryContext ctx(a);
        for (std::size_t n = 3; n <= 15; ++n) {
            if (a.quotient(n + 1) != 1) continue;
            Order o = cc1_compare(ctx, n);
            if (o == Order::Overlap) continue;
            Presence p = ctx.is_present(n);
            if (p == Presence::Undetermined) continue;
            CHECK((o == Order::Less) == (p == Presence::Present));
        }
    }
}
