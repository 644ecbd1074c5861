#include <doctest.h>

#include <cmath>
#include <random>

#include "margulis/geometry.hpp"
#include "margulis/oracle.hpp"

using namespace margulis;

namespace {

Angle golden() { return Angle::periodic({}, {1}); }
Angle twos() { return Angle::periodic({}, {2}); }

}  // namespace

TEST_CASE("hyp_distance: vertical geodesic (0,0,0,1)-(0,0,0,e) has length 1") {
    double e = std::exp(1.0);
    Point4 x = Point4::at(0, 0, 0, 1, 256);
    Point4 y = Point4::at(0, 0, 0, e, 256);
    Ival rho = hyp_distance(x, y);
    // e as a double is inexact, so compare to 12 digits
    CHECK(std::abs(rho.mid_d() - 1.0) < 1e-12);
    CHECK(rho.rel_width_below(40));
}

TEST_CASE("hyp_distance symmetry and identity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.1, 5.0);
    for (int i = 0; i < 40; ++i) {
        Point4 x = Point4::at(U(rng), U(rng), U(rng), U(rng), 192);
        Point4 y = Point4::at(U(rng), U(rng), U(rng), U(rng), 192);
        Ival d1 = hyp_distance(x, y);
        Ival d2 = hyp_distance(y, x);
        CHECK(d1.overlaps(d2));
        CHECK(hyp_distance(x, x).contains(mpq_class(0)));
    }
}

TEST_CASE("hyp_distance triangle inequality on random triples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.1, 4.0);
    for (int i = 0; i < 60; ++i) {
        Point4 x = Point4::at(U(rng), U(rng), U(rng), U(rng), 192);
        Point4 y = Point4::at(U(rng), U(rng), U(rng), U(rng), 192);
        Point4 z = Point4::at(U(rng), U(rng), U(rng), U(rng), 192);
        Ival xz = hyp_distance(x, z);
        Ival sum = hyp_distance(x, y) + hyp_distance(y, z);
        CHECK_FALSE(xz.certainly_gt(sum));
    }
}

TEST_CASE("displacement identity matches hyp_distance of the screwed point") {
    Angle a = golden();
    BoundaryContext ctx(a);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(0.2, 30.0);
    std::uniform_int_distribution<long> J(1, 40);
    for (int i = 0; i < 50; ++i) {
        Point4 x = Point4::at(U(rng), U(rng), U(rng), 1.0 + U(rng), 192);
        mpz_class j(J(rng));
        Displacement d = displacement(ctx, j, x);
        Point4 gx = apply_screw(a, j, x);
        Ival direct = hyp_distance(gx, x);
        CHECK(d.rho.overlaps(direct));
    }
}

TEST_CASE("displacement region test: t = 2 u_j(r) inside with the stated cosh value") {
    Angle a = twos();
    BoundaryContext ctx(a);
    mpz_class j = 5;
    Ival r = Ival::from_double(7.0, 192);
    Ival u = ctx.u_value(j, r, 192);
    Point4 x;
    x.r = r;
    x.theta = Ival(0, 192);
    x.z = Ival(0, 192);
    x.t = u.mul_int(2);
    Displacement d = displacement(ctx, j, x);
    CHECK(d.in_region == RegionSide::Inside);
    // cosh(rho) - 1 = (cosh(eps) - 1)/4 at t = 2 u_j(r)
    Ival expect = (ctx.eps().epsilon(192).cosh() - Ival(1, 192)).div_int(4);
    CHECK(d.cosh_minus_1.overlaps(expect));
    CHECK(d.rho.certainly_lt(ctx.eps().epsilon(192)));

    Point4 y = x;
    y.t = u.div_int(2);
    Displacement dout = displacement(ctx, j, y);
    CHECK(dout.in_region == RegionSide::Outside);
    CHECK(dout.rho.certainly_gt(ctx.eps().epsilon(192)));
}

TEST_CASE("displacement is g_alpha-invariant") {
    Angle a = golden();
    BoundaryContext ctx(a);
    Point4 x = Point4::at(3.0, 0.25, 1.5, 40.0, 192);
    Point4 gx = apply_screw(a, 1, x);
    for (long j : {1L, 3L, 8L}) {
        Displacement d1 = displacement(ctx, j, x);
        Displacement d2 = displacement(ctx, j, gx);
        CHECK(d1.rho.overlaps(d2.rho));
    }
}

TEST_CASE("leaf_volume round-trips Eq. vol and core length 1/t") {
    Angle a = golden();
    BoundaryContext ctx(a);
    EnvelopeProfile prof = ctx.build_profile(12);
    Ival t = Ival::from_double(100.0, 192);
    LeafVolume lv = leaf_volume(ctx, prof, t);
    Ival direct = Ival::pi(192) * lv.radius.sqr() / t.sqr() / t;
    CHECK(lv.volume.overlaps(direct));
    CHECK(lv.core_length.contains(mpq_class(1, 100)));
    // against the independent oracle inverse
    Angle g = golden();
    FormulaInputs in;
    in.angle = &g;
    in.t = 100.0;
    in.r_hi = prof.valid_r_max;
    Ival vol_oracle = direct_eval("vol", in);
    CHECK(lv.volume.overlaps(vol_oracle));
}

TEST_CASE("leaf volume stays bounded below by a linear function of t") {
    // vol(L_t)/t oscillates with the breakpoint structure but keeps a
    // positive floor (the growth claim is a lower bound, not monotonicity)
    Angle a = twos();
    BoundaryContext ctx(a);
    EnvelopeProfile prof = ctx.build_profile(22);
    for (double t : {1e2, 1e3, 1e4, 1e5}) {
        LeafVolume lv = leaf_volume(ctx, prof, Ival::from_double(t, 192));
        CHECK(lv.volume.lo_d() / t > 5e-7);
    }
}

TEST_CASE("conjugacy_phi: identity for alpha = beta; conjugacy identity; lands in T_beta") {
    Angle a = golden(), b = twos();
    BoundaryContext ca(a), cb(b);
    EnvelopeProfile pa = ca.build_profile(14), pb = cb.build_profile(14);

    // alpha = beta: both correction terms vanish
    Point4 x = Point4::at(5.0, 0.125, 0.5, 200.0, 192);
    Point4 same = conjugacy_phi(ca, pa, ca, pa, x);
    CHECK(same.theta.overlaps(x.theta));
    CHECK(same.t.overlaps(x.t));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.5, 50.0);
    for (int i = 0; i < 25; ++i) {
        double r = U(rng);
        Point4 p = Point4::at(r, 0.3, 1.25, 1.0, 192);
        p.t = ca.eval(pa, r).value.mul_int(3);  // safely inside T_alpha
        Point4 lhs = conjugacy_phi(ca, pa, cb, pb, apply_screw(a, 1, p));
        Point4 rhs = apply_screw(b, 1, conjugacy_phi(ca, pa, cb, pb, p));
        CHECK(lhs.r.overlaps(rhs.r));
        CHECK(lhs.theta.overlaps(rhs.theta));
        CHECK(lhs.z.overlaps(rhs.z));
        CHECK(lhs.t.overlaps(rhs.t));
        // image lands above B_beta
        Point4 img = conjugacy_phi(ca, pa, cb, pb, p);
        CHECK(img.t.certainly_gt(cb.eval(pb, r).value));
    }

    // a point below the boundary is refused
    Point4 outside = Point4::at(5.0, 0.0, 0.0, 1.0, 192);
    CHECK_THROWS_AS(conjugacy_phi(ca, pa, cb, pb, outside), NotInRegion);
}

TEST_CASE("rigidity witness: golden vs [2,2,...] uses Fibonacci moments") {
    Angle a = golden(), b = twos();
    WitnessSequence w = rigidity_witness(a, b, 10, 100000);
    REQUIRE(w.pairs.size() >= 8);
    // ||n_i alpha|| decreasing toward 0
    for (std::size_t i = 0; i + 1 < w.pairs.size(); ++i)
        CHECK(w.pairs[i].norm_alpha.certainly_gt(w.pairs[i + 1].norm_alpha));
    CHECK(w.pairs.back().norm_alpha.hi_d() < 1e-4);
    // the beta norms stay above the reported floor
    for (const auto& p : w.pairs) CHECK_FALSE(p.norm_beta.certainly_lt(w.floor_beta));
    CHECK(w.floor_beta.lo_d() > 1e-3);

    // identical angles are refused
    CHECK_THROWS_AS(rigidity_witness(a, golden(), 5, 1000), PreconditionViolated);
}

TEST_CASE("rigidity witness for a shared-prefix pair diverging at depth 5") {
    std::vector<unsigned long> p1{1, 2, 1, 2, 3};
    Angle a = Angle::periodic(p1, {1});
    Angle b = Angle::periodic({1, 2, 1, 2}, {4});
    WitnessSequence w = rigidity_witness(a, b, 8, 100000);
    CHECK(w.pairs.size() >= 5);
    CHECK(w.floor_beta.lo_d() > 0);
    // oracle cross-check on the reported norms
    Oracle oa(a), ob(b);
    for (const auto& p : w.pairs) {
        CHECK(p.norm_alpha.overlaps(oa.norm(p.n)));
        CHECK(p.norm_beta.overlaps(ob.norm(p.n)));
    }
}

TEST_CASE("rigidity probe reproduces the displacement lower bound") {
    Angle b = twos();
    BoundaryContext cb(b);
    for (long n : {5L, 29L, 169L}) {
        RigidityProbe p = rigidity_probe(cb, n, 1e6);
        CHECK(p.cosh_minus_1.certainly_gt(p.lower_bound));
    }
}

TEST_CASE("membership in any T_{alpha,j} puts the point above the envelope") {
    Angle a = golden();
    BoundaryContext ctx(a);
    EnvelopeProfile prof = ctx.build_profile(12);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> R(0.5, 40.0), T(10.0, 3000.0);
    std::uniform_int_distribution<long> J(1, 30);
    for (int i = 0; i < 60; ++i) {
        double r = R(rng);
        Point4 x = Point4::at(r, 0.1, 0.2, T(rng), 160);
        Displacement d = displacement(ctx, J(rng), x);
        if (d.in_region == RegionSide::Inside) {
            CHECK(x.t.certainly_gt(ctx.eval(prof, r).value));
        }
    }
}
