#include <doctest.h>

#include <cmath>
#include <map>

#include "margulis/asymptotics.hpp"

using namespace margulis;

namespace {

Angle golden() { return Angle::periodic({}, {1}); }
Angle one_three() { return Angle::periodic({}, {1, 3}); }
Angle twos() { return Angle::periodic({}, {2}); }

std::map<std::string, InequalityReport> by_name(std::vector<InequalityReport> v) {
    std::map<std::string, InequalityReport> m;
    for (auto& r : v) m.emplace(r.name, std::move(r));
    return m;
}

}  // namespace

TEST_CASE("inequality suite certifies on golden up to n=20") {
    BoundaryContext ctx(golden());
    auto reps = by_name(inequality_suite(ctx, 1, 20));
    for (const auto& [name, r] : reps) {
        CAPTURE(name);
        CHECK(r.certified);
        if (r.checked > 0) CHECK(r.margin_lo > 0);
    }
    // golden: every a_n = 1, so the a_{n+2} >= 2 rows must be empty,
    // the all-ones rows populated
    CHECK(reps.at("ttn4").checked > 0);
    CHECK(reps.at("ttn1").checked == 0);
    CHECK(reps.at("fund-x").checked > 0);
    CHECK(reps.at("fund-y").checked > 0);
    CHECK(reps.at("fund-x").margin_lo > 0);
}

TEST_CASE("inequality suite on [2,2,...]: ttn case 1 bracket") {
    BoundaryContext ctx(twos());
    auto reps = by_name(inequality_suite(ctx, 5, 20));
    CHECK(reps.at("ttn1").checked > 0);
    CHECK(reps.at("ttn1").certified);
    CHECK(reps.at("ttn1").margin_lo > 0);
    CHECK(reps.at("del1-lo").certified);
    CHECK(reps.at("del1-hi").certified);
}

TEST_CASE("inequality suite on [1,3,...]: del case a_{n+2}=1 bracket") {
    BoundaryContext ctx(one_three());
    auto reps = by_name(inequality_suite(ctx, 3, 20));
    CHECK(reps.at("del2-lo").checked > 0);
    CHECK(reps.at("del2-lo").certified);
    CHECK(reps.at("del2-hi").certified);
    CHECK(reps.at("fund-absent").checked > 0);
    CHECK(reps.at("fund-absent").certified);
}

TEST_CASE("universal bound on golden and [1,3]") {
    for (const Angle& a : {golden(), one_three()}) {
        BoundaryContext ctx(a);
        EnvelopeProfile prof = ctx.build_profile(16);
        InequalityReport rep = universal_bound_check(ctx, prof, 50);
        CAPTURE(a.describe());
        CHECK(rep.certified);
        CHECK(rep.margin_lo > 0);
        CHECK(rep.checked > 50);
    }
}

TEST_CASE("universal bound on the Liouville angle (first feasible range)") {
    Angle lio = liouville_angle({1});
    BoundaryContext ctx(lio);
    EnvelopeProfile prof = ctx.build_profile(3);
    InequalityReport rep = universal_bound_check(ctx, prof, 40);
    CHECK(rep.certified);
    CHECK(rep.margin_lo > 0);
}

TEST_CASE("slope profile: bounded-type band for r >= 1e4") {
    BoundaryContext ctx(golden());
    EnvelopeProfile prof = ctx.build_profile(24);
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(1e4 * std::pow(1e4, i / 60.0));
    auto samples = slope_profile(ctx, prof, grid);
    CHECK(samples.size() > 50);
    for (const auto& s : samples) {
        CAPTURE(s.r);
        CHECK(s.slope.lo_d() > 0.4);
        CHECK(s.slope.hi_d() < 0.6);
    }
}

TEST_CASE("slope samples sit in (0,1) once r clears the head constituents") {
    // at very small r the normalized envelope still exceeds r (e.g. B(2) ~ 2.9
    // for [2,2,...]), so the (0,1) window is tested from r = 100 on
    BoundaryContext ctx(twos());
    EnvelopeProfile prof = ctx.build_profile(14);
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i)
        grid.push_back(100.0 * std::pow(prof.valid_r_max / 100.0, i / 40.0));
    auto samples = slope_profile(ctx, prof, grid);
    CHECK(samples.size() > 30);
    for (const auto& s : samples) {
        CHECK(s.slope.lo_d() > 0.0);
        CHECK(s.slope.hi_d() < 1.0);
    }
}

TEST_CASE("Liouville slope collapses at the z-probes") {
    Angle lio = liouville_angle({1});
    BoundaryContext ctx(lio);
    EnvelopeProfile prof = ctx.build_profile(3);
    auto probes = slope_z_probes(ctx, prof);
    REQUIRE(probes.size() >= 2);
    // decreasing along the probes, and below 0.2 at the deepest feasible one
    for (std::size_t i = 0; i + 1 < probes.size(); ++i)
        CHECK(probes[i].slope.hi_d() > probes[i + 1].slope.lo_d());
    CHECK(probes.back().slope.hi_d() < 0.2);
}

TEST_CASE("bounded_type_band certifies two-sided sqrt comparability") {
    BoundaryContext ctx(twos());
    EnvelopeProfile prof = ctx.build_profile(22);
    REQUIRE(prof.valid_r_max > 1e8);
    BandResult band = bounded_type_band(ctx, prof, 1e2, 1e8);
    CHECK(band.ratio_lo > 0);
    CHECK(band.ratio_hi < 1e9);
    CHECK(band.c_certified >= band.c_empirical);
    CHECK(band.c_certified < 10 * band.c_empirical);
}

TEST_CASE("bounded_type_band refuses growth-rule angles") {
    Angle lio = liouville_angle({1});
    BoundaryContext ctx(lio);
    EnvelopeProfile prof = ctx.build_profile(3);
    CHECK_THROWS_AS(bounded_type_band(ctx, prof, 1e2, 1e6), NotBoundedType);
}

TEST_CASE("Theorem A lower bound on [2,2,...]: B(r) >= c sqrt(r) with positive c") {
    BoundaryContext ctx(twos());
    EnvelopeProfile prof = ctx.build_profile(22);
    BandResult band = bounded_type_band(ctx, prof, 1e2, 1e8);
    CHECK(band.ratio_lo > 0.1);
}
