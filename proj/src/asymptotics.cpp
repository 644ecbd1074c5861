#include "margulis/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace margulis {

namespace {

enum class CheckState { Pass, Fail, Undetermined };

// escalates until the margin's sign separates from 0
std::pair<double, CheckState> certify_positive(const NormEngine& ne,
                                               const std::function<Ival(mpfr_prec_t)>& f) {
    double last = 0;
    for (mpfr_prec_t bits : ne.ladder()) {
        Ival m = f(bits);
        last = m.lo_d();
        if (m.is_positive()) return {m.lo_d(), CheckState::Pass};
        if (m.is_negative()) return {m.lo_d(), CheckState::Fail};
    }
    return {last, CheckState::Undetermined};
}

struct RowAccum {
    InequalityReport rep;
    explicit RowAccum(std::string name, std::size_t n_lo, std::size_t n_hi) {
        rep.name = std::move(name);
        rep.n_lo = n_lo;
        rep.n_hi = n_hi;
        rep.margin_lo = std::numeric_limits<double>::infinity();
    }
    void add(std::size_t n, std::pair<double, CheckState> r) {
        ++rep.checked;
        if (r.first < rep.margin_lo) {
            rep.margin_lo = r.first;
            rep.worst_n = n;
        }
        if (r.second == CheckState::Fail) {
            rep.failed.push_back(n);
            rep.certified = false;
        } else if (r.second == CheckState::Undetermined) {
            rep.undecided.push_back(n);
            rep.certified = false;
        }
    }
    InequalityReport take() {
        if (rep.checked == 0) rep.margin_lo = 0;
        return std::move(rep);
    }
};

Ival sqrt3(mpfr_prec_t b) { return Ival::sqrt_int(3, b); }
Ival sqrt2(mpfr_prec_t b) { return Ival::sqrt_int(2, b); }

}  // namespace

std::vector<InequalityReport> inequality_suite(const BoundaryContext& ctx, std::size_t n_min,
                                               std::size_t n_max) {
    const Angle& a = ctx.angle();
    const NormEngine& ne = ctx.norms();
    if (n_min < 1) n_min = 1;

    // quotients must be exactly known through a_{n+3} for the widest checks
    auto reach = [&](std::size_t, std::size_t need_to) { return a.quotient_known(need_to); };

    EnvelopeProfile prof;
    bool have_prof = true;
    try {
        prof = ctx.build_profile(n_max, /*verify_se_window=*/false);
    } catch (const Error&) {
        have_prof = false;
    }

    RowAccum qnp2("qnp2", n_min, n_max), qnp3("qnp3", n_min, n_max);
    RowAccum do_weak("do", n_min, n_max), do_strong("do-strong", n_min, n_max);
    RowAccum tn1_lo("tn1-lo", n_min, n_max), tn1_hi("tn1-hi", n_min, n_max);
    RowAccum del1_lo("del1-lo", n_min, n_max), del1_hi("del1-hi", n_min, n_max);
    RowAccum del2_lo("del2-lo", std::max<std::size_t>(n_min, 3), n_max),
        del2_hi("del2-hi", std::max<std::size_t>(n_min, 3), n_max);
    RowAccum ttn1("ttn1", n_min, n_max), ttn2("ttn2", n_min, n_max),
        ttn3("ttn3", std::max<std::size_t>(n_min, 3), n_max),
        ttn4("ttn4", std::max<std::size_t>(n_min, 3), n_max);
    RowAccum fund_abs("fund-absent", n_min, n_max);
    RowAccum fund2("fund2", std::max<std::size_t>(n_min, 5), n_max),
        fund3("fund3", std::max<std::size_t>(n_min, 4), n_max),
        fund4("fund4", std::max<std::size_t>(n_min, 5), n_max);
    RowAccum fund_x("fund-x", std::max<std::size_t>(n_min, 6), n_max),
        fund_y("fund-y", std::max<std::size_t>(n_min, 5), n_max);

    for (std::size_t n = n_min; n <= n_max; ++n) {
        if (!reach(n, n + 2)) break;

        // Lemma qnp(ii): 1/(2 q_{n+1}) < beta_n < 1/q_{n+1}
        {
            mpz_class q1 = a.convergent(n + 1).q;
            qnp2.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                         Ival beta = ne.beta(n, b);
                         Ival m1 = beta.mul_int(2 * q1) - Ival(1, b);
                         Ival m2 = Ival(1, b) - beta.mul_int(q1);
                         return Ival::min(m1, m2);
                     }));
        }
        // Lemma qnp(iii) as interval containment of 0, scaled by beta_n
        {
            qnp3.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                         Ival d = ne.beta(n, b) - ne.beta(n + 1, b).mul_int(a.quotient(n + 2)) -
                                  ne.beta(n + 2, b);
                         Ival scale = ne.beta(n, b);
                         // 0 interior to d <=> min(hi, -lo) > 0
                         Ival hi_part = Ival::from_double(d.hi_d(), b);
                         Ival lo_part = Ival::from_double(-d.lo_d(), b);
                         return Ival::min(hi_part, lo_part) / scale;
                     }));
        }
        // Lemma do: delta_n > 2 delta_{n+2}; strong form when a_{n+2} >= 2
        do_weak.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                        return Ival(1, b) - ctx.delta(n + 2, b).mul_int(2) / ctx.delta(n, b);
                    }));
        if (a.quotient(n + 2) >= 2) {
            do_strong.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                              return Ival(1, b) - ctx.delta(n + 1, b).mul_int(2) / ctx.delta(n, b);
                          }));
        }

        // Lemma tn1: sqrt3/(4 pi) <= r_{n,n+2}/(q_{n+1} q_{n+2}) <= 1/sqrt2
        {
            mpz_class qq = a.convergent(n + 1).q * a.convergent(n + 2).q;
            auto rho = [&](mpfr_prec_t b) {
                return (ctx.crossing_r2(n, n + 2, b) / Ival::exact_int(qq * qq, b)).sqrt_clamped();
            };
            tn1_lo.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                           return rho(b) - sqrt3(b) / Ival::pi(b).mul_int(4);
                       }));
            tn1_hi.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                           return sqrt2(b).recip() - rho(b);
                       }));
        }

        // Lemma del
        if (a.quotient(n + 2) >= 2) {
            mpz_class q1 = a.convergent(n + 1).q;
            auto v = [&](mpfr_prec_t b) {
                return ctx.delta_diff(n, n + 1, b).mul_int(q1 * q1);
            };
            del1_lo.add(n, certify_positive(ne, [&](mpfr_prec_t b) { return v(b) - Ival(2, b); }));
            del1_hi.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                            return Ival::pi(b).sqr().mul_int(4) - v(b);
                        }));
        } else if (n >= 3 && reach(n, n + 3)) {
            mpz_class qq = a.convergent(n + 1).q * a.convergent(n + 3).q;
            auto v = [&](mpfr_prec_t b) { return ctx.delta_diff(n, n + 1, b).mul_int(qq); };
            del2_lo.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                            return v(b) - Ival::pi(b).mul_int(2);
                        }));
            del2_hi.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                            return Ival::pi(b).sqr().mul_int(8) - v(b);
                        }));
        }

        // Lemma ttn: four cases for r_{n,n+1}
        {
            bool a2ge2 = a.quotient(n + 2) >= 2;
            bool a1ge2 = a.quotient(n + 1) >= 2;
            mpz_class q1 = a.convergent(n + 1).q;
            if (a2ge2 && a1ge2) {
                auto rho = [&](mpfr_prec_t b) {
                    return (ctx.crossing_r2(n, n + 1, b) / Ival::exact_int(q1 * q1 * q1 * q1, b))
                        .sqrt_clamped();
                };
                ttn1.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                             Ival r = rho(b);
                             return Ival::min(r - sqrt3(b) / Ival::pi(b).mul_int(4),
                                              sqrt2(b).recip() - r);
                         }));
            } else if (a2ge2 && !a1ge2) {
                mpz_class scale = q1 * q1 * q1 * a.convergent(n - 1).q;  // q_{n+1}^3 q_{n-1}
                auto rho = [&](mpfr_prec_t b) {
                    return (ctx.crossing_r2(n, n + 1, b) / Ival::exact_int(scale, b)).sqrt_clamped();
                };
                ttn2.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                             Ival r = rho(b);
                             return Ival::min(r - Ival::pi(b).mul_int(2).recip(), Ival(1, b) - r);
                         }));
            } else if (!a2ge2 && a1ge2 && n >= 3 && reach(n, n + 3)) {
                mpz_class scale = q1 * q1 * q1 * a.convergent(n + 3).q;  // q_{n+1}^3 q_{n+3}
                auto rho = [&](mpfr_prec_t b) {
                    return (ctx.crossing_r2(n, n + 1, b) / Ival::exact_int(scale, b)).sqrt_clamped();
                };
                ttn3.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                             Ival r = rho(b);
                             Ival lo_c = sqrt3(b) / (Ival::sqrt_int(32, b) * Ival::pi(b));
                             Ival hi_c = (Ival::pi(b).mul_int(2)).sqrt().recip();
                             return Ival::min(r - lo_c, hi_c - r);
                         }));
            } else if (!a2ge2 && !a1ge2 && n >= 3 && reach(n, n + 3)) {
                mpz_class scale = q1 * q1 * a.convergent(n - 1).q * a.convergent(n + 3).q;
                auto rho = [&](mpfr_prec_t b) {
                    return (ctx.crossing_r2(n, n + 1, b) / Ival::exact_int(scale, b)).sqrt_clamped();
                };
                ttn4.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                             Ival r = rho(b);
                             Ival lo_c = (Ival::sqrt_int(8, b) * Ival::pi(b)).recip();
                             Ival hi_c = Ival::pi(b).sqrt().recip();
                             return Ival::min(r - lo_c, hi_c - r);
                         }));
            }
        }

        // Thm fund ratio rows (presence-conditioned)
        {
            Presence p1 = ctx.is_present(n + 1);
            mpz_class q1 = a.convergent(n + 1).q;
            mpz_class q1_4 = q1 * q1 * q1 * q1;
            if (p1 == Presence::Absent) {
                auto rho = [&](mpfr_prec_t b) {
                    return (ctx.crossing_r2(n, n + 2, b) / Ival::exact_int(q1_4, b)).sqrt_clamped();
                };
                fund_abs.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                                 Ival r = rho(b);
                                 return Ival::min(r - sqrt3(b) / Ival::pi(b).mul_int(4),
                                                  sqrt2(b) - r);
                             }));
            } else if (p1 == Presence::Present) {
                bool a2ge2 = a.quotient(n + 2) >= 2;
                bool a1ge2 = a.quotient(n + 1) >= 2;
                auto rho = [&](mpfr_prec_t b) {
                    return (ctx.crossing_r2(n, n + 1, b) / Ival::exact_int(q1_4, b)).sqrt_clamped();
                };
                if (a2ge2 && !a1ge2 && n >= 5) {
                    fund2.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                                  Ival r = rho(b);
                                  Ival lo_c = (Ival::sqrt_int(24, b) * Ival::pi(b)).recip();
                                  return Ival::min(r - lo_c, sqrt2(b).recip() - r);
                              }));
                } else if (!a2ge2 && a1ge2 && n >= 4) {
                    fund3.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                                  Ival r = rho(b);
                                  Ival hi_c = sqrt3(b) / Ival::pi(b).sqrt();
                                  return Ival::min(r - sqrt3(b) / Ival::pi(b).mul_int(4), hi_c - r);
                              }));
                } else if (!a2ge2 && !a1ge2 && n >= 5) {
                    fund4.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                                  Ival r = rho(b);
                                  Ival lo_c = sqrt3(b) / Ival::pi(b).mul_int(24);
                                  return Ival::min(r - lo_c, sqrt2(b) - r);
                              }));
                }
            }
        }

        // Thm fund endpoints from the profile: x/q_n^2 and y/q_{n+1}^2
        if (have_prof && n <= n_max) {
            const ProfileEntry* e = prof.entry_for(n);
            if (e && e->presence == Presence::Present && e->complete) {
                mpz_class qn = a.convergent(n).q;
                mpz_class qn1 = a.convergent(n + 1).q;
                if (n >= 6) {
                    fund_x.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                                   Ival r = e->x.round_to(b) / Ival::exact_int(qn * qn, b);
                                   Ival lo_c = sqrt3(b) / Ival::pi(b).mul_int(24);
                                   return Ival::min(r - lo_c, sqrt2(b) - r);
                               }));
                }
                if (n >= 5) {
                    fund_y.add(n, certify_positive(ne, [&](mpfr_prec_t b) {
                                   Ival r = e->y.round_to(b) / Ival::exact_int(qn1 * qn1, b);
                                   Ival lo_c = sqrt3(b) / Ival::pi(b).mul_int(24);
                                   return Ival::min(r - lo_c, sqrt2(b) - r);
                               }));
                }
            }
        }
    }

    std::vector<InequalityReport> out;
    out.push_back(qnp2.take());
    out.push_back(qnp3.take());
    out.push_back(do_weak.take());
    out.push_back(do_strong.take());
    out.push_back(tn1_lo.take());
    out.push_back(tn1_hi.take());
    out.push_back(del1_lo.take());
    out.push_back(del1_hi.take());
    out.push_back(del2_lo.take());
    out.push_back(del2_hi.take());
    out.push_back(ttn1.take());
    out.push_back(ttn2.take());
    out.push_back(ttn3.take());
    out.push_back(ttn4.take());
    out.push_back(fund_abs.take());
    out.push_back(fund2.take());
    out.push_back(fund3.take());
    out.push_back(fund4.take());
    out.push_back(fund_x.take());
    out.push_back(fund_y.take());
    return out;
}

InequalityReport universal_bound_check(const BoundaryContext& ctx, const EnvelopeProfile& prof,
                                       std::size_t r_count) {
    const NormEngine& ne = ctx.norms();
    RowAccum row("universal-bound", 0, 0);

    double r_lo;
    if (ctx.angle().quotient_known(7)) {
        mpz_class q7 = ctx.angle().convergent(7).q;
        r_lo = std::sqrt(2.0) * mpz_get_d(mpz_class(q7 * q7).get_mpz_t());
    } else {
        // stream too short for q_7: start at the first certified breakpoint
        r_lo = 1.0;
        for (const auto* e : prof.present_entries())
            if (e->complete && e->n >= 1) {
                r_lo = std::max(1.0, e->y.hi_d());
                break;
            }
    }
    double r_hi = prof.valid_r_max;
    if (!(r_lo < r_hi))
        throw OutOfRange("universal_bound_check: profile does not reach sqrt(2) q_7^2");

    auto check_at = [&](double rpt, std::size_t label) {
        row.add(label, certify_positive(ne, [&](mpfr_prec_t b) {
                    Ival r = Ival::from_double(rpt, b);
                    Ival bound = r.sqrt().mul_int(1000);
                    Ival v = ctx.eval(prof, r).value;
                    return (bound - v) / bound;
                }));
    };

    std::size_t label = 0;
    for (const auto* e : prof.present_entries()) {
        if (!e->complete) continue;
        double x = e->x.hi_d(), y = e->y.lo_d();
        if (y >= r_lo && y <= r_hi) check_at(y, label);
        if (x >= r_lo && x <= r_hi) check_at(x, label);
        ++label;
    }
    for (std::size_t i = 0; i < r_count; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(r_count - 1);
        double rpt = r_lo * std::pow(r_hi / r_lo, f);
        check_at(rpt, 1000 + i);
    }
    return row.take();
}

std::vector<SlopeSample> slope_profile(const BoundaryContext& ctx, const EnvelopeProfile& prof,
                                       const std::vector<double>& r_grid) {
    std::vector<SlopeSample> out;
    for (double r : r_grid) {
        if (!(r > 1) || r > prof.valid_r_max) continue;
        BoundaryValue v = ctx.eval(prof, r);
        mpfr_prec_t b = v.value.prec();
        Ival norm_v = v.value / ctx.eps().c(b);
        SlopeSample s;
        s.r = r;
        s.slope = norm_v.log() / Ival::from_double(r, b).log();
        s.constituent_n = v.argmin_n;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<SlopeSample> slope_z_probes(const BoundaryContext& ctx, const EnvelopeProfile& prof) {
    std::vector<SlopeSample> out;
    for (const auto* e : prof.present_entries()) {
        if (!e->complete || e->n == 0) continue;
        double x = e->x.mid_d(), y = e->y.mid_d();
        if (!(x > 0)) continue;
        double z = std::sqrt(x) * std::sqrt(y);
        if (!(z > 1) || z > prof.valid_r_max) continue;
        BoundaryValue v = ctx.eval(prof, z);
        mpfr_prec_t b = v.value.prec();
        SlopeSample s;
        s.r = z;
        s.slope = (v.value / ctx.eps().c(b)).log() / Ival::from_double(z, b).log();
        s.constituent_n = e->n;
        out.push_back(std::move(s));
    }
    return out;
}

BandResult bounded_type_band(const BoundaryContext& ctx, const EnvelopeProfile& prof, double r_lo,
                             double r_hi, int pts_per_decade) {
    if (!ctx.angle().certified_bounded_type() && ctx.angle().is_growth_rule())
        throw NotBoundedType("bounded_type_band: angle not of certified bounded type");
    if (!(r_lo > 0 && r_hi > r_lo)) throw PreconditionViolated("bounded_type_band: bad range");
    if (r_hi > prof.valid_r_max) throw OutOfRange("bounded_type_band: range beyond profile");

    int total = std::max(2, static_cast<int>(std::log10(r_hi / r_lo) * pts_per_decade) + 1);
    std::vector<double> grid(total + 1);
    for (int i = 0; i <= total; ++i)
        grid[i] = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / total);

    BandResult out;
    out.ratio_lo = std::numeric_limits<double>::infinity();
    out.ratio_hi = 0;
    out.c_empirical = 0;
    std::vector<Ival> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = ctx.eval(prof, grid[i]).value;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        // B increasing: on [r_i, r_{i+1}], B(r)/sqrt r in
        // [B(r_i).lo/sqrt(r_{i+1}), B(r_{i+1}).hi/sqrt(r_i)]
        double lo = vals[i].lo_d() / std::sqrt(grid[i + 1]);
        double hi = vals[i + 1].hi_d() / std::sqrt(grid[i]);
        out.ratio_lo = std::min(out.ratio_lo, lo);
        out.ratio_hi = std::max(out.ratio_hi, hi);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double mid = vals[i].mid_d() / std::sqrt(grid[i]);
        out.c_empirical = std::max({out.c_empirical, mid, 1.0 / mid});
    }
    out.c_certified = std::max(out.ratio_hi, 1.0 / out.ratio_lo);
    return out;
}

}  // namespace margulis
