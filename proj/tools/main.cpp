// margulis: certified computations on the boundary function of the Margulis
// region of an irrational screw translation on H^4.
//
// Subcommands:
//   profile   <angle-spec>            breakpoint profile, envelope CSVs, figure
//   verify    <suite> [angle-spec...] certified verification suites (JSON lines)
//   geometry  <op> ...                displacement / leaf-volume / conjugacy / witness
//
// Exit codes: 0 all certified passes; 1 certified failure; 2 undetermined
// results only; 3 invalid input or configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "emit.hpp"
#include "margulis/asymptotics.hpp"
#include "margulis/classifier.hpp"
#include "margulis/envelope.hpp"
#include "margulis/geometry.hpp"
#include "margulis/oracle.hpp"

using namespace margulis;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertifiedFail = 1;
constexpr int kExitUndetermined = 2;
constexpr int kExitBadInput = 3;

std::vector<unsigned long> parse_uint_list(const std::string& s) {
    std::vector<unsigned long> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (cur.empty()) throw PreconditionViolated("empty entry in quotient list");
            out.push_back(std::stoul(cur));
            cur.clear();
        } else if (c >= '0' && c <= '9') {
            cur += c;
        } else {
            throw PreconditionViolated(std::string("unexpected character '") + c +
                                       "' in quotient list (decimals are rejected by design)");
        }
    }
    if (!cur.empty()) out.push_back(std::stoul(cur));
    return out;
}

Angle parse_angle_spec(const std::string& spec) {
    auto body = [&](const std::string& prefix) {
        std::string rest = spec.substr(prefix.size());
        if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']')
            throw PreconditionViolated("angle spec needs a [...] body: " + spec);
        return rest.substr(1, rest.size() - 2);
    };
    if (spec.rfind("periodic:", 0) == 0) {
        std::string b = body("periodic:");
        auto semi = b.find(';');
        if (semi == std::string::npos) return Angle::periodic({}, parse_uint_list(b));
        return Angle::periodic(parse_uint_list(b.substr(0, semi)),
                               parse_uint_list(b.substr(semi + 1)));
    }
    if (spec.rfind("explicit:", 0) == 0) return Angle::explicit_list(parse_uint_list(body("explicit:")));
    if (spec.rfind("liouville:", 0) == 0) return Angle::liouville(parse_uint_list(body("liouville:")));
    throw PreconditionViolated("unknown angle spec '" + spec +
                               "' (expected periodic:[...], explicit:[...] or liouville:[...])");
}

struct RunConfig {
    double epsilon = 0;  // 0 = the sqrt(3)/(9 pi) default
    long bits_start = 128;
    long bits_cap = 8192;
    std::size_t n_max = 12;
    double r_max = 0;  // 0 = the profile's reach
    std::size_t grid = 200;
    std::string out = ".";
    bool normalize_c = false;

    EpsilonConfig eps() const {
        if (normalize_c) return EpsilonConfig::unit_c();
        if (epsilon > 0) return EpsilonConfig::explicit_value(epsilon);
        return EpsilonConfig::margulis_default();
    }
    PrecisionPolicy policy() const {
        if (bits_cap < bits_start)
            throw PreconditionViolated("bits-cap must be >= bits-start");
        if (bits_start < 16) throw PreconditionViolated("bits-start must be >= 16");
        PrecisionPolicy p;
        p.bits_start = bits_start;
        p.bits_cap = bits_cap;
        return p;
    }
};

// plain key=value lines; command-line flags override file values
void apply_config_file(const std::string& path, const CLI::App& cmd, RunConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw PreconditionViolated("cannot read config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionViolated("config line without '=': " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto flag_unset = [&](const std::string& name) {
        auto* o = cmd.get_option_no_throw("--" + name);
        return o == nullptr || o->count() == 0;
    };
    auto take = [&](const char* key, auto& target) {
        auto it = kv.find(key);
        if (it == kv.end() || !flag_unset(key)) return;
        std::istringstream is(it->second);
        is >> target;
        if (is.fail()) throw PreconditionViolated(std::string("bad config value for ") + key);
    };
    take("epsilon", cfg.epsilon);
    take("bits-start", cfg.bits_start);
    take("bits-cap", cfg.bits_cap);
    take("n-max", cfg.n_max);
    take("r-max", cfg.r_max);
    take("grid", cfg.grid);
    if (kv.count("out") && flag_unset("out")) cfg.out = kv["out"];
    if (kv.count("normalize-c") && flag_unset("normalize-c"))
        cfg.normalize_c = (kv["normalize-c"] == "1" || kv["normalize-c"] == "true");
}

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--epsilon", cfg.epsilon, "Margulis parameter (default sqrt(3)/(9 pi))");
    cmd->add_option("--bits-start", cfg.bits_start, "starting working precision");
    cmd->add_option("--bits-cap", cfg.bits_cap, "precision escalation cap");
    cmd->add_option("--n-max", cfg.n_max, "deepest convergent index");
    cmd->add_option("--r-max", cfg.r_max, "radial range cap");
    cmd->add_option("--grid", cfg.grid, "number of grid points");
    cmd->add_option("--out", cfg.out, "output directory or file");
    cmd->add_flag("--normalize-c", cfg.normalize_c, "normalize so c(eps) = 1 (figures)");
    cmd->add_option("--config", config_path, "key=value configuration file");
}

std::string presence_str(Presence p) {
    switch (p) {
        case Presence::Present: return "present";
        case Presence::Absent: return "absent";
        default: return "undetermined";
    }
}

// ---------------------------------------------------------------- profile --

int cmd_profile(const std::string& spec, const RunConfig& cfg) {
    Angle a = parse_angle_spec(spec);
    BoundaryContext ctx(a, cfg.eps(), cfg.policy());
    EnvelopeProfile prof = ctx.build_profile(cfg.n_max);

    std::filesystem::create_directories(cfg.out);

    emit::Csv pcsv({"n", "q_n", "presence", "x_lo", "x_hi", "y_lo", "y_hi"});
    for (const auto& e : prof.entries) {
        std::vector<std::string> row{std::to_string(e.n), e.q.get_str(),
                                     presence_str(e.presence), "", "", "", ""};
        if (e.presence == Presence::Present) {
            row[3] = emit::fmt_ival_lo(e.x);
            row[4] = emit::fmt_ival_hi(e.x);
            if (e.complete) {
                row[5] = emit::fmt_ival_lo(e.y);
                row[6] = emit::fmt_ival_hi(e.y);
            }
        }
        pcsv.row(row);
    }
    pcsv.write(cfg.out + "/profile.csv");

    double r_hi = prof.valid_r_max;
    if (cfg.r_max > 0) r_hi = std::min(r_hi, cfg.r_max);
    double r_lo = std::max(1e-3, r_hi * 1e-8);
    emit::Csv ecsv({"r", "B_lo", "B_hi", "argmin_q"});
    std::vector<double> grid{0.0};
    for (std::size_t i = 0; i + 1 < cfg.grid; ++i)
        grid.push_back(r_lo * std::pow(r_hi / r_lo, double(i) / double(cfg.grid - 2)));
    for (double r : grid) {
        BoundaryValue v = ctx.eval(prof, r);
        char rbuf[32];
        std::snprintf(rbuf, sizeof rbuf, "%.12g", r);
        ecsv.row({rbuf, emit::fmt_ival_lo(v.value), emit::fmt_ival_hi(v.value),
                  v.argmin_q.get_str()});
    }
    ecsv.write(cfg.out + "/envelope.csv");

    // two-panel figure: constituents + envelope on top, slope below
    emit::FigureData fig;
    fig.title = spec + "  (boundary function and constituents)";
    for (const auto* e : prof.present_entries()) {
        if (e->n == 0 && ctx.angle().quotient(1) == 1) continue;  // duplicate of q_1
        emit::FigureData::Curve c;
        c.label = "q_" + std::to_string(e->n);
        double lo = std::max(r_lo, e->complete ? e->x.lo_d() / 4 : r_lo);
        double hi = e->complete ? std::min(r_hi, e->y.hi_d() * 4) : r_hi;
        if (!(lo < hi)) continue;
        for (int i = 0; i <= 64; ++i) {
            double r = lo * std::pow(hi / lo, i / 64.0);
            Ival u = ctx.u_of_index(e->n, Ival::from_double(r, 96), 96);
            c.pts.push_back({r, u.mid_d()});
        }
        fig.envelope_curves.push_back(std::move(c));
    }
    emit::FigureData::Curve env;
    env.label = "B";
    env.emphasized = true;
    for (double r : grid)
        if (r > 0) env.pts.push_back({r, ctx.eval(prof, r).value.mid_d()});
    fig.envelope_curves.push_back(std::move(env));
    std::vector<double> sgrid;
    for (double r : grid)
        if (r > 1.5) sgrid.push_back(r);
    for (const auto& s : slope_profile(ctx, prof, sgrid))
        fig.slope.push_back({std::log10(s.r), s.slope.mid_d()});
    std::ofstream svg(cfg.out + "/figure.svg", std::ios::binary);
    svg << emit::render_figure(fig);

    if (prof.undetermined_at) {
        std::cerr << "profile: presence undetermined at n = " << *prof.undetermined_at << "\n";
        return kExitUndetermined;
    }
    return kExitOk;
}

// ----------------------------------------------------------------- verify --

std::vector<std::string> standard_suite() {
    // named bounded-type angles, two seeded pseudo-random bounded-type
    // truncations, and the Liouville growth angle
    std::vector<std::string> specs{"periodic:[1]",     "periodic:[2]",     "periodic:[3]",
                                   "periodic:[1,3]",   "periodic:[1,2]",   "periodic:[2,1,1]",
                                   "periodic:[1,1,2]", "periodic:[4]"};
    std::mt19937_64 rng(20240915);
    for (int k = 0; k < 2; ++k) {
        std::uniform_int_distribution<unsigned long> U(1, 4);
        std::string s = "explicit:[";
        for (int i = 0; i < 60; ++i) s += (i ? "," : "") + std::to_string(U(rng));
        s += "]";
        specs.push_back(s);
    }
    specs.push_back("liouville:[1]");
    return specs;
}

struct VerifyOutcome {
    bool certified_fail = false;
    bool undetermined = false;
    void merge(const InequalityReport& r) {
        if (!r.failed.empty()) certified_fail = true;
        if (!r.undecided.empty()) undetermined = true;
    }
    int exit_code() const {
        if (certified_fail) return kExitCertifiedFail;
        if (undetermined) return kExitUndetermined;
        return kExitOk;
    }
};

json report_json(const std::string& angle, const InequalityReport& r) {
    return json{{"angle", angle},
                {"name", r.name},
                {"checked", r.checked},
                {"margin_lo", r.margin_lo},
                {"certified", r.certified},
                {"failed", r.failed},
                {"undecided", r.undecided}};
}

int cmd_verify(const std::string& suite, std::vector<std::string> specs, const RunConfig& cfg) {
    if (specs.empty()) specs = standard_suite();
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (cfg.out != "." && cfg.out != "-") {
        file.open(cfg.out, std::ios::binary);
        if (!file) throw PreconditionViolated("cannot write report " + cfg.out);
        out = &file;
    }
    VerifyOutcome outcome;

    auto emit_row = [&](const json& j) { *out << j.dump() << "\n"; };

    for (const std::string& spec : specs) {
        Angle a = parse_angle_spec(spec);
        BoundaryContext ctx(a, cfg.eps(), cfg.policy());
        std::size_t n_deep = a.max_norm_index();
        std::size_t n_max = std::min(cfg.n_max, n_deep == Angle::unbounded ? cfg.n_max : n_deep);

        if (suite == "lemmas" || suite == "fund") {
            std::size_t lo = 1;
            auto reps = inequality_suite(ctx, lo, n_max);
            for (const auto& r : reps) {
                if (suite == "fund" && r.name.rfind("fund", 0) != 0) continue;
                outcome.merge(r);
                emit_row(report_json(spec, r));
            }
        } else if (suite == "universal-bound") {
            std::size_t depth = std::max<std::size_t>(n_max, 16);
            if (n_deep != Angle::unbounded) depth = std::min(depth, n_deep - 1);
            EnvelopeProfile prof = ctx.build_profile(depth);
            InequalityReport r = universal_bound_check(ctx, prof, cfg.grid);
            outcome.merge(r);
            emit_row(report_json(spec, r));
        } else if (suite == "appendix-table") {
            if (a.is_growth_rule()) continue;  // no a_{n+1} = 1 cells in reach
            for (std::size_t n = 5; n + 2 <= n_max; ++n) {
                if (!a.quotient_known(n + 2) || a.quotient(n + 1) != 1) continue;
                TableCell cell = table_decide(a, n);
                Presence p = ctx.is_present(n);
                json j{{"angle", spec}, {"n", n}};
                j["table"] = cell == TableCell::Present   ? "present"
                             : cell == TableCell::Absent  ? "absent"
                                                          : "white";
                j["envelope"] = presence_str(p);
                bool ok = true;
                if (cell != TableCell::WhiteCell && p != Presence::Undetermined)
                    ok = (cell == TableCell::Present) == (p == Presence::Present);
                // cc1: presence iff ratio < X(mu)
                Order o = cc1_compare(ctx, n);
                if (o != Order::Overlap && p != Presence::Undetermined)
                    ok = ok && ((o == Order::Less) == (p == Presence::Present));
                // cc3 sandwich via the context brackets
                AppendixContext ac = appendix_context(ctx, n);
                j["cc3"] = ac.sandwich_checked;
                ok = ok && ac.sandwich_checked;
                j["agree"] = ok;
                if (!ok) outcome.certified_fail = true;
                if (p == Presence::Undetermined) outcome.undetermined = true;
                emit_row(j);
            }
        } else if (suite == "oracle-equivalence") {
            if (a.is_growth_rule()) continue;  // the dense scan needs q_8 in reach
            EnvelopeProfile prof = ctx.build_profile(8);
            Oracle oracle(a);
            double y8 = prof.valid_r_max;
            std::vector<double> grid{0.0};
            for (std::size_t i = 0; i + 1 < cfg.grid; ++i)
                grid.push_back(y8 * 1e-6 * std::pow(1e6, double(i) / double(cfg.grid - 2)));
            std::size_t mismatches = 0, argmin_mism = 0;
            for (double r : grid) {
                BoundaryValue v = ctx.eval(prof, r);
                auto m = oracle.min_u(Ival::from_double(r, 128), cfg.eps());
                if (!v.value.overlaps(m.value)) ++mismatches;
                if (m.argmin_certified && !v.at_breakpoint && v.argmin_q != m.argmin)
                    ++argmin_mism;
            }
            json j{{"angle", spec},
                   {"name", "oracle-equivalence"},
                   {"points", grid.size()},
                   {"value_mismatches", mismatches},
                   {"argmin_mismatches", argmin_mism}};
            if (mismatches || argmin_mism) outcome.certified_fail = true;
            emit_row(j);
        } else if (suite == "strike-hunt") {
            double narrowest = 1e300;
            std::size_t undet = 0;
            for (std::size_t n = 1; n + 2 <= n_max; ++n) {
                for (std::size_t k = (n >= 2 ? n - 2 : 0); k < n; ++k) {
                    for (std::size_t m = n + 1; m <= std::min(n + 2, n_max); ++m) {
                        if (!a.quotient_known(m + 1)) continue;
                        TripleClass tc = ctx.classify_triple(k, n, m);
                        if (tc.is_undetermined()) {
                            ++undet;
                            narrowest = std::min(narrowest, tc.undetermined_width);
                        }
                    }
                }
            }
            json j{{"angle", spec}, {"name", "strike-hunt"}, {"undetermined", undet}};
            if (undet) {
                j["narrowest_width"] = narrowest;
                outcome.undetermined = true;
            }
            emit_row(j);
        } else {
            throw PreconditionViolated("unknown suite '" + suite + "'");
        }
    }
    return outcome.exit_code();
}

// --------------------------------------------------------------- geometry --

Point4 parse_point(const std::string& s) {
    std::istringstream is(s);
    double r, th, z, t;
    char c1, c2, c3;
    if (!(is >> r >> c1 >> th >> c2 >> z >> c3 >> t) || c1 != ',' || c2 != ',' || c3 != ',')
        throw PreconditionViolated("point must be r,theta,z,t");
    return Point4::at(r, th, z, t, 192);
}

int cmd_geo_leaf_volume(const std::string& spec, double t, const RunConfig& cfg) {
    Angle a = parse_angle_spec(spec);
    BoundaryContext ctx(a, cfg.eps(), cfg.policy());
    EnvelopeProfile prof = ctx.build_profile(cfg.n_max);
    LeafVolume lv = leaf_volume(ctx, prof, Ival::from_double(t, 192));
    emit::Csv csv({"t", "r_lo", "r_hi", "vol_lo", "vol_hi", "core_lo", "core_hi"});
    char tb[32];
    std::snprintf(tb, sizeof tb, "%.12g", t);
    csv.row({tb, emit::fmt_ival_lo(lv.radius), emit::fmt_ival_hi(lv.radius),
             emit::fmt_ival_lo(lv.volume), emit::fmt_ival_hi(lv.volume),
             emit::fmt_ival_lo(lv.core_length), emit::fmt_ival_hi(lv.core_length)});
    std::cout << csv.str();
    return kExitOk;
}

int cmd_geo_displacement(const std::string& spec, long j, const std::string& point,
                         const RunConfig& cfg) {
    Angle a = parse_angle_spec(spec);
    BoundaryContext ctx(a, cfg.eps(), cfg.policy());
    Point4 x = parse_point(point);
    Displacement d = displacement(ctx, j, x);
    emit::Csv csv({"j", "rho_lo", "rho_hi", "in_region"});
    csv.row({std::to_string(j), emit::fmt_ival_lo(d.rho), emit::fmt_ival_hi(d.rho),
             d.in_region == RegionSide::Inside    ? "inside"
             : d.in_region == RegionSide::Outside ? "outside"
                                                  : "undetermined"});
    std::cout << csv.str();
    return d.in_region == RegionSide::Undetermined ? kExitUndetermined : kExitOk;
}

int cmd_geo_conjugacy(const std::string& spec_a, const std::string& spec_b,
                      const std::string& point, const RunConfig& cfg) {
    Angle a = parse_angle_spec(spec_a);
    Angle b = parse_angle_spec(spec_b);
    BoundaryContext ca(a, cfg.eps(), cfg.policy()), cb(b, cfg.eps(), cfg.policy());
    EnvelopeProfile pa = ca.build_profile(cfg.n_max), pb = cb.build_profile(cfg.n_max);
    Point4 img = conjugacy_phi(ca, pa, cb, pb, parse_point(point));
    emit::Csv csv({"r_lo", "r_hi", "theta_lo", "theta_hi", "z_lo", "z_hi", "t_lo", "t_hi"});
    csv.row({emit::fmt_ival_lo(img.r), emit::fmt_ival_hi(img.r), emit::fmt_ival_lo(img.theta),
             emit::fmt_ival_hi(img.theta), emit::fmt_ival_lo(img.z), emit::fmt_ival_hi(img.z),
             emit::fmt_ival_lo(img.t), emit::fmt_ival_hi(img.t)});
    std::cout << csv.str();
    return kExitOk;
}

int cmd_geo_witness(const std::string& spec_a, const std::string& spec_b, std::size_t count,
                    unsigned long cap, const RunConfig& cfg) {
    Angle a = parse_angle_spec(spec_a);
    Angle b = parse_angle_spec(spec_b);
    WitnessSequence w = rigidity_witness(a, b, count, cap, cfg.policy());
    emit::Csv csv({"n_i", "norm_alpha_lo", "norm_alpha_hi", "norm_beta_lo", "norm_beta_hi"});
    for (const auto& p : w.pairs)
        csv.row({p.n.get_str(), emit::fmt_ival_lo(p.norm_alpha), emit::fmt_ival_hi(p.norm_alpha),
                 emit::fmt_ival_lo(p.norm_beta), emit::fmt_ival_hi(p.norm_beta)});
    std::cout << csv.str();
    std::cerr << "floor ||n beta|| >= " << w.floor_beta.lo_str(8) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified Margulis-region boundary computations"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    std::string spec, spec_b, suite, point;
    std::vector<std::string> spec_list;
    double t_value = 0;
    long j_value = 1;
    std::size_t count = 10;
    unsigned long cap = 1000000;

    CLI::App* profile = app.add_subcommand("profile", "breakpoint profile, envelope, figure");
    profile->add_option("spec", spec, "angle spec")->required();
    add_common(profile, cfg, config_path);

    CLI::App* verify = app.add_subcommand("verify", "certified verification suites");
    verify->add_option("suite", suite,
                       "lemmas|fund|universal-bound|appendix-table|oracle-equivalence|strike-hunt")
        ->required();
    verify->add_option("specs", spec_list, "angle specs (default: the standard suite)");
    add_common(verify, cfg, config_path);

    CLI::App* geo = app.add_subcommand("geometry", "H^4 operations");
    CLI::App* leaf = geo->add_subcommand("leaf-volume", "volume of the leaf L_t");
    leaf->add_option("spec", spec)->required();
    leaf->add_option("--t", t_value, "leaf height")->required();
    add_common(leaf, cfg, config_path);
    CLI::App* disp = geo->add_subcommand("displacement", "rho(g^j x, x) and membership");
    disp->add_option("spec", spec)->required();
    disp->add_option("--j", j_value)->required();
    disp->add_option("--point", point, "r,theta,z,t")->required();
    add_common(disp, cfg, config_path);
    CLI::App* conj = geo->add_subcommand("conjugacy", "model conjugacy phi");
    conj->add_option("spec_a", spec)->required();
    conj->add_option("spec_b", spec_b)->required();
    conj->add_option("--point", point, "r,theta,z,t")->required();
    add_common(conj, cfg, config_path);
    CLI::App* wit = geo->add_subcommand("witness", "rigidity witness sequence");
    wit->add_option("spec_a", spec)->required();
    wit->add_option("spec_b", spec_b)->required();
    wit->add_option("--count", count);
    wit->add_option("--cap", cap);
    add_common(wit, cfg, config_path);

    CLI11_PARSE(app, argc, argv);

    try {
        const CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) {
            const CLI::App* leafcmd = active;
            if (!active->get_subcommands().empty()) leafcmd = active->get_subcommands().front();
            apply_config_file(config_path, *leafcmd, cfg);
        }
        if (profile->parsed()) return cmd_profile(spec, cfg);
        if (verify->parsed()) return cmd_verify(suite, spec_list, cfg);
        if (geo->parsed()) {
            if (leaf->parsed()) return cmd_geo_leaf_volume(spec, t_value, cfg);
            if (disp->parsed()) return cmd_geo_displacement(spec, j_value, point, cfg);
            if (conj->parsed()) return cmd_geo_conjugacy(spec, spec_b, point, cfg);
            if (wit->parsed()) return cmd_geo_witness(spec, spec_b, count, cap, cfg);
            std::cerr << "geometry: missing subcommand\n";
            return kExitBadInput;
        }
        return kExitBadInput;
    } catch (const PrecisionExceeded& e) {
        std::cerr << "undetermined: " << e.what() << "\n";
        return kExitUndetermined;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}
