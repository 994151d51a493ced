// Command-line front end: exact counts, theorem thresholds, Monte Carlo
// estimation and scans, certification, and brute-force oracle runs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "fgt/fgt.hpp"

namespace {

using namespace fgt;

int default_workers() {
    if (const char* env = std::getenv("FGT_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

BigInt parse_digits(const std::string& s) {
    BigInt v = 0;
    bool any = false;
    for (char c : s) {
        if (c < '0' || c > '9') throw InvalidParams("bad number '" + s + "'");
        v = v * 10 + (c - '0');
        any = true;
    }
    if (!any) throw InvalidParams("bad number '" + s + "'");
    return v;
}

// "a/b", "0.375", or "2"; always exact
BigRat parse_rational(std::string s) {
    bool neg = !s.empty() && s[0] == '-';
    if (neg) s.erase(0, 1);
    BigRat r;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt den = parse_digits(s.substr(slash + 1));
        if (den == 0) throw InvalidParams("rational with zero denominator");
        r = BigRat(parse_digits(s.substr(0, slash)), den);
    } else {
        auto dot = s.find('.');
        if (dot == std::string::npos) {
            r = BigRat(parse_digits(s));
        } else {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            BigInt den = 1;
            for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
            r = BigRat(parse_digits(digits), den);
        }
    }
    return neg ? -r : r;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("cannot open output file " + out_path);
    f << text;
}

struct Options {
    std::string event = "rich-line";
    std::string family = "rich-line";
    uint32_t q = 3, n = 2, m = 1;
    int64_t ell = 0;
    std::string theta_str;
    double theta_mult = -1.0;
    double grid_lo = 0.125, grid_hi = 8.0;
    int grid_points = 13;
    int64_t trials = 1000;
    uint64_t seed = 1;
    int workers = default_workers();
    std::string format = "csv";
    std::string out_path;
    double z = 1.96;
    bool no_profile = false;
    // certify
    double c = 0.5, c_prime = 0.5, eps = 0.5, p = 0.5;
    int64_t N = 1;
};

int64_t default_ell(const std::string& event, uint32_t q, uint32_t m, int64_t ell) {
    if (ell > 0) return ell;
    if (event == "contained" || event == "blocking") {
        int64_t fs = 1;
        for (uint32_t i = 0; i < m; ++i) fs *= q;
        return fs;
    }
    return ell;
}

EventKind make_event(const Options& o) {
    return event_from_name(o.event, o.m, default_ell(o.event, o.q, o.m, o.ell));
}

FamilySpec make_family(const Options& o) {
    if (o.family == "rich-line") return FamilySpec::rich_line(o.q, o.n, o.ell);
    if (o.family == "rich-mflat") return FamilySpec::rich_mflat(o.q, o.n, o.m, o.ell);
    if (o.family == "contained") return FamilySpec::contained_mflat(o.q, o.n, o.m);
    if (o.family == "incidence-pairs") return FamilySpec::incidence_pairs(o.q, o.n, o.m);
    throw InvalidParams("unknown family '" + o.family + "'");
}

// ell echoed in output rows; 0 where the event has no subset size
int64_t echo_ell(const EventKind& ev) {
    switch (ev.type) {
        case EventType::BlockingSet:
        case EventType::Incidence:
            return 0;
        case EventType::ContainedMFlat:
        default:
            return ev.ell;
    }
}

double resolve_theta(const Options& o, const EventKind& ev) {
    if (!ev.uses_theta()) return 0.0;
    if (o.theta_mult > 0) {
        ThresholdInfo t = predicted_threshold(ev, o.q, o.n);
        return std::min(1.0, o.theta_mult * t.value);
    }
    if (o.theta_str.empty()) throw InvalidParams("--theta (or --theta-mult) is required");
    return rat_to_double(parse_rational(o.theta_str));
}

int cmd_count(const Options& o) {
    FamilySpec spec = make_family(o);
    CountRecord rec;
    rec.family = o.family;
    rec.q = o.q;
    rec.n = o.n;
    rec.m = spec.m;
    rec.ell = spec.kind == FamilyKind::IncidencePairs ? 2 : spec.ell;
    rec.stats = family_size(spec);
    if (!o.no_profile) {
        try {
            rec.profile = intersection_profile(spec);
            rec.has_profile = true;
        } catch (const Unsupported&) {
            rec.has_profile = false;  // rich m-flats with m >= 2: oracle only
        }
    }
    write_output(o.format == "json" ? to_json(rec).dump(2) + "\n" : to_csv(rec), o.out_path);
    return 0;
}

int cmd_threshold(const Options& o) {
    EventKind ev = make_event(o);
    ThresholdRecord rec{o.event, o.q, o.n, ev.m, echo_ell(ev), predicted_threshold(ev, o.q, o.n)};
    for (const std::string& w : rec.info.warnings) std::cerr << "warning: " << w << "\n";
    write_output(o.format == "json" ? to_json(rec).dump(2) + "\n" : to_csv(rec), o.out_path);
    return 0;
}

int cmd_simulate(const Options& o) {
    EventKind ev = make_event(o);
    EventContext ctx(Space(o.q, o.n), ev);
    const double theta = resolve_theta(o, ev);
    SimulateRecord rec;
    rec.event = o.event;
    rec.q = o.q;
    rec.n = o.n;
    rec.m = ev.m;
    rec.ell = echo_ell(ev);
    rec.seed = o.seed;
    rec.batch = estimate_event(ctx, theta, o.trials, o.seed, o.workers, o.z);
    if (o.format == "json") {
        double t = std::numeric_limits<double>::quiet_NaN();
        if (ev.uses_theta()) {
            try {
                t = predicted_threshold(ev, o.q, o.n).value;
            } catch (const Error&) {
            }
        }
        write_output(to_json(rec, t).dump(2) + "\n", o.out_path);
    } else {
        write_output(to_csv(rec), o.out_path);
    }
    return 0;
}

int cmd_scan(const Options& o) {
    EventKind ev = make_event(o);
    EventContext ctx(Space(o.q, o.n), ev);
    ThresholdInfo t = predicted_threshold(ev, o.q, o.n);
    std::vector<double> grid = geometric_grid(t.value, o.grid_lo, o.grid_hi, o.grid_points);
    ScanRecord rec;
    rec.event = o.event;
    rec.q = o.q;
    rec.n = o.n;
    rec.m = ev.m;
    rec.ell = echo_ell(ev);
    rec.seed = o.seed;
    rec.scan = scan_event(ctx, grid, o.trials, o.seed, o.workers, o.z);
    rec.scan.predicted_threshold = t.value;
    if (rec.scan.crossed) rec.scan.half_over_threshold = rec.scan.half_theta / t.value;
    write_output(o.format == "json" ? to_json(rec).dump(2) + "\n" : to_csv(rec), o.out_path);
    if (!o.out_path.empty()) {
        std::ofstream dat(o.out_path + ".dat", std::ios::binary);
        dat << to_plot_data(rec);
    }
    return 0;
}

int cmd_oracle(const Options& o) {
    EventKind ev = make_event(o);
    Space sp(o.q, o.n);
    BigRat theta = o.theta_str.empty() ? BigRat(0) : parse_rational(o.theta_str);
    if (ev.uses_theta() && o.theta_str.empty())
        throw InvalidParams("--theta is required (rational, e.g. 1/2)");
    ExactResult res = ev.type == EventType::Incidence
                          ? exact_incidence_probability(sp, ev.m, theta)
                          : exact_event_probability(ev, sp, theta);
    OracleRecord rec;
    rec.event = o.event;
    rec.q = o.q;
    rec.n = o.n;
    rec.m = ev.m;
    rec.ell = echo_ell(ev);
    rec.theta_num = boost::multiprecision::numerator(theta);
    rec.theta_den = boost::multiprecision::denominator(theta);
    rec.prob_num = boost::multiprecision::numerator(res.value);
    rec.prob_den = boost::multiprecision::denominator(res.value);
    write_output(o.format == "json" ? to_json(rec, res.instance_size).dump(2) + "\n" : to_csv(rec),
                 o.out_path);
    return 0;
}

int cmd_certify_prop12(const Options& o) {
    FamilySpec spec = make_family(o);
    FamilyStats stats = family_size(spec);
    IntersectionProfile prof = intersection_profile(spec);
    ConditionCheck chk = check_condition_prop12(stats, prof, o.c);
    if (o.format == "json") {
        nlohmann::json j;
        j["command"] = "certify";
        j["check"] = "prop12";
        j["family"] = o.family;
        j["q"] = o.q;
        j["n"] = o.n;
        j["m"] = spec.m;
        j["ell"] = spec.ell;
        j["c"] = o.c;
        j["holds"] = chk.holds;
        j["lhs_over_rhs"] = chk.lhs_over_rhs;
        j["conservative"] = chk.conservative;
        write_output(j.dump(2) + "\n", o.out_path);
    } else {
        std::ostringstream os;
        os << "check,family,q,n,m,ell,c,holds,lhs_over_rhs,conservative\n";
        os << "prop12," << o.family << ',' << o.q << ',' << o.n << ',' << spec.m << ','
           << spec.ell << ',' << fmt_double(o.c) << ',' << (chk.holds ? 1 : 0) << ','
           << fmt_double(chk.lhs_over_rhs) << ',' << (chk.conservative ? 1 : 0) << "\n";
        write_output(os.str(), o.out_path);
    }
    return 0;
}

int cmd_certify_second_moment(const Options& o) {
    FamilySpec spec = make_family(o);
    FamilyStats stats = family_size(spec);
    IntersectionProfile prof = intersection_profile(spec);
    double theta = rat_to_double(parse_rational(o.theta_str.empty() ? "0" : o.theta_str));
    TailBound tb = second_moment_tail(stats, prof, theta);
    if (o.format == "json") {
        nlohmann::json j;
        j["command"] = "certify";
        j["check"] = "second-moment";
        j["family"] = o.family;
        j["q"] = o.q;
        j["n"] = o.n;
        j["m"] = spec.m;
        j["ell"] = spec.ell;
        j["theta"] = theta;
        j["log_expectation"] = tb.log_expectation;
        j["log_second_moment"] = tb.log_second_moment;
        j["chebyshev_bound"] = tb.chebyshev_bound;
        j["conservative"] = tb.conservative;
        write_output(j.dump(2) + "\n", o.out_path);
    } else {
        std::ostringstream os;
        os << "check,family,q,n,m,ell,theta,log_expectation,log_second_moment,chebyshev_bound,"
              "conservative\n";
        os << "second-moment," << o.family << ',' << o.q << ',' << o.n << ',' << spec.m << ','
           << spec.ell << ',' << fmt_double(theta) << ',' << fmt_double(tb.log_expectation) << ','
           << fmt_double(tb.log_second_moment) << ',' << fmt_double(tb.chebyshev_bound) << ','
           << (tb.conservative ? 1 : 0) << "\n";
        write_output(os.str(), o.out_path);
    }
    return 0;
}

int cmd_certify_chernoff(const Options& o) {
    double lower = chernoff_lower(std::min(o.eps, 0.9999), o.p, o.N);
    double upper = chernoff_upper(o.eps, o.p, o.N);
    double tight = chernoff_upper_tight(o.eps, o.p, o.N);
    if (o.format == "json") {
        nlohmann::json j;
        j["command"] = "certify";
        j["check"] = "chernoff";
        j["eps"] = o.eps;
        j["p"] = o.p;
        j["N"] = o.N;
        j["lower"] = lower;
        j["upper"] = upper;
        j["upper_tight"] = tight;
        write_output(j.dump(2) + "\n", o.out_path);
    } else {
        std::ostringstream os;
        os << "check,eps,p,N,lower,upper,upper_tight\n";
        os << "chernoff," << fmt_double(o.eps) << ',' << fmt_double(o.p) << ',' << o.N << ','
           << fmt_double(lower) << ',' << fmt_double(upper) << ',' << fmt_double(tight) << "\n";
        write_output(os.str(), o.out_path);
    }
    return 0;
}

int cmd_certify_sharp(const Options& o) {
    SharpThresholdBounds b = sharp_threshold_bounds(o.q, o.n, o.m, o.ell, o.eps);
    if (o.format == "json") {
        nlohmann::json j;
        j["command"] = "certify";
        j["check"] = "sharp";
        j["q"] = o.q;
        j["n"] = o.n;
        j["m"] = o.m;
        j["ell"] = o.ell;
        j["eps"] = o.eps;
        j["below"] = b.below;
        j["above"] = b.above;
        j["log_below_raw"] = b.log_below_raw;
        write_output(j.dump(2) + "\n", o.out_path);
    } else {
        std::ostringstream os;
        os << "check,q,n,m,ell,eps,below,above,log_below_raw\n";
        os << "sharp," << o.q << ',' << o.n << ',' << o.m << ',' << o.ell << ','
           << fmt_double(o.eps) << ',' << fmt_double(b.below) << ',' << fmt_double(b.above) << ','
           << fmt_double(b.log_below_raw) << "\n";
        write_output(os.str(), o.out_path);
    }
    return 0;
}

void add_common(CLI::App* sub, Options& o, bool with_event) {
    if (with_event)
        sub->add_option("--event", o.event,
                        "rich-line | rich-mflat | rich-mflat-gp | contained | blocking | "
                        "incidence | uniform-collapse");
    sub->add_option("--q", o.q, "field order (prime power)");
    sub->add_option("--n", o.n, "ambient dimension");
    sub->add_option("--m", o.m, "flat dimension");
    sub->add_option("--ell", o.ell, "subset size l");
    sub->add_option("--format", o.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out_path, "write output to this path instead of stdout");
    sub->set_config("--config", "", "flat key=value config file; flags override");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact counts, probabilistic certificates, and Monte Carlo threshold scans\n"
                 "for point-flat incidence events in F_q^n"};
    app.require_subcommand(1);
    Options o;
    int rc = 0;

    CLI::App* count = app.add_subcommand("count", "family size and intersection profile");
    count->add_option("--family", o.family, "rich-line | rich-mflat | contained | incidence-pairs");
    count->add_flag("--no-profile", o.no_profile, "skip the intersection profile");
    add_common(count, o, false);
    count->callback([&] { rc = cmd_count(o); });

    CLI::App* thr = app.add_subcommand("threshold", "theorem threshold for an event");
    add_common(thr, o, true);
    thr->callback([&] { rc = cmd_threshold(o); });

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimate at one theta");
    add_common(sim, o, true);
    sim->add_option("--theta", o.theta_str, "inclusion probability (float or rational a/b)");
    sim->add_option("--theta-mult", o.theta_mult, "theta as a multiple of the predicted threshold");
    sim->add_option("--trials", o.trials, "number of trials");
    sim->add_option("--seed", o.seed, "base seed");
    sim->add_option("--workers", o.workers, "worker threads (default: FGT_WORKERS or cores)");
    sim->add_option("--z", o.z, "z value for the Wilson interval");
    sim->callback([&] { rc = cmd_simulate(o); });

    CLI::App* scan = app.add_subcommand("scan", "estimate across a theta grid around the threshold");
    add_common(scan, o, true);
    scan->add_option("--grid-lo", o.grid_lo, "lowest grid point as a multiple of the threshold");
    scan->add_option("--grid-hi", o.grid_hi, "highest grid point as a multiple of the threshold");
    scan->add_option("--grid-points", o.grid_points, "number of geometric grid points");
    scan->add_option("--trials", o.trials, "trials per grid point");
    scan->add_option("--seed", o.seed, "base seed");
    scan->add_option("--workers", o.workers, "worker threads");
    scan->add_option("--z", o.z, "z value for the Wilson interval");
    scan->callback([&] { rc = cmd_scan(o); });

    CLI::App* orc = app.add_subcommand("oracle", "exact probability by brute-force enumeration");
    add_common(orc, o, true);
    orc->add_option("--theta", o.theta_str, "rational theta, e.g. 1/2");
    orc->callback([&] { rc = cmd_oracle(o); });

    CLI::App* cert = app.add_subcommand("certify", "evaluate the paper-style certificates");
    cert->require_subcommand(1);

    CLI::App* p12 = cert->add_subcommand("prop12", "sum_k c^k |F|^{k/l} I_k <= |F|^2");
    p12->add_option("--family", o.family);
    p12->add_option("--c", o.c, "constant c > 0");
    add_common(p12, o, false);
    p12->callback([&] { rc = cmd_certify_prop12(o); });

    CLI::App* sm = cert->add_subcommand("second-moment", "Chebyshev tail bound on Pr[Y = 0]");
    sm->add_option("--family", o.family);
    sm->add_option("--theta", o.theta_str);
    add_common(sm, o, false);
    sm->callback([&] { rc = cmd_certify_second_moment(o); });

    CLI::App* ch = cert->add_subcommand("chernoff", "binomial tail bounds");
    ch->add_option("--eps", o.eps);
    ch->add_option("--p", o.p);
    ch->add_option("--N", o.N);
    ch->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    ch->add_option("--out", o.out_path);
    ch->callback([&] { rc = cmd_certify_chernoff(o); });

    CLI::App* sh = cert->add_subcommand("sharp", "two-sided bounds around l q^-m");
    sh->add_option("--eps", o.eps);
    add_common(sh, o, false);
    sh->callback([&] { rc = cmd_certify_sharp(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit 0, bad flags exit 2
    } catch (const fgt::InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fgt::TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const fgt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return rc;
}
