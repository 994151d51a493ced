#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgt/bigint.hpp"
#include "fgt/counting.hpp"
#include "fgt/error.hpp"
#include "fgt/montecarlo.hpp"

namespace fgt {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<std::string> nonempty_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------- simulate

struct SimulateRecord {
    std::string event;
    uint32_t q = 0, n = 0, m = 0;
    int64_t ell = 0;  // 0 when not applicable
    TrialBatch batch;
    uint64_t seed = 0;
};

inline const char* kTrialCsvHeader = "event,q,n,m,ell,theta,trials,successes,p_hat,ci_lo,ci_hi,seed";

inline std::string csv_row(const SimulateRecord& r, const TrialBatch& b) {
    std::ostringstream os;
    os << r.event << ',' << r.q << ',' << r.n << ',' << r.m << ',' << r.ell << ','
       << fmt_double(b.theta) << ',' << b.trials << ',' << b.successes << ','
       << fmt_double(b.p_hat) << ',' << fmt_double(b.ci_lo) << ',' << fmt_double(b.ci_hi) << ','
       << r.seed;
    return os.str();
}

inline std::string to_csv(const SimulateRecord& r) {
    return std::string(kTrialCsvHeader) + "\n" + csv_row(r, r.batch) + "\n";
}

inline TrialBatch trial_from_fields(const std::vector<std::string>& f, SimulateRecord& r) {
    if (f.size() != 12) throw InvalidParams("bad trial CSV row");
    r.event = f[0];
    r.q = uint32_t(std::stoul(f[1]));
    r.n = uint32_t(std::stoul(f[2]));
    r.m = uint32_t(std::stoul(f[3]));
    r.ell = std::stoll(f[4]);
    TrialBatch b;
    b.theta = std::strtod(f[5].c_str(), nullptr);
    b.trials = std::stoll(f[6]);
    b.successes = std::stoll(f[7]);
    b.p_hat = std::strtod(f[8].c_str(), nullptr);
    b.ci_lo = std::strtod(f[9].c_str(), nullptr);
    b.ci_hi = std::strtod(f[10].c_str(), nullptr);
    r.seed = std::stoull(f[11]);
    return b;
}

inline SimulateRecord simulate_from_csv(const std::string& text) {
    auto lines = detail::nonempty_lines(text);
    if (lines.size() != 2 || lines[0] != kTrialCsvHeader)
        throw InvalidParams("bad simulate CSV");
    SimulateRecord r;
    r.batch = trial_from_fields(detail::split(lines[1], ','), r);
    return r;
}

inline nlohmann::json to_json(const SimulateRecord& r, double predicted_threshold) {
    nlohmann::json j;
    j["command"] = "simulate";
    j["event"] = r.event;
    j["q"] = r.q;
    j["n"] = r.n;
    j["m"] = r.m;
    j["ell"] = r.ell;
    j["theta"] = r.batch.theta;
    j["trials"] = r.batch.trials;
    j["successes"] = r.batch.successes;
    j["p_hat"] = r.batch.p_hat;
    j["ci_lo"] = r.batch.ci_lo;
    j["ci_hi"] = r.batch.ci_hi;
    j["seed"] = r.seed;
    if (std::isfinite(predicted_threshold)) j["predicted_threshold"] = predicted_threshold;
    return j;
}

// -------------------------------------------------------------------- scan

struct ScanRecord {
    std::string event;
    uint32_t q = 0, n = 0, m = 0;
    int64_t ell = 0;
    uint64_t seed = 0;
    ScanResult scan;
};

inline std::string to_csv(const ScanRecord& r) {
    std::ostringstream os;
    os << kTrialCsvHeader << "\n";
    SimulateRecord hdr{r.event, r.q, r.n, r.m, r.ell, {}, r.seed};
    for (const TrialBatch& b : r.scan.rows) os << csv_row(hdr, b) << "\n";
    return os.str();
}

inline ScanRecord scan_from_csv(const std::string& text) {
    auto lines = detail::nonempty_lines(text);
    if (lines.size() < 2 || lines[0] != kTrialCsvHeader) throw InvalidParams("bad scan CSV");
    ScanRecord r;
    for (size_t i = 1; i < lines.size(); ++i) {
        SimulateRecord row;
        TrialBatch b = trial_from_fields(detail::split(lines[i], ','), row);
        r.event = row.event;
        r.q = row.q;
        r.n = row.n;
        r.m = row.m;
        r.ell = row.ell;
        r.seed = row.seed;
        r.scan.rows.push_back(b);
    }
    return r;
}

// Two-column gnuplot data: theta p_hat.
inline std::string to_plot_data(const ScanRecord& r) {
    std::ostringstream os;
    for (const TrialBatch& b : r.scan.rows)
        os << fmt_double(b.theta) << ' ' << fmt_double(b.p_hat) << "\n";
    return os.str();
}

inline nlohmann::json to_json(const ScanRecord& r) {
    nlohmann::json j;
    j["command"] = "scan";
    j["event"] = r.event;
    j["q"] = r.q;
    j["n"] = r.n;
    j["m"] = r.m;
    j["ell"] = r.ell;
    j["seed"] = r.seed;
    j["predicted_threshold"] = r.scan.predicted_threshold;
    nlohmann::json half;
    half["crossed"] = r.scan.crossed;
    if (r.scan.crossed) {
        half["theta"] = r.scan.half_theta;
        half["ratio_to_threshold"] = r.scan.half_over_threshold;
    } else {
        half["theta"] = nullptr;
        half["ratio_to_threshold"] = nullptr;
    }
    j["half_point"] = half;
    j["rows"] = nlohmann::json::array();
    for (const TrialBatch& b : r.scan.rows) {
        nlohmann::json row;
        row["theta"] = b.theta;
        row["trials"] = b.trials;
        row["successes"] = b.successes;
        row["p_hat"] = b.p_hat;
        row["ci_lo"] = b.ci_lo;
        row["ci_hi"] = b.ci_hi;
        j["rows"].push_back(row);
    }
    return j;
}

// ------------------------------------------------------------------- count

struct CountRecord {
    std::string family;
    uint32_t q = 0, n = 0, m = 0;
    int64_t ell = 0;
    FamilyStats stats;
    bool has_profile = false;
    IntersectionProfile profile;
};

inline std::string to_csv(const CountRecord& r) {
    std::ostringstream os;
    os << "family,q,n,m,ell,size,log_size,size_exact\n";
    os << r.family << ',' << r.q << ',' << r.n << ',' << r.m << ',' << r.ell << ','
       << r.stats.size.str() << ',' << fmt_double(r.stats.log_size) << ','
       << (r.stats.size_exact ? 1 : 0) << "\n";
    if (r.has_profile) {
        os << "k,I_k,exact\n";
        for (const auto& [k, e] : r.profile.entries)
            os << k << ',' << e.value.str() << ',' << (e.exact ? 1 : 0) << "\n";
    }
    return os.str();
}

inline CountRecord count_from_csv(const std::string& text) {
    auto lines = detail::nonempty_lines(text);
    if (lines.size() < 2 || lines[0] != "family,q,n,m,ell,size,log_size,size_exact")
        throw InvalidParams("bad count CSV");
    auto f = detail::split(lines[1], ',');
    if (f.size() != 8) throw InvalidParams("bad count CSV row");
    CountRecord r;
    r.family = f[0];
    r.q = uint32_t(std::stoul(f[1]));
    r.n = uint32_t(std::stoul(f[2]));
    r.m = uint32_t(std::stoul(f[3]));
    r.ell = std::stoll(f[4]);
    r.stats.size = BigInt(f[5]);
    r.stats.log_size = std::strtod(f[6].c_str(), nullptr);
    r.stats.size_exact = f[7] == "1";
    if (lines.size() > 2) {
        if (lines[2] != "k,I_k,exact") throw InvalidParams("bad count CSV profile header");
        r.has_profile = true;
        r.profile.ell = r.ell;
        for (size_t i = 3; i < lines.size(); ++i) {
            auto pf = detail::split(lines[i], ',');
            if (pf.size() != 3) throw InvalidParams("bad count CSV profile row");
            r.profile.entries[std::stoll(pf[0])] = {BigInt(pf[1]), pf[2] == "1"};
        }
    }
    return r;
}

inline nlohmann::json to_json(const CountRecord& r) {
    nlohmann::json j;
    j["command"] = "count";
    j["family"] = r.family;
    j["q"] = r.q;
    j["n"] = r.n;
    j["m"] = r.m;
    j["ell"] = r.ell;
    j["size"] = r.stats.size.str();
    j["log_size"] = r.stats.log_size;
    j["size_exact"] = r.stats.size_exact;
    if (!r.stats.size_exact) j["leading_order_log"] = r.stats.leading_order_log;
    if (r.has_profile) {
        nlohmann::json prof = nlohmann::json::array();
        for (const auto& [k, e] : r.profile.entries) {
            nlohmann::json row;
            row["k"] = k;
            row["value"] = e.value.str();
            row["exact"] = e.exact;
            prof.push_back(row);
        }
        j["profile"] = prof;
    }
    return j;
}

// --------------------------------------------------------------- threshold

struct ThresholdRecord {
    std::string event;
    uint32_t q = 0, n = 0, m = 0;
    int64_t ell = 0;
    ThresholdInfo info;
};

inline std::string to_csv(const ThresholdRecord& r) {
    std::ostringstream os;
    os << "event,q,n,m,ell,threshold,log_threshold,exact_size_companion,sharp_companion\n";
    os << r.event << ',' << r.q << ',' << r.n << ',' << r.m << ',' << r.ell << ','
       << fmt_double(r.info.value) << ',' << fmt_double(r.info.log_value) << ','
       << fmt_double(r.info.exact_size_companion) << ',' << fmt_double(r.info.sharp_companion)
       << "\n";
    return os.str();
}

inline ThresholdRecord threshold_from_csv(const std::string& text) {
    auto lines = detail::nonempty_lines(text);
    if (lines.size() != 2 ||
        lines[0] != "event,q,n,m,ell,threshold,log_threshold,exact_size_companion,sharp_companion")
        throw InvalidParams("bad threshold CSV");
    auto f = detail::split(lines[1], ',');
    if (f.size() != 9) throw InvalidParams("bad threshold CSV row");
    ThresholdRecord r;
    r.event = f[0];
    r.q = uint32_t(std::stoul(f[1]));
    r.n = uint32_t(std::stoul(f[2]));
    r.m = uint32_t(std::stoul(f[3]));
    r.ell = std::stoll(f[4]);
    r.info.value = std::strtod(f[5].c_str(), nullptr);
    r.info.log_value = std::strtod(f[6].c_str(), nullptr);
    r.info.exact_size_companion = std::strtod(f[7].c_str(), nullptr);
    r.info.sharp_companion = std::strtod(f[8].c_str(), nullptr);
    return r;
}

inline nlohmann::json to_json(const ThresholdRecord& r) {
    nlohmann::json j;
    j["command"] = "threshold";
    j["event"] = r.event;
    j["q"] = r.q;
    j["n"] = r.n;
    j["m"] = r.m;
    j["ell"] = r.ell;
    j["predicted_threshold"] = r.info.value;
    j["log_threshold"] = r.info.log_value;
    if (std::isfinite(r.info.exact_size_companion))
        j["exact_size_companion"] = r.info.exact_size_companion;
    if (std::isfinite(r.info.sharp_companion)) j["sharp_companion"] = r.info.sharp_companion;
    j["warnings"] = r.info.warnings;
    return j;
}

// ------------------------------------------------------------------ oracle

struct OracleRecord {
    std::string event;
    uint32_t q = 0, n = 0, m = 0;
    int64_t ell = 0;
    BigInt theta_num = 0, theta_den = 1;
    BigInt prob_num = 0, prob_den = 1;
};

inline std::string to_csv(const OracleRecord& r) {
    std::ostringstream os;
    os << "event,q,n,m,ell,theta_num,theta_den,prob_num,prob_den\n";
    os << r.event << ',' << r.q << ',' << r.n << ',' << r.m << ',' << r.ell << ','
       << r.theta_num.str() << ',' << r.theta_den.str() << ',' << r.prob_num.str() << ','
       << r.prob_den.str() << "\n";
    return os.str();
}

inline OracleRecord oracle_from_csv(const std::string& text) {
    auto lines = detail::nonempty_lines(text);
    if (lines.size() != 2 || lines[0] != "event,q,n,m,ell,theta_num,theta_den,prob_num,prob_den")
        throw InvalidParams("bad oracle CSV");
    auto f = detail::split(lines[1], ',');
    if (f.size() != 9) throw InvalidParams("bad oracle CSV row");
    OracleRecord r;
    r.event = f[0];
    r.q = uint32_t(std::stoul(f[1]));
    r.n = uint32_t(std::stoul(f[2]));
    r.m = uint32_t(std::stoul(f[3]));
    r.ell = std::stoll(f[4]);
    r.theta_num = BigInt(f[5]);
    r.theta_den = BigInt(f[6]);
    r.prob_num = BigInt(f[7]);
    r.prob_den = BigInt(f[8]);
    return r;
}

inline nlohmann::json to_json(const OracleRecord& r, int64_t instance_size) {
    nlohmann::json j;
    j["command"] = "oracle";
    j["event"] = r.event;
    j["q"] = r.q;
    j["n"] = r.n;
    j["m"] = r.m;
    j["ell"] = r.ell;
    j["theta_num"] = r.theta_num.str();
    j["theta_den"] = r.theta_den.str();
    j["prob_num"] = r.prob_num.str();
    j["prob_den"] = r.prob_den.str();
    j["instance_size"] = instance_size;
    return j;
}

}  // namespace fgt
