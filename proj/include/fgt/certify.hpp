#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fgt/bigint.hpp"
#include "fgt/counting.hpp"
#include "fgt/error.hpp"

namespace fgt {

struct CertificateParams {
    double c = 0.5;
    double c_prime = 0.5;
    double rel_tol = 1e-9;

    void validate() const {
        if (!(c > 0)) throw InvalidParams("require c > 0");
        if (!(c_prime > 0 && c_prime < 1)) throw InvalidParams("require 0 < c' < 1");
    }
};

namespace detail {

// log(sum of exp(terms)), compensated.
inline double log_sum_exp(const std::vector<double>& terms) {
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (double t : terms) mx = std::max(mx, t);
    if (std::isinf(mx)) return mx;
    double sum = 0.0, comp = 0.0;
    for (double t : terms) {
        double y = std::exp(t - mx) - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return mx + std::log(sum);
}

}  // namespace detail

struct ConditionCheck {
    bool holds = false;
    double lhs_over_rhs = 0.0;
    bool conservative = false;  // some profile entries were upper bounds
};

/// Evaluates sum_{k=1}^{l-1} c^k |F|^{k/l} I_k <= |F|^2 in log space.
/// Bound-flagged profile entries only make the check conservative.
inline ConditionCheck check_condition_prop12(const FamilyStats& stats,
                                             const IntersectionProfile& profile, double c,
                                             double rel_tol = 1e-9) {
    if (!(c > 0)) throw InvalidParams("require c > 0");
    const int64_t ell = profile.ell;
    if (ell < 1) throw MissingProfile("profile has no member size");
    std::vector<double> term_logs;
    bool conservative = false;
    for (const auto& [k, entry] : profile.entries) {
        if (k < 1 || k > ell - 1 || entry.value == 0) continue;
        conservative |= !entry.exact;
        term_logs.push_back(double(k) * std::log(c) +
                            double(k) / double(ell) * stats.log_size + big_log(entry.value));
    }
    ConditionCheck out;
    out.conservative = conservative;
    const double log_rhs = 2.0 * stats.log_size;
    const double log_lhs = detail::log_sum_exp(term_logs);
    out.lhs_over_rhs = std::exp(log_lhs - log_rhs);
    out.holds = out.lhs_over_rhs <= 1.0 + rel_tol;
    return out;
}

struct TailBound {
    double log_expectation = 0.0;
    double log_second_moment = 0.0;
    double expectation = 0.0;    // exp of the log, may overflow to inf
    double second_moment = 0.0;
    double chebyshev_bound = 1.0;  // min(1, Var/E^2); upper-bounds Pr[Y = 0]
    bool conservative = false;
};

/// Second-moment bound on Pr[no family member inside X] at inclusion
/// probability theta: E[Y] = theta^l |F|, E[Y^2] = sum_k theta^{2l-k} I_k.
inline TailBound second_moment_tail(const FamilyStats& stats, const IntersectionProfile& profile,
                                    double theta, double rel_tol = 1e-9) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidTheta("theta must lie in [0, 1]");
    TailBound out;
    out.conservative = !profile.all_exact();
    const int64_t ell = profile.ell;
    if (ell < 1) throw MissingProfile("profile has no member size");
    if (theta == 0.0) {
        out.log_expectation = -std::numeric_limits<double>::infinity();
        out.log_second_moment = -std::numeric_limits<double>::infinity();
        out.chebyshev_bound = 1.0;  // Pr[Y=0] = 1 exactly
        return out;
    }
    const double lt = std::log(theta);
    out.log_expectation = double(ell) * lt + stats.log_size;
    std::vector<double> term_logs;
    for (const auto& [k, entry] : profile.entries) {
        if (entry.value == 0) continue;
        term_logs.push_back(double(2 * ell - k) * lt + big_log(entry.value));
    }
    out.log_second_moment = detail::log_sum_exp(term_logs);
    out.expectation = std::exp(out.log_expectation);
    out.second_moment = std::exp(out.log_second_moment);

    double diff = out.log_second_moment - 2.0 * out.log_expectation;
    if (diff < -rel_tol)
        throw Error("second moment fell below squared expectation beyond tolerance");
    double ratio = std::expm1(std::max(diff, 0.0));  // Var/E^2
    out.chebyshev_bound = std::min(1.0, std::max(0.0, ratio));
    return out;
}

/// Pr[X < (1-eps) p N] < exp(-eps^2 p N / 2), eps in (0,1).
inline double chernoff_lower(double eps, double p, int64_t N) {
    if (!(eps > 0 && eps < 1)) throw InvalidParams("lower Chernoff requires eps in (0,1)");
    if (!(p >= 0 && p <= 1) || N < 1) throw InvalidParams("require p in [0,1], N >= 1");
    return std::exp(-eps * eps * p * double(N) / 2.0);
}

/// Pr[X > (1+eps) p N] < exp(-eps^2 p N / (2+eps)), eps > 0.
inline double chernoff_upper(double eps, double p, int64_t N) {
    if (!(eps > 0)) throw InvalidParams("upper Chernoff requires eps > 0");
    if (!(p >= 0 && p <= 1) || N < 1) throw InvalidParams("require p in [0,1], N >= 1");
    return std::exp(-eps * eps * p * double(N) / (2.0 + eps));
}

/// The tighter exp((eps - (1+eps) ln(1+eps)) p N) form of the upper bound.
inline double chernoff_upper_tight(double eps, double p, int64_t N) {
    if (!(eps > 0)) throw InvalidParams("upper Chernoff requires eps > 0");
    if (!(p >= 0 && p <= 1) || N < 1) throw InvalidParams("require p in [0,1], N >= 1");
    return std::exp((eps - (1.0 + eps) * std::log1p(eps)) * p * double(N));
}

struct SharpThresholdBounds {
    double below = 1.0;      // bound on Pr[some m-flat l-rich] at theta = l q^-m / (1+eps)
    double above = 1.0;      // bound on 1 - Pr[...] at theta = l q^-m / (1-eps)
    double log_below_raw = 0.0;  // union bound before clamping to 1
};

/// Chernoff two-sided certificate around the sharp threshold l q^-m. The
/// union bound instantiates the flat-count factor with the exact count.
inline SharpThresholdBounds sharp_threshold_bounds(uint32_t q, uint32_t n, uint32_t m, int64_t ell,
                                                   double eps) {
    if (!(eps > 0 && eps < 1)) throw InvalidParams("require eps in (0,1)");
    if (m < 1 || m >= n) throw InvalidParams("require 1 <= m < n");
    int64_t flat_size = 1;
    for (uint32_t i = 0; i < m; ++i) flat_size *= q;
    if (ell < 1 || ell > flat_size) throw InvalidParams("require 1 <= l <= q^m");
    SharpThresholdBounds out;
    out.log_below_raw = big_log(count_m_flats(q, n, m)) -
                        eps * eps * double(ell) / ((2.0 + eps) * (1.0 + eps));
    out.below = std::exp(std::min(out.log_below_raw, 0.0));
    out.above = std::exp(-eps * eps * double(ell) / (2.0 * (1.0 - eps)));
    return out;
}

}  // namespace fgt
