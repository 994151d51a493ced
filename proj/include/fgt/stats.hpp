#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "fgt/error.hpp"

namespace fgt {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval; sane near p_hat = 0 or 1, unlike Wald.
inline Interval wilson_interval(int64_t successes, int64_t trials, double z = 1.96) {
    if (trials <= 0) throw InvalidParams("Wilson interval needs trials >= 1");
    if (successes < 0 || successes > trials) throw InvalidParams("successes out of range");
    const double nn = double(trials), k = double(successes), z2 = z * z;
    const double center = (k + z2 / 2.0) / (nn + z2);
    const double half = z / (nn + z2) * std::sqrt(k * (nn - k) / nn + z2 / 4.0);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Weighted isotonic regression (pool adjacent violators): the closest
/// nondecreasing sequence to y in weighted least squares.
inline std::vector<double> isotonic_fit(const std::vector<double>& y,
                                        const std::vector<double>& w) {
    if (y.size() != w.size()) throw InvalidParams("isotonic fit: length mismatch");
    struct Block {
        double sum, weight;
        size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        blocks.push_back({y[i] * w[i], w[i], 1});
        while (blocks.size() >= 2) {
            auto& b = blocks[blocks.size() - 2];
            auto& t = blocks.back();
            if (b.sum / b.weight <= t.sum / t.weight) break;
            b.sum += t.sum;
            b.weight += t.weight;
            b.count += t.count;
            blocks.pop_back();
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (const auto& b : blocks)
        out.insert(out.end(), b.count, b.sum / b.weight);
    return out;
}

/// First crossing of level 0.5 in a nondecreasing curve over xs, by linear
/// interpolation; nullopt when the curve never reaches 0.5.
inline std::optional<double> half_point(const std::vector<double>& xs,
                                        const std::vector<double>& curve) {
    if (xs.size() != curve.size() || xs.empty()) throw InvalidParams("half point: bad input");
    if (curve.front() >= 0.5) return xs.front();
    for (size_t i = 1; i < xs.size(); ++i) {
        if (curve[i] < 0.5) continue;
        double run = curve[i] - curve[i - 1];
        if (run <= 0) return xs[i];
        return xs[i - 1] + (0.5 - curve[i - 1]) * (xs[i] - xs[i - 1]) / run;
    }
    return std::nullopt;
}

inline double log_binomial_pmf(int64_t N, int64_t k, double p) {
    if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return k == N ? 0.0 : -std::numeric_limits<double>::infinity();
    return std::lgamma(double(N) + 1) - std::lgamma(double(k) + 1) -
           std::lgamma(double(N - k) + 1) + double(k) * std::log(p) +
           double(N - k) * std::log1p(-p);
}

// Pr[Bin(N, p) < cutoff], exact summation.
inline double binomial_tail_below(int64_t N, double p, double cutoff) {
    double sum = 0.0;
    for (int64_t k = 0; k < N + 1 && double(k) < cutoff; ++k)
        sum += std::exp(log_binomial_pmf(N, k, p));
    return std::min(1.0, sum);
}

// Pr[Bin(N, p) > cutoff], exact summation.
inline double binomial_tail_above(int64_t N, double p, double cutoff) {
    double sum = 0.0;
    for (int64_t k = N; k >= 0 && double(k) > cutoff; --k)
        sum += std::exp(log_binomial_pmf(N, k, p));
    return std::min(1.0, sum);
}

}  // namespace fgt
