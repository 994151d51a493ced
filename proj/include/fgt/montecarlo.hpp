#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "fgt/events.hpp"
#include "fgt/stats.hpp"

namespace fgt {

/// Monte Carlo estimate at one theta: trial i draws all of its randomness
/// from (base_seed, i), so the result is bit-identical for any worker count.
struct TrialBatch {
    double theta = 0.0;
    int64_t trials = 0;
    int64_t successes = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
};

namespace detail {

template <typename Fn>
void parallel_trials(int64_t trials, int workers, Fn&& per_trial_range) {
    const int W = std::max(1, workers);
    if (W == 1 || trials < 2 * W) {
        per_trial_range(0, trials, 0);
        return;
    }
    std::vector<std::thread> pool;
    const int64_t chunk = (trials + W - 1) / W;
    for (int w = 0; w < W; ++w) {
        const int64_t lo = int64_t(w) * chunk;
        const int64_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, w] { per_trial_range(lo, hi, w); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

inline TrialBatch estimate_event(const EventContext& ctx, double theta, int64_t trials,
                                 uint64_t base_seed, int workers = 1, double z = 1.96) {
    if (trials < 1) throw InvalidParams("need at least one trial");
    const int W = std::max(1, workers);
    std::vector<int64_t> partial(size_t(std::max(W, 1)), 0);
    detail::parallel_trials(trials, W, [&](int64_t lo, int64_t hi, int w) {
        int64_t cnt = 0;
        for (int64_t i = lo; i < hi; ++i)
            if (ctx.run_trial(theta, SampleSeed{base_seed, uint64_t(i)})) ++cnt;
        partial[size_t(w)] = cnt;
    });
    TrialBatch b;
    b.theta = theta;
    b.trials = trials;
    for (int64_t c : partial) b.successes += c;
    b.p_hat = double(b.successes) / double(trials);
    Interval ci = wilson_interval(b.successes, trials, z);
    b.ci_lo = ci.lo;
    b.ci_hi = ci.hi;
    return b;
}

struct ScanResult {
    std::vector<TrialBatch> rows;  // ascending theta
    double predicted_threshold = 0.0;
    bool crossed = false;
    double half_theta = 0.0;            // isotonic + linear interpolation at 0.5
    double half_over_threshold = 0.0;   // half_theta / predicted_threshold
};

/// Geometric grid of lo_mult*t .. hi_mult*t clamped into (0, 1].
inline std::vector<double> geometric_grid(double t, double lo_mult, double hi_mult, int points) {
    if (points < 2 || !(lo_mult > 0) || !(hi_mult > lo_mult))
        throw InvalidParams("bad grid specification");
    std::vector<double> g(static_cast<size_t>(points));
    const double step = std::log(hi_mult / lo_mult) / double(points - 1);
    for (int i = 0; i < points; ++i)
        g[size_t(i)] = std::min(1.0, t * lo_mult * std::exp(step * double(i)));
    g.erase(std::unique(g.begin(), g.end()), g.end());  // clamping may collide at 1
    return g;
}

/// Coupled scan: each trial shares its draws across the whole grid, so the
/// per-trial indicator is monotone in theta and the first success index can
/// be found by binary search.
inline ScanResult scan_event(const EventContext& ctx, const std::vector<double>& grid,
                             int64_t trials, uint64_t base_seed, int workers = 1,
                             double z = 1.96) {
    if (grid.empty()) throw InvalidParams("empty scan grid");
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw InvalidParams("grid must be strictly increasing");
    const int W = std::max(1, workers);
    const size_t G = grid.size();
    std::vector<std::vector<int64_t>> partial(size_t(W), std::vector<int64_t>(G, 0));

    detail::parallel_trials(trials, W, [&](int64_t lo, int64_t hi, int w) {
        auto& first_true_count = partial[size_t(w)];
        for (int64_t i = lo; i < hi; ++i) {
            const SampleSeed seed{base_seed, uint64_t(i)};
            // smallest grid index where the event holds, by bisection
            size_t a = 0, b = G;
            if (!ctx.run_trial(grid[G - 1], seed)) continue;  // never holds
            --b;
            while (a < b) {
                size_t mid = (a + b) / 2;
                if (ctx.run_trial(grid[mid], seed))
                    b = mid;
                else
                    a = mid + 1;
            }
            ++first_true_count[a];
        }
    });

    std::vector<int64_t> first_true(G, 0);
    for (const auto& p : partial)
        for (size_t gidx = 0; gidx < G; ++gidx) first_true[gidx] += p[gidx];

    ScanResult res;
    int64_t cum = 0;
    for (size_t gidx = 0; gidx < G; ++gidx) {
        cum += first_true[gidx];
        TrialBatch b;
        b.theta = grid[gidx];
        b.trials = trials;
        b.successes = cum;
        b.p_hat = double(cum) / double(trials);
        Interval ci = wilson_interval(cum, trials, z);
        b.ci_lo = ci.lo;
        b.ci_hi = ci.hi;
        res.rows.push_back(b);
    }

    std::vector<double> p(G), wt(G, double(trials));
    for (size_t gidx = 0; gidx < G; ++gidx) p[gidx] = res.rows[gidx].p_hat;
    std::vector<double> iso = isotonic_fit(p, wt);
    if (auto h = half_point(grid, iso)) {
        res.crossed = true;
        res.half_theta = *h;
    }
    return res;
}

}  // namespace fgt
