#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "fgt/bigint.hpp"
#include "fgt/counting.hpp"
#include "fgt/error.hpp"
#include "fgt/events.hpp"
#include "fgt/geometry.hpp"

namespace fgt {

constexpr int64_t kMaxOraclePoints = 20;  // enumerates 2^(q^n) subsets

struct ExactResult {
    BigRat value;             // exact when the input theta is rational
    double value_real = 0.0;  // double rendering of value
    bool rational = true;
    int64_t instance_size = 0;  // configurations enumerated
};

/// Number of subsets of each size on which the event holds; the exact event
/// probability at any theta is a weighted sum over this histogram.
struct OracleHistogram {
    int64_t num_points = 0;
    std::vector<int64_t> event_true;  // index = subset size
};

namespace detail {

struct GrayCounts {
    std::vector<uint32_t> counts;  // per-flat |L cap X|
    int64_t num_rich = 0;          // counts >= rich_threshold
    int64_t num_full = 0;          // counts == flat_size
    int64_t num_zero = 0;          // counts == 0
};

}  // namespace detail

/// Enumerates all 2^(q^n) subsets in Gray-code order, maintaining per-flat
/// intersection counts incrementally.
inline OracleHistogram oracle_histogram(const EventKind& ev, const Space& sp) {
    ev.validate(sp.q(), sp.n());
    const int64_t N = sp.num_points();
    if (N > kMaxOraclePoints) throw TooLarge("oracle enumeration needs q^n <= 20");
    if (ev.type == EventType::UniformCollapse)
        throw InvalidParams("uniform-collapse is handled by exact_event_probability directly");

    OracleHistogram hist;
    hist.num_points = N;
    hist.event_true.assign(size_t(N) + 1, 0);

    const bool needs_detector = ev.type == EventType::RichMFlatGeneralPosition;
    FlatTable table(sp, ev.m, kDefaultFlatBudget, /*with_incidence=*/true);
    const int64_t flat_size = table.flat_size();
    const uint32_t rich_threshold =
        ev.type == EventType::ContainedMFlat || ev.type == EventType::BlockingSet
            ? uint32_t(flat_size)
            : uint32_t(ev.ell);

    detail::GrayCounts gc;
    gc.counts.assign(size_t(table.flat_count()), 0);
    gc.num_zero = table.flat_count();

    EventContext gp_ctx(sp, needs_detector ? ev : EventKind::contained_mflat(ev.m));
    PointSet X(N);

    auto indicator = [&]() -> bool {
        switch (ev.type) {
            case EventType::RichLine:
            case EventType::RichMFlat:
                return gc.num_rich > 0;
            case EventType::ContainedMFlat:
                return gc.num_full > 0;
            case EventType::BlockingSet:
                return gc.num_zero == 0;
            case EventType::RichMFlatGeneralPosition:
                return gp_ctx.detect_rich_general_position(X);
            default:
                return false;
        }
    };

    // empty set first
    if (indicator()) ++hist.event_true[0];

    const int64_t deg = table.degree();
    for (uint64_t i = 1; i < (uint64_t(1) << N); ++i) {
        const uint32_t gray = uint32_t(i ^ (i >> 1));
        const unsigned bit = unsigned(__builtin_ctzll(i));
        const bool added = (gray >> bit) & 1;
        const uint32_t* flats = table.flats_through(PointId(bit));
        if (added) {
            X.insert(PointId(bit));
            for (int64_t t = 0; t < deg; ++t) {
                uint32_t& c = gc.counts[flats[t]];
                if (c == 0) --gc.num_zero;
                ++c;
                if (c == rich_threshold) ++gc.num_rich;
                if (int64_t(c) == flat_size) ++gc.num_full;
            }
        } else {
            X.erase(PointId(bit));
            for (int64_t t = 0; t < deg; ++t) {
                uint32_t& c = gc.counts[flats[t]];
                if (int64_t(c) == flat_size) --gc.num_full;
                if (c == rich_threshold) --gc.num_rich;
                --c;
                if (c == 0) ++gc.num_zero;
            }
        }
        if (indicator()) ++hist.event_true[size_t(__builtin_popcount(gray))];
    }
    return hist;
}

inline ExactResult probability_from_histogram(const OracleHistogram& hist, const BigRat& theta) {
    const int64_t N = hist.num_points;
    if (theta < 0 || theta > 1) throw InvalidTheta("theta must lie in [0, 1]");
    std::vector<BigRat> th_pow(size_t(N) + 1), om_pow(size_t(N) + 1);
    th_pow[0] = 1;
    om_pow[0] = 1;
    const BigRat om = BigRat(1) - theta;
    for (int64_t k = 1; k <= N; ++k) {
        th_pow[size_t(k)] = th_pow[size_t(k - 1)] * theta;
        om_pow[size_t(k)] = om_pow[size_t(k - 1)] * om;
    }
    ExactResult out;
    out.instance_size = int64_t(1) << N;
    BigRat acc = 0;
    for (int64_t s = 0; s <= N; ++s)
        if (hist.event_true[size_t(s)])
            acc += BigRat(hist.event_true[size_t(s)]) * th_pow[size_t(s)] * om_pow[size_t(N - s)];
    out.value = acc;
    out.value_real = rat_to_double(acc);
    return out;
}

inline double probability_from_histogram_real(const OracleHistogram& hist, double theta) {
    const int64_t N = hist.num_points;
    if (theta <= 0.0) return double(hist.event_true[0]);
    if (theta >= 1.0) return double(hist.event_true[size_t(N)]);
    double acc = 0.0;
    for (int64_t s = 0; s <= N; ++s) {
        if (!hist.event_true[size_t(s)]) continue;
        acc += double(hist.event_true[size_t(s)]) *
               std::exp(double(s) * std::log(theta) + double(N - s) * std::log1p(-theta));
    }
    return std::min(1.0, acc);
}

/// Exact Pr[event] by full subset enumeration (uniform-collapse enumerates
/// l-subsets instead and ignores theta).
inline ExactResult exact_event_probability(const EventKind& ev, const Space& sp,
                                           const BigRat& theta) {
    if (ev.type == EventType::Incidence)
        throw InvalidParams("use exact_incidence_probability for the bipartite model");
    if (ev.type == EventType::UniformCollapse) {
        const int64_t N = sp.num_points();
        BigInt total = big_binomial(N, ev.ell);
        if (total > 20'000'000) throw TooLarge("too many l-subsets to enumerate");
        ev.validate(sp.q(), sp.n());
        int64_t collapsed = 0, count = 0;
        std::vector<PointId> subset(size_t(ev.ell));
        std::vector<int64_t> idx(size_t(ev.ell));
        for (int64_t i = 0; i < ev.ell; ++i) idx[size_t(i)] = i;
        while (true) {
            for (size_t i = 0; i < subset.size(); ++i) subset[i] = PointId(idx[i]);
            ++count;
            if (!is_general_position(sp, subset, ev.m)) ++collapsed;
            int64_t i = ev.ell;
            bool advanced = false;
            while (i-- > 0) {
                if (idx[size_t(i)] != N - ev.ell + i) {
                    ++idx[size_t(i)];
                    for (int64_t j = i + 1; j < ev.ell; ++j)
                        idx[size_t(j)] = idx[size_t(j - 1)] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
        ExactResult out;
        out.instance_size = count;
        out.value = BigRat(collapsed) / BigRat(count);
        out.value_real = rat_to_double(out.value);
        return out;
    }
    return probability_from_histogram(oracle_histogram(ev, sp), theta);
}

/// Bipartite model: Pr[some selected point lies in a selected m-flat].
/// Conditional on X the flats are independent, so Pr[no incidence | X]
/// = (1-theta)^{#flats meeting X}.
inline ExactResult exact_incidence_probability(const Space& sp, uint32_t m, const BigRat& theta) {
    EventKind::incidence(m).validate(sp.q(), sp.n());
    if (theta < 0 || theta > 1) throw InvalidTheta("theta must lie in [0, 1]");
    const int64_t N = sp.num_points();
    if (N > kMaxOraclePoints) throw TooLarge("oracle enumeration needs q^n <= 20");
    FlatTable table(sp, m, kDefaultFlatBudget, /*with_incidence=*/true);
    const int64_t flats = table.flat_count();
    const int64_t deg = table.degree();

    // joint histogram over (|X|, #flats meeting X)
    std::vector<std::vector<int64_t>> hist(size_t(N) + 1,
                                           std::vector<int64_t>(size_t(flats) + 1, 0));
    std::vector<uint32_t> counts(size_t(flats), 0);
    int64_t num_zero = flats;
    ++hist[0][0];
    for (uint64_t i = 1; i < (uint64_t(1) << N); ++i) {
        const uint32_t gray = uint32_t(i ^ (i >> 1));
        const unsigned bit = unsigned(__builtin_ctzll(i));
        const bool added = (gray >> bit) & 1;
        const uint32_t* fl = table.flats_through(PointId(bit));
        for (int64_t t = 0; t < deg; ++t) {
            uint32_t& c = counts[fl[t]];
            if (added) {
                if (c++ == 0) --num_zero;
            } else {
                if (--c == 0) ++num_zero;
            }
        }
        ++hist[size_t(__builtin_popcount(gray))][size_t(flats - num_zero)];
    }

    std::vector<BigRat> th_pow(size_t(N) + 1), om_pow(size_t(N + flats) + 1);
    th_pow[0] = 1;
    om_pow[0] = 1;
    const BigRat om = BigRat(1) - theta;
    for (size_t k = 1; k < th_pow.size(); ++k) th_pow[k] = th_pow[k - 1] * theta;
    for (size_t k = 1; k < om_pow.size(); ++k) om_pow[k] = om_pow[k - 1] * om;

    BigRat none = 0;
    for (int64_t s = 0; s <= N; ++s)
        for (int64_t t = 0; t <= flats; ++t)
            if (hist[size_t(s)][size_t(t)])
                none += BigRat(hist[size_t(s)][size_t(t)]) * th_pow[size_t(s)] *
                        om_pow[size_t(N - s + t)];
    ExactResult out;
    out.instance_size = int64_t(1) << N;
    out.value = BigRat(1) - none;
    out.value_real = rat_to_double(out.value);
    return out;
}

struct BruteFamily {
    BigInt size;
    IntersectionProfile profile;
};

/// Materializes the family and buckets all ordered pairs by intersection
/// size. Ground truth for the closed-form profiles.
inline BruteFamily brute_family(const FamilySpec& spec, bool with_profile = true) {
    spec.validate();
    Space sp(spec.q, spec.n);
    const int64_t kMaxMembers = 100'000;
    std::vector<std::vector<PointId>> members;

    auto push_combinations = [&](const std::vector<PointId>& pts, int64_t ell, auto&& sink) {
        std::vector<size_t> idx(static_cast<size_t>(ell));
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::vector<PointId> subset(static_cast<size_t>(ell));
        while (true) {
            for (size_t i = 0; i < idx.size(); ++i) subset[i] = pts[idx[i]];
            sink(subset);
            size_t i = idx.size();
            bool advanced = false;
            while (i-- > 0) {
                if (idx[i] != pts.size() - idx.size() + i) {
                    ++idx[i];
                    for (size_t j = i + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    };

    switch (spec.kind) {
        case FamilyKind::RichLine:
        case FamilyKind::RichMFlat: {
            FlatEnumerator en(sp, spec.m);
            const bool dedup = spec.m >= 2;  // an l-set in a small flat lies in many m-flats
            std::set<std::vector<PointId>> uniq;
            for (int64_t f = 0; f < en.size(); ++f) {
                std::vector<PointId> pts = flat_points(sp, en.at(f));
                std::sort(pts.begin(), pts.end());
                push_combinations(pts, spec.ell, [&](const std::vector<PointId>& s) {
                    if (dedup) {
                        uniq.insert(s);
                        if (int64_t(uniq.size()) > kMaxMembers)
                            throw TooLarge("family too large for brute enumeration");
                    } else {
                        members.push_back(s);
                        if (int64_t(members.size()) > kMaxMembers)
                            throw TooLarge("family too large for brute enumeration");
                    }
                });
            }
            if (dedup) members.assign(uniq.begin(), uniq.end());
            break;
        }
        case FamilyKind::ContainedMFlat: {
            FlatEnumerator en(sp, spec.m);
            if (en.size() > kMaxMembers) throw TooLarge("family too large for brute enumeration");
            for (int64_t f = 0; f < en.size(); ++f) {
                std::vector<PointId> pts = flat_points(sp, en.at(f));
                std::sort(pts.begin(), pts.end());
                members.push_back(std::move(pts));
            }
            break;
        }
        case FamilyKind::IncidencePairs: {
            FlatEnumerator en(sp, spec.m);
            const PointId offset = PointId(sp.num_points());
            for (int64_t f = 0; f < en.size(); ++f) {
                for (PointId p : flat_points(sp, en.at(f)))
                    members.push_back({p, offset + PointId(f)});
                if (int64_t(members.size()) > kMaxMembers)
                    throw TooLarge("family too large for brute enumeration");
            }
            break;
        }
    }

    BruteFamily out;
    out.size = BigInt(members.size());
    out.profile.ell = spec.kind == FamilyKind::IncidencePairs ? 2 : spec.ell;
    if (!with_profile) return out;

    std::map<int64_t, BigInt> buckets;
    for (size_t i = 0; i < members.size(); ++i) {
        buckets[int64_t(members[i].size())] += 1;  // diagonal pair (i, i)
        for (size_t j = i + 1; j < members.size(); ++j) {
            const auto &a = members[i], &b = members[j];
            int64_t k = 0;
            size_t x = 0, y = 0;
            while (x < a.size() && y < b.size()) {
                if (a[x] < b[y])
                    ++x;
                else if (a[x] > b[y])
                    ++y;
                else {
                    ++k;
                    ++x;
                    ++y;
                }
            }
            buckets[k] += 2;  // ordered pairs (i, j) and (j, i)
        }
    }
    for (const auto& [k, v] : buckets)
        if (v != 0) out.profile.entries[k] = {v, true};
    return out;
}

}  // namespace fgt
