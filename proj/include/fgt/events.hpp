#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fgt/counting.hpp"
#include "fgt/error.hpp"
#include "fgt/event_kind.hpp"
#include "fgt/geometry.hpp"
#include "fgt/rng.hpp"

namespace fgt {

/// Random point set: each point included independently with probability theta.
/// The draw for point p depends only on (seed, p), so X(theta1) is a subset of
/// X(theta2) whenever theta1 <= theta2 under the same seed.
inline PointSet sample_points(const Space& sp, double theta, SampleSeed seed) {
    PointSet X(sp.num_points());
    if (theta <= 0.0) return X;
    const int64_t N = sp.num_points();
    if (theta >= 1.0) {
        for (int64_t p = 0; p < N; ++p) X.insert(PointId(p));
        return X;
    }
    TrialRng rng(seed);
    for (int64_t p = 0; p < N; ++p)
        if (rng.uniform(rng::kDomainPoint + uint64_t(p)) <= theta) X.insert(PointId(p));
    return X;
}

/// Uniform l-subset of the point codes (sparse partial Fisher-Yates).
inline std::vector<PointId> sample_uniform_lset(const Space& sp, int64_t ell, SampleSeed seed) {
    const int64_t N = sp.num_points();
    if (ell < 0 || ell > N) throw InvalidParams("l-set size out of range");
    TrialRng rng(seed);
    std::unordered_map<int64_t, int64_t> moved;
    std::vector<PointId> out;
    out.reserve(size_t(ell));
    for (int64_t j = 0; j < ell; ++j) {
        double u = rng.uniform(rng::kDomainShuffle + uint64_t(j));
        int64_t r = j + int64_t(u * double(N - j));
        if (r >= N) r = N - 1;  // guard against rounding at u -> 1
        auto vj = moved.count(j) ? moved[j] : j;
        auto vr = moved.count(r) ? moved[r] : r;
        out.push_back(PointId(vr));
        moved[r] = vj;
    }
    return out;
}

/// Point and m-flat sets drawn independently with the same theta; the flat
/// bitset is indexed by the canonical flat enumeration order.
struct BipartiteSample {
    PointSet points;
    std::vector<uint64_t> flat_words;
    int64_t flat_count = 0;

    BipartiteSample(int64_t num_points, int64_t flats)
        : points(num_points), flat_words((size_t(flats) + 63) / 64, 0), flat_count(flats) {}

    void select_flat(int64_t f) { flat_words[size_t(f >> 6)] |= uint64_t(1) << (f & 63); }
    bool flat_selected(int64_t f) const {
        return (flat_words[size_t(f >> 6)] >> (f & 63)) & 1;
    }
};

inline BipartiteSample sample_bipartite(const Space& sp, int64_t flat_count, double theta,
                                        SampleSeed seed) {
    BipartiteSample s(sp.num_points(), flat_count);
    s.points = sample_points(sp, theta, seed);
    if (theta <= 0.0) return s;
    TrialRng rng(seed);
    for (int64_t f = 0; f < flat_count; ++f)
        if (theta >= 1.0 || rng.uniform(rng::kDomainFlat + uint64_t(f)) <= theta) s.select_flat(f);
    return s;
}

/// True iff every (m+1)-subset of the points has affine span of dimension
/// >= m, i.e. no (m-1)-flat holds more than m of them.
inline bool is_general_position(const Space& sp, const std::vector<PointId>& points, uint32_t m) {
    if (m < 1) throw InvalidParams("general position requires m >= 1");
    {
        std::vector<PointId> s(points);
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw DuplicatePoints("general-position test requires distinct points");
    }
    const size_t k = size_t(m) + 1;
    if (points.size() < k) return true;
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<PointId> subset(k);
    while (true) {
        for (size_t i = 0; i < k; ++i) subset[i] = points[idx[i]];
        if (affine_span(sp, subset).m < m) return false;
        // next combination
        size_t i = k;
        while (i-- > 0) {
            if (idx[i] != points.size() - k + i) {
                ++idx[i];
                for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return true;
        }
    }
}

/// Flats of one dimension with their point lists, built once and shared by
/// all trials. Optionally also the point -> flats incidence table (fixed
/// degree qbinom(n, m)).
class FlatTable {
public:
    FlatTable(const Space& sp, uint32_t m, int64_t budget, bool with_incidence)
        : en_(sp, m, budget) {
        flat_size_ = 1;
        for (uint32_t i = 0; i < m; ++i) flat_size_ *= sp.q();
        const int64_t count = en_.size();
        if (count * flat_size_ > 300'000'000)
            throw TooLarge("flat table would exceed the memory budget");
        points_.resize(size_t(count * flat_size_));
        for (int64_t f = 0; f < count; ++f) {
            std::vector<PointId> pts = flat_points(sp, en_.at(f));
            std::copy(pts.begin(), pts.end(), points_.begin() + size_t(f * flat_size_));
        }
        if (with_incidence) {
            degree_ = int64_t(count * flat_size_ / sp.num_points());
            incidence_.resize(size_t(sp.num_points() * degree_));
            std::vector<int64_t> fill(size_t(sp.num_points()), 0);
            for (int64_t f = 0; f < count; ++f)
                for (int64_t i = 0; i < flat_size_; ++i) {
                    PointId p = points_[size_t(f * flat_size_ + i)];
                    incidence_[size_t(int64_t(p) * degree_ + fill[p]++)] = uint32_t(f);
                }
        }
    }

    int64_t flat_count() const { return en_.size(); }
    int64_t flat_size() const { return flat_size_; }
    const PointId* points_of(int64_t f) const { return points_.data() + size_t(f * flat_size_); }
    bool has_incidence() const { return degree_ > 0; }
    int64_t degree() const { return degree_; }
    const uint32_t* flats_through(PointId p) const {
        return incidence_.data() + size_t(int64_t(p) * degree_);
    }
    const FlatEnumerator& enumerator() const { return en_; }

private:
    FlatEnumerator en_;
    int64_t flat_size_ = 1;
    int64_t degree_ = 0;
    std::vector<PointId> points_;
    std::vector<uint32_t> incidence_;
};

namespace detail {

// Scratch buffers for the sparse rich-flat counter. Entries are zeroed again
// after every call, so reuse across contexts of different sizes is safe.
struct RichScratch {
    std::vector<uint32_t> counts;
    std::vector<uint32_t> touched;
};
inline RichScratch& rich_scratch() {
    static thread_local RichScratch s;
    return s;
}

}  // namespace detail

/// Detector machinery for one (space, event) pair: immutable after
/// construction and shared across Monte Carlo workers.
class EventContext {
public:
    EventContext(const Space& sp, EventKind ev, int64_t budget = kDefaultFlatBudget)
        : sp_(sp), ev_(ev), budget_(budget) {
        ev_.validate(sp_.q(), sp_.n());
        switch (ev_.type) {
            case EventType::ContainedMFlat:
            case EventType::BlockingSet:
            case EventType::Incidence:
            case EventType::RichMFlat:
            case EventType::RichMFlatGeneralPosition:
                if (ev_.type != EventType::RichMFlat || ev_.m >= 2) ensure_table();
                break;
            case EventType::RichLine:
            case EventType::UniformCollapse:
                break;  // rich-line builds its table on first dense call
        }
    }

    const Space& space() const { return sp_; }
    const EventKind& event() const { return ev_; }

    int64_t flat_count() const {
        ensure_table();
        return table_->flat_count();
    }

    bool run_trial(double theta, SampleSeed seed) const {
        switch (ev_.type) {
            case EventType::RichLine:
            case EventType::RichMFlat:
                return detect_rich(sample_points(sp_, theta, seed));
            case EventType::RichMFlatGeneralPosition:
                return detect_rich_general_position(sample_points(sp_, theta, seed));
            case EventType::ContainedMFlat:
                return detect_contained(sample_points(sp_, theta, seed));
            case EventType::BlockingSet:
                return !detect_contained(sample_points(sp_, theta, seed).complement());
            case EventType::Incidence:
                return detect_incidence(
                    sample_bipartite(sp_, flat_count(), theta, seed));
            case EventType::UniformCollapse:
                return !is_general_position(sp_, sample_uniform_lset(sp_, ev_.ell, seed), ev_.m);
        }
        return false;
    }

    /// Some m-flat holds >= l points of X.
    bool detect_rich(const PointSet& X) const {
        const int64_t ell = ev_.ell;
        const uint32_t m = ev_.m;
        if (X.size() < ell) return false;
        if (ell <= int64_t(m) + 1) return true;  // any l <= m+1 points span <= m dims
        if (m == 1) return detect_rich_line(X, ell);
        ensure_table();
        if (X.size() * table_->degree() < table_->flat_count() * table_->flat_size() / 2)
            return sparse_rich(X, ell);
        return dense_rich(X, ell);
    }

    /// Some m-flat entirely inside X (= q^m-rich).
    bool detect_contained(const PointSet& X) const {
        int64_t flat_size = 1;
        for (uint32_t i = 0; i < ev_.m; ++i) flat_size *= sp_.q();
        if (X.size() < flat_size) return false;
        if (ev_.m == 1 && pair_seeding_cheaper(X)) return detect_rich_line(X, flat_size);
        ensure_table();
        const int64_t count = table_->flat_count();
        for (int64_t f = 0; f < count; ++f) {
            const PointId* pts = table_->points_of(f);
            bool all = true;
            for (int64_t i = 0; i < flat_size; ++i)
                if (!X.contains(pts[i])) {
                    all = false;
                    break;
                }
            if (all) return true;
        }
        return false;
    }

    bool detect_incidence(const BipartiteSample& s) const {
        ensure_table();
        const int64_t fs = table_->flat_size();
        for (size_t w = 0; w < s.flat_words.size(); ++w) {
            uint64_t bits = s.flat_words[w];
            while (bits) {
                int64_t f = int64_t(w) * 64 + __builtin_ctzll(bits);
                bits &= bits - 1;
                const PointId* pts = table_->points_of(f);
                for (int64_t i = 0; i < fs; ++i)
                    if (s.points.contains(pts[i])) return true;
            }
        }
        return false;
    }

    /// Some l-subset of X lies in an m-flat with no m-1 flat holding more
    /// than m of the chosen points.
    bool detect_rich_general_position(const PointSet& X) const {
        const int64_t ell = ev_.ell;
        const uint32_t m = ev_.m;
        if (X.size() < ell) return false;
        if (m == 1) return detect_rich(X);  // distinct points are always in general position
        ensure_table();
        const int64_t count = table_->flat_count();
        const int64_t fs = table_->flat_size();
        std::vector<PointId> inside;
        for (int64_t f = 0; f < count; ++f) {
            const PointId* pts = table_->points_of(f);
            inside.clear();
            for (int64_t i = 0; i < fs; ++i)
                if (X.contains(pts[i])) inside.push_back(pts[i]);
            if (int64_t(inside.size()) >= ell && has_gp_subset(inside, size_t(ell), m))
                return true;
        }
        return false;
    }

private:
    bool pair_seeding_cheaper(const PointSet& X) const {
        // pair seeding costs ~|X|^2 canonicalizations; the dense scan costs
        // ~flat_count early-exit walks
        double pairs = double(X.size()) * double(X.size() - 1);
        BigInt lines = count_m_flats(sp_.q(), sp_.n(), 1);
        return pairs < lines.convert_to<double>();
    }

    bool detect_rich_line(const PointSet& X, int64_t ell) const {
        if (!pair_seeding_cheaper(X)) {
            ensure_table();
            return dense_rich(X, ell);
        }
        std::vector<PointId> pts = X.to_points();
        std::unordered_set<uint64_t> seen;
        seen.reserve(pts.size() * pts.size() / 2 + 1);
        const uint32_t q = sp_.q();
        for (size_t i = 0; i < pts.size(); ++i) {
            for (size_t j = i + 1; j < pts.size(); ++j) {
                if (!seen.insert(line_key(sp_, pts[i], pts[j])).second) continue;
                int64_t cnt = 0;
                PointId d = sp_.point_sub(pts[j], pts[i]);
                PointId cur = pts[i];
                for (uint32_t c = 0; c < q; ++c) {
                    if (X.contains(cur)) ++cnt;
                    cur = sp_.point_add(cur, d);
                }
                if (cnt >= ell) return true;
            }
        }
        return false;
    }

    bool sparse_rich(const PointSet& X, int64_t ell) const {
        auto& scratch = detail::rich_scratch();
        if (scratch.counts.size() < size_t(table_->flat_count()))
            scratch.counts.assign(size_t(table_->flat_count()), 0);
        scratch.touched.clear();
        const int64_t deg = table_->degree();
        bool found = false;
        std::vector<PointId> pts = X.to_points();
        for (PointId p : pts) {
            const uint32_t* fl = table_->flats_through(p);
            for (int64_t i = 0; i < deg; ++i) {
                uint32_t f = fl[i];
                if (scratch.counts[f]++ == 0) scratch.touched.push_back(f);
                if (scratch.counts[f] >= uint32_t(ell)) {
                    found = true;
                    goto done;
                }
            }
        }
    done:
        for (uint32_t f : scratch.touched) scratch.counts[f] = 0;
        return found;
    }

    bool dense_rich(const PointSet& X, int64_t ell) const {
        const int64_t count = table_->flat_count();
        const int64_t fs = table_->flat_size();
        for (int64_t f = 0; f < count; ++f) {
            const PointId* pts = table_->points_of(f);
            int64_t cnt = 0;
            for (int64_t i = 0; i < fs; ++i) {
                if (X.contains(pts[i])) {
                    if (++cnt >= ell) return true;
                } else if (cnt + (fs - i - 1) < ell) {
                    break;
                }
            }
        }
        return false;
    }

    bool has_gp_subset(const std::vector<PointId>& pool, size_t ell, uint32_t m) const {
        std::vector<PointId> chosen;
        chosen.reserve(ell);
        return gp_backtrack(pool, 0, chosen, ell, m);
    }

    bool gp_backtrack(const std::vector<PointId>& pool, size_t start, std::vector<PointId>& chosen,
                      size_t ell, uint32_t m) const {
        if (chosen.size() == ell) return true;
        for (size_t i = start; i + (ell - chosen.size()) <= pool.size(); ++i) {
            if (!extension_valid(chosen, pool[i], m)) continue;
            chosen.push_back(pool[i]);
            if (gp_backtrack(pool, i + 1, chosen, ell, m)) return true;
            chosen.pop_back();
        }
        return false;
    }

    // every (m+1)-subset of chosen+{x} that contains x must span >= m dims
    bool extension_valid(const std::vector<PointId>& chosen, PointId x, uint32_t m) const {
        if (chosen.size() < m) return true;
        std::vector<size_t> idx(m);
        for (size_t i = 0; i < m; ++i) idx[i] = i;
        std::vector<PointId> subset(size_t(m) + 1);
        while (true) {
            for (size_t i = 0; i < m; ++i) subset[i] = chosen[idx[i]];
            subset[m] = x;
            if (affine_span(sp_, subset).m < m) return false;
            size_t i = m;
            bool advanced = false;
            while (i-- > 0) {
                if (idx[i] != chosen.size() - m + i) {
                    ++idx[i];
                    for (size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) return true;
        }
    }

    // Whether the event needs the incidence side of the table is fixed by the
    // event kind, so a single build-once suffices and workers never race.
    void ensure_table() const {
        std::call_once(once_, [&] {
            bool with_incidence = ev_.m >= 2 && (ev_.type == EventType::RichMFlat ||
                                                 ev_.type == EventType::RichMFlatGeneralPosition);
            table_ = std::make_unique<FlatTable>(sp_, ev_.m, budget_, with_incidence);
        });
    }

    Space sp_;
    EventKind ev_;
    int64_t budget_;
    mutable std::unique_ptr<FlatTable> table_;
    mutable std::once_flag once_;
};

// One-off forms of the detectors (tests and small instances); Monte Carlo
// loops should hold an EventContext instead.

inline bool detect_rich_flat(const Space& sp, const PointSet& X, uint32_t m, int64_t ell,
                             Flat* witness = nullptr, int64_t budget = kDefaultFlatBudget) {
    EventKind ev = (m == 1) ? EventKind::rich_line(ell) : EventKind::rich_mflat(m, ell);
    EventContext ctx(sp, ev, budget);
    bool found = ctx.detect_rich(X);
    if (found && witness) {
        FlatEnumerator en(sp, m, budget);
        for (int64_t f = 0; f < en.size(); ++f) {
            Flat fl = en.at(f);
            int64_t cnt = 0;
            for (PointId p : flat_points(sp, fl))
                if (X.contains(p)) ++cnt;
            if (cnt >= ell) {
                *witness = std::move(fl);
                break;
            }
        }
    }
    return found;
}

inline bool detect_contained_flat(const Space& sp, const PointSet& X, uint32_t m,
                                  int64_t budget = kDefaultFlatBudget) {
    EventContext ctx(sp, EventKind::contained_mflat(m), budget);
    return ctx.detect_contained(X);
}

inline bool is_blocking(const Space& sp, const PointSet& X, uint32_t m,
                        int64_t budget = kDefaultFlatBudget) {
    return !detect_contained_flat(sp, X.complement(), m, budget);
}

inline bool detect_incidence(const Space& sp, uint32_t m, const BipartiteSample& s,
                             int64_t budget = kDefaultFlatBudget) {
    EventContext ctx(sp, EventKind::incidence(m), budget);
    return ctx.detect_incidence(s);
}

inline bool run_trial(const EventKind& ev, const Space& sp, double theta, SampleSeed seed,
                      int64_t budget = kDefaultFlatBudget) {
    return EventContext(sp, ev, budget).run_trial(theta, seed);
}

}  // namespace fgt
