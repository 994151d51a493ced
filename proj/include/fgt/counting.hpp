#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fgt/bigint.hpp"
#include "fgt/error.hpp"
#include "fgt/event_kind.hpp"
#include "fgt/gf.hpp"

namespace fgt {

inline bool is_prime_power(uint32_t q) {
    if (q < 2) return false;
    uint32_t p = 0;
    for (uint32_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            p = d;
            break;
        }
    }
    if (p == 0) return true;
    while (q % p == 0) q /= p;
    return q == 1;
}

/// Number of m-dimensional linear subspaces of F_q^n, exact.
inline BigInt gaussian_binomial(uint32_t n, uint32_t m, uint32_t q) {
    if (q < 2) throw InvalidParams("gaussian binomial requires q >= 2");
    if (m > n) return 0;
    BigInt num = 1, den = 1;
    const BigInt qn = big_pow(q, n), qm = big_pow(q, m);
    BigInt qi = 1;
    for (uint32_t i = 0; i < m; ++i) {
        num *= qn - qi;
        den *= qm - qi;
        qi *= q;
    }
    return num / den;  // exact by the subspace-count interpretation
}

inline BigInt count_m_flats(uint32_t q, uint32_t n, uint32_t m) {
    if (m > n) throw InvalidParams("count_m_flats requires m <= n");
    return big_pow(q, n - m) * gaussian_binomial(n, m, q);
}

enum class FamilyKind { RichLine, RichMFlat, ContainedMFlat, IncidencePairs };

struct FamilySpec {
    FamilyKind kind = FamilyKind::RichLine;
    uint32_t q = 2, n = 2, m = 1;
    int64_t ell = 2;  // derived for ContainedMFlat (q^m) and IncidencePairs (2)

    static FamilySpec rich_line(uint32_t q, uint32_t n, int64_t ell) {
        return {FamilyKind::RichLine, q, n, 1, ell};
    }
    static FamilySpec rich_mflat(uint32_t q, uint32_t n, uint32_t m, int64_t ell) {
        return {FamilyKind::RichMFlat, q, n, m, ell};
    }
    static FamilySpec contained_mflat(uint32_t q, uint32_t n, uint32_t m) {
        FamilySpec s{FamilyKind::ContainedMFlat, q, n, m, 0};
        s.ell = s.flat_size();
        return s;
    }
    static FamilySpec incidence_pairs(uint32_t q, uint32_t n, uint32_t m) {
        return {FamilyKind::IncidencePairs, q, n, m, 2};
    }

    int64_t flat_size() const {
        int64_t s = 1;
        for (uint32_t i = 0; i < m; ++i) s *= q;
        return s;
    }

    void validate() const {
        if (!is_prime_power(q)) throw NotPrimePower("q must be a prime power");
        if (m < 1 || m >= n) throw InvalidParams("require 1 <= m < n");
        if (kind == FamilyKind::RichLine && m != 1)
            throw InvalidParams("rich-line family has m = 1");
        if (kind == FamilyKind::RichLine || kind == FamilyKind::RichMFlat) {
            if (ell < 2 || ell > flat_size()) throw InvalidParams("require 2 <= l <= q^m");
        }
    }
};

struct FamilyStats {
    BigInt size;      // exact count, or an upper bound when size_exact is false
    double log_size = 0.0;
    bool size_exact = true;
    // leading-order log |F| from the rich-m-flat estimate; NaN when size is exact
    double leading_order_log = std::numeric_limits<double>::quiet_NaN();
};

struct ProfileEntry {
    BigInt value;
    bool exact = true;
};

/// Map k -> I_k = #{(S,T) in F x F : |S cap T| = k}. Absent keys are exact
/// zeros. Entries may be flagged as upper bounds where the closed form is one.
struct IntersectionProfile {
    int64_t ell = 0;  // family member size; diagonal pairs land at k = ell
    std::map<int64_t, ProfileEntry> entries;

    ProfileEntry at(int64_t k) const {
        auto it = entries.find(k);
        return it == entries.end() ? ProfileEntry{0, true} : it->second;
    }
    bool all_exact() const {
        for (const auto& [k, e] : entries)
            if (!e.exact) return false;
        return true;
    }
    BigInt total() const {
        BigInt s = 0;
        for (const auto& [k, e] : entries) s += e.value;
        return s;
    }
};

inline FamilyStats family_size(const FamilySpec& spec) {
    spec.validate();
    FamilyStats st;
    switch (spec.kind) {
        case FamilyKind::RichLine:
            st.size = count_m_flats(spec.q, spec.n, 1) * big_binomial(spec.q, spec.ell);
            break;
        case FamilyKind::RichMFlat:
            if (spec.m == 1) {
                st.size = count_m_flats(spec.q, spec.n, 1) * big_binomial(spec.q, spec.ell);
            } else {
                // (flat, l-subset) incidence pairs: an upper bound on |F| since an
                // l-set inside a lower-dimensional flat lies in many m-flats
                st.size =
                    count_m_flats(spec.q, spec.n, spec.m) * big_binomial(spec.flat_size(), spec.ell);
                st.size_exact = false;
                st.leading_order_log =
                    double((spec.n - spec.m) * (spec.m + 1) + uint64_t(spec.m) * spec.ell) *
                    std::log(double(spec.q));
            }
            break;
        case FamilyKind::ContainedMFlat:
            st.size = count_m_flats(spec.q, spec.n, spec.m);
            break;
        case FamilyKind::IncidencePairs:
            st.size = count_m_flats(spec.q, spec.n, spec.m) * spec.flat_size();
            break;
    }
    st.log_size = big_log(st.size);
    return st;
}

inline IntersectionProfile intersection_profile(const FamilySpec& spec) {
    spec.validate();
    IntersectionProfile prof;
    const uint32_t q = spec.q, n = spec.n, m = spec.m;

    if (spec.kind == FamilyKind::RichLine || (spec.kind == FamilyKind::RichMFlat && m == 1)) {
        const int64_t ell = spec.ell;
        prof.ell = ell;
        const BigInt F = family_size(spec).size;
        const BigInt lines_through_point = (big_pow(q, n) - 1) / (q - 1);

        prof.entries[ell] = {F, true};
        BigInt running = F;
        for (int64_t k = 2; k <= ell - 1; ++k) {
            BigInt ik = F * big_binomial(ell, k) * big_binomial(int64_t(q) - ell, ell - k);
            if (ik != 0) prof.entries[k] = {ik, true};
            running += ik;
        }
        if (ell >= 2) {
            // cross-line pairs through the shared point, plus same-line pairs
            BigInt i1 = F * ell *
                        ((lines_through_point - 1) * big_binomial(int64_t(q) - 1, ell - 1) +
                         big_binomial(int64_t(q) - ell, ell - 1));
            prof.entries[1] = {i1, true};
            running += i1;
        }
        prof.entries[0] = {F * F - running, true};
        return prof;
    }

    if (spec.kind == FamilyKind::ContainedMFlat) {
        const int64_t ell = spec.ell;  // q^m
        prof.ell = ell;
        const BigInt F = count_m_flats(q, n, m);
        prof.entries[ell] = {F, true};
        // Two distinct m-flats meet in a d-flat or not at all; the exact
        // I_{q^d} has no closed form here, so report the 4^3 q^... bound.
        int64_t qd = 1;
        for (uint32_t d = 0; d < m; ++d) {
            BigInt bound = 64 * big_pow(q, uint64_t(n - d) * (d + 1) +
                                               2 * uint64_t(n - m) * (m - d));
            prof.entries[qd] = {bound, false};
            qd *= q;
        }
        prof.entries[0] = {F * F - F, false};  // trivial off-diagonal bound
        return prof;
    }

    if (spec.kind == FamilyKind::IncidencePairs) {
        prof.ell = 2;
        const BigInt flats = count_m_flats(q, n, m);
        const BigInt through = gaussian_binomial(n, m, q);  // m-flats through a point
        const BigInt F = flats * spec.flat_size();
        BigInt i1 = big_pow(q, n) * through * (through - 1) +
                    flats * spec.flat_size() * (spec.flat_size() - 1);
        prof.entries[2] = {F, true};
        prof.entries[1] = {i1, true};
        prof.entries[0] = {F * F - F - i1, true};
        return prof;
    }

    throw Unsupported("no closed-form profile for rich m-flats with m >= 2; use the oracle");
}

struct ThresholdInfo {
    double value = 0.0;      // clamped to (0, 1]
    double log_value = 0.0;  // natural log of the unclamped theorem value
    // exact |F|^{-1/l} where the exact family size exists
    double exact_size_companion = std::numeric_limits<double>::quiet_NaN();
    // l q^{-m} sharp-threshold companion for rich-flat events
    double sharp_companion = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
};

inline double log_binomial(double a, double b) {
    if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
    return std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1);
}

/// Theorem threshold for the event, evaluated in log space.
inline ThresholdInfo predicted_threshold(const EventKind& ev, uint32_t q, uint32_t n) {
    ev.validate(q, n);
    if (!is_prime_power(q)) throw NotPrimePower("q must be a prime power");
    const double lq = std::log(double(q));
    const uint32_t m = ev.m;
    const int64_t ell = ev.ell;
    ThresholdInfo out;

    switch (ev.type) {
        case EventType::RichLine: {
            out.log_value = -((2.0 * n - 2.0) * lq + log_binomial(q, double(ell))) / double(ell);
            out.exact_size_companion = std::exp(
                -big_log(count_m_flats(q, n, 1) * big_binomial(q, ell)) / double(ell));
            out.sharp_companion = double(ell) / double(q);
            if (ell < 3) out.warnings.push_back("outside theorem regime: l < 3");
            if (double(ell) > 1.0 + 2.0 * (2.0 * n - 2.0) * lq)
                out.warnings.push_back("outside theorem regime: l not O(n log q)");
            break;
        }
        case EventType::RichMFlat:
        case EventType::RichMFlatGeneralPosition: {
            double expo = double((n - m) * (m + 1)) + double(m) * double(ell);
            out.log_value = -expo * lq / double(ell);
            out.sharp_companion = double(ell) * std::pow(double(q), -double(m));
            if (m == 1) {
                out.exact_size_companion = std::exp(
                    -big_log(count_m_flats(q, n, 1) * big_binomial(q, ell)) / double(ell));
            }
            if (n < 3 && m >= 2) out.warnings.push_back("outside theorem regime: n < 3");
            if (ell <= int64_t(m) + 1)
                out.warnings.push_back("degenerate: any l <= m+1 points lie in some m-flat");
            break;
        }
        case EventType::ContainedMFlat: {
            double qm = std::pow(double(q), double(m));
            out.log_value = -double(n) * double(m + 1) * lq / qm;
            out.exact_size_companion =
                std::exp(-big_log(count_m_flats(q, n, m)) / qm);
            if (2 * m >= n) out.warnings.push_back("outside theorem regime: 2m >= n");
            break;
        }
        case EventType::BlockingSet: {
            double qm = std::pow(double(q), double(m));
            out.log_value = std::log(double(n) * lq / qm);
            if (2 * m >= n) out.warnings.push_back("outside theorem regime: m >= n/2");
            if (double(n) * lq >= qm)
                out.warnings.push_back("outside theorem regime: n log q >= q^m");
            break;
        }
        case EventType::Incidence: {
            double expo = (m == 1 || m == n - 1)
                              ? 0.5 * (double((n - m) * (m + 1)) + double(m))
                              : double(n);
            out.log_value = -expo * lq;
            out.exact_size_companion = std::exp(
                -0.5 * big_log(count_m_flats(q, n, m) * big_pow(q, m)));
            break;
        }
        case EventType::UniformCollapse:
            throw InvalidParams("uniform-collapse ignores theta and has no threshold");
    }

    out.value = std::exp(std::min(out.log_value, 0.0));
    if (out.value <= 0.0) out.value = std::numeric_limits<double>::min();
    return out;
}

}  // namespace fgt
