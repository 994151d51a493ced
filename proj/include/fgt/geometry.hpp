#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fgt/bigint.hpp"
#include "fgt/error.hpp"
#include "fgt/gf.hpp"

namespace fgt {

// Points of F_q^n are integer-encoded: coordinate i is the i-th base-q digit.
using PointId = uint32_t;

constexpr int64_t kMaxSpacePoints = int64_t(1) << 31;
constexpr int64_t kDefaultFlatBudget = 100'000'000;

class Space {
public:
    Space(uint32_t q, uint32_t n) : field_(q), n_(n) {
        if (n < 1) throw InvalidParams("space dimension must be >= 1");
        num_points_ = 1;
        for (uint32_t i = 0; i < n; ++i) {
            num_points_ *= q;
            if (num_points_ > kMaxSpacePoints)
                throw TooLarge("q^n exceeds the 2^31 enumeration cap");
        }
    }

    const Field& field() const { return field_; }
    uint32_t q() const { return field_.q(); }
    uint32_t n() const { return n_; }
    int64_t num_points() const { return num_points_; }

    void decode(PointId code, std::vector<FieldSymbol>& out) const {
        out.assign(n_, 0);
        for (uint32_t i = 0; i < n_ && code; ++i) {
            out[i] = code % q();
            code /= q();
        }
    }

    std::vector<FieldSymbol> decode(PointId code) const {
        std::vector<FieldSymbol> d;
        decode(code, d);
        return d;
    }

    PointId encode(const std::vector<FieldSymbol>& digits) const {
        PointId code = 0;
        for (uint32_t i = n_; i-- > 0;) code = code * q() + digits[i];
        return code;
    }

    // Coordinate-wise field addition of encoded points.
    PointId point_add(PointId a, PointId b) const {
        if (field_.p() == 2) return a ^ b;  // base-q digits are bit groups
        PointId r = 0, mult = 1;
        for (uint32_t i = 0; i < n_; ++i) {
            r += field_.add(a % q(), b % q()) * mult;
            a /= q();
            b /= q();
            mult *= q();
        }
        return r;
    }

    PointId point_sub(PointId a, PointId b) const {
        if (field_.p() == 2) return a ^ b;
        PointId r = 0, mult = 1;
        for (uint32_t i = 0; i < n_; ++i) {
            r += field_.sub(a % q(), b % q()) * mult;
            a /= q();
            b /= q();
            mult *= q();
        }
        return r;
    }

private:
    Field field_;
    uint32_t n_;
    int64_t num_points_;
};

/// Canonical affine m-flat: basis in reduced row-echelon form (strictly
/// increasing unit pivots, zeros above/below) and a translate whose pivot
/// coordinates are all zero. The pair is unique per point set, so flats
/// compare by field equality.
struct Flat {
    uint32_t m = 0;
    uint32_t n = 0;
    std::vector<FieldSymbol> basis;      // m x n, row-major
    std::vector<FieldSymbol> translate;  // length n
    std::vector<uint32_t> pivots;        // length m, strictly increasing

    bool operator==(const Flat&) const = default;

    FieldSymbol basis_at(uint32_t row, uint32_t col) const { return basis[row * n + col]; }
};

class PointSet {
public:
    explicit PointSet(int64_t universe)
        : universe_(universe), words_((size_t(universe) + 63) / 64, 0) {}

    void insert(PointId p) {
        uint64_t& w = words_[p >> 6];
        uint64_t bit = uint64_t(1) << (p & 63);
        if (!(w & bit)) {
            w |= bit;
            ++size_;
        }
    }

    void erase(PointId p) {
        uint64_t& w = words_[p >> 6];
        uint64_t bit = uint64_t(1) << (p & 63);
        if (w & bit) {
            w &= ~bit;
            --size_;
        }
    }

    bool contains(PointId p) const { return (words_[p >> 6] >> (p & 63)) & 1; }

    int64_t size() const { return size_; }
    int64_t universe() const { return universe_; }

    PointSet complement() const {
        PointSet c(universe_);
        for (size_t i = 0; i < words_.size(); ++i) c.words_[i] = ~words_[i];
        // mask tail bits beyond the universe
        unsigned tail = unsigned(universe_ & 63);
        if (tail) c.words_.back() &= (uint64_t(1) << tail) - 1;
        c.size_ = universe_ - size_;
        return c;
    }

    std::vector<PointId> to_points() const {
        std::vector<PointId> pts;
        pts.reserve(size_t(size_));
        for (size_t w = 0; w < words_.size(); ++w) {
            uint64_t bits = words_[w];
            while (bits) {
                unsigned b = unsigned(__builtin_ctzll(bits));
                pts.push_back(PointId(w * 64 + b));
                bits &= bits - 1;
            }
        }
        return pts;
    }

private:
    int64_t universe_;
    std::vector<uint64_t> words_;
    int64_t size_ = 0;
};

inline std::vector<PointId> flat_points(const Space& sp, const Flat& f) {
    const uint32_t q = sp.q();
    std::vector<PointId> row_codes(f.m);
    for (uint32_t i = 0; i < f.m; ++i) {
        std::vector<FieldSymbol> row(f.basis.begin() + i * f.n, f.basis.begin() + (i + 1) * f.n);
        row_codes[i] = sp.encode(row);
    }
    const PointId base = sp.encode(f.translate);
    int64_t total = 1;
    for (uint32_t i = 0; i < f.m; ++i) total *= q;

    std::vector<PointId> pts;
    pts.reserve(size_t(total));
    const Field& F = sp.field();
    std::vector<FieldSymbol> coeff(f.m, 0);
    for (int64_t it = 0; it < total; ++it) {
        PointId p = base;
        for (uint32_t i = 0; i < f.m; ++i) {
            if (coeff[i] == 0) continue;
            // add coeff[i] * row_i coordinate-wise
            PointId rc = row_codes[i], scaled = 0, mult = 1;
            for (uint32_t j = 0; j < f.n; ++j) {
                scaled += F.mul(coeff[i], rc % q) * mult;
                rc /= q;
                mult *= q;
            }
            p = sp.point_add(p, scaled);
        }
        pts.push_back(p);
        for (uint32_t i = 0; i < f.m; ++i) {  // base-q odometer
            if (++coeff[i] < q) break;
            coeff[i] = 0;
        }
    }
    return pts;
}

/// Smallest flat containing all given points: subtract the first point,
/// row-reduce the differences, re-canonicalize the translate.
inline Flat affine_span(const Space& sp, const std::vector<PointId>& points) {
    if (points.empty()) throw EmptyInput("affine_span of no points");
    const Field& F = sp.field();
    const uint32_t n = sp.n();

    std::vector<std::vector<FieldSymbol>> rows;
    std::vector<FieldSymbol> t0 = sp.decode(points[0]);
    for (size_t i = 1; i < points.size(); ++i)
        rows.push_back(sp.decode(sp.point_sub(points[i], points[0])));

    // Gauss-Jordan to RREF.
    std::vector<uint32_t> pivots;
    size_t rank = 0;
    for (uint32_t col = 0; col < n && rank < rows.size(); ++col) {
        size_t sel = rank;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        FieldSymbol ip = F.inv(rows[rank][col]);
        for (uint32_t j = col; j < n; ++j) rows[rank][j] = F.mul(rows[rank][j], ip);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            FieldSymbol c = rows[r][col];
            for (uint32_t j = col; j < n; ++j)
                rows[r][j] = F.sub(rows[r][j], F.mul(c, rows[rank][j]));
        }
        pivots.push_back(col);
        ++rank;
    }

    Flat f;
    f.m = uint32_t(rank);
    f.n = n;
    f.pivots = pivots;
    f.basis.reserve(rank * n);
    for (size_t r = 0; r < rank; ++r)
        f.basis.insert(f.basis.end(), rows[r].begin(), rows[r].end());
    // zero the translate at pivot columns
    for (size_t r = 0; r < rank; ++r) {
        FieldSymbol c = t0[pivots[r]];
        if (c == 0) continue;
        for (uint32_t j = 0; j < n; ++j) t0[j] = F.sub(t0[j], F.mul(c, f.basis_at(uint32_t(r), j)));
    }
    f.translate = std::move(t0);
    return f;
}

inline bool flat_contains(const Space& sp, const Flat& f, PointId p) {
    const Field& F = sp.field();
    std::vector<FieldSymbol> v = sp.decode(sp.point_sub(p, sp.encode(f.translate)));
    for (uint32_t r = 0; r < f.m; ++r) {
        FieldSymbol c = v[f.pivots[r]];
        if (c == 0) continue;
        for (uint32_t j = f.pivots[r]; j < f.n; ++j)
            v[j] = F.sub(v[j], F.mul(c, f.basis_at(r, j)));
    }
    for (FieldSymbol d : v)
        if (d != 0) return false;
    return true;
}

// d_flat subseteq f: translate inside f and every basis direction in f's row space.
inline bool flat_contains_flat(const Space& sp, const Flat& f, const Flat& d_flat) {
    if (!flat_contains(sp, f, sp.encode(d_flat.translate))) return false;
    const Field& F = sp.field();
    for (uint32_t r0 = 0; r0 < d_flat.m; ++r0) {
        std::vector<FieldSymbol> v(d_flat.basis.begin() + r0 * d_flat.n,
                                   d_flat.basis.begin() + (r0 + 1) * d_flat.n);
        for (uint32_t r = 0; r < f.m; ++r) {
            FieldSymbol c = v[f.pivots[r]];
            if (c == 0) continue;
            for (uint32_t j = f.pivots[r]; j < f.n; ++j)
                v[j] = F.sub(v[j], F.mul(c, f.basis_at(r, j)));
        }
        for (FieldSymbol d : v)
            if (d != 0) return false;
    }
    return true;
}

/// Deterministic random-access enumeration of all canonical m-flats.
///
/// Order: pivot-column combinations lexicographically, then free basis
/// entries in base-q counter order, then translates in base-q counter order.
/// Workers can partition [0, size()) and reconstruct identical streams.
class FlatEnumerator {
public:
    FlatEnumerator(const Space& sp, uint32_t m, int64_t budget = kDefaultFlatBudget)
        : sp_(&sp), m_(m) {
        const uint32_t n = sp.n();
        if (m > n) throw InvalidParams("flat dimension exceeds space dimension");

        // lexicographic pivot-column combinations
        std::vector<uint32_t> combo(m);
        for (uint32_t i = 0; i < m; ++i) combo[i] = i;
        bool more = true;
        if (m == 0) {
            combos_.push_back({});
            more = false;
        }
        while (more) {
            combos_.push_back(combo);
            // next combination
            int64_t i = int64_t(m) - 1;
            while (i >= 0 && combo[size_t(i)] == n - m + uint32_t(i)) --i;
            if (i < 0) break;
            ++combo[size_t(i)];
            for (size_t j = size_t(i) + 1; j < m; ++j) combo[j] = combo[j - 1] + 1;
        }

        int64_t translates = 1;
        for (uint32_t i = 0; i < n - m; ++i) translates *= sp.q();
        block_start_.reserve(combos_.size() + 1);
        block_start_.push_back(0);
        for (const auto& c : combos_) {
            int64_t free_slots = free_positions(c).size();
            int64_t block = translates;
            for (int64_t i = 0; i < free_slots; ++i) {
                block *= sp.q();
                if (block_start_.back() + block > budget)
                    throw BudgetExceeded("flat enumeration exceeds budget of " +
                                         std::to_string(budget));
            }
            if (block_start_.back() + block > budget)
                throw BudgetExceeded("flat enumeration exceeds budget of " + std::to_string(budget));
            block_start_.push_back(block_start_.back() + block);
        }
        translates_per_basis_ = translates;
    }

    int64_t size() const { return block_start_.back(); }
    uint32_t m() const { return m_; }

    Flat at(int64_t index) const {
        if (index < 0 || index >= size()) throw InvalidParams("flat index out of range");
        size_t c = size_t(std::upper_bound(block_start_.begin(), block_start_.end(), index) -
                          block_start_.begin()) - 1;
        int64_t off = index - block_start_[c];
        const auto& pivots = combos_[c];
        const uint32_t n = sp_->n(), q = sp_->q();

        int64_t t_idx = off % translates_per_basis_;
        int64_t b_idx = off / translates_per_basis_;

        Flat f;
        f.m = m_;
        f.n = n;
        f.pivots = pivots;
        f.basis.assign(size_t(m_) * n, 0);
        for (uint32_t i = 0; i < m_; ++i) f.basis[i * n + pivots[i]] = 1;
        for (auto [row, col] : free_positions(pivots)) {
            f.basis[row * n + col] = FieldSymbol(b_idx % q);
            b_idx /= q;
        }
        f.translate.assign(n, 0);
        std::vector<bool> is_pivot(n, false);
        for (uint32_t p : pivots) is_pivot[p] = true;
        for (uint32_t j = 0; j < n; ++j) {
            if (is_pivot[j]) continue;
            f.translate[j] = FieldSymbol(t_idx % q);
            t_idx /= q;
        }
        return f;
    }

private:
    // Mutable basis slots for a pivot set: (row, col) with col > pivots[row]
    // and col not itself a pivot; row-major order.
    std::vector<std::pair<uint32_t, uint32_t>> free_positions(
        const std::vector<uint32_t>& pivots) const {
        std::vector<bool> is_pivot(sp_->n(), false);
        for (uint32_t p : pivots) is_pivot[p] = true;
        std::vector<std::pair<uint32_t, uint32_t>> slots;
        for (uint32_t i = 0; i < m_; ++i)
            for (uint32_t j = pivots[i] + 1; j < sp_->n(); ++j)
                if (!is_pivot[j]) slots.emplace_back(i, j);
        return slots;
    }

    const Space* sp_;
    uint32_t m_;
    std::vector<std::vector<uint32_t>> combos_;
    std::vector<int64_t> block_start_;
    int64_t translates_per_basis_ = 1;
};

/// All m-flats containing d_flat; count is qbinom(n-d, m-d).
inline std::vector<Flat> flats_through(const Space& sp, const Flat& d_flat, uint32_t m,
                                       int64_t budget = kDefaultFlatBudget) {
    if (d_flat.m > m) throw InvalidParams("containing flats must have dimension >= d");
    FlatEnumerator en(sp, m, budget);
    std::vector<Flat> out;
    for (int64_t i = 0; i < en.size(); ++i) {
        Flat f = en.at(i);
        if (flat_contains_flat(sp, f, d_flat)) out.push_back(std::move(f));
    }
    return out;
}

// Canonical line through two distinct points, as a compact memoization key
// (direction_code * q^n + translate_code). Agrees with the RREF canonical form.
inline uint64_t line_key(const Space& sp, PointId a, PointId b) {
    const Field& F = sp.field();
    const uint32_t q = sp.q();
    PointId d = sp.point_sub(b, a);
    // first nonzero digit of d is the pivot
    PointId tmp = d;
    uint32_t piv = 0;
    FieldSymbol pd = 0;
    while (tmp) {
        pd = tmp % q;
        if (pd != 0) break;
        tmp /= q;
        ++piv;
    }
    FieldSymbol ip = F.inv(pd);
    PointId dir = 0, mult = 1, dv = d;
    for (uint32_t i = 0; i < sp.n(); ++i) {
        dir += F.mul(ip, dv % q) * mult;
        dv /= q;
        mult *= q;
    }
    // translate = a - a[piv] * dir
    PointId av = a;
    for (uint32_t i = 0; i < piv; ++i) av /= q;
    FieldSymbol apiv = av % q;
    PointId scaled = 0;
    mult = 1;
    dv = dir;
    for (uint32_t i = 0; i < sp.n(); ++i) {
        scaled += F.mul(apiv, dv % q) * mult;
        dv /= q;
        mult *= q;
    }
    PointId tr = sp.point_sub(a, scaled);
    return uint64_t(dir) * uint64_t(sp.num_points()) + uint64_t(tr);
}

}  // namespace fgt
