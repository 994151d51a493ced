#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fgt/error.hpp"

namespace fgt {

// Elements of F_q are value-encoded integers in [0, q): the base-p digits of
// the value are the coefficients of the residue polynomial (e > 1), or the
// residue itself (e = 1).
using FieldSymbol = uint32_t;

constexpr uint32_t kMaxFieldOrder = 65536;

/// Arithmetic in the finite field F_q, q = p^e a prime power.
///
/// Extension fields multiply through generator exp/log tables built once at
/// construction; prime fields reduce mod p directly. The modulus is the monic
/// irreducible polynomial of degree e whose coefficient vector, read as a
/// base-p integer (constant coefficient least significant, monic coefficient
/// included), is smallest.
class Field {
public:
    explicit Field(uint32_t q) {
        if (q < 2) throw NotPrimePower("field order must be at least 2, got " + std::to_string(q));
        if (q > kMaxFieldOrder) throw TooLarge("field order " + std::to_string(q) + " exceeds cap 65536");
        factorize(q);
        if (e_ > 1) {
            choose_modulus();
            build_tables();
        }
    }

    uint32_t q() const { return q_; }
    uint32_t p() const { return p_; }
    uint32_t e() const { return e_; }

    // Coefficient vector of the modulus, length e+1; empty for prime fields.
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    FieldSymbol add(FieldSymbol a, FieldSymbol b) const {
        if (p_ == 2) return a ^ b;
        if (e_ == 1) {
            uint32_t s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        return digitwise(a, b, /*subtract=*/false);
    }

    FieldSymbol sub(FieldSymbol a, FieldSymbol b) const {
        if (p_ == 2) return a ^ b;
        if (e_ == 1) return a >= b ? a - b : a + p_ - b;
        return digitwise(a, b, /*subtract=*/true);
    }

    FieldSymbol neg(FieldSymbol a) const { return sub(0, a); }

    FieldSymbol mul(FieldSymbol a, FieldSymbol b) const {
        if (a == 0 || b == 0) return 0;
        if (e_ == 1) return uint32_t((uint64_t(a) * b) % p_);
        uint32_t s = log_table_[a] + log_table_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_table_[s];
    }

    FieldSymbol inv(FieldSymbol a) const {
        if (a == 0) throw DivisionByZero("inverse of 0 in GF(" + std::to_string(q_) + ")");
        if (e_ == 1) return pow(a, p_ - 2);
        uint32_t l = log_table_[a];
        return exp_table_[l == 0 ? 0 : q_ - 1 - l];
    }

    FieldSymbol div(FieldSymbol a, FieldSymbol b) const { return mul(a, inv(b)); }

    FieldSymbol pow(FieldSymbol a, uint64_t k) const {
        FieldSymbol r = 1;
        while (k) {
            if (k & 1) r = mul(r, a);
            a = mul(a, a);
            k >>= 1;
        }
        return r;
    }

    // Multiplication by direct polynomial reduction, bypassing the tables.
    // Reference path for table validation.
    FieldSymbol mul_direct(FieldSymbol a, FieldSymbol b) const {
        if (e_ == 1) return uint32_t((uint64_t(a) * b) % p_);
        return poly_mul_mod(a, b);
    }

private:
    void factorize(uint32_t q) {
        uint32_t p = 0;
        for (uint32_t d = 2; d * d <= q; ++d) {
            if (q % d == 0) {
                p = d;
                break;
            }
        }
        if (p == 0) p = q;  // q itself prime
        uint32_t e = 0, r = q;
        while (r % p == 0) {
            r /= p;
            ++e;
        }
        if (r != 1)
            throw NotPrimePower(std::to_string(q) + " is not a prime power");
        p_ = p;
        e_ = e;
        q_ = q;
    }

    // Digits of v in base p, least significant first, padded to len.
    std::vector<uint32_t> to_digits(uint32_t v, uint32_t len) const {
        std::vector<uint32_t> d(len, 0);
        for (uint32_t i = 0; i < len && v; ++i) {
            d[i] = v % p_;
            v /= p_;
        }
        return d;
    }

    uint32_t digitwise(FieldSymbol a, FieldSymbol b, bool subtract) const {
        uint32_t r = 0, mult = 1;
        for (uint32_t i = 0; i < e_; ++i) {
            uint32_t da = a % p_, db = b % p_;
            a /= p_;
            b /= p_;
            uint32_t dc = subtract ? (da >= db ? da - db : da + p_ - db)
                                   : (da + db >= p_ ? da + db - p_ : da + db);
            r += dc * mult;
            mult *= p_;
        }
        return r;
    }

    // Remainder of polynomial division a / b over F_p, coefficients LSB-first.
    static std::vector<uint32_t> poly_mod(std::vector<uint32_t> a, const std::vector<uint32_t>& b,
                                          uint32_t p) {
        while (!a.empty() && a.back() == 0) a.pop_back();
        std::vector<uint32_t> bb = b;
        while (!bb.empty() && bb.back() == 0) bb.pop_back();
        // bb is monic by construction everywhere this is called
        while (a.size() >= bb.size() && !a.empty()) {
            uint32_t c = a.back();
            size_t shift = a.size() - bb.size();
            for (size_t i = 0; i < bb.size(); ++i) {
                uint64_t t = uint64_t(c) * bb[i] % p;
                uint32_t& ai = a[shift + i];
                ai = uint32_t((ai + p - t) % p);
            }
            while (!a.empty() && a.back() == 0) a.pop_back();
        }
        return a;
    }

    // A monic polynomial of degree e is reducible iff some monic polynomial of
    // degree in [1, e/2] divides it.
    bool is_irreducible(const std::vector<uint32_t>& poly) const {
        uint32_t deg = uint32_t(poly.size()) - 1;
        for (uint32_t d = 1; 2 * d <= deg; ++d) {
            uint32_t count = 1;
            for (uint32_t i = 0; i < d; ++i) count *= p_;
            for (uint32_t low = 0; low < count; ++low) {
                std::vector<uint32_t> divisor = to_digits(low, d);
                divisor.push_back(1);  // monic
                if (poly_mod(poly, divisor, p_).empty()) return false;
            }
        }
        return true;
    }

    void choose_modulus() {
        uint32_t count = 1;
        for (uint32_t i = 0; i < e_; ++i) count *= p_;
        for (uint32_t low = 0; low < count; ++low) {
            std::vector<uint32_t> cand = to_digits(low, e_);
            cand.push_back(1);
            if (is_irreducible(cand)) {
                modulus_ = cand;
                return;
            }
        }
        throw Error("no irreducible polynomial found (unreachable for prime powers)");
    }

    FieldSymbol poly_mul_mod(FieldSymbol a, FieldSymbol b) const {
        std::vector<uint32_t> da = to_digits(a, e_), db = to_digits(b, e_);
        std::vector<uint32_t> prod(2 * e_ - 1, 0);
        for (uint32_t i = 0; i < e_; ++i) {
            if (da[i] == 0) continue;
            for (uint32_t j = 0; j < e_; ++j)
                prod[i + j] = uint32_t((prod[i + j] + uint64_t(da[i]) * db[j]) % p_);
        }
        std::vector<uint32_t> rem = poly_mod(prod, modulus_, p_);
        uint32_t v = 0, mult = 1;
        for (size_t i = 0; i < rem.size(); ++i) {
            v += rem[i] * mult;
            mult *= p_;
        }
        return v;
    }

    void build_tables() {
        exp_table_.assign(q_ - 1, 0);
        log_table_.assign(q_, 0);
        for (FieldSymbol g = 2; g < q_; ++g) {
            bool ok = true;
            std::vector<bool> seen(q_, false);
            FieldSymbol x = 1;
            for (uint32_t k = 0; k < q_ - 1; ++k) {
                if (seen[x]) {
                    ok = false;
                    break;
                }
                seen[x] = true;
                exp_table_[k] = x;
                log_table_[x] = k;
                x = poly_mul_mod(x, g);
            }
            if (ok) return;  // g generates the full multiplicative group
        }
        throw Error("no multiplicative generator found (unreachable)");
    }

    uint32_t q_ = 0, p_ = 0, e_ = 0;
    std::vector<uint32_t> modulus_;
    std::vector<FieldSymbol> exp_table_;
    std::vector<uint32_t> log_table_;
};

}  // namespace fgt
