/*
 * Copyright 2026 The eepaeks Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef EEPAEKS_FIELD_HPP_
#define EEPAEKS_FIELD_HPP_

#include <gmp.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <vector>

#include "eepaeks/errors.hpp"
#include "eepaeks/rng.hpp"

namespace eepaeks::detail {

using u128 = unsigned __int128;
using Limbs = std::array<std::uint64_t, 4>;  // little-endian limb order

// ---------------------------------------------------------------------------
// Raw 256-bit helpers
// ---------------------------------------------------------------------------

inline bool u256_is_zero(const Limbs& a) {
    return (a[0] | a[1] | a[2] | a[3]) == 0;
}

inline int u256_cmp(const Limbs& a, const Limbs& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

// out = a + b, returns carry
inline std::uint64_t u256_add(Limbs& out, const Limbs& a, const Limbs& b) {
    u128 carry = 0;
    for (int i = 0; i < 4; ++i) {
        u128 cur = (u128)a[i] + b[i] + carry;
        out[i] = static_cast<std::uint64_t>(cur);
        carry = cur >> 64;
    }
    return static_cast<std::uint64_t>(carry);
}

// out = a - b, returns borrow
inline std::uint64_t u256_sub(Limbs& out, const Limbs& a, const Limbs& b) {
    u128 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        u128 cur = (u128)a[i] - b[i] - borrow;
        out[i] = static_cast<std::uint64_t>(cur);
        borrow = (cur >> 64) & 1;
    }
    return static_cast<std::uint64_t>(borrow);
}

inline Limbs u256_from_be(std::span<const std::uint8_t> b) {
    Limbs r{};
    for (int limb = 0; limb < 4; ++limb) {
        std::uint64_t v = 0;
        for (int j = 0; j < 8; ++j)
            v = (v << 8) | b[static_cast<std::size_t>((3 - limb) * 8 + j)];
        r[static_cast<std::size_t>(limb)] = v;
    }
    return r;
}

inline void u256_to_be(const Limbs& a, std::uint8_t out[32]) {
    for (int limb = 0; limb < 4; ++limb)
        for (int j = 0; j < 8; ++j)
            out[(3 - limb) * 8 + j] =
                static_cast<std::uint8_t>(a[static_cast<std::size_t>(limb)] >> (56 - 8 * j));
}

// Montgomery product: out = a * b * 2^-256 mod p  (CIOS, unrolled).
// Requires p < 2^254 so intermediate sums fit five limbs.
inline void mont_mul(Limbs& out, const Limbs& a, const Limbs& b, const Limbs& p,
                     std::uint64_t n0) {
    std::uint64_t t0 = 0, t1 = 0, t2 = 0, t3 = 0, t4 = 0;
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t ai = a[static_cast<std::size_t>(i)];
        u128 c = (u128)ai * b[0] + t0;
        t0 = static_cast<std::uint64_t>(c);
        c = (u128)ai * b[1] + t1 + static_cast<std::uint64_t>(c >> 64);
        t1 = static_cast<std::uint64_t>(c);
        c = (u128)ai * b[2] + t2 + static_cast<std::uint64_t>(c >> 64);
        t2 = static_cast<std::uint64_t>(c);
        c = (u128)ai * b[3] + t3 + static_cast<std::uint64_t>(c >> 64);
        t3 = static_cast<std::uint64_t>(c);
        t4 += static_cast<std::uint64_t>(c >> 64);

        const std::uint64_t m = t0 * n0;
        c = (u128)m * p[0] + t0;
        c = (u128)m * p[1] + t1 + static_cast<std::uint64_t>(c >> 64);
        t0 = static_cast<std::uint64_t>(c);
        c = (u128)m * p[2] + t2 + static_cast<std::uint64_t>(c >> 64);
        t1 = static_cast<std::uint64_t>(c);
        c = (u128)m * p[3] + t3 + static_cast<std::uint64_t>(c >> 64);
        t2 = static_cast<std::uint64_t>(c);
        c = (u128)t4 + static_cast<std::uint64_t>(c >> 64);
        t3 = static_cast<std::uint64_t>(c);
        t4 = static_cast<std::uint64_t>(c >> 64);
    }
    Limbs r{t0, t1, t2, t3};
    if (t4 != 0 || u256_cmp(r, p) >= 0) u256_sub(r, r, p);
    out = r;
}

// Montgomery squaring via SOS: cross terms once, doubled, plus the diagonal,
// then four reduction steps over the 8-limb product.
inline void mont_sqr(Limbs& out, const Limbs& a, const Limbs& p, std::uint64_t n0) {
    std::uint64_t t[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
    {
        u128 c = (u128)a[0] * a[1];
        t[1] = static_cast<std::uint64_t>(c);
        c = (u128)a[0] * a[2] + static_cast<std::uint64_t>(c >> 64);
        t[2] = static_cast<std::uint64_t>(c);
        c = (u128)a[0] * a[3] + static_cast<std::uint64_t>(c >> 64);
        t[3] = static_cast<std::uint64_t>(c);
        t[4] = static_cast<std::uint64_t>(c >> 64);

        c = (u128)a[1] * a[2] + t[3];
        t[3] = static_cast<std::uint64_t>(c);
        c = (u128)a[1] * a[3] + t[4] + static_cast<std::uint64_t>(c >> 64);
        t[4] = static_cast<std::uint64_t>(c);
        t[5] = static_cast<std::uint64_t>(c >> 64);

        c = (u128)a[2] * a[3] + t[5];
        t[5] = static_cast<std::uint64_t>(c);
        t[6] = static_cast<std::uint64_t>(c >> 64);
    }
    // double the cross terms
    t[7] = t[6] >> 63;
    for (int i = 6; i >= 2; --i) t[i] = (t[i] << 1) | (t[i - 1] >> 63);
    t[1] <<= 1;
    // add the diagonal
    {
        u128 c = (u128)a[0] * a[0];
        t[0] = static_cast<std::uint64_t>(c);
        std::uint64_t carry = static_cast<std::uint64_t>(c >> 64);
        for (int i = 1; i < 4; ++i) {
            u128 lo = (u128)t[2 * i - 1] + carry;
            t[2 * i - 1] = static_cast<std::uint64_t>(lo);
            u128 sq = (u128)a[i] * a[i];
            u128 hi = (u128)t[2 * i] + static_cast<std::uint64_t>(sq) +
                      static_cast<std::uint64_t>(lo >> 64);
            t[2 * i] = static_cast<std::uint64_t>(hi);
            carry = static_cast<std::uint64_t>(sq >> 64) + static_cast<std::uint64_t>(hi >> 64);
        }
        u128 top = (u128)t[7] + carry;
        t[7] = static_cast<std::uint64_t>(top);
        t[8] = static_cast<std::uint64_t>(top >> 64);
    }
    // Montgomery reduction of the 8-limb value
    for (int i = 0; i < 4; ++i) {
        std::uint64_t m = t[i] * n0;
        u128 c = (u128)m * p[0] + t[i];
        std::uint64_t carry = static_cast<std::uint64_t>(c >> 64);
        for (int j = 1; j < 4; ++j) {
            c = (u128)m * p[j] + t[i + j] + carry;
            t[i + j] = static_cast<std::uint64_t>(c);
            carry = static_cast<std::uint64_t>(c >> 64);
        }
        for (int k = i + 4; carry && k < 9; ++k) {
            u128 s = (u128)t[k] + carry;
            t[k] = static_cast<std::uint64_t>(s);
            carry = static_cast<std::uint64_t>(s >> 64);
        }
    }
    Limbs r{t[4], t[5], t[6], t[7]};
    if (t[8] != 0 || u256_cmp(r, p) >= 0) u256_sub(r, r, p);
    out = r;
}

inline void mod_add(Limbs& out, const Limbs& a, const Limbs& b, const Limbs& p) {
    Limbs r;
    std::uint64_t carry = u256_add(r, a, b);
    Limbs s;
    std::uint64_t borrow = u256_sub(s, r, p);
    out = (carry || !borrow) ? s : r;
}

inline void mod_sub(Limbs& out, const Limbs& a, const Limbs& b, const Limbs& p) {
    Limbs r;
    if (u256_sub(r, a, b)) u256_add(r, r, p);
    out = r;
}

// ---------------------------------------------------------------------------
// Per-modulus constants, derived once from the decimal string via GMP
// ---------------------------------------------------------------------------

struct FieldParams {
    Limbs p{};
    Limbs r2{};        // (2^256)^2 mod p
    Limbs one{};       // 2^256 mod p
    std::uint64_t n0 = 0;  // -p^-1 mod 2^64
    Limbs exp_inv{};   // p - 2
    Limbs exp_sqrt{};  // (p+1)/4, valid iff sqrt_3mod4
    Limbs exp_qr{};    // (p-1)/2
    bool sqrt_3mod4 = false;
};

inline Limbs limbs_from_mpz(const mpz_t z) {
    Limbs out{};
    std::size_t count = 0;
    mpz_export(out.data(), &count, -1, 8, 0, 0, z);
    return out;
}

inline void mpz_from_limbs(mpz_t z, const Limbs& a) {
    mpz_import(z, 4, -1, 8, 0, 0, a.data());
}

inline FieldParams make_field_params(const char* modulus_decimal) {
    FieldParams fp;
    mpz_t p, t;
    mpz_init_set_str(p, modulus_decimal, 10);
    mpz_init(t);

    if (mpz_probab_prime_p(p, 30) == 0) throw Error("field modulus is not prime");
    if (mpz_sizeinbase(p, 2) > 255) throw Error("field modulus too large for 4 limbs");
    fp.p = limbs_from_mpz(p);

    // 2^256 mod p and its square
    mpz_set_ui(t, 1);
    mpz_mul_2exp(t, t, 256);
    mpz_mod(t, t, p);
    fp.one = limbs_from_mpz(t);
    mpz_mul(t, t, t);
    mpz_mod(t, t, p);
    fp.r2 = limbs_from_mpz(t);

    // -p^-1 mod 2^64 by Newton iteration
    std::uint64_t inv = 1;
    for (int i = 0; i < 6; ++i) inv *= 2 - fp.p[0] * inv;
    fp.n0 = ~inv + 1;

    mpz_sub_ui(t, p, 2);
    fp.exp_inv = limbs_from_mpz(t);
    mpz_sub_ui(t, p, 1);
    mpz_fdiv_q_2exp(t, t, 1);
    fp.exp_qr = limbs_from_mpz(t);

    fp.sqrt_3mod4 = mpz_fdiv_ui(p, 4) == 3;
    if (fp.sqrt_3mod4) {
        mpz_add_ui(t, p, 1);
        mpz_fdiv_q_2exp(t, t, 2);
        fp.exp_sqrt = limbs_from_mpz(t);
    }

    mpz_clear(t);
    mpz_clear(p);
    return fp;
}

// ---------------------------------------------------------------------------
// Prime field element in Montgomery form
// ---------------------------------------------------------------------------

template <class Tag>
class PrimeField {
public:
    static const FieldParams& params() {
        static const FieldParams fp = make_field_params(Tag::modulus_decimal);
        return fp;
    }

    PrimeField() : v_{} {}

    static PrimeField zero() { return PrimeField(); }

    static PrimeField one() {
        PrimeField r;
        r.v_ = params().one;
        return r;
    }

    static PrimeField from_u64(std::uint64_t x) {
        PrimeField r;
        r.v_ = Limbs{x, 0, 0, 0};
        mont_mul(r.v_, r.v_, params().r2, params().p, params().n0);
        return r;
    }

    /// Canonical value, reduced; input must be < p.
    static std::optional<PrimeField> from_canonical(const Limbs& a) {
        if (u256_cmp(a, params().p) >= 0) return std::nullopt;
        PrimeField r;
        r.v_ = a;
        mont_mul(r.v_, r.v_, params().r2, params().p, params().n0);
        return r;
    }

    /// Arbitrary 256-bit value reduced mod p (used for hash-to-field).
    static PrimeField from_u256_reduced(Limbs a) {
        while (u256_cmp(a, params().p) >= 0) u256_sub(a, a, params().p);
        PrimeField r;
        r.v_ = a;
        mont_mul(r.v_, r.v_, params().r2, params().p, params().n0);
        return r;
    }

    static std::optional<PrimeField> from_bytes32(std::span<const std::uint8_t> b) {
        if (b.size() != 32) return std::nullopt;
        return from_canonical(u256_from_be(b));
    }

    /// Uniform on [0, p); rejection-sampled.
    static PrimeField random(Rng& rng) {
        std::uint8_t buf[32];
        for (;;) {
            rng.fill(std::span<std::uint8_t>(buf, 32));
            Limbs a = u256_from_be(buf);
            if (u256_cmp(a, params().p) < 0) return *from_canonical(a);
        }
    }

    /// Uniform on [1, p-1].
    static PrimeField random_nonzero(Rng& rng) {
        for (;;) {
            PrimeField x = random(rng);
            if (!x.is_zero()) return x;
        }
    }

    Limbs canonical() const {
        Limbs r;
        Limbs unit{1, 0, 0, 0};
        mont_mul(r, v_, unit, params().p, params().n0);
        return r;
    }

    void to_bytes32(std::uint8_t out[32]) const { u256_to_be(canonical(), out); }

    std::array<std::uint8_t, 32> bytes() const {
        std::array<std::uint8_t, 32> out{};
        to_bytes32(out.data());
        return out;
    }

    bool is_zero() const { return u256_is_zero(v_); }
    bool operator==(const PrimeField& o) const { return v_ == o.v_; }
    bool operator!=(const PrimeField& o) const { return !(v_ == o.v_); }

    PrimeField operator+(const PrimeField& o) const {
        PrimeField r;
        mod_add(r.v_, v_, o.v_, params().p);
        return r;
    }

    PrimeField operator-(const PrimeField& o) const {
        PrimeField r;
        mod_sub(r.v_, v_, o.v_, params().p);
        return r;
    }

    PrimeField operator-() const {
        if (is_zero()) return *this;
        PrimeField r;
        u256_sub(r.v_, params().p, v_);
        return r;
    }

    PrimeField operator*(const PrimeField& o) const {
        PrimeField r;
        mont_mul(r.v_, v_, o.v_, params().p, params().n0);
        return r;
    }

    PrimeField squared() const {
        PrimeField r;
        mont_sqr(r.v_, v_, params().p, params().n0);
        return r;
    }

    PrimeField dbl() const { return *this + *this; }

    /// Binary exponentiation over the canonical bit representation of `e`.
    PrimeField pow_limbs(const Limbs& e) const {
        PrimeField acc = one();
        bool started = false;
        for (int i = 3; i >= 0; --i) {
            for (int bit = 63; bit >= 0; --bit) {
                if (started) acc = acc.squared();
                if ((e[static_cast<std::size_t>(i)] >> bit) & 1) {
                    if (started) acc = acc * *this;
                    else { acc = *this; started = true; }
                }
            }
        }
        return started ? acc : one();
    }

    PrimeField inverse() const {
        if (is_zero()) throw Error("inverse of zero field element");
        return pow_limbs(params().exp_inv);
    }

    bool is_square() const {
        if (is_zero()) return true;
        return pow_limbs(params().exp_qr) == one();
    }

    std::optional<PrimeField> sqrt() const {
        if (!params().sqrt_3mod4) throw Error("sqrt requires p = 3 mod 4");
        if (is_zero()) return zero();
        PrimeField c = pow_limbs(params().exp_sqrt);
        if (c.squared() == *this) return c;
        return std::nullopt;
    }

    /// Parity of the canonical representative; used to pick between y and -y.
    bool parity() const { return canonical()[0] & 1; }

    const Limbs& mont_limbs() const { return v_; }

private:
    Limbs v_;
};

}  // namespace eepaeks::detail

#endif  // EEPAEKS_FIELD_HPP_
