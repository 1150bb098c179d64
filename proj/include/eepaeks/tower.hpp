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
#ifndef EEPAEKS_TOWER_HPP_
#define EEPAEKS_TOWER_HPP_

#include <optional>

#include "eepaeks/field.hpp"

// Extension tower for BN254:
//   Fq2  = Fq[u]  / (u^2 + 1)
//   Fq6  = Fq2[v] / (v^3 - xi),  xi = 9 + u
//   Fq12 = Fq6[w] / (w^2 - v)
// Moduli are cross-checked against the BN polynomial parametrization when the
// curve context initializes, so a corrupted constant fails fast.

namespace eepaeks::detail {

struct Bn254BaseTag {
    static constexpr const char* modulus_decimal =
        "21888242871839275222246405745257275088696311157297823662689037894645226208583";
};

struct Bn254ScalarTag {
    static constexpr const char* modulus_decimal =
        "21888242871839275222246405745257275088548364400416034343698204186575808495617";
};

using Fq = PrimeField<Bn254BaseTag>;
using FrField = PrimeField<Bn254ScalarTag>;

inline constexpr std::uint64_t kBnParamZ = 4965661367192848881ULL;

// ---------------------------------------------------------------------------

struct Fp2 {
    Fq c0, c1;

    static Fp2 zero() { return {Fq::zero(), Fq::zero()}; }
    static Fp2 one() { return {Fq::one(), Fq::zero()}; }
    static Fp2 xi() { return {Fq::from_u64(9), Fq::one()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fp2& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fp2& o) const { return !(*this == o); }

    Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Fp2 operator-() const { return {-c0, -c1}; }
    Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

    Fp2 operator*(const Fp2& o) const {
        Fq t0 = c0 * o.c0;
        Fq t1 = c1 * o.c1;
        Fq s = (c0 + c1) * (o.c0 + o.c1);
        return {t0 - t1, s - t0 - t1};
    }

    Fp2 squared() const {
        Fq t = c0 * c1;
        return {(c0 + c1) * (c0 - c1), t.dbl()};
    }

    Fp2 scale(const Fq& k) const { return {c0 * k, c1 * k}; }

    Fp2 conj() const { return {c0, -c1}; }

    // (a + bu)(9 + u) = (9a - b) + (a + 9b)u
    Fp2 mul_by_xi() const {
        Fq nine_c0 = c0.dbl().dbl().dbl() + c0;
        Fq nine_c1 = c1.dbl().dbl().dbl() + c1;
        return {nine_c0 - c1, nine_c1 + c0};
    }

    Fq norm() const { return c0.squared() + c1.squared(); }

    Fp2 inverse() const {
        Fq d = norm().inverse();
        return {c0 * d, -(c1 * d)};
    }

    Fp2 pow_limbs(const Limbs& e) const {
        Fp2 acc = one();
        for (int i = 3; i >= 0; --i)
            for (int bit = 63; bit >= 0; --bit) {
                acc = acc.squared();
                if ((e[static_cast<std::size_t>(i)] >> bit) & 1) acc = acc * *this;
            }
        return acc;
    }

    bool is_square() const {
        if (is_zero()) return true;
        return norm().is_square();
    }

    std::optional<Fp2> sqrt() const {
        if (is_zero()) return zero();
        if (c1.is_zero()) {
            if (auto s = c0.sqrt()) return Fp2{*s, Fq::zero()};
            if (auto s = (-c0).sqrt()) return Fp2{Fq::zero(), *s};
            return std::nullopt;
        }
        auto n = norm().sqrt();
        if (!n) return std::nullopt;
        Fq half = Fq::from_u64(2).inverse();
        Fq t = (c0 + *n) * half;
        if (!t.is_square()) t = (c0 - *n) * half;
        auto x = t.sqrt();
        if (!x) return std::nullopt;
        Fq y = c1 * (x->dbl()).inverse();
        Fp2 cand{*x, y};
        if (cand.squared() == *this) return cand;
        return std::nullopt;
    }

    /// Deterministic sign convention: parity of c0, falling back to c1.
    bool parity() const { return c0.is_zero() ? c1.parity() : c0.parity(); }
};

// ---------------------------------------------------------------------------

struct Fp6 {
    Fp2 c0, c1, c2;

    static Fp6 zero() { return {Fp2::zero(), Fp2::zero(), Fp2::zero()}; }
    static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fp6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }

    Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Fp6 operator-() const { return {-c0, -c1, -c2}; }

    Fp6 operator*(const Fp6& o) const {
        Fp2 t0 = c0 * o.c0;
        Fp2 t1 = c1 * o.c1;
        Fp2 t2 = c2 * o.c2;
        Fp2 r0 = t0 + ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi();
        Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi();
        Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1;
        return {r0, r1, r2};
    }

    Fp6 squared() const { return *this * *this; }

    // multiply by b0 + b1 v
    Fp6 mul_by_01(const Fp2& b0, const Fp2& b1) const {
        Fp2 t0 = c0 * b0;
        Fp2 t1 = c1 * b1;
        Fp2 r0 = t0 + (c2 * b1).mul_by_xi();
        Fp2 r1 = (c0 + c1) * (b0 + b1) - t0 - t1;
        Fp2 r2 = c2 * b0 + t1;
        return {r0, r1, r2};
    }

    Fp6 scale(const Fp2& k) const { return {c0 * k, c1 * k, c2 * k}; }

    // multiply by v: (c0, c1, c2) -> (xi*c2, c0, c1)
    Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

    Fp6 inverse() const {
        Fp2 t0 = c0.squared() - (c1 * c2).mul_by_xi();
        Fp2 t1 = c2.squared().mul_by_xi() - c0 * c1;
        Fp2 t2 = c1.squared() - c0 * c2;
        Fp2 d = (c0 * t0 + (c2 * t1).mul_by_xi() + (c1 * t2).mul_by_xi()).inverse();
        return {t0 * d, t1 * d, t2 * d};
    }
};

// ---------------------------------------------------------------------------

struct Fp12 {
    Fp6 c0, c1;

    static Fp12 zero() { return {Fp6::zero(), Fp6::zero()}; }
    static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool is_one() const { return *this == one(); }
    bool operator==(const Fp12& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fp12& o) const { return !(*this == o); }

    Fp12 operator*(const Fp12& o) const {
        Fp6 t0 = c0 * o.c0;
        Fp6 t1 = c1 * o.c1;
        Fp6 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1;
        return {t0 + t1.mul_by_v(), r1};
    }

    Fp12 squared() const {
        Fp6 t = c0 * c1;
        Fp6 r0 = (c0 + c1) * (c0 + c1.mul_by_v()) - t - t.mul_by_v();
        return {r0, t + t};
    }

    /// w -> -w, i.e. the p^6 Frobenius; equals the inverse on unitary elements.
    Fp12 conj() const { return {c0, -c1}; }

    Fp12 inverse() const {
        Fp6 d = (c0.squared() - c1.squared().mul_by_v()).inverse();
        return {c0 * d, -(c1 * d)};
    }

    // multiply by a + bw + cw^3  (line-function shape: sparse in the w-basis)
    Fp12 mul_by_line(const Fp2& a, const Fp2& b, const Fp2& c) const {
        Fp6 r0 = c0.scale(a) + c1.mul_by_01(b, c).mul_by_v();
        Fp6 r1 = c0.mul_by_01(b, c) + c1.scale(a);
        return {r0, r1};
    }

    Fp12 pow_u64(std::uint64_t e) const {
        Fp12 acc = one();
        bool started = false;
        for (int bit = 63; bit >= 0; --bit) {
            if (started) acc = acc.squared();
            if ((e >> bit) & 1) {
                if (started) acc = acc * *this;
                else { acc = *this; started = true; }
            }
        }
        return started ? acc : one();
    }

    /// Exponentiation over an arbitrary-width big-endian bit vector.
    Fp12 pow_bits(std::span<const std::uint8_t> bits_msb) const {
        Fp12 acc = one();
        for (std::uint8_t bit : bits_msb) {
            acc = acc.squared();
            if (bit) acc = acc * *this;
        }
        return acc;
    }

    Fp12 pow_limbs(const Limbs& e) const {
        Fp12 acc = one();
        for (int i = 3; i >= 0; --i)
            for (int bit = 63; bit >= 0; --bit) {
                acc = acc.squared();
                if ((e[static_cast<std::size_t>(i)] >> bit) & 1) acc = acc * *this;
            }
        return acc;
    }

    /// The six Fp2 digits e_i of f = sum e_i w^i.
    std::array<const Fp2*, 6> digits() const {
        return {&c0.c0, &c1.c0, &c0.c1, &c1.c1, &c0.c2, &c1.c2};
    }

    static Fp12 from_digits(const std::array<Fp2, 6>& e) {
        return {Fp6{e[0], e[2], e[4]}, Fp6{e[1], e[3], e[5]}};
    }

    // (x + ys)^2 in Fp4 = Fp2[s]/(s^2 - xi)
    static void fp4_square(Fp2& r0, Fp2& r1, const Fp2& x, const Fp2& y) {
        Fp2 t = x * y;
        r0 = (x + y) * (x + y.mul_by_xi()) - t - t.mul_by_xi();
        r1 = t.dbl();
    }

    /// Granger-Scott squaring. Only valid for unitary elements of the
    /// cyclotomic subgroup; the curve context checks it against squared()
    /// before enabling it.
    Fp12 cyclotomic_squared() const {
        const Fp2& e0 = c0.c0;
        const Fp2& e1 = c1.c0;
        const Fp2& e2 = c0.c1;
        const Fp2& e3 = c1.c1;
        const Fp2& e4 = c0.c2;
        const Fp2& e5 = c1.c2;
        Fp2 a0, a1, b0, b1, cc0, cc1;
        fp4_square(a0, a1, e0, e3);
        fp4_square(b0, b1, e1, e4);
        fp4_square(cc0, cc1, e2, e5);
        Fp2 sc = cc1.mul_by_xi();
        std::array<Fp2, 6> r;
        r[0] = a0.dbl() + a0 - e0.dbl();
        r[3] = a1.dbl() + a1 + e3.dbl();
        r[1] = sc.dbl() + sc + e1.dbl();
        r[4] = cc0.dbl() + cc0 - e4.dbl();
        r[2] = b0.dbl() + b0 - e2.dbl();
        r[5] = b1.dbl() + b1 + e5.dbl();
        return from_digits(r);
    }

    Fp12 pow_u64_cyclo(std::uint64_t e) const {
        Fp12 acc = one();
        bool started = false;
        for (int bit = 63; bit >= 0; --bit) {
            if (started) acc = acc.cyclotomic_squared();
            if ((e >> bit) & 1) {
                if (started) acc = acc * *this;
                else { acc = *this; started = true; }
            }
        }
        return started ? acc : one();
    }

    Fp12 pow_limbs_cyclo(const Limbs& e) const {
        Fp12 acc = one();
        for (int i = 3; i >= 0; --i)
            for (int bit = 63; bit >= 0; --bit) {
                acc = acc.cyclotomic_squared();
                if ((e[static_cast<std::size_t>(i)] >> bit) & 1) acc = acc * *this;
            }
        return acc;
    }
};

}  // namespace eepaeks::detail

#endif  // EEPAEKS_TOWER_HPP_
