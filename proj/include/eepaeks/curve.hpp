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
#ifndef EEPAEKS_CURVE_HPP_
#define EEPAEKS_CURVE_HPP_

#include <span>

#include "eepaeks/tower.hpp"

// Short Weierstrass y^2 = x^3 + b with a = 0, Jacobian coordinates.
// Instantiated over Fq (the curve) and Fp2 (its sextic twist).

namespace eepaeks::detail {

template <class F>
struct Affine {
    F x = F::zero();
    F y = F::zero();
    bool infinity = true;

    static Affine at_infinity() { return Affine{}; }

    static Affine make(const F& x, const F& y) { return Affine{x, y, false}; }

    bool on_curve(const F& b) const {
        if (infinity) return true;
        return y.squared() == x.squared() * x + b;
    }

    Affine negate() const {
        if (infinity) return *this;
        return make(x, -y);
    }

    bool operator==(const Affine& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
};

template <class F>
struct Jacobian {
    F X = F::one();
    F Y = F::one();
    F Z = F::zero();  // Z = 0 encodes the identity

    static Jacobian identity() { return Jacobian{}; }

    static Jacobian from_affine(const Affine<F>& a) {
        if (a.infinity) return identity();
        return Jacobian{a.x, a.y, F::one()};
    }

    bool is_identity() const { return Z.is_zero(); }

    Jacobian dbl() const {
        if (is_identity()) return *this;
        F A = X.squared();
        F B = Y.squared();
        F C = B.squared();
        F D = ((X + B).squared() - A - C).dbl();
        F E = A + A + A;
        F Fv = E.squared();
        Jacobian r;
        r.X = Fv - D.dbl();
        r.Y = E * (D - r.X) - C.dbl().dbl().dbl();
        r.Z = (Y * Z).dbl();
        return r;
    }

    Jacobian add(const Jacobian& o) const {
        if (is_identity()) return o;
        if (o.is_identity()) return *this;
        F Z1Z1 = Z.squared();
        F Z2Z2 = o.Z.squared();
        F U1 = X * Z2Z2;
        F U2 = o.X * Z1Z1;
        F S1 = Y * o.Z * Z2Z2;
        F S2 = o.Y * Z * Z1Z1;
        if (U1 == U2) {
            if (S1 == S2) return dbl();
            return identity();
        }
        F H = U2 - U1;
        F I = H.dbl().squared();
        F J = H * I;
        F rr = (S2 - S1).dbl();
        F V = U1 * I;
        Jacobian out;
        out.X = rr.squared() - J - V.dbl();
        out.Y = rr * (V - out.X) - (S1 * J).dbl();
        out.Z = ((Z + o.Z).squared() - Z1Z1 - Z2Z2) * H;
        return out;
    }

    Jacobian add_affine(const Affine<F>& o) const {
        if (o.infinity) return *this;
        if (is_identity()) return from_affine(o);
        F Z1Z1 = Z.squared();
        F U2 = o.x * Z1Z1;
        F S2 = o.y * Z * Z1Z1;
        if (X == U2) {
            if (Y == S2) return dbl();
            return identity();
        }
        F H = U2 - X;
        F HH = H.squared();
        F I = HH.dbl().dbl();
        F J = H * I;
        F rr = (S2 - Y).dbl();
        F V = X * I;
        Jacobian out;
        out.X = rr.squared() - J - V.dbl();
        out.Y = rr * (V - out.X) - (Y * J).dbl();
        out.Z = (Z + H).squared() - Z1Z1 - HH;
        return out;
    }

    Jacobian negate() const { return Jacobian{X, -Y, Z}; }

    /// Double-and-add over big-endian bits.
    Jacobian scalar_mul_bits(std::span<const std::uint8_t> bits_msb) const {
        Jacobian acc = identity();
        for (std::uint8_t bit : bits_msb) {
            acc = acc.dbl();
            if (bit) acc = acc.add(*this);
        }
        return acc;
    }

    /// Width-4 wNAF multiplication with precomputed odd multiples.
    Jacobian scalar_mul_limbs(const Limbs& e) const {
        if (u256_is_zero(e) || is_identity()) return identity();

        // signed digits: 0 or odd in [-15, 15], at most 257 of them
        std::array<std::int8_t, 260> digits{};
        std::size_t len = 0;
        std::uint64_t w[5] = {e[0], e[1], e[2], e[3], 0};
        auto nonzero = [&] { return w[0] | w[1] | w[2] | w[3] | w[4]; };
        while (nonzero()) {
            std::int8_t d = 0;
            if (w[0] & 1) {
                d = static_cast<std::int8_t>(w[0] & 0x0F);
                if (d >= 8) {
                    d = static_cast<std::int8_t>(d - 16);
                    // w -= d means adding 16 - |d|; propagate the carry
                    std::uint64_t addend = static_cast<std::uint64_t>(-static_cast<int>(d));
                    u128 c = (u128)w[0] + addend;
                    w[0] = static_cast<std::uint64_t>(c);
                    for (int i = 1; i < 5 && (c >> 64); ++i) {
                        c = (u128)w[i] + 1;
                        w[i] = static_cast<std::uint64_t>(c);
                    }
                } else {
                    w[0] -= static_cast<std::uint64_t>(d);
                }
            }
            digits[len++] = d;
            for (int i = 0; i < 4; ++i) w[i] = (w[i] >> 1) | (w[i + 1] << 63);
            w[4] >>= 1;
        }

        // odd multiples P, 3P, ..., 15P
        std::array<Jacobian, 8> table;
        table[0] = *this;
        Jacobian twice = dbl();
        for (int i = 1; i < 8; ++i)
            table[static_cast<std::size_t>(i)] =
                table[static_cast<std::size_t>(i - 1)].add(twice);

        Jacobian acc = identity();
        for (std::size_t i = len; i-- > 0;) {
            acc = acc.dbl();
            std::int8_t d = digits[i];
            if (d > 0) acc = acc.add(table[static_cast<std::size_t>((d - 1) / 2)]);
            else if (d < 0)
                acc = acc.add(table[static_cast<std::size_t>((-d - 1) / 2)].negate());
        }
        return acc;
    }

    Affine<F> to_affine() const {
        if (is_identity()) return Affine<F>::at_infinity();
        F zinv = Z.inverse();
        F zinv2 = zinv.squared();
        return Affine<F>::make(X * zinv2, Y * zinv2 * zinv);
    }

    bool equals(const Jacobian& o) const {
        bool a = is_identity(), b = o.is_identity();
        if (a || b) return a == b;
        F Z1Z1 = Z.squared();
        F Z2Z2 = o.Z.squared();
        if (!(X * Z2Z2 == o.X * Z1Z1)) return false;
        return Y * Z2Z2 * o.Z == o.Y * Z1Z1 * Z;
    }
};

}  // namespace eepaeks::detail

#endif  // EEPAEKS_CURVE_HPP_
