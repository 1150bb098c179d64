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
#ifndef EEPAEKS_PAIRING_HPP_
#define EEPAEKS_PAIRING_HPP_

#include <vector>

#include "eepaeks/curve.hpp"

// Optimal ate pairing over BN254 (the curve y^2 = x^3 + 3 with BN parameter
// z = 4965661367192848881, G2 on the D-type sextic twist y^2 = x^3 + 3/xi).
//
// Nothing here is trusted from memory: the context constructor re-derives the
// moduli from the BN polynomial parametrization, derives the G2 generator by
// cofactor clearing, computes all Frobenius constants by exponentiation, and
// checks the hard-part exponent decomposition with exact integer arithmetic.
// Any mismatch throws at first use.

namespace eepaeks::detail {

template <class T>
inline T pow_bits_any(const T& base, std::span<const std::uint8_t> bits_msb) {
    T acc = T::one();
    for (std::uint8_t bit : bits_msb) {
        acc = acc.squared();
        if (bit) acc = acc * base;
    }
    return acc;
}

inline std::vector<std::uint8_t> mpz_bits_msb(const mpz_t z) {
    std::size_t n = mpz_sizeinbase(z, 2);
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i)
        bits[i] = mpz_tstbit(z, static_cast<mp_bitcnt_t>(n - 1 - i)) ? 1 : 0;
    return bits;
}

struct LineEval {
    Fp2 a, b, c;  // l(P) = a + b*w + c*w^3
};

class Bn254 {
public:
    Affine<Fq> g1;
    Affine<Fp2> g2;
    Fp2 xi = Fp2::xi();
    Fp2 twist_b = Fp2::zero();
    std::array<Fp2, 6> gamma1{}, gamma2{}, gamma3{};
    std::vector<std::uint8_t> loop_bits;   // 6z + 2
    std::vector<std::uint8_t> ehard_bits;  // (p^4 - p^2 + 1) / r
    std::vector<std::uint8_t> r_bits;
    Limbs r_limbs{};
    std::array<std::uint8_t, 32> order_bytes{};  // scalar modulus, big-endian
    bool fast_hard = false;
    bool gs_square_ok = false;

    static const Bn254& ctx() {
        static const Bn254 instance = build();
        return instance;
    }

    // ---- Frobenius ---------------------------------------------------------

    Fp12 frobenius(const Fp12& f, int power) const {
        const auto& gamma = power == 1 ? gamma1 : power == 2 ? gamma2 : gamma3;
        bool odd = (power & 1) != 0;
        auto d = f.digits();
        std::array<Fp2, 6> e;
        for (int i = 0; i < 6; ++i) {
            Fp2 t = odd ? d[static_cast<std::size_t>(i)]->conj() : *d[static_cast<std::size_t>(i)];
            e[static_cast<std::size_t>(i)] = i == 0 ? t : t * gamma[static_cast<std::size_t>(i)];
        }
        return Fp12::from_digits(e);
    }

    Affine<Fp2> twist_frob(const Affine<Fp2>& q) const {
        if (q.infinity) return q;
        return Affine<Fp2>::make(q.x.conj() * gamma1[2], q.y.conj() * gamma1[3]);
    }

    Affine<Fp2> twist_frob2(const Affine<Fp2>& q) const {
        if (q.infinity) return q;
        return Affine<Fp2>::make(q.x * gamma2[2], q.y * gamma2[3]);
    }

    // ---- Miller loop -------------------------------------------------------

    static LineEval dbl_step(Jacobian<Fp2>& t, const Fq& xp, const Fq& yp) {
        Fp2 A = t.X.squared();
        Fp2 B = t.Y.squared();
        Fp2 C = B.squared();
        Fp2 Z2 = t.Z.squared();
        Fp2 D = ((t.X + B).squared() - A - C).dbl();
        Fp2 E = A + A + A;
        Fp2 F = E.squared();
        Fp2 Z3 = (t.Y * t.Z).dbl();

        LineEval l;
        l.a = (Z3 * Z2).scale(yp);
        l.b = -((E * Z2).scale(xp));
        l.c = t.X * E - B.dbl();

        t.X = F - D.dbl();
        t.Y = E * (D - t.X) - C.dbl().dbl().dbl();
        t.Z = Z3;
        return l;
    }

    static LineEval add_step(Jacobian<Fp2>& t, const Affine<Fp2>& q, const Fq& xp, const Fq& yp) {
        Fp2 Z1Z1 = t.Z.squared();
        Fp2 U2 = q.x * Z1Z1;
        Fp2 S2 = q.y * t.Z * Z1Z1;
        Fp2 H = U2 - t.X;
        Fp2 rr = (S2 - t.Y).dbl();
        Fp2 HH = H.squared();
        Fp2 I = HH.dbl().dbl();
        Fp2 J = H * I;
        Fp2 V = t.X * I;
        Fp2 Z3 = (t.Z + H).squared() - Z1Z1 - HH;

        LineEval l;
        l.a = Z3.scale(yp);
        l.b = -(rr.scale(xp));
        l.c = rr * q.x - Z3 * q.y;

        Fp2 X3 = rr.squared() - J - V.dbl();
        t.Y = rr * (V - X3) - (t.Y * J).dbl();
        t.X = X3;
        t.Z = Z3;
        return l;
    }

    Fp12 miller(const Affine<Fq>& p, const Affine<Fp2>& q) const {
        Jacobian<Fp2> t = Jacobian<Fp2>::from_affine(q);
        Fp12 f = Fp12::one();
        for (std::size_t i = 1; i < loop_bits.size(); ++i) {
            LineEval ld = dbl_step(t, p.x, p.y);
            f = f.squared().mul_by_line(ld.a, ld.b, ld.c);
            if (loop_bits[i]) {
                LineEval la = add_step(t, q, p.x, p.y);
                f = f.mul_by_line(la.a, la.b, la.c);
            }
        }
        Affine<Fp2> q1 = twist_frob(q);
        Affine<Fp2> q2 = twist_frob2(q).negate();
        LineEval l1 = add_step(t, q1, p.x, p.y);
        f = f.mul_by_line(l1.a, l1.b, l1.c);
        LineEval l2 = add_step(t, q2, p.x, p.y);
        f = f.mul_by_line(l2.a, l2.b, l2.c);
        return f;
    }

    // ---- Final exponentiation ----------------------------------------------

    Fp12 final_exp(const Fp12& f) const {
        Fp12 t = f.conj() * f.inverse();  // f^(p^6 - 1); result is unitary
        t = frobenius(t, 2) * t;          // ^(p^2 + 1)
        if (!fast_hard) return t.pow_bits(ehard_bits);

        // t^((p^4-p^2+1)/r) via the base-p digits
        //   lam3 = 1, lam2 = 6z^2+1, lam1 = -36z^3-18z^2-12z+1,
        //   lam0 = -36z^3-30z^2-18z-2
        // verified against the exact quotient at context build time.
        Fp12 u1 = unitary_pow_u64(t, kBnParamZ);
        Fp12 v1 = unitary_pow_u64(u1, kBnParamZ);
        Fp12 w1 = unitary_pow_u64(v1, kBnParamZ);

        Fp12 w9 = w1.squared().squared().squared() * w1;
        Fp12 w36 = w9.squared().squared();

        Fp12 v2 = v1.squared();
        Fp12 v6 = v2.squared() * v2;
        Fp12 v12 = v6.squared();
        Fp12 v18 = v12 * v6;
        Fp12 v30 = v18 * v12;

        Fp12 u2 = u1.squared();
        Fp12 u4 = u2.squared();
        Fp12 u8 = u4.squared();
        Fp12 u12 = u8 * u4;
        Fp12 u18 = u8.squared() * u2;

        Fp12 a0 = (w36 * v30 * u18 * t.squared()).conj();
        Fp12 a1 = (w36 * v18 * u12).conj() * t;
        Fp12 a2 = v6 * t;
        return frobenius(t, 3) * frobenius(a2, 2) * frobenius(a1, 1) * a0;
    }

    Fp12 pairing(const Affine<Fq>& p, const Affine<Fp2>& q) const {
        if (p.infinity || q.infinity) return Fp12::one();
        return final_exp(miller(p, q));
    }

    bool in_g2_subgroup(const Affine<Fp2>& q) const {
        if (q.infinity) return true;
        return Jacobian<Fp2>::from_affine(q).scalar_mul_bits(r_bits).is_identity();
    }

    bool gt_has_order_r(const Fp12& f) const { return unitary_pow_limbs(f, r_limbs).is_one(); }

    Fp12 unitary_pow_u64(const Fp12& f, std::uint64_t e) const {
        return gs_square_ok ? f.pow_u64_cyclo(e) : f.pow_u64(e);
    }

    Fp12 unitary_pow_limbs(const Fp12& f, const Limbs& e) const {
        return gs_square_ok ? f.pow_limbs_cyclo(e) : f.pow_limbs(e);
    }

private:
    static Bn254 build() {
        Bn254 c;
        const auto& base = Fq::params();
        const auto& scalar = FrField::params();

        mpz_t p, r, z, t0, t1, acc;
        mpz_inits(p, r, z, t0, t1, acc, nullptr);
        mpz_from_limbs(p, base.p);
        mpz_from_limbs(r, scalar.p);
        mpz_set_ui(z, kBnParamZ);

        // p(z) = 36z^4 + 36z^3 + 24z^2 + 6z + 1, r(z) = p(z) - 6z^2
        mpz_pow_ui(t0, z, 4);
        mpz_mul_ui(acc, t0, 36);
        mpz_pow_ui(t0, z, 3);
        mpz_addmul_ui(acc, t0, 36);
        mpz_pow_ui(t0, z, 2);
        mpz_addmul_ui(acc, t0, 24);
        mpz_addmul_ui(acc, z, 6);
        mpz_add_ui(acc, acc, 1);
        if (mpz_cmp(acc, p) != 0) throw Error("BN base field does not match parametrization");
        mpz_pow_ui(t0, z, 2);
        mpz_submul_ui(acc, t0, 6);
        if (mpz_cmp(acc, r) != 0) throw Error("BN scalar field does not match parametrization");

        if (!base.sqrt_3mod4) throw Error("BN base field must be 3 mod 4");
        if (mpz_fdiv_ui(p, 6) != 1) throw Error("BN base field must be 1 mod 6");

        c.r_limbs = scalar.p;
        u256_to_be(scalar.p, c.order_bytes.data());
        mpz_set(t0, r);
        c.r_bits = mpz_bits_msb(t0);

        // xi must generate the right tower: neither a square nor a cube in Fp2
        mpz_mul(t0, p, p);
        mpz_sub_ui(t0, t0, 1);
        mpz_fdiv_q_ui(t1, t0, 2);
        if (pow_bits_any(c.xi, mpz_bits_msb(t1)) == Fp2::one())
            throw Error("xi is a square in Fp2");
        mpz_fdiv_q_ui(t1, t0, 3);
        if (pow_bits_any(c.xi, mpz_bits_msb(t1)) == Fp2::one())
            throw Error("xi is a cube in Fp2");

        c.twist_b = Fp2{Fq::from_u64(3), Fq::zero()} * c.xi.inverse();

        // G1 generator (1, 2); the curve has prime order, so on-curve suffices,
        // but [r]g1 = O doubles as an arithmetic self-check.
        c.g1 = Affine<Fq>::make(Fq::one(), Fq::from_u64(2));
        if (!c.g1.on_curve(Fq::from_u64(3))) throw Error("G1 generator not on curve");
        if (!Jacobian<Fq>::from_affine(c.g1).scalar_mul_bits(c.r_bits).is_identity())
            throw Error("G1 generator order check failed");

        // G2 generator: smallest-x point on the twist, cleared by the cofactor
        // 2p - r.
        mpz_mul_ui(t0, p, 2);
        mpz_sub(t0, t0, r);
        auto cofactor_bits = mpz_bits_msb(t0);
        bool found = false;
        for (std::uint64_t xt = 0; xt < 1000 && !found; ++xt) {
            Fp2 x{Fq::from_u64(xt), Fq::zero()};
            Fp2 rhs = x.squared() * x + c.twist_b;
            auto y = rhs.sqrt();
            if (!y) continue;
            Fp2 ys = y->parity() ? -*y : *y;
            auto pt = Jacobian<Fp2>::from_affine(Affine<Fp2>::make(x, ys));
            auto q = pt.scalar_mul_bits(cofactor_bits);
            if (q.is_identity()) continue;
            if (!q.scalar_mul_bits(c.r_bits).is_identity())
                throw Error("twist cofactor check failed");
            c.g2 = q.to_affine();
            found = true;
        }
        if (!found) throw Error("no G2 generator found");

        // Frobenius constants gamma_k[i] = xi^(i (p^k - 1) / 6)
        for (int k = 1; k <= 3; ++k) {
            mpz_pow_ui(t0, p, static_cast<unsigned long>(k));
            mpz_sub_ui(t0, t0, 1);
            mpz_fdiv_q_ui(t0, t0, 6);
            auto& gamma = k == 1 ? c.gamma1 : k == 2 ? c.gamma2 : c.gamma3;
            gamma[0] = Fp2::one();
            mpz_set_ui(t1, 0);
            for (int i = 1; i < 6; ++i) {
                mpz_mul_ui(t1, t0, static_cast<unsigned long>(i));
                gamma[static_cast<std::size_t>(i)] = pow_bits_any(c.xi, mpz_bits_msb(t1));
            }
        }

        // Miller loop length 6z + 2
        mpz_mul_ui(t0, z, 6);
        mpz_add_ui(t0, t0, 2);
        c.loop_bits = mpz_bits_msb(t0);

        // hard-part exponent d = (p^4 - p^2 + 1)/r and its base-p digits
        mpz_pow_ui(t0, p, 4);
        mpz_pow_ui(t1, p, 2);
        mpz_sub(t0, t0, t1);
        mpz_add_ui(t0, t0, 1);
        if (!mpz_divisible_p(t0, r)) throw Error("(p^4 - p^2 + 1) not divisible by r");
        mpz_divexact(t0, t0, r);
        c.ehard_bits = mpz_bits_msb(t0);

        mpz_t lam0, lam1, lam2, rhs;
        mpz_inits(lam0, lam1, lam2, rhs, nullptr);
        mpz_pow_ui(acc, z, 3);
        mpz_mul_ui(lam0, acc, 36);   // 36z^3
        mpz_set(lam1, lam0);
        mpz_pow_ui(acc, z, 2);
        mpz_addmul_ui(lam0, acc, 30);
        mpz_addmul_ui(lam0, z, 18);
        mpz_add_ui(lam0, lam0, 2);
        mpz_neg(lam0, lam0);         // -36z^3 - 30z^2 - 18z - 2
        mpz_addmul_ui(lam1, acc, 18);
        mpz_addmul_ui(lam1, z, 12);
        mpz_sub_ui(lam1, lam1, 1);
        mpz_neg(lam1, lam1);         // -36z^3 - 18z^2 - 12z + 1
        mpz_mul_ui(lam2, acc, 6);
        mpz_add_ui(lam2, lam2, 1);   // 6z^2 + 1
        mpz_pow_ui(rhs, p, 3);
        mpz_mul(t1, lam2, p);
        mpz_mul(t1, t1, p);
        mpz_add(rhs, rhs, t1);
        mpz_mul(t1, lam1, p);
        mpz_add(rhs, rhs, t1);
        mpz_add(rhs, rhs, lam0);
        c.fast_hard = mpz_cmp(rhs, t0) == 0;
        mpz_clears(lam0, lam1, lam2, rhs, nullptr);

        mpz_clears(p, r, z, t0, t1, acc, nullptr);

        // end-to-end sanity: nondegenerate pairing of order r
        Fp12 e = c.pairing(c.g1, c.g2);
        if (e.is_one()) throw Error("pairing is degenerate");
        if (!c.gt_has_order_r(e)) throw Error("pairing output has wrong order");

        // enable Granger-Scott squaring only if it agrees with plain squaring
        // on unitary elements
        c.gs_square_ok = true;
        Fp12 probe = e;
        for (int i = 0; i < 4; ++i) {
            if (!(probe.cyclotomic_squared() == probe.squared())) {
                c.gs_square_ok = false;
                break;
            }
            probe = probe.squared() * e;
        }
        return c;
    }
};

}  // namespace eepaeks::detail

#endif  // EEPAEKS_PAIRING_HPP_
