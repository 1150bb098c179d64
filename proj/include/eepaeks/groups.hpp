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
#ifndef EEPAEKS_GROUPS_HPP_
#define EEPAEKS_GROUPS_HPP_

#include <openssl/evp.h>

#include <string_view>

#include "eepaeks/bytes.hpp"
#include "eepaeks/counters.hpp"
#include "eepaeks/pairing.hpp"
#include "eepaeks/rng.hpp"

// Public bilinear-group surface. Multiplicative notation throughout: the
// group operation is *, exponentiation is pow. Scalar products, group
// multiplications, exponentiations, hash-to-group calls and pairings are
// tallied through counters:: so callers can assert cost formulas.

namespace eepaeks {

enum class CurveId : std::uint8_t { bn254 = 0x01 };

inline CurveId curve_from_name(std::string_view name) {
    if (name == "bn254" || name == "default" || name.empty()) return CurveId::bn254;
    throw Error("unsupported curve: " + std::string(name));
}

namespace wire {

inline constexpr std::uint8_t kMagic[4] = {'E', 'E', 'P', '1'};

enum class Tag : std::uint8_t {
    ciphertext = 0x01,
    transformed_ciphertext = 0x02,
    trapdoor = 0x03,
    transformed_trapdoor = 0x04,
    key = 0x05,
    public_params = 0x06,
    scalar = 0x07,
    g1 = 0x08,
    g2 = 0x09,
    gt = 0x0A,
    policy = 0x0B,
};

inline void write_header(ByteWriter& w, Tag tag, CurveId curve) {
    w.raw(std::span<const std::uint8_t>(kMagic, 4));
    w.u8(static_cast<std::uint8_t>(tag));
    w.u8(static_cast<std::uint8_t>(curve));
}

inline CurveId read_header(ByteReader& r, Tag expected) {
    r.expect(std::span<const std::uint8_t>(kMagic, 4), "EEP1 object");
    std::uint8_t tag = r.u8();
    if (tag != static_cast<std::uint8_t>(expected))
        throw DeserializeError("unexpected object type tag", r.offset() - 1);
    std::uint8_t curve = r.u8();
    if (curve != static_cast<std::uint8_t>(CurveId::bn254))
        throw DeserializeError("unsupported curve id", r.offset() - 1);
    return CurveId::bn254;
}

}  // namespace wire

// ---------------------------------------------------------------------------
// Scalar: element of Z_p (p = the prime group order)
// ---------------------------------------------------------------------------

class Scalar {
public:
    static constexpr std::size_t kByteLen = 32;

    Scalar() = default;

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(detail::FrField::one()); }
    static Scalar from_u64(std::uint64_t v) { return Scalar(detail::FrField::from_u64(v)); }

    bool is_zero() const { return v_.is_zero(); }
    bool operator==(const Scalar& o) const { return v_ == o.v_; }
    bool operator!=(const Scalar& o) const { return !(v_ == o.v_); }

    Scalar operator+(const Scalar& o) const { return Scalar(v_ + o.v_); }
    Scalar operator-(const Scalar& o) const { return Scalar(v_ - o.v_); }
    Scalar operator-() const { return Scalar(-v_); }

    Scalar operator*(const Scalar& o) const {
        counters::mul();
        return Scalar(v_ * o.v_);
    }

    Scalar inverse() const { return Scalar(v_.inverse()); }

    void write_raw(ByteWriter& w) const {
        std::uint8_t buf[kByteLen];
        v_.to_bytes32(buf);
        w.raw(std::span<const std::uint8_t>(buf, kByteLen));
    }

    static Scalar read_raw(ByteReader& r) {
        std::size_t at = r.offset();
        auto b = r.raw(kByteLen);
        auto v = detail::FrField::from_bytes32(b);
        if (!v) throw DeserializeError("scalar out of range", at);
        return Scalar(*v);
    }

    Bytes serialize(CurveId curve = CurveId::bn254) const {
        ByteWriter w;
        wire::write_header(w, wire::Tag::scalar, curve);
        write_raw(w);
        return w.take();
    }

    static Scalar deserialize(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        wire::read_header(r, wire::Tag::scalar);
        std::size_t at = r.offset();
        Scalar s = read_raw(r);
        if (s.is_zero()) throw DeserializeError("invalid scalar encoding", at);
        r.finish();
        return s;
    }

    const detail::FrField& inner() const { return v_; }
    static Scalar wrap(const detail::FrField& v) { return Scalar(v); }

private:
    explicit Scalar(const detail::FrField& v) : v_(v) {}
    detail::FrField v_;
};

/// Uniform on [1, p-1] (the Z_p^* draws of the scheme).
inline Scalar rand_scalar_nonzero(Rng& rng) {
    return Scalar::wrap(detail::FrField::random_nonzero(rng));
}

/// Uniform on [0, p-1] (policy blinding vectors allow zero).
inline Scalar rand_scalar(Rng& rng) {
    return Scalar::wrap(detail::FrField::random(rng));
}

// ---------------------------------------------------------------------------
// Group elements
// ---------------------------------------------------------------------------

namespace detail {

// Compressed point: 254-bit x big-endian; bit7 of byte 0 marks a valid
// encoding, bit6 carries the sign of y. The all-zero string is never valid.
inline constexpr std::uint8_t kFlagValid = 0x80;
inline constexpr std::uint8_t kFlagOdd = 0x40;

}  // namespace detail

class G1Elem {
public:
    static constexpr std::size_t kByteLen = 32;

    G1Elem() : p_(detail::Jacobian<detail::Fq>::identity()) {}

    static G1Elem generator() {
        return G1Elem(detail::Jacobian<detail::Fq>::from_affine(detail::Bn254::ctx().g1));
    }

    static G1Elem identity() { return G1Elem(); }

    bool is_identity() const { return p_.is_identity(); }

    bool operator==(const G1Elem& o) const { return p_.equals(o.p_); }
    bool operator!=(const G1Elem& o) const { return !p_.equals(o.p_); }

    /// Group operation (multiplicative notation).
    G1Elem operator*(const G1Elem& o) const {
        counters::mul();
        return G1Elem(p_.add(o.p_));
    }

    G1Elem pow(const Scalar& e) const {
        counters::exp();
        return G1Elem(p_.scalar_mul_limbs(e.inner().canonical()));
    }

    G1Elem inverse() const { return G1Elem(p_.negate()); }

    void write_raw(ByteWriter& w) const {
        if (is_identity()) throw Error("cannot serialize the G1 identity");
        auto a = p_.to_affine();
        std::uint8_t buf[kByteLen];
        a.x.to_bytes32(buf);
        buf[0] |= detail::kFlagValid;
        if (a.y.parity()) buf[0] |= detail::kFlagOdd;
        w.raw(std::span<const std::uint8_t>(buf, kByteLen));
    }

    static G1Elem read_raw(ByteReader& r) {
        std::size_t at = r.offset();
        auto b = r.raw(kByteLen);
        std::uint8_t flags = b[0];
        if (!(flags & detail::kFlagValid))
            throw DeserializeError("invalid G1 encoding", at);
        std::array<std::uint8_t, kByteLen> xb{};
        std::copy(b.begin(), b.end(), xb.begin());
        xb[0] &= static_cast<std::uint8_t>(~(detail::kFlagValid | detail::kFlagOdd));
        auto x = detail::Fq::from_bytes32(xb);
        if (!x) throw DeserializeError("G1 x coordinate out of range", at);
        auto y = (x->squared() * *x + detail::Fq::from_u64(3)).sqrt();
        if (!y) throw DeserializeError("G1 point not on curve", at);
        detail::Fq ysel = (y->parity() == bool(flags & detail::kFlagOdd)) ? *y : -*y;
        // the curve has prime order, so on-curve implies subgroup membership
        return G1Elem(detail::Jacobian<detail::Fq>::from_affine(
            detail::Affine<detail::Fq>::make(*x, ysel)));
    }

    Bytes raw_bytes() const {
        ByteWriter w;
        write_raw(w);
        return w.take();
    }

    Bytes serialize(CurveId curve = CurveId::bn254) const {
        ByteWriter w;
        wire::write_header(w, wire::Tag::g1, curve);
        write_raw(w);
        return w.take();
    }

    static G1Elem deserialize(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        wire::read_header(r, wire::Tag::g1);
        G1Elem e = read_raw(r);
        r.finish();
        return e;
    }

    const detail::Jacobian<detail::Fq>& inner() const { return p_; }
    static G1Elem wrap(const detail::Jacobian<detail::Fq>& p) { return G1Elem(p); }

private:
    explicit G1Elem(const detail::Jacobian<detail::Fq>& p) : p_(p) {}
    detail::Jacobian<detail::Fq> p_;
};

class G2Elem {
public:
    static constexpr std::size_t kByteLen = 64;

    G2Elem() : p_(detail::Jacobian<detail::Fp2>::identity()) {}

    static G2Elem generator() {
        return G2Elem(detail::Jacobian<detail::Fp2>::from_affine(detail::Bn254::ctx().g2));
    }

    static G2Elem identity() { return G2Elem(); }

    bool is_identity() const { return p_.is_identity(); }

    bool operator==(const G2Elem& o) const { return p_.equals(o.p_); }
    bool operator!=(const G2Elem& o) const { return !p_.equals(o.p_); }

    G2Elem operator*(const G2Elem& o) const {
        counters::mul();
        return G2Elem(p_.add(o.p_));
    }

    G2Elem pow(const Scalar& e) const {
        counters::exp();
        return G2Elem(p_.scalar_mul_limbs(e.inner().canonical()));
    }

    G2Elem inverse() const { return G2Elem(p_.negate()); }

    void write_raw(ByteWriter& w) const {
        if (is_identity()) throw Error("cannot serialize the G2 identity");
        auto a = p_.to_affine();
        std::uint8_t buf[kByteLen];
        a.x.c1.to_bytes32(buf);
        a.x.c0.to_bytes32(buf + 32);
        buf[0] |= detail::kFlagValid;
        if (a.y.parity()) buf[0] |= detail::kFlagOdd;
        w.raw(std::span<const std::uint8_t>(buf, kByteLen));
    }

    static G2Elem read_raw(ByteReader& r) {
        std::size_t at = r.offset();
        auto b = r.raw(kByteLen);
        std::uint8_t flags = b[0];
        if (!(flags & detail::kFlagValid))
            throw DeserializeError("invalid G2 encoding", at);
        std::array<std::uint8_t, 32> c1b{}, c0b{};
        std::copy(b.begin(), b.begin() + 32, c1b.begin());
        std::copy(b.begin() + 32, b.end(), c0b.begin());
        c1b[0] &= static_cast<std::uint8_t>(~(detail::kFlagValid | detail::kFlagOdd));
        auto xc1 = detail::Fq::from_bytes32(c1b);
        auto xc0 = detail::Fq::from_bytes32(c0b);
        if (!xc0 || !xc1) throw DeserializeError("G2 x coordinate out of range", at);
        detail::Fp2 x{*xc0, *xc1};
        auto y = (x.squared() * x + detail::Bn254::ctx().twist_b).sqrt();
        if (!y) throw DeserializeError("G2 point not on curve", at);
        detail::Fp2 ysel = (y->parity() == bool(flags & detail::kFlagOdd)) ? *y : -*y;
        auto aff = detail::Affine<detail::Fp2>::make(x, ysel);
        if (!detail::Bn254::ctx().in_g2_subgroup(aff))
            throw DeserializeError("G2 point not in prime-order subgroup", at);
        return G2Elem(detail::Jacobian<detail::Fp2>::from_affine(aff));
    }

    Bytes raw_bytes() const {
        ByteWriter w;
        write_raw(w);
        return w.take();
    }

    Bytes serialize(CurveId curve = CurveId::bn254) const {
        ByteWriter w;
        wire::write_header(w, wire::Tag::g2, curve);
        write_raw(w);
        return w.take();
    }

    static G2Elem deserialize(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        wire::read_header(r, wire::Tag::g2);
        G2Elem e = read_raw(r);
        r.finish();
        return e;
    }

    const detail::Jacobian<detail::Fp2>& inner() const { return p_; }
    static G2Elem wrap(const detail::Jacobian<detail::Fp2>& p) { return G2Elem(p); }

private:
    explicit G2Elem(const detail::Jacobian<detail::Fp2>& p) : p_(p) {}
    detail::Jacobian<detail::Fp2> p_;
};

class GTElem {
public:
    static constexpr std::size_t kByteLen = 384;

    GTElem() : v_(detail::Fp12::one()) {}

    static GTElem identity() { return GTElem(); }

    bool is_identity() const { return v_.is_one(); }

    bool operator==(const GTElem& o) const { return v_ == o.v_; }
    bool operator!=(const GTElem& o) const { return !(v_ == o.v_); }

    GTElem operator*(const GTElem& o) const {
        counters::mul();
        return GTElem(v_ * o.v_);
    }

    GTElem pow(const Scalar& e) const {
        counters::exp();
        return GTElem(detail::Bn254::ctx().unitary_pow_limbs(v_, e.inner().canonical()));
    }

    /// Pairing outputs are unitary, so conjugation inverts.
    GTElem inverse() const { return GTElem(v_.conj()); }

    void write_raw(ByteWriter& w) const {
        std::uint8_t buf[32];
        auto d = v_.digits();
        for (int i = 0; i < 6; ++i) {
            d[static_cast<std::size_t>(i)]->c0.to_bytes32(buf);
            w.raw(std::span<const std::uint8_t>(buf, 32));
            d[static_cast<std::size_t>(i)]->c1.to_bytes32(buf);
            w.raw(std::span<const std::uint8_t>(buf, 32));
        }
    }

    static GTElem read_raw(ByteReader& r) {
        std::size_t at = r.offset();
        std::array<detail::Fp2, 6> e;
        for (int i = 0; i < 6; ++i) {
            auto c0 = detail::Fq::from_bytes32(r.raw(32));
            auto c1 = detail::Fq::from_bytes32(r.raw(32));
            if (!c0 || !c1) throw DeserializeError("GT coefficient out of range", at);
            e[static_cast<std::size_t>(i)] = detail::Fp2{*c0, *c1};
        }
        detail::Fp12 f = detail::Fp12::from_digits(e);
        if (f.is_zero()) throw DeserializeError("invalid GT encoding", at);
        // membership: unitary (f * f^(p^6) = 1), then order divides r.
        // the order check uses plain squaring since the input is untrusted.
        if (!(f * f.conj()).is_one())
            throw DeserializeError("GT element not unitary", at);
        if (!f.pow_limbs(detail::Bn254::ctx().r_limbs).is_one())
            throw DeserializeError("GT element has wrong order", at);
        return GTElem(f);
    }

    Bytes raw_bytes() const {
        ByteWriter w;
        write_raw(w);
        return w.take();
    }

    Bytes serialize(CurveId curve = CurveId::bn254) const {
        ByteWriter w;
        wire::write_header(w, wire::Tag::gt, curve);
        write_raw(w);
        return w.take();
    }

    static GTElem deserialize(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        wire::read_header(r, wire::Tag::gt);
        GTElem e = read_raw(r);
        r.finish();
        return e;
    }

    const detail::Fp12& inner() const { return v_; }
    static GTElem wrap(const detail::Fp12& v) { return GTElem(v); }

private:
    explicit GTElem(const detail::Fp12& v) : v_(v) {}
    detail::Fp12 v_;
};

// ---------------------------------------------------------------------------
// Public parameters and module operations
// ---------------------------------------------------------------------------

struct PublicParams {
    CurveId curve_id = CurveId::bn254;
    G1Elem g1;
    G2Elem g2;
    std::array<std::uint8_t, 32> order_be{};  // prime scalar modulus p
    Bytes hash_domain_tag;

    Bytes serialize() const {
        ByteWriter w;
        wire::write_header(w, wire::Tag::public_params, curve_id);
        g1.write_raw(w);
        g2.write_raw(w);
        w.raw(std::span<const std::uint8_t>(order_be.data(), order_be.size()));
        w.u32be(static_cast<std::uint32_t>(hash_domain_tag.size()));
        w.raw(hash_domain_tag);
        return w.take();
    }

    static PublicParams deserialize(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        PublicParams pp;
        pp.curve_id = wire::read_header(r, wire::Tag::public_params);
        pp.g1 = G1Elem::read_raw(r);
        pp.g2 = G2Elem::read_raw(r);
        auto ord = r.raw(32);
        std::copy(ord.begin(), ord.end(), pp.order_be.begin());
        std::uint32_t taglen = r.u32be();
        if (taglen > 1024) throw DeserializeError("domain tag too long", r.offset() - 4);
        auto tag = r.raw(taglen);
        pp.hash_domain_tag.assign(tag.begin(), tag.end());
        r.finish();
        return pp;
    }

    bool operator==(const PublicParams& o) const {
        return curve_id == o.curve_id && g1 == o.g1 && g2 == o.g2 &&
               order_be == o.order_be && hash_domain_tag == o.hash_domain_tag;
    }
};

inline constexpr std::string_view kHashDomainTag = "EEPAEKS:H2G:v1";

/// Deterministic per curve: fixed generators, fixed domain tag.
inline PublicParams setup(CurveId curve) {
    if (curve != CurveId::bn254) throw Error("unsupported curve id");
    const auto& ctx = detail::Bn254::ctx();
    PublicParams pp;
    pp.curve_id = curve;
    pp.g1 = G1Elem::generator();
    pp.g2 = G2Elem::generator();
    pp.order_be = ctx.order_bytes;
    pp.hash_domain_tag = to_bytes(kHashDomainTag);
    return pp;
}

inline PublicParams setup(std::string_view curve_name) {
    return setup(curve_from_name(curve_name));
}

inline GTElem pair(const G1Elem& a, const G2Elem& b) {
    counters::pairing();
    if (a.is_identity() || b.is_identity()) return GTElem::identity();
    return GTElem::wrap(
        detail::Bn254::ctx().pairing(a.inner().to_affine(), b.inner().to_affine()));
}

/// Try-and-increment onto the curve; the domain tag is always prepended.
/// The output y is chosen with even parity, making the map deterministic.
inline G1Elem hash_to_g1(const PublicParams& pp, std::span<const std::uint8_t> msg) {
    counters::hash();
    Bytes input;
    input.reserve(pp.hash_domain_tag.size() + msg.size() + 4);
    input.insert(input.end(), pp.hash_domain_tag.begin(), pp.hash_domain_tag.end());
    input.insert(input.end(), msg.begin(), msg.end());
    input.resize(input.size() + 4);
    for (std::uint32_t ctr = 0;; ++ctr) {
        std::size_t n = input.size();
        input[n - 4] = static_cast<std::uint8_t>(ctr >> 24);
        input[n - 3] = static_cast<std::uint8_t>(ctr >> 16);
        input[n - 2] = static_cast<std::uint8_t>(ctr >> 8);
        input[n - 1] = static_cast<std::uint8_t>(ctr);
        std::uint8_t digest[32];
        unsigned int len = 0;
        EVP_Digest(input.data(), input.size(), digest, &len, EVP_sha256(), nullptr);
        detail::Fq x = detail::Fq::from_u256_reduced(
            detail::u256_from_be(std::span<const std::uint8_t>(digest, 32)));
        auto y = (x.squared() * x + detail::Fq::from_u64(3)).sqrt();
        if (!y) continue;
        detail::Fq ysel = y->parity() ? -*y : *y;
        return G1Elem::wrap(detail::Jacobian<detail::Fq>::from_affine(
            detail::Affine<detail::Fq>::make(x, ysel)));
    }
}

inline G1Elem hash_to_g1(const PublicParams& pp, std::string_view msg) {
    return hash_to_g1(pp, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(msg.data()), msg.size()));
}

}  // namespace eepaeks

#endif  // EEPAEKS_GROUPS_HPP_
