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
#ifndef EEPAEKS_SCHEME_HPP_
#define EEPAEKS_SCHEME_HPP_

#include <unordered_map>

#include "eepaeks/policy.hpp"

// The nine EE-PAEKS algorithms: four-role key generation, keyword-set
// encryption, policy trapdoors, the auxiliary-server transformations, and
// cloud-side search.
//
// Group assignment (asymmetric setting): hash outputs, server public keys and
// all ct/td components live in G1 except the probe components ct4/td4, which
// live in G2. Every pairing then takes the form e(G1 combination, probe).

namespace eepaeks {

enum class Role : std::uint8_t { cloud = 1, aux = 2, sender = 3, receiver = 4 };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::cloud: return "cloud";
        case Role::aux: return "aux";
        case Role::sender: return "sender";
        case Role::receiver: return "receiver";
    }
    return "?";
}

inline Role role_from_name(std::string_view s) {
    if (s == "cloud") return Role::cloud;
    if (s == "aux") return Role::aux;
    if (s == "sender") return Role::sender;
    if (s == "receiver") return Role::receiver;
    throw Error("unknown role: " + std::string(s));
}

struct KeyPair {
    Role role = Role::cloud;
    std::optional<Scalar> sk;
    G1Elem pk;

    const Scalar& secret() const {
        if (!sk) throw Error("key file holds no secret key");
        return *sk;
    }

    Bytes serialize(bool include_secret = true) const {
        ByteWriter w;
        wire::write_header(w, wire::Tag::key, CurveId::bn254);
        w.u8(static_cast<std::uint8_t>(role));
        w.u8(include_secret && sk ? 1 : 0);
        pk.write_raw(w);
        if (include_secret && sk) sk->write_raw(w);
        return w.take();
    }

    static KeyPair deserialize(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        wire::read_header(r, wire::Tag::key);
        KeyPair kp;
        std::uint8_t role = r.u8();
        if (role < 1 || role > 4) throw DeserializeError("bad role byte", r.offset() - 1);
        kp.role = static_cast<Role>(role);
        std::uint8_t flags = r.u8();
        kp.pk = G1Elem::read_raw(r);
        if (flags & 1) {
            Scalar s = Scalar::read_raw(r);
            if (s.is_zero()) throw DeserializeError("secret key must be nonzero", r.offset() - 32);
            kp.sk = s;
        }
        r.finish();
        return kp;
    }
};

struct Ciphertext {
    std::vector<G1Elem> ct1;
    G1Elem ct2, ct3;
    G2Elem ct4;

    std::size_t keyword_count() const { return ct1.size(); }
};

struct TransformedCiphertext {
    std::vector<G1Elem> ct1;
    G1Elem ct2, ct3;
    G2Elem ct4;

    std::size_t keyword_count() const { return ct1.size(); }
};

struct Trapdoor {
    // hidden policy: matrix and row map only, leaf keywords removed
    std::vector<std::vector<Scalar>> matrix;
    std::vector<std::uint32_t> pi;
    std::vector<G1Elem> td11, td12;
    G1Elem td2, td3;
    G2Elem td4;

    std::size_t rows() const { return td11.size(); }
    std::size_t cols() const { return matrix.empty() ? 0 : matrix.front().size(); }
};

struct TransformedTrapdoor {
    std::vector<std::vector<Scalar>> matrix;
    std::vector<std::uint32_t> pi;
    std::vector<G1Elem> td11, td12;
    G1Elem td2, td3;
    G2Elem td4;

    std::size_t rows() const { return td11.size(); }
    std::size_t cols() const { return matrix.empty() ? 0 : matrix.front().size(); }
};

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

template <class Ct>
void write_ct_body(ByteWriter& w, const Ct& ct) {
    w.u32be(static_cast<std::uint32_t>(ct.ct1.size()));
    for (const auto& e : ct.ct1) e.write_raw(w);
    ct.ct2.write_raw(w);
    ct.ct3.write_raw(w);
    ct.ct4.write_raw(w);
}

template <class Ct>
Ct read_ct_body(ByteReader& r) {
    Ct ct;
    std::uint32_t m = r.u32be();
    if (m == 0) throw DeserializeError("ciphertext must hold at least one keyword", r.offset() - 4);
    if (m > 1000000) throw DeserializeError("ciphertext keyword count too large", r.offset() - 4);
    ct.ct1.reserve(m);
    for (std::uint32_t i = 0; i < m; ++i) ct.ct1.push_back(G1Elem::read_raw(r));
    ct.ct2 = G1Elem::read_raw(r);
    ct.ct3 = G1Elem::read_raw(r);
    ct.ct4 = G2Elem::read_raw(r);
    return ct;
}

template <class Td>
void write_td_body(ByteWriter& w, const Td& td) {
    KeywordPolicy hidden;
    hidden.matrix = td.matrix;
    hidden.pi = td.pi;
    hidden.write_matrix(w);
    for (const auto& e : td.td11) e.write_raw(w);
    for (const auto& e : td.td12) e.write_raw(w);
    td.td2.write_raw(w);
    td.td3.write_raw(w);
    td.td4.write_raw(w);
}

template <class Td>
Td read_td_body(ByteReader& r) {
    Td td;
    KeywordPolicy hidden = KeywordPolicy::read_matrix(r);
    td.matrix = std::move(hidden.matrix);
    td.pi = std::move(hidden.pi);
    std::size_t l = td.matrix.size();
    td.td11.reserve(l);
    for (std::size_t i = 0; i < l; ++i) td.td11.push_back(G1Elem::read_raw(r));
    td.td12.reserve(l);
    for (std::size_t i = 0; i < l; ++i) td.td12.push_back(G1Elem::read_raw(r));
    td.td2 = G1Elem::read_raw(r);
    td.td3 = G1Elem::read_raw(r);
    td.td4 = G2Elem::read_raw(r);
    return td;
}

}  // namespace detail

inline Bytes serialize(const Ciphertext& ct) {
    ByteWriter w;
    wire::write_header(w, wire::Tag::ciphertext, CurveId::bn254);
    detail::write_ct_body(w, ct);
    return w.take();
}

inline Bytes serialize(const TransformedCiphertext& ct) {
    ByteWriter w;
    wire::write_header(w, wire::Tag::transformed_ciphertext, CurveId::bn254);
    detail::write_ct_body(w, ct);
    return w.take();
}

inline Bytes serialize(const Trapdoor& td) {
    ByteWriter w;
    wire::write_header(w, wire::Tag::trapdoor, CurveId::bn254);
    detail::write_td_body(w, td);
    return w.take();
}

inline Bytes serialize(const TransformedTrapdoor& td) {
    ByteWriter w;
    wire::write_header(w, wire::Tag::transformed_trapdoor, CurveId::bn254);
    detail::write_td_body(w, td);
    return w.take();
}

inline Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> data) {
    ByteReader r(data);
    wire::read_header(r, wire::Tag::ciphertext);
    auto ct = detail::read_ct_body<Ciphertext>(r);
    r.finish();
    return ct;
}

inline TransformedCiphertext deserialize_transformed_ciphertext(
    std::span<const std::uint8_t> data) {
    ByteReader r(data);
    wire::read_header(r, wire::Tag::transformed_ciphertext);
    auto ct = detail::read_ct_body<TransformedCiphertext>(r);
    r.finish();
    return ct;
}

inline Trapdoor deserialize_trapdoor(std::span<const std::uint8_t> data) {
    ByteReader r(data);
    wire::read_header(r, wire::Tag::trapdoor);
    auto td = detail::read_td_body<Trapdoor>(r);
    r.finish();
    return td;
}

inline TransformedTrapdoor deserialize_transformed_trapdoor(
    std::span<const std::uint8_t> data) {
    ByteReader r(data);
    wire::read_header(r, wire::Tag::transformed_trapdoor);
    auto td = detail::read_td_body<TransformedTrapdoor>(r);
    r.finish();
    return td;
}

// ---------------------------------------------------------------------------
// Randomness carriers. The *_with variants exist for white-box tests that
// need the sampled exponents; production callers use the Rng overloads.
// ---------------------------------------------------------------------------

struct EncRandomness {
    Scalar x1, x2, x3;
};

struct EncTransRandomness {
    Scalar xhat;
};

struct TrapRandomness {
    Scalar y1, y2, y3;
    std::vector<Scalar> v;
};

struct TrapTransRandomness {
    Scalar yhat;
};

// ---------------------------------------------------------------------------
// Algorithms
// ---------------------------------------------------------------------------

inline KeyPair keygen(const PublicParams& pp, Role role, Rng& rng) {
    KeyPair kp;
    kp.role = role;
    kp.sk = rand_scalar_nonzero(rng);
    kp.pk = pp.g1.pow(*kp.sk);
    return kp;
}

namespace detail {

inline Ciphertext enc_core(const PublicParams& pp, const Scalar& sk_s, const G1Elem& pk_c,
                           const G1Elem& pk_a, const KeywordSet& ws, const EncRandomness& r) {
    if (ws.size() == 0) throw Error("empty keyword set");
    Scalar sx3 = sk_s * r.x3;            // the single field product
    G1Elem shared = pp.g1.pow(r.x1 + r.x2);  // computed once, reused across slots
    Ciphertext ct;
    ct.ct1.reserve(ws.size());
    for (const auto& kw : ws)
        ct.ct1.push_back(hash_to_g1(pp, kw.canonical()).pow(sx3) * shared);
    ct.ct2 = pk_c.pow(r.x1);
    ct.ct3 = pk_a.pow(r.x2);
    ct.ct4 = pp.g2.pow(sx3);
    return ct;
}

inline TransformedCiphertext enc_trans_core(const Scalar& sk_a, const Ciphertext& ct,
                                            const EncTransRandomness& r) {
    if (ct.ct1.empty()) throw Error("malformed ciphertext: no keyword components");
    Scalar xa = r.xhat * sk_a;
    TransformedCiphertext out;
    out.ct1.reserve(ct.ct1.size());
    for (const auto& e : ct.ct1) out.ct1.push_back(e.pow(xa));
    out.ct2 = ct.ct2.pow(xa);
    out.ct3 = ct.ct3.pow(r.xhat);
    out.ct4 = ct.ct4.pow(xa);
    return out;
}

inline Trapdoor trap_core(const PublicParams& pp, const Scalar& sk_r, const G1Elem& pk_c,
                          const G1Elem& pk_a, const KeywordPolicy& policy,
                          const TrapRandomness& r) {
    if (policy.rows() == 0) throw Error("empty policy");
    if (policy.leaves.size() != policy.rows()) throw Error("policy without leaf keywords");
    if (r.v.size() + 1 != policy.cols()) throw Error("blinding vector has wrong dimension");

    Scalar ry3 = sk_r * r.y3;  // the single field product outside the shares
    std::vector<Scalar> lambda = share_secret(policy.matrix, r.y1 + r.y2, r.v);
    G1Elem shared = pp.g1.pow(r.y1 + r.y2);  // computed once, reused across rows

    Trapdoor td;
    td.matrix = policy.matrix;
    td.pi = policy.pi;
    td.td11.reserve(policy.rows());
    td.td12.reserve(policy.rows());
    for (std::size_t i = 0; i < policy.rows(); ++i) {
        G1Elem hr = hash_to_g1(pp, policy.leaf_of_row(i).canonical()).pow(ry3);
        td.td11.push_back(pp.g1.pow(lambda[i]) * hr);
        td.td12.push_back(shared * hr);
    }
    td.td2 = pk_c.pow(r.y1);
    td.td3 = pk_a.pow(r.y2);
    td.td4 = pp.g2.pow(ry3);
    return td;
}

inline TransformedTrapdoor trap_trans_core(const Scalar& sk_a, const Trapdoor& td,
                                           const TrapTransRandomness& r) {
    if (td.td11.empty() || td.td11.size() != td.td12.size() ||
        td.td11.size() != td.matrix.size())
        throw Error("malformed trapdoor");
    Scalar ya = r.yhat * sk_a;
    TransformedTrapdoor out;
    out.matrix = td.matrix;
    out.pi = td.pi;
    out.td11.reserve(td.rows());
    for (const auto& e : td.td11) out.td11.push_back(e.pow(ya));
    out.td12.reserve(td.rows());
    for (const auto& e : td.td12) out.td12.push_back(e.pow(ya));
    out.td2 = td.td2.pow(ya);
    out.td3 = td.td3.pow(r.yhat);
    out.td4 = td.td4.pow(ya);
    return out;
}

}  // namespace detail

inline Ciphertext enc(const PublicParams& pp, const Scalar& sk_s, const G1Elem& pk_c,
                      const G1Elem& pk_a, const KeywordSet& ws, Rng& rng) {
    EncRandomness r{rand_scalar_nonzero(rng), rand_scalar_nonzero(rng),
                    rand_scalar_nonzero(rng)};
    return detail::enc_core(pp, sk_s, pk_c, pk_a, ws, r);
}

inline TransformedCiphertext enc_trans(const Scalar& sk_a, const Ciphertext& ct, Rng& rng) {
    return detail::enc_trans_core(sk_a, ct, {rand_scalar_nonzero(rng)});
}

inline Trapdoor trap(const PublicParams& pp, const Scalar& sk_r, const G1Elem& pk_c,
                     const G1Elem& pk_a, const KeywordPolicy& policy, Rng& rng) {
    TrapRandomness r;
    r.y1 = rand_scalar_nonzero(rng);
    r.y2 = rand_scalar_nonzero(rng);
    r.y3 = rand_scalar_nonzero(rng);
    if (policy.cols() == 0) throw Error("empty policy");
    r.v.reserve(policy.cols() - 1);
    for (std::size_t i = 1; i < policy.cols(); ++i) r.v.push_back(rand_scalar(rng));
    return detail::trap_core(pp, sk_r, pk_c, pk_a, policy, r);
}

inline TransformedTrapdoor trap_trans(const Scalar& sk_a, const Trapdoor& td, Rng& rng) {
    return detail::trap_trans_core(sk_a, td, {rand_scalar_nonzero(rng)});
}

#ifdef EEPAEKS_TESTING
inline Ciphertext enc_with(const PublicParams& pp, const Scalar& sk_s, const G1Elem& pk_c,
                           const G1Elem& pk_a, const KeywordSet& ws, const EncRandomness& r) {
    return detail::enc_core(pp, sk_s, pk_c, pk_a, ws, r);
}

inline TransformedCiphertext enc_trans_with(const Scalar& sk_a, const Ciphertext& ct,
                                            const EncTransRandomness& r) {
    return detail::enc_trans_core(sk_a, ct, r);
}

inline Trapdoor trap_with(const PublicParams& pp, const Scalar& sk_r, const G1Elem& pk_c,
                          const G1Elem& pk_a, const KeywordPolicy& policy,
                          const TrapRandomness& r) {
    return detail::trap_core(pp, sk_r, pk_c, pk_a, policy, r);
}

inline TransformedTrapdoor trap_trans_with(const Scalar& sk_a, const Trapdoor& td,
                                           const TrapTransRandomness& r) {
    return detail::trap_trans_core(sk_a, td, r);
}
#endif  // EEPAEKS_TESTING

/// Search step (1) matches delta_i against mu_j by canonical GT bytes;
/// step (2) runs one linear solve over all matched rows (the span of a row
/// superset contains the span of every subset, so one solve decides), then
/// checks the verification equation, which also rejects spurious GT
/// collisions. Exactly m + l + 2 pairings on a successful match.
inline bool search(const Scalar& sk_c, const TransformedCiphertext& ct,
                   const TransformedTrapdoor& td) {
    if (ct.ct1.empty()) throw Error("malformed ciphertext");
    if (td.td11.empty() || td.td11.size() != td.td12.size() ||
        td.td11.size() != td.matrix.size())
        throw Error("malformed trapdoor");

    // denominators, once each
    G1Elem dct_inv = (ct.ct2 * ct.ct3.pow(sk_c)).inverse();
    G1Elem dtd_inv = (td.td2 * td.td3.pow(sk_c)).inverse();

    std::vector<G1Elem> ct_base;  // A_i = ct1_i^c / (ct2 ct3^c), reused in step 2
    ct_base.reserve(ct.ct1.size());
    std::unordered_map<std::string, std::size_t> delta_by_bytes;
    for (std::size_t i = 0; i < ct.ct1.size(); ++i) {
        ct_base.push_back(ct.ct1[i].pow(sk_c) * dct_inv);
        GTElem delta = pair(ct_base.back(), td.td4);
        Bytes b = delta.raw_bytes();
        delta_by_bytes.emplace(std::string(b.begin(), b.end()), i);
    }

    std::vector<std::pair<std::size_t, std::vector<Scalar>>> matched_rows;
    std::vector<std::size_t> bound_ct;  // matched_rows[k] <-> ciphertext slot
    for (std::size_t j = 0; j < td.td12.size(); ++j) {
        GTElem mu = pair(td.td12[j].pow(sk_c) * dtd_inv, ct.ct4);
        Bytes b = mu.raw_bytes();
        auto it = delta_by_bytes.find(std::string(b.begin(), b.end()));
        if (it == delta_by_bytes.end()) continue;
        matched_rows.emplace_back(j, td.matrix[j]);
        bound_ct.push_back(it->second);
    }
    if (matched_rows.empty()) return false;

    auto coeffs = reconstruct_coeffs(matched_rows);
    if (!coeffs) return false;

    // verification equation, one pairing per side
    G1Elem left = G1Elem::identity();
    G1Elem right = G1Elem::identity();
    bool first = true;
    for (std::size_t k = 0; k < matched_rows.size(); ++k) {
        auto it = coeffs->gamma.find(matched_rows[k].first);
        if (it == coeffs->gamma.end()) continue;
        const Scalar& g = it->second;
        G1Elem lterm = td.td11[matched_rows[k].first].pow(g * sk_c);
        G1Elem rterm = ct_base[bound_ct[k]].pow(g);
        if (first) {
            left = lterm;
            right = rterm;
            first = false;
        } else {
            left = left * lterm;
            right = right * rterm;
        }
    }
    if (first) return false;  // all coefficients zero cannot reach (1,0,...,0)
    return pair(left * dtd_inv, ct.ct4) == pair(right, td.td4);
}

}  // namespace eepaeks

#endif  // EEPAEKS_SCHEME_HPP_
