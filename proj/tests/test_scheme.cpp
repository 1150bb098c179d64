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
#include <catch2/catch.hpp>

#include "eepaeks/scheme.hpp"
#include "test_util.hpp"

using namespace eepaeks;

namespace {

struct Parties {
    PublicParams pp;
    KeyPair cloud, aux, sender, receiver;

    static Parties make(std::uint64_t seed) {
        Parties p{setup(CurveId::bn254), {}, {}, {}, {}};
        SeededRng rng(seed);
        p.cloud = keygen(p.pp, Role::cloud, rng);
        p.aux = keygen(p.pp, Role::aux, rng);
        p.sender = keygen(p.pp, Role::sender, rng);
        p.receiver = keygen(p.pp, Role::receiver, rng);
        return p;
    }
};

bool run_search(const Parties& p, const KeywordSet& ws, const std::string& query,
                Rng& rng) {
    auto ct = enc(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, rng);
    auto ctx = enc_trans(p.aux.secret(), ct, rng);
    auto td = trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk,
                   compile_policy(parse_query(query)), rng);
    auto tdx = trap_trans(p.aux.secret(), td, rng);
    return search(p.cloud.secret(), ctx, tdx);
}

}  // namespace

TEST_CASE("keygen properties", "[scheme]") {
    auto p = Parties::make(31);
    REQUIRE(pair(p.cloud.pk, p.pp.g2) == pair(p.pp.g1, p.pp.g2).pow(p.cloud.secret()));
    // seeded rng reproduces the key pair
    SeededRng a(99), b(99);
    auto k1 = keygen(p.pp, Role::sender, a);
    auto k2 = keygen(p.pp, Role::sender, b);
    REQUIRE(k1.pk == k2.pk);
    REQUIRE(*k1.sk == *k2.sk);
    // key file round trip, public-only and with secret
    auto full = KeyPair::deserialize(k1.serialize(true));
    REQUIRE(full.sk.has_value());
    REQUIRE(full.pk == k1.pk);
    auto pub = KeyPair::deserialize(k1.serialize(false));
    REQUIRE_FALSE(pub.sk.has_value());
    REQUIRE_THROWS_AS(pub.secret(), Error);
}

TEST_CASE("search end-to-end worked examples", "[scheme]") {
    auto p = Parties::make(32);
    SeededRng rng(33);
    KeywordSet ws(std::vector<Keyword>{{"disease", "flu"}});
    REQUIRE(run_search(p, ws, "disease:flu", rng));
    REQUIRE_FALSE(run_search(p, ws, "disease:cold", rng));

    KeywordSet ehr(std::vector<Keyword>{{"disease", "hypertension"}, {"age", "40"}});
    REQUIRE(run_search(p, ehr,
                       "(disease:hypertension OR disease:diabetes) AND (age:40 OR age:50)",
                       rng));
    REQUIRE_FALSE(run_search(p, ehr,
                             "(disease:hypertension OR disease:diabetes) AND age:50", rng));
    REQUIRE(run_search(p, ehr, "THRESHOLD(2; disease:hypertension, age:40, lab:x)", rng));
    REQUIRE_FALSE(run_search(p, ehr, "THRESHOLD(3; disease:hypertension, age:40, lab:x)", rng));
}

TEST_CASE("ciphertext shape and validation", "[scheme]") {
    auto p = Parties::make(34);
    SeededRng rng(35);
    KeywordSet ws(std::vector<Keyword>{{"a", "1"}, {"b", "2"}});
    auto ct = enc(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, rng);
    REQUIRE(ct.ct1.size() == 2);

    Ciphertext broken;
    REQUIRE_THROWS_AS(enc_trans(p.aux.secret(), broken, rng), Error);

    KeywordPolicy no_leaves = compile_policy(parse_query("a:1"));
    no_leaves.leaves.clear();
    REQUIRE_THROWS_AS(trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk, no_leaves, rng),
                      Error);
}

TEST_CASE("transform rerandomization", "[scheme]") {
    auto p = Parties::make(36);
    SeededRng rng(37);
    KeywordSet ws(std::vector<Keyword>{{"a", "1"}, {"b", "2"}});
    auto ct = enc(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, rng);
    auto t1 = enc_trans(p.aux.secret(), ct, rng);
    auto t2 = enc_trans(p.aux.secret(), ct, rng);
    REQUIRE(serialize(t1) != serialize(t2));
    REQUIRE(t1.ct1.size() == ct.ct1.size());

    auto td = trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk,
                   compile_policy(parse_query("a:1 AND b:2")), rng);
    auto x1 = trap_trans(p.aux.secret(), td, rng);
    auto x2 = trap_trans(p.aux.secret(), td, rng);
    REQUIRE(serialize(x1) != serialize(x2));
    REQUIRE(x1.matrix == td.matrix);
    REQUIRE(x1.pi == td.pi);

    // search result is invariant across independent transforms
    for (int i = 0; i < 20; ++i) {
        auto ci = enc_trans(p.aux.secret(), ct, rng);
        auto ti = trap_trans(p.aux.secret(), td, rng);
        REQUIRE(search(p.cloud.secret(), ci, ti));
    }
    auto td_miss = trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk,
                        compile_policy(parse_query("a:1 AND b:3")), rng);
    for (int i = 0; i < 20; ++i) {
        auto ci = enc_trans(p.aux.secret(), ct, rng);
        auto ti = trap_trans(p.aux.secret(), td_miss, rng);
        REQUIRE_FALSE(search(p.cloud.secret(), ci, ti));
    }
}

TEST_CASE("single-leaf trapdoor components coincide", "[scheme]") {
    auto p = Parties::make(38);
    SeededRng rng(39);
    auto td = trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk,
                   compile_policy(parse_query("a:1")), rng);
    REQUIRE(td.td11[0] == td.td12[0]);
}

TEST_CASE("operation counts match the cost formulas", "[scheme]") {
    auto p = Parties::make(40);
    SeededRng rng(41);
    for (std::uint32_t m : {1u, 2u, 5u, 10u}) {
        std::vector<Keyword> kws;
        for (std::uint32_t i = 0; i < m; ++i)
            kws.push_back(Keyword{"k" + std::to_string(i), "v"});
        KeywordSet ws(std::move(kws));
        OpCounters c;
        {
            counters::Scope s(c);
            (void)enc(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, rng);
        }
        CHECK(c.exps == m + 4);
        CHECK(c.muls == m + 1);
        CHECK(c.hashes == m);
        CHECK(c.pairings == 0);
    }
    for (std::uint32_t l : {1u, 3u, 10u}) {
        std::string q = "k0:v";
        for (std::uint32_t i = 1; i < l; ++i) q += " AND k" + std::to_string(i) + ":v";
        auto kp = compile_policy(parse_query(q));
        auto t_cols = static_cast<std::uint64_t>(kp.cols());
        OpCounters c;
        {
            counters::Scope s(c);
            (void)trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk, kp, rng);
        }
        CHECK(c.exps == 2ull * l + 4);
        CHECK(c.muls == t_cols * l + 2ull * l + 1);
        CHECK(c.hashes == l);
    }
}

TEST_CASE("search pairing count", "[scheme]") {
    auto p = Parties::make(42);
    SeededRng rng(43);
    KeywordSet ws(std::vector<Keyword>{{"a", "1"}, {"b", "2"}, {"c", "3"}});
    auto ctx = enc_trans(p.aux.secret(),
                         enc(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, rng), rng);
    auto tdx = trap_trans(
        p.aux.secret(),
        trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk,
             compile_policy(parse_query("a:1 AND b:2")), rng),
        rng);
    OpCounters c;
    {
        counters::Scope s(c);
        REQUIRE(search(p.cloud.secret(), ctx, tdx));
    }
    REQUIRE(c.pairings == 3 + 2 + 2);

    // non-matching trapdoor stops after step (1)
    auto miss = trap_trans(
        p.aux.secret(),
        trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk,
             compile_policy(parse_query("z:9 AND b:2")), rng),
        rng);
    OpCounters c2;
    {
        counters::Scope s(c2);
        REQUIRE_FALSE(search(p.cloud.secret(), ctx, miss));
    }
    REQUIRE(c2.pairings == 3 + 2);
}

TEST_CASE("white-box identities from the exposed randomness", "[scheme]") {
    auto p = Parties::make(44);
    SeededRng rng(45);
    KeywordSet ws(std::vector<Keyword>{{"a", "1"}, {"b", "2"}});
    EncRandomness er{rand_scalar_nonzero(rng), rand_scalar_nonzero(rng),
                     rand_scalar_nonzero(rng)};
    auto ct = enc_with(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, er);
    auto shared = p.pp.g1.pow(er.x1 + er.x2);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        REQUIRE(pair(ct.ct1[i] * shared.inverse(), p.pp.g2) ==
                pair(hash_to_g1(p.pp, ws[i].canonical()), ct.ct4));
    }
}

TEST_CASE("correctness identity: both sides equal the hash product", "[scheme]") {
    auto p = Parties::make(46);
    SeededRng rng(47);
    KeywordSet ws(std::vector<Keyword>{{"a", "1"}, {"b", "2"}, {"c", "3"}});
    auto kp = compile_policy(parse_query("a:1 AND c:3"));

    EncRandomness er{rand_scalar_nonzero(rng), rand_scalar_nonzero(rng),
                     rand_scalar_nonzero(rng)};
    EncTransRandomness xr{rand_scalar_nonzero(rng)};
    TrapRandomness tr{rand_scalar_nonzero(rng), rand_scalar_nonzero(rng),
                      rand_scalar_nonzero(rng),
                      {rand_scalar(rng)}};
    TrapTransRandomness yr{rand_scalar_nonzero(rng)};

    auto ct = enc_with(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, er);
    auto ctx = enc_trans_with(p.aux.secret(), ct, xr);
    auto td = trap_with(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk, kp, tr);
    auto tdx = trap_trans_with(p.aux.secret(), td, yr);

    const Scalar& c = p.cloud.secret();
    // matched rows: row 0 <-> slot 0 (a:1), row 1 <-> slot 2 (c:3)
    std::vector<std::pair<std::size_t, std::vector<Scalar>>> rows{
        {0, kp.matrix[0]}, {1, kp.matrix[1]}};
    auto rc = reconstruct_coeffs(rows);
    REQUIRE(rc.has_value());
    std::vector<std::size_t> slot_of_row{0, 2};

    G1Elem dct_inv = (ctx.ct2 * ctx.ct3.pow(c)).inverse();
    G1Elem dtd_inv = (tdx.td2 * tdx.td3.pow(c)).inverse();
    G1Elem lnum = G1Elem::identity();
    G1Elem rnum = G1Elem::identity();
    bool first = true;
    for (const auto& [row, gamma] : rc->gamma) {
        G1Elem lt = tdx.td11[row].pow(gamma * c);
        G1Elem rt = (ctx.ct1[slot_of_row[row]].pow(c) * dct_inv).pow(gamma);
        if (first) {
            lnum = lt;
            rnum = rt;
            first = false;
        } else {
            lnum = lnum * lt;
            rnum = rnum * rt;
        }
    }
    GTElem lhs = pair(lnum * dtd_inv, ctx.ct4);
    GTElem rhs = pair(rnum, tdx.td4);
    REQUIRE(lhs == rhs);

    // both sides equal prod_k e(H(w_k), g2)^(xhat x3 yhat y3 c a^2 s r gamma_k)
    Scalar expo = xr.xhat * er.x3 * yr.yhat * tr.y3 * c * p.aux.secret() * p.aux.secret() *
                  p.sender.secret() * p.receiver.secret();
    GTElem expected = GTElem::identity();
    for (const auto& [row, gamma] : rc->gamma) {
        auto h = hash_to_g1(p.pp, kp.leaf_of_row(row).canonical());
        expected = expected * pair(h, p.pp.g2).pow(expo * gamma);
    }
    REQUIRE(lhs == expected);
    REQUIRE(rhs == expected);
}

TEST_CASE("randomized equivalence with the brute-force oracle", "[scheme]") {
    auto p = Parties::make(48);
    SeededRng rng(49);
    std::mt19937_64 g(50);
    int hits = 0;
    for (int trial = 0; trial < 60; ++trial) {
        KeywordSet ws = testutil::random_keyword_set(g, 6);
        PolicyAst ast = testutil::random_policy(g, 6, 3);
        bool expected = satisfies(ast, ws);
        auto ctx = enc_trans(p.aux.secret(),
                             enc(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, rng), rng);
        auto tdx = trap_trans(p.aux.secret(),
                              trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk,
                                   compile_policy(ast), rng),
                              rng);
        REQUIRE(search(p.cloud.secret(), ctx, tdx) == expected);
        if (expected) ++hits;
    }
    // the generator must exercise both outcomes
    REQUIRE(hits > 5);
    REQUIRE(hits < 55);
}

TEST_CASE("serialized objects reveal no keyword bytes", "[scheme]") {
    auto p = Parties::make(51);
    SeededRng rng(52);
    std::mt19937_64 g(53);
    for (int trial = 0; trial < 25; ++trial) {
        KeywordSet ws = testutil::random_keyword_set(g, 5);
        auto ct = enc(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, rng);
        Bytes ct_bytes = serialize(ct);
        Bytes ctx_bytes = serialize(enc_trans(p.aux.secret(), ct, rng));
        PolicyAst ast = testutil::random_policy(g, 5, 2);
        auto td = trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk, compile_policy(ast),
                       rng);
        Bytes td_bytes = serialize(td);
        Bytes tdx_bytes = serialize(trap_trans(p.aux.secret(), td, rng));
        for (const auto& kw : ws) {
            Bytes enc_kw = kw.canonical();
            REQUIRE_FALSE(contains_subsequence(ct_bytes, enc_kw));
            REQUIRE_FALSE(contains_subsequence(ctx_bytes, enc_kw));
        }
        for (const auto& kw : testutil::policy_vocabulary(ast)) {
            Bytes enc_kw = kw.canonical();
            REQUIRE_FALSE(contains_subsequence(td_bytes, enc_kw));
            REQUIRE_FALSE(contains_subsequence(tdx_bytes, enc_kw));
        }
    }
}

TEST_CASE("two trapdoors for one policy share no group elements", "[scheme]") {
    auto p = Parties::make(54);
    SeededRng rng(55);
    auto kp = compile_policy(parse_query("a:1 AND b:2"));
    auto t1 = trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk, kp, rng);
    auto t2 = trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk, kp, rng);
    for (std::size_t i = 0; i < t1.td11.size(); ++i) {
        REQUIRE(t1.td11[i] != t2.td11[i]);
        REQUIRE(t1.td12[i] != t2.td12[i]);
    }
    REQUIRE(t1.td2 != t2.td2);
    REQUIRE(t1.td3 != t2.td3);
    REQUIRE(t1.td4 != t2.td4);
    REQUIRE(t1.matrix == t2.matrix);
}

TEST_CASE("scheme object serialization round trips", "[scheme]") {
    auto p = Parties::make(56);
    SeededRng rng(57);
    KeywordSet ws(std::vector<Keyword>{{"a", "1"}, {"b", "2"}});
    auto ct = enc(p.pp, p.sender.secret(), p.cloud.pk, p.aux.pk, ws, rng);
    auto ctx = enc_trans(p.aux.secret(), ct, rng);
    auto td = trap(p.pp, p.receiver.secret(), p.cloud.pk, p.aux.pk,
                   compile_policy(parse_query("a:1 OR c:9")), rng);
    auto tdx = trap_trans(p.aux.secret(), td, rng);

    REQUIRE(serialize(deserialize_ciphertext(serialize(ct))) == serialize(ct));
    REQUIRE(serialize(deserialize_transformed_ciphertext(serialize(ctx))) == serialize(ctx));
    REQUIRE(serialize(deserialize_trapdoor(serialize(td))) == serialize(td));
    REQUIRE(serialize(deserialize_transformed_trapdoor(serialize(tdx))) == serialize(tdx));

    // type tags are enforced: a ciphertext is not a transformed ciphertext
    REQUIRE_THROWS_AS(deserialize_transformed_ciphertext(serialize(ct)), DeserializeError);
    // size formulas: ct has m+3 elements, td has 2l+3 plus the matrix
    REQUIRE(serialize(ctx).size() == 6 + 4 + (2 + 2) * 32 + 64);
    std::size_t l = td.rows(), t = td.cols();
    REQUIRE(serialize(td).size() ==
            6 + 8 + l * t * 32 + l * 4 + (2 * l + 2) * 32 + 64);
}
