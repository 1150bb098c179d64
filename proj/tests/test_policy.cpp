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

#include "test_util.hpp"

using namespace eepaeks;

namespace {

Scalar sc(std::uint64_t v) { return Scalar::from_u64(v); }

/// Sum of gamma_k * row_k must reproduce e1 exactly.
void check_reconstruction(const std::vector<std::pair<std::size_t, std::vector<Scalar>>>& rows,
                          const ReconstructionCoeffs& rc) {
    REQUIRE_FALSE(rows.empty());
    std::size_t t = rows.front().second.size();
    std::vector<Scalar> acc(t, Scalar::zero());
    for (const auto& [idx, row] : rows) {
        auto it = rc.gamma.find(idx);
        if (it == rc.gamma.end()) continue;
        for (std::size_t j = 0; j < t; ++j) acc[j] = acc[j] + it->second * row[j];
    }
    REQUIRE(acc[0] == Scalar::one());
    for (std::size_t j = 1; j < t; ++j) REQUIRE(acc[j].is_zero());
}

}  // namespace

TEST_CASE("grammar worked examples", "[policy]") {
    auto l = parse_query("disease:flu");
    REQUIRE(l.is_leaf());
    REQUIRE(l.leaf == Keyword{"disease", "flu"});

    auto q = parse_query("(disease:hypertension OR disease:diabetes) AND (age:40 OR age:50)");
    REQUIRE_FALSE(q.is_leaf());
    REQUIRE(q.threshold == 2);
    REQUIRE(q.children.size() == 2);
    REQUIRE(q.children[0].threshold == 1);
    REQUIRE(q.children[0].children.size() == 2);

    auto t = parse_query("THRESHOLD(2; a:1, b:2, c:3)");
    REQUIRE(t.threshold == 2);
    REQUIRE(t.children.size() == 3);

    // operators are case-insensitive, names/values case-sensitive
    auto ci = parse_query("a:x and b:y");
    REQUIRE(ci.threshold == 2);
    REQUIRE(parse_query("A:x").leaf.name == "A");

    // nesting inside THRESHOLD operands
    auto nested = parse_query("THRESHOLD(1; a:1 AND b:2, c:3)");
    REQUIRE(nested.children[0].threshold == 2);
}

TEST_CASE("grammar errors carry byte offsets", "[policy]") {
    auto offset_of = [](const char* q) -> std::size_t {
        try {
            parse_query(q);
        } catch (const ParseError& e) {
            return e.offset();
        }
        return SIZE_MAX;
    };
    REQUIRE(offset_of("") == 0);
    REQUIRE(offset_of("a:(") == 2);
    REQUIRE(offset_of("a:1 AND") == 7);
    REQUIRE(offset_of("THRESHOLD(4; a:1, b:2)") == 10);  // t out of [1, 2]
    REQUIRE(offset_of("THRESHOLD(x; a:1, b:2)") == 10);
    REQUIRE(offset_of("(a:1") == 4);
    REQUIRE(offset_of("a:1 b:2") == 4);  // trailing junk
}

TEST_CASE("LCW compilation worked examples", "[policy]") {
    SECTION("single leaf") {
        auto kp = compile_policy(parse_query("disease:flu"));
        REQUIRE(kp.rows() == 1);
        REQUIRE(kp.cols() == 1);
        REQUIRE(kp.matrix[0][0] == Scalar::one());
    }
    SECTION("a AND b") {
        auto kp = compile_policy(parse_query("a:1 AND b:2"));
        REQUIRE(kp.rows() == 2);
        REQUIRE(kp.cols() == 2);
        REQUIRE(kp.matrix[0] == std::vector<Scalar>{sc(1), sc(1)});
        REQUIRE(kp.matrix[1] == std::vector<Scalar>{sc(1), sc(2)});
        std::vector<std::pair<std::size_t, std::vector<Scalar>>> rows{
            {0, kp.matrix[0]}, {1, kp.matrix[1]}};
        auto rc = reconstruct_coeffs(rows);
        REQUIRE(rc.has_value());
        REQUIRE(rc->gamma.at(0) == sc(2));
        REQUIRE(rc->gamma.at(1) == -sc(1));
        check_reconstruction(rows, *rc);
    }
    SECTION("a OR b adds no columns") {
        auto kp = compile_policy(parse_query("a:1 OR b:2"));
        REQUIRE(kp.rows() == 2);
        REQUIRE(kp.cols() == 1);
        REQUIRE(kp.matrix[0][0] == Scalar::one());
        REQUIRE(kp.matrix[1][0] == Scalar::one());
    }
    SECTION("column count is 1 + sum of (t-1)") {
        auto kp = compile_policy(
            parse_query("THRESHOLD(2; a:1, b:2, c:3) AND (d:4 OR e:5)"));
        // root AND(t=2): +1; THRESHOLD(t=2): +1; OR(t=1): +0
        REQUIRE(kp.cols() == 3);
        REQUIRE(kp.rows() == 5);
    }
    SECTION("duplicate leaves each get their own row") {
        auto kp = compile_policy(parse_query("a:1 OR a:1"));
        REQUIRE(kp.rows() == 2);
        REQUIRE(kp.leaves[0] == kp.leaves[1]);
    }
}

TEST_CASE("compiled matrices have an all-ones first column", "[policy]") {
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto ast = testutil::random_policy(g, 8, 3);
        auto kp = compile_policy(ast);
        REQUIRE(kp.rows() == ast.leaf_count());
        for (std::size_t i = 0; i < kp.rows(); ++i)
            REQUIRE(kp.matrix[i][0] == Scalar::one());
    }
}

TEST_CASE("satisfies brute-force oracle", "[policy]") {
    KeywordSet ws(std::vector<Keyword>{{"a", "1"}});
    REQUIRE(satisfies(parse_query("a:1"), ws));
    REQUIRE_FALSE(satisfies(parse_query("a:1 AND b:2"), ws));
    KeywordSet ws2(std::vector<Keyword>{{"a", "1"}, {"c", "3"}});
    REQUIRE(satisfies(parse_query("THRESHOLD(2; a:1, b:2, c:3)"), ws2));
}

TEST_CASE("sharing matches the matrix product", "[policy]") {
    SECTION("identity matrix row") {
        std::vector<std::vector<Scalar>> m{{Scalar::one()}};
        auto shares = share_secret(m, sc(5), {});
        REQUIRE(shares == std::vector<Scalar>{sc(5)});
    }
    SECTION("AND matrix") {
        auto kp = compile_policy(parse_query("a:1 AND b:2"));
        SeededRng rng(12);
        Scalar s = rand_scalar_nonzero(rng), r = rand_scalar_nonzero(rng);
        auto shares = share_secret(kp.matrix, s, {r});
        REQUIRE(shares[0] == s + r);
        REQUIRE(shares[1] == s + r + r);
    }
    SECTION("dimension mismatch") {
        auto kp = compile_policy(parse_query("a:1 AND b:2"));
        REQUIRE_THROWS_AS(share_secret(kp.matrix, sc(1), {}), Error);
    }
}

TEST_CASE("reconstruct over authorized rows recovers the secret", "[policy]") {
    std::mt19937_64 g(13);
    SeededRng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        auto ast = testutil::random_policy(g, 6, 3);
        auto kp = compile_policy(ast);
        Scalar secret = rand_scalar_nonzero(rng);
        std::vector<Scalar> v;
        for (std::size_t i = 1; i < kp.cols(); ++i) v.push_back(rand_scalar(rng));
        auto shares = share_secret(kp.matrix, secret, v);

        auto vocab = testutil::policy_vocabulary(ast);
        std::uniform_int_distribution<int> coin(0, 1);
        std::vector<Keyword> chosen;
        for (const auto& k : vocab)
            if (coin(g)) chosen.push_back(k);
        if (chosen.empty()) continue;
        KeywordSet ws(chosen);

        std::vector<std::pair<std::size_t, std::vector<Scalar>>> rows;
        for (auto i : matching_rows(kp, ws)) rows.emplace_back(i, kp.matrix[i]);
        auto rc = reconstruct_coeffs(rows);
        REQUIRE(rc.has_value() == satisfies(ast, ws));
        if (rc) {
            check_reconstruction(rows, *rc);
            Scalar sum = Scalar::zero();
            for (const auto& [idx, gamma] : rc->gamma) sum = sum + gamma * shares[idx];
            REQUIRE(sum == secret);
        }
    }
}

TEST_CASE("span oracle: exhaustive subsets match brute force", "[policy]") {
    std::mt19937_64 g(15);
    for (int trial = 0; trial < 20; ++trial) {
        PolicyAst ast = testutil::random_policy(g, 8, 3, 8, 1);
        auto kp = compile_policy(ast);
        std::size_t l = kp.rows();
        REQUIRE(l <= 8);

        // enumerate subsets of leaf rows (as keyword subsets of the leaf multiset)
        auto vocab = testutil::policy_vocabulary(ast);
        std::size_t nv = vocab.size();
        for (std::size_t mask = 0; mask < (1u << nv); ++mask) {
            std::vector<Keyword> chosen;
            for (std::size_t b = 0; b < nv; ++b)
                if (mask & (1u << b)) chosen.push_back(vocab[b]);
            bool expect;
            std::vector<std::pair<std::size_t, std::vector<Scalar>>> rows;
            if (chosen.empty()) {
                expect = false;
            } else {
                KeywordSet ws(chosen);
                expect = satisfies(ast, ws);
                for (auto i : matching_rows(kp, ws)) rows.emplace_back(i, kp.matrix[i]);
            }
            auto rc = reconstruct_coeffs(rows);
            REQUIRE(rc.has_value() == expect);
            if (rc) check_reconstruction(rows, *rc);
        }
    }
}

TEST_CASE("single row of the AND matrix is not in span", "[policy]") {
    auto kp = compile_policy(parse_query("a:1 AND b:2"));
    std::vector<std::pair<std::size_t, std::vector<Scalar>>> rows{{0, kp.matrix[0]}};
    REQUIRE_FALSE(reconstruct_coeffs(rows).has_value());
}

TEST_CASE("render/parse round trip", "[policy]") {
    std::mt19937_64 g(16);
    for (int trial = 0; trial < 100; ++trial) {
        auto ast = testutil::random_policy(g, 8, 3);
        auto round = parse_query(render_query(ast));
        REQUIRE(round.structurally_equal(ast));
    }
}

TEST_CASE("policy serialization round trip", "[policy]") {
    std::mt19937_64 g(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto kp = compile_policy(testutil::random_policy(g, 6, 3));
        auto back = KeywordPolicy::deserialize(kp.serialize());
        REQUIRE(back.matrix == kp.matrix);
        REQUIRE(back.pi == kp.pi);
        REQUIRE(back.leaves == kp.leaves);
    }
}

TEST_CASE("keyword invariants", "[policy]") {
    REQUIRE_THROWS_AS(KeywordSet(std::vector<Keyword>{}), Error);
    REQUIRE_THROWS_AS(KeywordSet(std::vector<Keyword>{{"a", "1"}, {"a", "1"}}), Error);
    REQUIRE_THROWS_AS((Keyword{"", "x"}).canonical(), Error);
    // same name, different values is allowed
    REQUIRE_NOTHROW(KeywordSet(std::vector<Keyword>{{"a", "1"}, {"a", "2"}}));
    // canonical encoding embeds the separator
    auto enc = Keyword{"ab", "c"}.canonical();
    REQUIRE(enc.size() == 4 + 2 + 1 + 4 + 1);
    REQUIRE(enc[4 + 2] == 0x1F);
    // CLI spec form
    auto ws = KeywordSet::from_spec("a:1,b:2");
    REQUIRE(ws.size() == 2);
    REQUIRE_THROWS_AS(KeywordSet::from_spec("a"), Error);
}
