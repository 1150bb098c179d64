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

// eepaeks: searchable-encryption CLI.
//
// Exit codes: 0 success (for `search`: match), 1 no-match (search only),
// >= 2 usage or processing error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "eepaeks/harness.hpp"

namespace {

using namespace eepaeks;

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot create file: " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("write failed: " + path);
}

CurveId env_curve() {
    const char* c = std::getenv("EEPAEKS_CURVE");
    return curve_from_name(c ? c : "default");
}

std::unique_ptr<Rng> make_rng(bool has_seed, std::uint64_t seed) {
    if (has_seed) return std::make_unique<SeededRng>(seed);
    return std::make_unique<SystemRng>();
}

KeyPair load_key(const std::string& path, Role expected, bool need_secret) {
    KeyPair kp = KeyPair::deserialize(read_file(path));
    if (kp.role != expected)
        throw Error("key file " + path + " holds a " + role_name(kp.role) + " key, expected " +
                    role_name(expected));
    if (need_secret && !kp.sk) throw Error("key file " + path + " holds no secret key");
    return kp;
}

G1Elem load_pk(const std::string& path, Role expected) {
    return load_key(path, expected, false).pk;
}

struct Range {
    std::uint32_t lo = 1, hi = 1, step = 1;
};

Range parse_range(const std::string& s) {
    Range r;
    std::size_t c1 = s.find(':');
    if (c1 == std::string::npos) {
        r.lo = r.hi = static_cast<std::uint32_t>(std::stoul(s));
        return r;
    }
    r.lo = static_cast<std::uint32_t>(std::stoul(s.substr(0, c1)));
    std::size_t c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos) {
        r.hi = static_cast<std::uint32_t>(std::stoul(s.substr(c1 + 1)));
    } else {
        r.hi = static_cast<std::uint32_t>(std::stoul(s.substr(c1 + 1, c2 - c1 - 1)));
        r.step = static_cast<std::uint32_t>(std::stoul(s.substr(c2 + 1)));
    }
    if (r.lo < 1 || r.hi < r.lo || r.step < 1) throw Error("bad range: " + s);
    return r;
}

KeywordSet bench_keywords(std::uint32_t m) {
    std::vector<Keyword> kws;
    for (std::uint32_t i = 0; i < m; ++i)
        kws.push_back(Keyword{"k" + std::to_string(i), "v" + std::to_string(i)});
    return KeywordSet(std::move(kws));
}

// a policy of l rows that the bench keyword set always satisfies
KeywordPolicy bench_policy(std::uint32_t m, std::uint32_t l) {
    std::string q;
    if (l <= m) {
        for (std::uint32_t i = 0; i < l; ++i) {
            if (i) q += " AND ";
            q += "k" + std::to_string(i) + ":v" + std::to_string(i);
        }
    } else {
        q = "k0:v0";
        for (std::uint32_t i = 1; i < l; ++i) q += " OR x" + std::to_string(i) + ":j";
    }
    return compile_policy(parse_query(q));
}

double mean_ns(const std::function<void()>& fn, std::uint32_t trials) {
    double total = 0;
    for (std::uint32_t i = 0; i < trials; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        total += std::chrono::duration<double, std::nano>(t1 - t0).count();
    }
    return total / trials;
}

int run_bench(const Range& mr, const Range& lr, std::uint32_t trials, bool count_ops,
              std::uint64_t seed, const std::string& out_path) {
    auto pp = setup(env_curve());
    SeededRng rng(seed);
    auto kc = keygen(pp, Role::cloud, rng);
    auto ka = keygen(pp, Role::aux, rng);
    auto ks = keygen(pp, Role::sender, rng);
    auto kr = keygen(pp, Role::receiver, rng);

    std::ostringstream csv;
    csv << "op,m,l,trials,exps,muls,hashes,pairings,mean_ns\n";

    for (std::uint32_t m = mr.lo; m <= mr.hi; m += mr.step) {
        for (std::uint32_t l = lr.lo; l <= lr.hi; l += lr.step) {
            KeywordSet ws = bench_keywords(m);
            KeywordPolicy policy = bench_policy(m, l);
            auto t_cols = static_cast<std::uint64_t>(policy.cols());

            struct OpRow {
                const char* name;
                OpCounters ops;
                double ns = 0;
            };
            OpRow rows[5] = {{"enc", {}, 0},
                             {"trap", {}, 0},
                             {"enc_trans", {}, 0},
                             {"trap_trans", {}, 0},
                             {"search", {}, 0}};

            // counting pass (single run per op, counters installed)
            Ciphertext ct;
            Trapdoor td;
            TransformedCiphertext ctx;
            TransformedTrapdoor tdx;
            {
                counters::Scope s(rows[0].ops);
                ct = enc(pp, ks.secret(), kc.pk, ka.pk, ws, rng);
            }
            {
                counters::Scope s(rows[1].ops);
                td = trap(pp, kr.secret(), kc.pk, ka.pk, policy, rng);
            }
            {
                counters::Scope s(rows[2].ops);
                ctx = enc_trans(ka.secret(), ct, rng);
            }
            {
                counters::Scope s(rows[3].ops);
                tdx = trap_trans(ka.secret(), td, rng);
            }
            bool matched;
            {
                counters::Scope s(rows[4].ops);
                matched = search(kc.secret(), ctx, tdx);
            }

            if (count_ops) {
                auto fail = [&](const std::string& what) {
                    std::cerr << "bench: counter assertion failed at m=" << m << " l=" << l
                              << ": " << what << "\n";
                    return 2;
                };
                if (!matched) return fail("search must match");
                if (rows[0].ops.exps != m + 4ull) return fail("enc exps != m+4");
                if (rows[0].ops.muls != m + 1ull) return fail("enc muls != m+1");
                if (rows[0].ops.hashes != m) return fail("enc hashes != m");
                if (rows[1].ops.exps != 2ull * l + 4) return fail("trap exps != 2l+4");
                if (rows[1].ops.muls != t_cols * l + 2ull * l + 1) return fail("trap muls != tl+2l+1");
                if (rows[1].ops.hashes != l) return fail("trap hashes != l");
                if (rows[4].ops.pairings != m + l + 2ull) return fail("search pairings != m+l+2");
                Bytes ctx_bytes = serialize(ctx);
                std::size_t expect = 6 + 4 + (m + 2ull) * G1Elem::kByteLen + G2Elem::kByteLen;
                if (ctx_bytes.size() != expect) return fail("transformed ciphertext size");
            }

            // timing pass, counters off
            rows[0].ns = mean_ns([&] { (void)enc(pp, ks.secret(), kc.pk, ka.pk, ws, rng); }, trials);
            rows[1].ns = mean_ns([&] { (void)trap(pp, kr.secret(), kc.pk, ka.pk, policy, rng); }, trials);
            rows[2].ns = mean_ns([&] { (void)enc_trans(ka.secret(), ct, rng); }, trials);
            rows[3].ns = mean_ns([&] { (void)trap_trans(ka.secret(), td, rng); }, trials);
            rows[4].ns = mean_ns([&] { (void)search(kc.secret(), ctx, tdx); }, trials);

            for (const auto& rrow : rows)
                csv << rrow.name << ',' << m << ',' << l << ',' << trials << ','
                    << rrow.ops.exps << ',' << rrow.ops.muls << ',' << rrow.ops.hashes << ','
                    << rrow.ops.pairings << ',' << static_cast<std::uint64_t>(rrow.ns) << '\n';
        }
    }

    if (out_path.empty()) std::cout << csv.str();
    else write_file(out_path, to_bytes(csv.str()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EE-PAEKS searchable encryption"};
    app.require_subcommand(1);

    std::string pp_path, sk_path, pk_cloud_path, pk_aux_path, in_path, out_path, index_path;
    std::string keywords_spec, query_text, td_path, doc_ref, role_str, out_pk_path;
    std::string m_range_str = "1:10", l_range_str = "1:10";
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::uint32_t trials = 3;
    bool count_ops = false;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "deterministic rng seed")->each([&](const std::string&) {
            has_seed = true;
        });
    };

    auto* c_setup = app.add_subcommand("setup", "write public parameters");
    c_setup->add_option("--out", out_path, "output file")->required();

    auto* c_keygen = app.add_subcommand("keygen", "generate a role key pair");
    c_keygen->add_option("--pp", pp_path, "public parameters")->required();
    c_keygen->add_option("--role", role_str, "cloud|aux|sender|receiver")->required();
    c_keygen->add_option("--out", out_path, "key pair output (includes secret)")->required();
    c_keygen->add_option("--out-pk", out_pk_path, "public-only key output");
    add_seed(c_keygen);

    auto* c_enc = app.add_subcommand("encrypt", "encrypt a keyword set");
    c_enc->add_option("--pp", pp_path)->required();
    c_enc->add_option("--sk", sk_path, "sender key file")->required();
    c_enc->add_option("--pk-cloud", pk_cloud_path)->required();
    c_enc->add_option("--pk-aux", pk_aux_path)->required();
    c_enc->add_option("--keywords", keywords_spec, "name:value[,name:value...]")->required();
    c_enc->add_option("--out", out_path)->required();
    add_seed(c_enc);

    auto* c_trap = app.add_subcommand("trapdoor", "build a query trapdoor");
    c_trap->add_option("--pp", pp_path)->required();
    c_trap->add_option("--sk", sk_path, "receiver key file")->required();
    c_trap->add_option("--pk-cloud", pk_cloud_path)->required();
    c_trap->add_option("--pk-aux", pk_aux_path)->required();
    c_trap->add_option("--query", query_text, "boolean/threshold query")->required();
    c_trap->add_option("--out", out_path)->required();
    add_seed(c_trap);

    auto* c_tct = app.add_subcommand("transform-ct", "auxiliary-server ciphertext transform");
    c_tct->add_option("--sk", sk_path, "aux key file")->required();
    c_tct->add_option("--in", in_path, "ciphertext")->required();
    c_tct->add_option("--out", out_path)->required();
    add_seed(c_tct);

    auto* c_ttd = app.add_subcommand("transform-td", "auxiliary-server trapdoor transform");
    c_ttd->add_option("--sk", sk_path, "aux key file")->required();
    c_ttd->add_option("--in", in_path, "trapdoor")->required();
    c_ttd->add_option("--out", out_path)->required();
    add_seed(c_ttd);

    auto* c_search = app.add_subcommand("search", "test one transformed ciphertext");
    c_search->add_option("--sk", sk_path, "cloud key file")->required();
    c_search->add_option("--in", in_path, "transformed ciphertext")->required();
    c_search->add_option("--td", td_path, "transformed trapdoor")->required();

    auto* c_iins = app.add_subcommand("index-insert", "insert into the inverted index");
    c_iins->add_option("--pp", pp_path)->required();
    c_iins->add_option("--sk", sk_path, "cloud key file")->required();
    c_iins->add_option("--index", index_path, "index file (created if missing)")->required();
    c_iins->add_option("--in", in_path, "transformed ciphertext")->required();
    c_iins->add_option("--doc-ref", doc_ref, "opaque document reference")->required();

    auto* c_isearch = app.add_subcommand("index-search", "fast search over the index");
    c_isearch->add_option("--pp", pp_path)->required();
    c_isearch->add_option("--sk", sk_path, "cloud key file")->required();
    c_isearch->add_option("--index", index_path)->required();
    c_isearch->add_option("--td", td_path, "transformed trapdoor")->required();
    c_isearch->add_option("--out", out_path, "write matches here instead of stdout");

    auto* c_bench = app.add_subcommand("bench", "cost benchmark; CSV report");
    c_bench->add_option("--m-range", m_range_str, "lo:hi[:step]");
    c_bench->add_option("--l-range", l_range_str, "lo:hi[:step]");
    c_bench->add_option("--trials", trials, "timing repetitions");
    c_bench->add_flag("--count-ops", count_ops, "assert the cost formulas");
    c_bench->add_option("--out", out_path, "CSV output (stdout if absent)");
    add_seed(c_bench);

    auto* c_scen = app.add_subcommand("scenario", "run a four-party scenario");
    c_scen->add_option("--in", in_path, "scenario config file")->required();
    c_scen->add_option("--out", out_path, "transcript CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_setup->parsed()) {
            auto pp = setup(env_curve());
            write_file(out_path, pp.serialize());
            return 0;
        }
        if (c_keygen->parsed()) {
            auto pp = PublicParams::deserialize(read_file(pp_path));
            auto rng = make_rng(has_seed, seed);
            KeyPair kp = keygen(pp, role_from_name(role_str), *rng);
            write_file(out_path, kp.serialize(true));
            if (!out_pk_path.empty()) write_file(out_pk_path, kp.serialize(false));
            return 0;
        }
        if (c_enc->parsed()) {
            auto pp = PublicParams::deserialize(read_file(pp_path));
            auto kp = load_key(sk_path, Role::sender, true);
            auto pkc = load_pk(pk_cloud_path, Role::cloud);
            auto pka = load_pk(pk_aux_path, Role::aux);
            auto rng = make_rng(has_seed, seed);
            auto ct = enc(pp, kp.secret(), pkc, pka, KeywordSet::from_spec(keywords_spec), *rng);
            write_file(out_path, serialize(ct));
            return 0;
        }
        if (c_trap->parsed()) {
            auto pp = PublicParams::deserialize(read_file(pp_path));
            auto kp = load_key(sk_path, Role::receiver, true);
            auto pkc = load_pk(pk_cloud_path, Role::cloud);
            auto pka = load_pk(pk_aux_path, Role::aux);
            auto rng = make_rng(has_seed, seed);
            auto td = trap(pp, kp.secret(), pkc, pka, compile_policy(parse_query(query_text)),
                           *rng);
            write_file(out_path, serialize(td));
            return 0;
        }
        if (c_tct->parsed()) {
            auto kp = load_key(sk_path, Role::aux, true);
            auto ct = deserialize_ciphertext(read_file(in_path));
            auto rng = make_rng(has_seed, seed);
            write_file(out_path, serialize(enc_trans(kp.secret(), ct, *rng)));
            return 0;
        }
        if (c_ttd->parsed()) {
            auto kp = load_key(sk_path, Role::aux, true);
            auto td = deserialize_trapdoor(read_file(in_path));
            auto rng = make_rng(has_seed, seed);
            write_file(out_path, serialize(trap_trans(kp.secret(), td, *rng)));
            return 0;
        }
        if (c_search->parsed()) {
            auto kp = load_key(sk_path, Role::cloud, true);
            auto ct = deserialize_transformed_ciphertext(read_file(in_path));
            auto td = deserialize_transformed_trapdoor(read_file(td_path));
            return search(kp.secret(), ct, td) ? 0 : 1;
        }
        if (c_iins->parsed()) {
            auto pp = PublicParams::deserialize(read_file(pp_path));
            auto kp = load_key(sk_path, Role::cloud, true);
            auto ct = deserialize_transformed_ciphertext(read_file(in_path));
            InvertedIndex idx = std::filesystem::exists(index_path)
                                    ? InvertedIndex::load(read_file(index_path))
                                    : init_index(pp);
            insert_index(pp, ct, idx, kp.secret(), to_bytes(doc_ref));
            write_file(index_path, idx.save());
            return 0;
        }
        if (c_isearch->parsed()) {
            auto pp = PublicParams::deserialize(read_file(pp_path));
            auto kp = load_key(sk_path, Role::cloud, true);
            auto td = deserialize_transformed_trapdoor(read_file(td_path));
            auto idx = InvertedIndex::load(read_file(index_path));
            auto results = fast_search(pp, td, idx, kp.secret());
            std::string text;
            for (const auto& r : results) {
                text.append(r.begin(), r.end());
                text.push_back('\n');
            }
            if (out_path.empty()) std::cout << text;
            else write_file(out_path, to_bytes(text));
            return 0;
        }
        if (c_bench->parsed()) {
            return run_bench(parse_range(m_range_str), parse_range(l_range_str), trials,
                             count_ops, has_seed ? seed : 42, out_path);
        }
        if (c_scen->parsed()) {
            std::ifstream in(in_path);
            if (!in) throw Error("cannot open file: " + in_path);
            auto cfg = ScenarioConfig::parse(in);
            auto tr = run_scenario(cfg);
            if (!tr.dataflow_ok()) throw Error("transcript dataflow violation");
            if (!tr.key_separation_ok()) throw Error("actor key separation violation");
            if (!out_path.empty()) {
                std::ostringstream csv;
                tr.write_csv(csv);
                write_file(out_path, to_bytes(csv.str()));
            }
            for (std::size_t i = 0; i < tr.query_results.size(); ++i)
                std::cout << "query " << i << ": " << tr.query_results[i].size()
                          << " match(es)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}
