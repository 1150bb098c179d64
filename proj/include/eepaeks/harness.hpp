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
#ifndef EEPAEKS_HARNESS_HPP_
#define EEPAEKS_HARNESS_HPP_

#include <atomic>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "eepaeks/index.hpp"

// In-process simulation of the four-party workflow (senders, receivers,
// auxiliary server, cloud server) plus statistical drivers for the four
// indistinguishability games. The games are smoke tests: they cannot prove
// security, but gross leaks (deterministic components, replayable
// transforms) show up as a measurable advantage.

namespace eepaeks {

// ---------------------------------------------------------------------------
// Scenario runner
// ---------------------------------------------------------------------------

struct ScenarioConfig {
    std::uint32_t num_senders = 1;
    std::uint32_t num_receivers = 1;
    std::uint32_t keywords_per_doc = 1;
    std::uint32_t docs_per_sender = 1;
    std::vector<std::string> queries;
    std::uint64_t seed = 0;

    void validate() const {
        if (num_senders < 1 || num_receivers < 1 || keywords_per_doc < 1 ||
            docs_per_sender < 1)
            throw Error("scenario counts must all be >= 1");
    }

    /// key = value lines; 'query' may repeat; '#' starts a comment.
    static ScenarioConfig parse(std::istream& in) {
        ScenarioConfig cfg;
        std::string line;
        std::size_t lineno = 0;
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            std::size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw Error("scenario config line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(t.substr(0, eq));
            std::string val = trim(t.substr(eq + 1));
            try {
                if (key == "num_senders") cfg.num_senders = static_cast<std::uint32_t>(std::stoul(val));
                else if (key == "num_receivers") cfg.num_receivers = static_cast<std::uint32_t>(std::stoul(val));
                else if (key == "keywords_per_doc") cfg.keywords_per_doc = static_cast<std::uint32_t>(std::stoul(val));
                else if (key == "docs_per_sender") cfg.docs_per_sender = static_cast<std::uint32_t>(std::stoul(val));
                else if (key == "seed") cfg.seed = std::stoull(val);
                else if (key == "query") cfg.queries.push_back(val);
                else throw Error("unknown scenario key: " + key);
            } catch (const std::invalid_argument&) {
                throw Error("scenario config line " + std::to_string(lineno) + ": bad number");
            }
        }
        cfg.validate();
        return cfg;
    }

    /// Keyword j of document d is kw<j> : <(d + j) mod docs_per_sender>, the
    /// same for every sender, so cross-sender queries have known answers.
    KeywordSet doc_keywords(std::uint32_t doc) const {
        std::vector<Keyword> kws;
        kws.reserve(keywords_per_doc);
        for (std::uint32_t j = 0; j < keywords_per_doc; ++j)
            kws.push_back(Keyword{"kw" + std::to_string(j),
                                  std::to_string((doc + j) % std::max(docs_per_sender, 1u))});
        return KeywordSet(std::move(kws));
    }
};

enum class MsgType : std::uint8_t {
    raw_ciphertext,
    transformed_ciphertext,
    raw_trapdoor,
    transformed_trapdoor,
    search_result,
};

inline const char* msg_type_name(MsgType t) {
    switch (t) {
        case MsgType::raw_ciphertext: return "ct";
        case MsgType::transformed_ciphertext: return "ct'";
        case MsgType::raw_trapdoor: return "td";
        case MsgType::transformed_trapdoor: return "td'";
        case MsgType::search_result: return "result";
    }
    return "?";
}

struct TranscriptEntry {
    std::string actor;  // who performed the step
    std::string step;   // operation name
    std::string to;     // destination actor ("" for local steps)
    MsgType type = MsgType::search_result;
    bool is_message = false;
    std::size_t bytes = 0;
    OpCounters ops;
};

struct Transcript {
    std::vector<TranscriptEntry> entries;
    std::map<std::string, OpCounters> per_actor;
    std::vector<std::vector<Bytes>> query_results;  // one per (receiver, query)
    // secret-scalar fingerprints observed in each actor's state
    std::map<std::string, std::vector<Bytes>> actor_secrets;

    /// No raw ciphertext or trapdoor may ever reach the cloud actor.
    bool dataflow_ok() const {
        for (const auto& e : entries) {
            if (!e.is_message || e.to != "cloud") continue;
            if (e.type == MsgType::raw_ciphertext || e.type == MsgType::raw_trapdoor)
                return false;
        }
        return true;
    }

    /// Cloud never holds sk_A; aux never holds sk_C (and no secret is shared).
    bool key_separation_ok() const {
        auto cloud = actor_secrets.find("cloud");
        auto aux = actor_secrets.find("aux");
        if (cloud == actor_secrets.end() || aux == actor_secrets.end()) return false;
        for (const auto& a : cloud->second)
            for (const auto& b : aux->second)
                if (a == b) return false;
        return true;
    }

    void write_csv(std::ostream& os) const {
        os << "actor,step,bytes,exps,muls,hashes,pairings\n";
        for (const auto& e : entries) {
            std::string step = e.step;
            if (e.is_message) step += " to " + e.to;
            os << e.actor << ',' << step << ',' << e.bytes << ',' << e.ops.exps << ','
               << e.ops.muls << ',' << e.ops.hashes << ',' << e.ops.pairings << '\n';
        }
    }
};

inline Transcript run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    Transcript tr;
    SeededRng root(cfg.seed);
    auto pp = setup(CurveId::bn254);

    auto record = [&tr](const std::string& actor, const std::string& step,
                        const OpCounters& ops) {
        TranscriptEntry e;
        e.actor = actor;
        e.step = step;
        e.ops = ops;
        tr.entries.push_back(e);
        tr.per_actor[actor] += ops;
    };
    auto send = [&tr](const std::string& from, const std::string& to, MsgType type,
                      std::size_t bytes) {
        TranscriptEntry e;
        e.actor = from;
        e.step = std::string("send ") + msg_type_name(type);
        e.to = to;
        e.type = type;
        e.is_message = true;
        e.bytes = bytes;
        tr.entries.push_back(e);
    };

    struct CloudState {
        KeyPair kp;
        InvertedIndex idx;
    };
    struct AuxState {
        KeyPair kp;
    };

    SeededRng cloud_rng = root.fork(0x10);
    SeededRng aux_rng = root.fork(0x20);
    CloudState cloud;
    AuxState aux;
    {
        OpCounters ops;
        counters::Scope s(ops);
        cloud.kp = keygen(pp, Role::cloud, cloud_rng);
        record("cloud", "keygen", ops);
    }
    {
        OpCounters ops;
        counters::Scope s(ops);
        aux.kp = keygen(pp, Role::aux, aux_rng);
        record("aux", "keygen", ops);
    }
    cloud.idx = init_index(pp);

    std::vector<KeyPair> senders, receivers;
    for (std::uint32_t i = 0; i < cfg.num_senders; ++i) {
        SeededRng r = root.fork(0x1000 + i);
        OpCounters ops;
        counters::Scope s(ops);
        senders.push_back(keygen(pp, Role::sender, r));
        record("sender" + std::to_string(i), "keygen", ops);
    }
    for (std::uint32_t i = 0; i < cfg.num_receivers; ++i) {
        SeededRng r = root.fork(0x2000 + i);
        OpCounters ops;
        counters::Scope s(ops);
        receivers.push_back(keygen(pp, Role::receiver, r));
        record("receiver" + std::to_string(i), "keygen", ops);
    }

    tr.actor_secrets["cloud"] = {Bytes(cloud.kp.secret().serialize())};
    tr.actor_secrets["aux"] = {Bytes(aux.kp.secret().serialize())};

    // upload path: Enc -> AS -> EncTrans -> CS -> InsertIndex
    for (std::uint32_t si = 0; si < cfg.num_senders; ++si) {
        std::string actor = "sender" + std::to_string(si);
        for (std::uint32_t d = 0; d < cfg.docs_per_sender; ++d) {
            SeededRng r = root.fork((std::uint64_t(si) << 32) | (0x100000ULL + d));
            KeywordSet ws = cfg.doc_keywords(d);
            Ciphertext ct;
            {
                OpCounters ops;
                counters::Scope s(ops);
                ct = enc(pp, senders[si].secret(), cloud.kp.pk, aux.kp.pk, ws, r);
                record(actor, "enc", ops);
            }
            Bytes ct_bytes = serialize(ct);
            send(actor, "aux", MsgType::raw_ciphertext, ct_bytes.size());

            TransformedCiphertext ctx;
            {
                OpCounters ops;
                counters::Scope s(ops);
                ctx = enc_trans(aux.kp.secret(), ct, r);
                record("aux", "enc_trans", ops);
            }
            Bytes ctx_bytes = serialize(ctx);
            send("aux", "cloud", MsgType::transformed_ciphertext, ctx_bytes.size());

            std::string doc_ref = "s" + std::to_string(si) + "/d" + std::to_string(d);
            {
                OpCounters ops;
                counters::Scope s(ops);
                insert_index(pp, ctx, cloud.idx, cloud.kp.secret(), to_bytes(doc_ref));
                record("cloud", "insert_index", ops);
            }
        }
    }

    // query path: Trap -> AS -> TrapTrans -> CS -> FastSearch
    for (std::uint32_t ri = 0; ri < cfg.num_receivers; ++ri) {
        std::string actor = "receiver" + std::to_string(ri);
        for (std::size_t qi = 0; qi < cfg.queries.size(); ++qi) {
            SeededRng r = root.fork((std::uint64_t(ri) << 32) | (0x200000ULL + qi));
            KeywordPolicy policy = compile_policy(parse_query(cfg.queries[qi]));
            Trapdoor td;
            {
                OpCounters ops;
                counters::Scope s(ops);
                td = trap(pp, receivers[ri].secret(), cloud.kp.pk, aux.kp.pk, policy, r);
                record(actor, "trap", ops);
            }
            Bytes td_bytes = serialize(td);
            send(actor, "aux", MsgType::raw_trapdoor, td_bytes.size());

            TransformedTrapdoor tdx;
            {
                OpCounters ops;
                counters::Scope s(ops);
                tdx = trap_trans(aux.kp.secret(), td, r);
                record("aux", "trap_trans", ops);
            }
            Bytes tdx_bytes = serialize(tdx);
            send("aux", "cloud", MsgType::transformed_trapdoor, tdx_bytes.size());

            std::vector<Bytes> results;
            {
                OpCounters ops;
                counters::Scope s(ops);
                results = fast_search(pp, tdx, cloud.idx, cloud.kp.secret());
                record("cloud", "fast_search", ops);
            }
            std::size_t result_bytes = 0;
            for (const auto& b : results) result_bytes += b.size();
            send("cloud", actor, MsgType::search_result, result_bytes);
            tr.query_results.push_back(std::move(results));
        }
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Security-game drivers
// ---------------------------------------------------------------------------

enum class GameType { ci_as, ci_cs, ti_as, ti_cs };

inline const char* game_name(GameType g) {
    switch (g) {
        case GameType::ci_as: return "CI-AS";
        case GameType::ci_cs: return "CI-CS";
        case GameType::ti_as: return "TI-AS";
        case GameType::ti_cs: return "TI-CS";
    }
    return "?";
}

struct GameOracles {
    std::function<Ciphertext(const KeywordSet&)> enc_oracle;
    std::function<Trapdoor(const KeywordPolicy&)> trap_oracle;
    // present only in the *-CS games
    std::function<TransformedCiphertext(const Ciphertext&)> trans_ct_oracle;
    std::function<TransformedTrapdoor(const Trapdoor&)> trans_td_oracle;
};

struct CiChallenge {
    KeywordSet w0, w1;
};

struct TiChallenge {
    KeywordPolicy p0, p1;
};

/// One game round, from the adversary's side. A fresh instance is created per
/// round; query restrictions are enforced by the driver's oracle wrappers.
class Adversary {
public:
    virtual ~Adversary() = default;

    /// The key pair for the server role the adversary plays. The driver
    /// accepts any non-identity public key.
    virtual KeyPair server_key(const PublicParams& pp, Rng& rng) {
        return keygen(pp, Role::aux, rng);
    }

    virtual void phase1(GameOracles&, Rng&) {}
    virtual CiChallenge ci_challenge(Rng&) {
        throw Error("adversary does not play CI games");
    }
    virtual TiChallenge ti_challenge(Rng&) {
        throw Error("adversary does not play TI games");
    }
    virtual void receive_challenge(const Bytes&, Rng&) {}
    virtual void phase2(GameOracles&, Rng&) {}
    virtual bool guess(Rng&) = 0;
};

using AdversaryFactory = std::function<std::unique_ptr<Adversary>()>;

struct GameResult {
    std::uint64_t rounds = 0;
    std::uint64_t wins = 0;
    std::uint64_t violations = 0;
    std::uint64_t aborted = 0;

    double advantage() const {
        std::uint64_t valid = rounds - aborted;
        if (valid == 0) return 0.0;
        return std::abs(static_cast<double>(wins) / static_cast<double>(valid) - 0.5);
    }
};

namespace detail {

inline Bytes keyword_set_fingerprint(const KeywordSet& ws) {
    std::vector<Bytes> encs;
    for (const auto& k : ws) encs.push_back(k.canonical());
    std::sort(encs.begin(), encs.end());
    ByteWriter w;
    for (const auto& e : encs) {
        w.u32be(static_cast<std::uint32_t>(e.size()));
        w.raw(e);
    }
    return w.take();
}

inline Bytes policy_fingerprint(const KeywordPolicy& p) {
    return p.serialize();
}

struct RestrictionState {
    std::vector<KeywordSet> ct_queries;
    std::vector<KeywordPolicy> td_queries;
    std::vector<Keyword> ct_keywords, td_keywords;

    bool keyword_queried(const Keyword& k) const {
        return std::find(ct_keywords.begin(), ct_keywords.end(), k) != ct_keywords.end() ||
               std::find(td_keywords.begin(), td_keywords.end(), k) != td_keywords.end();
    }
};

}  // namespace detail

/// Runs N independent rounds of Initialization/Query/Challenge/Guess and
/// returns the empirical advantage. Rounds are split across threads; round i
/// always uses the rng stream fork(seed, i), so results do not depend on the
/// thread count.
inline GameResult run_game(GameType game, const AdversaryFactory& make_adversary,
                           std::uint64_t rounds, std::uint64_t seed,
                           unsigned num_threads = 0) {
    if (num_threads == 0)
        num_threads = std::max(1u, std::thread::hardware_concurrency());
    const bool ci = game == GameType::ci_as || game == GameType::ci_cs;
    const bool adversary_is_aux = game == GameType::ci_as || game == GameType::ti_as;

    std::atomic<std::uint64_t> wins{0}, violations{0}, aborted{0};
    auto pp = setup(CurveId::bn254);

    auto run_round = [&](std::uint64_t round) {
        SeededRng rng = SeededRng(seed).fork(round);
        std::uint64_t round_violations = 0;
        bool round_aborted = false;
        bool win = false;
        try {
            auto adv = make_adversary();

            // Initialization: honest roles by the challenger, the adversary
            // plays one server.
            SeededRng chal_rng = rng.fork(1);
            SeededRng adv_rng = rng.fork(2);
            KeyPair sender_kp = keygen(pp, Role::sender, chal_rng);
            KeyPair receiver_kp = keygen(pp, Role::receiver, chal_rng);
            KeyPair honest_server =
                keygen(pp, adversary_is_aux ? Role::cloud : Role::aux, chal_rng);
            KeyPair adv_server = adv->server_key(pp, adv_rng);
            if (adv_server.pk.is_identity()) throw Error("adversary public key is identity");

            const G1Elem& pk_c = adversary_is_aux ? honest_server.pk : adv_server.pk;
            const G1Elem& pk_a = adversary_is_aux ? adv_server.pk : honest_server.pk;
            // transform oracles exist only in the *-CS games, where the
            // challenger controls the auxiliary server
            const Scalar* sk_a_for_oracle =
                adversary_is_aux ? nullptr : &honest_server.secret();

            detail::RestrictionState st;
            bool challenged = false;
            std::optional<CiChallenge> ci_ch;
            std::optional<TiChallenge> ti_ch;

            auto check_ct_query = [&](const KeywordSet& ws) {
                if (!challenged) return;
                if (ci) {
                    if (game == GameType::ci_as) {
                        auto fp = detail::keyword_set_fingerprint(ws);
                        if (fp == detail::keyword_set_fingerprint(ci_ch->w0) ||
                            fp == detail::keyword_set_fingerprint(ci_ch->w1)) {
                            ++round_violations;
                            throw RestrictionViolation("challenge keyword set queried in O_ct");
                        }
                    } else {
                        for (const auto& k : ws)
                            if (ci_ch->w0.contains(k) || ci_ch->w1.contains(k)) {
                                ++round_violations;
                                throw RestrictionViolation("challenge keyword queried in O_ct");
                            }
                    }
                } else {
                    if (game == GameType::ti_as) {
                        if (policy_satisfied(ti_ch->p0, ws) || policy_satisfied(ti_ch->p1, ws)) {
                            ++round_violations;
                            throw RestrictionViolation(
                                "keyword set satisfying a challenge policy queried in O_ct");
                        }
                    } else {
                        for (const auto& k : ws)
                            for (const auto* p : {&ti_ch->p0, &ti_ch->p1})
                                for (const auto& leaf : p->leaves)
                                    if (k == leaf) {
                                        ++round_violations;
                                        throw RestrictionViolation(
                                            "challenge policy keyword queried in O_ct");
                                    }
                    }
                }
            };
            auto check_td_query = [&](const KeywordPolicy& p) {
                if (!challenged) return;
                if (ci) {
                    if (game == GameType::ci_as) {
                        if (policy_satisfied(p, ci_ch->w0) || policy_satisfied(p, ci_ch->w1)) {
                            ++round_violations;
                            throw RestrictionViolation(
                                "policy satisfied by a challenge set queried in O_td");
                        }
                    } else {
                        for (const auto& leaf : p.leaves)
                            if (ci_ch->w0.contains(leaf) || ci_ch->w1.contains(leaf)) {
                                ++round_violations;
                                throw RestrictionViolation(
                                    "challenge keyword queried in O_td");
                            }
                    }
                } else {
                    if (game == GameType::ti_as) {
                        auto fp = detail::policy_fingerprint(p);
                        if (fp == detail::policy_fingerprint(ti_ch->p0) ||
                            fp == detail::policy_fingerprint(ti_ch->p1)) {
                            ++round_violations;
                            throw RestrictionViolation("challenge policy queried in O_td");
                        }
                    } else {
                        for (const auto& leaf : p.leaves)
                            for (const auto* cp : {&ti_ch->p0, &ti_ch->p1})
                                for (const auto& clf : cp->leaves)
                                    if (leaf == clf) {
                                        ++round_violations;
                                        throw RestrictionViolation(
                                            "challenge policy keyword queried in O_td");
                                    }
                    }
                }
            };

            GameOracles oracles;
            oracles.enc_oracle = [&](const KeywordSet& ws) {
                check_ct_query(ws);
                st.ct_queries.push_back(ws);
                for (const auto& k : ws) st.ct_keywords.push_back(k);
                return enc(pp, sender_kp.secret(), pk_c, pk_a, ws, chal_rng);
            };
            oracles.trap_oracle = [&](const KeywordPolicy& p) {
                if (p.leaves.size() != p.rows()) throw Error("policy without leaf keywords");
                check_td_query(p);
                st.td_queries.push_back(p);
                for (const auto& leaf : p.leaves) st.td_keywords.push_back(leaf);
                return trap(pp, receiver_kp.secret(), pk_c, pk_a, p, chal_rng);
            };
            if (!adversary_is_aux) {
                oracles.trans_ct_oracle = [&](const Ciphertext& ct) {
                    return enc_trans(*sk_a_for_oracle, ct, chal_rng);
                };
                oracles.trans_td_oracle = [&](const Trapdoor& td) {
                    return trap_trans(*sk_a_for_oracle, td, chal_rng);
                };
            }

            adv->phase1(oracles, adv_rng);

            // challenge selection and its admissibility
            std::uint8_t coin_byte;
            if (ci) {
                ci_ch = adv->ci_challenge(adv_rng);
                if (ci_ch->w0.size() != ci_ch->w1.size())
                    throw RestrictionViolation("challenge keyword sets differ in size");
                challenged = true;
                if (game == GameType::ci_as) {
                    for (const auto* w : {&ci_ch->w0, &ci_ch->w1}) {
                        auto fp = detail::keyword_set_fingerprint(*w);
                        for (const auto& q : st.ct_queries)
                            if (fp == detail::keyword_set_fingerprint(q)) {
                                ++round_violations;
                                throw RestrictionViolation("challenge set was queried in O_ct");
                            }
                        for (const auto& p : st.td_queries)
                            if (policy_satisfied(p, *w)) {
                                ++round_violations;
                                throw RestrictionViolation(
                                    "challenge set satisfies a queried policy");
                            }
                    }
                } else {
                    for (const auto* w : {&ci_ch->w0, &ci_ch->w1})
                        for (const auto& k : *w)
                            if (st.keyword_queried(k)) {
                                ++round_violations;
                                throw RestrictionViolation("challenge keyword was queried");
                            }
                }
            } else {
                ti_ch = adv->ti_challenge(adv_rng);
                if (ti_ch->p0.rows() != ti_ch->p1.rows() ||
                    ti_ch->p0.cols() != ti_ch->p1.cols())
                    throw RestrictionViolation("challenge policies differ in size");
                challenged = true;
                if (game == GameType::ti_as) {
                    for (const auto* p : {&ti_ch->p0, &ti_ch->p1}) {
                        auto fp = detail::policy_fingerprint(*p);
                        for (const auto& q : st.td_queries)
                            if (fp == detail::policy_fingerprint(q)) {
                                ++round_violations;
                                throw RestrictionViolation("challenge policy was queried in O_td");
                            }
                        for (const auto& w : st.ct_queries)
                            if (policy_satisfied(*p, w)) {
                                ++round_violations;
                                throw RestrictionViolation(
                                    "challenge policy satisfied by a queried set");
                            }
                    }
                } else {
                    for (const auto* p : {&ti_ch->p0, &ti_ch->p1})
                        for (const auto& leaf : p->leaves)
                            if (st.keyword_queried(leaf)) {
                                ++round_violations;
                                throw RestrictionViolation("challenge policy keyword was queried");
                            }
                }
            }

            chal_rng.fill(std::span<std::uint8_t>(&coin_byte, 1));
            bool b = coin_byte & 1;

            Bytes challenge_bytes;
            if (ci) {
                const KeywordSet& w = b ? ci_ch->w1 : ci_ch->w0;
                challenge_bytes = serialize(enc(pp, sender_kp.secret(), pk_c, pk_a, w, chal_rng));
            } else {
                const KeywordPolicy& p = b ? ti_ch->p1 : ti_ch->p0;
                challenge_bytes =
                    serialize(trap(pp, receiver_kp.secret(), pk_c, pk_a, p, chal_rng));
            }
            adv->receive_challenge(challenge_bytes, adv_rng);
            adv->phase2(oracles, adv_rng);
            win = adv->guess(adv_rng) == b;
        } catch (const RestrictionViolation&) {
            round_aborted = true;
        }
        if (win && !round_aborted) ++wins;
        if (round_aborted) ++aborted;
        violations += round_violations;
    };

    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{0};
    for (unsigned t = 0; t < num_threads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                std::uint64_t i = next.fetch_add(1);
                if (i >= rounds) return;
                run_round(i);
            }
        });
    for (auto& th : pool) th.join();

    GameResult res;
    res.rounds = rounds;
    res.wins = wins;
    res.violations = violations;
    res.aborted = aborted;
    return res;
}

// ---------------------------------------------------------------------------
// Baseline adversaries
// ---------------------------------------------------------------------------

namespace adversaries {

/// Never queries; guesses by coin flip.
class Null final : public Adversary {
public:
    CiChallenge ci_challenge(Rng& rng) override {
        (void)rng;
        return {KeywordSet(std::vector<Keyword>{Keyword{"chal", "zero"}}), KeywordSet(std::vector<Keyword>{Keyword{"chal", "one"}})};
    }
    TiChallenge ti_challenge(Rng& rng) override {
        (void)rng;
        return {compile_policy(parse_query("chal:zero")),
                compile_policy(parse_query("chal:one"))};
    }
    bool guess(Rng& rng) override {
        std::uint8_t b;
        rng.fill(std::span<std::uint8_t>(&b, 1));
        return b & 1;
    }
};

/// Queries oracles on unrelated inputs, twice each, and diffs the serialized
/// challenge against everything it saw. Fresh randomness defeats the replay,
/// so it degenerates to a coin flip.
class Replay final : public Adversary {
public:
    void phase1(GameOracles& o, Rng&) override {
        KeywordSet probe({Keyword{"probe", "p"}});
        auto ct = o.enc_oracle(probe);
        seen_.push_back(serialize(ct));
        auto pol = compile_policy(parse_query("probe:p"));
        seen_.push_back(serialize(o.trap_oracle(pol)));
        if (o.trans_ct_oracle) seen_.push_back(serialize(o.trans_ct_oracle(ct)));
    }
    CiChallenge ci_challenge(Rng&) override {
        return {KeywordSet(std::vector<Keyword>{Keyword{"chal", "zero"}}), KeywordSet(std::vector<Keyword>{Keyword{"chal", "one"}})};
    }
    TiChallenge ti_challenge(Rng&) override {
        return {compile_policy(parse_query("chal:zero")),
                compile_policy(parse_query("chal:one"))};
    }
    void receive_challenge(const Bytes& c, Rng&) override { challenge_ = c; }
    bool guess(Rng& rng) override {
        // any 32-byte aligned component shared with a replayed object would
        // be a leak; otherwise fall back to a coin flip
        for (const auto& s : seen_) {
            for (std::size_t off = 6; off + 32 <= s.size(); off += 32) {
                if (contains_subsequence(challenge_,
                                         std::span<const std::uint8_t>(s).subspan(off, 32)))
                    return false;
            }
        }
        std::uint8_t b;
        rng.fill(std::span<std::uint8_t>(&b, 1));
        return b & 1;
    }

private:
    std::vector<Bytes> seen_;
    Bytes challenge_;
};

/// Deliberately re-queries its challenge keywords in phase 2; every such
/// query must be rejected.
class Violating final : public Adversary {
public:
    CiChallenge ci_challenge(Rng&) override {
        return {KeywordSet(std::vector<Keyword>{Keyword{"chal", "zero"}}), KeywordSet(std::vector<Keyword>{Keyword{"chal", "one"}})};
    }
    TiChallenge ti_challenge(Rng&) override {
        return {compile_policy(parse_query("chal:zero")),
                compile_policy(parse_query("chal:one"))};
    }
    void phase2(GameOracles& o, Rng&) override {
        o.enc_oracle(KeywordSet(std::vector<Keyword>{Keyword{"chal", "zero"}}));
    }
    bool guess(Rng& rng) override {
        std::uint8_t b;
        rng.fill(std::span<std::uint8_t>(&b, 1));
        return b & 1;
    }
};

}  // namespace adversaries

}  // namespace eepaeks

#endif  // EEPAEKS_HARNESS_HPP_
