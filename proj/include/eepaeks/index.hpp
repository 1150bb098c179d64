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
#ifndef EEPAEKS_INDEX_HPP_
#define EEPAEKS_INDEX_HPP_

#include <map>
#include <set>

#include "eepaeks/scheme.hpp"

// Cloud-side inverted index over transformed ciphertexts. Buckets are keyed
// by single transformed ciphertexts; membership tests pair under the cloud
// secret key, so labels cannot be pre-hashed and the bucket scan is linear.
//
// Concurrency: fast_search may run concurrently; insert_index needs exclusive
// access (single writer, multiple readers).

namespace eepaeks {

struct SingleTransformedCiphertext {
    G1Elem ct1_i, ct2, ct3;
    G2Elem ct4;

    void write_raw(ByteWriter& w) const {
        ct1_i.write_raw(w);
        ct2.write_raw(w);
        ct3.write_raw(w);
        ct4.write_raw(w);
    }

    static SingleTransformedCiphertext read_raw(ByteReader& r) {
        SingleTransformedCiphertext s;
        s.ct1_i = G1Elem::read_raw(r);
        s.ct2 = G1Elem::read_raw(r);
        s.ct3 = G1Elem::read_raw(r);
        s.ct4 = G2Elem::read_raw(r);
        return s;
    }
};

struct SingleTransformedTrapdoor {
    G1Elem td12_j, td2, td3;
    G2Elem td4;
};

inline SingleTransformedCiphertext ct_slot(const TransformedCiphertext& ct, std::size_t i) {
    if (i >= ct.ct1.size()) throw Error("ciphertext slot out of range");
    return {ct.ct1[i], ct.ct2, ct.ct3, ct.ct4};
}

inline SingleTransformedTrapdoor td_slot(const TransformedTrapdoor& td, std::size_t j) {
    if (j >= td.td12.size()) throw Error("trapdoor slot out of range");
    return {td.td12[j], td.td2, td.td3, td.td4};
}

/// Same keyword in both slots, across senders and fresh randomness:
/// e(a1^c/(a2 a3^c), b4) = e(b1^c/(b2 b3^c), a4).
inline bool equal_test(const PublicParams&, const SingleTransformedCiphertext& a,
                       const SingleTransformedCiphertext& b, const Scalar& sk_c) {
    G1Elem lhs = a.ct1_i.pow(sk_c) * (a.ct2 * a.ct3.pow(sk_c)).inverse();
    G1Elem rhs = b.ct1_i.pow(sk_c) * (b.ct2 * b.ct3.pow(sk_c)).inverse();
    return pair(lhs, b.ct4) == pair(rhs, a.ct4);
}

/// Ciphertext slot vs trapdoor row, same equation with td12 on the right.
inline bool match_test(const PublicParams&, const SingleTransformedCiphertext& a,
                       const SingleTransformedTrapdoor& t, const Scalar& sk_c) {
    G1Elem lhs = a.ct1_i.pow(sk_c) * (a.ct2 * a.ct3.pow(sk_c)).inverse();
    G1Elem rhs = t.td12_j.pow(sk_c) * (t.td2 * t.td3.pow(sk_c)).inverse();
    return pair(lhs, t.td4) == pair(rhs, a.ct4);
}

struct IndexEntry {
    Bytes doc_ref;
    TransformedCiphertext ct;
    std::uint64_t doc_seq = 0;  // in-memory identity; one per insert call
};

struct IndexBucket {
    SingleTransformedCiphertext label;
    std::vector<IndexEntry> entries;
};

class InvertedIndex {
public:
    std::size_t bucket_count() const { return buckets_.size(); }
    const std::vector<IndexBucket>& buckets() const { return buckets_; }
    std::uint64_t next_seq() const { return next_seq_; }

    static constexpr char kMagic[] = "EEPIDX1";

    /// magic, bucket count, then per bucket: label, entry count, entries as
    /// (doc_ref length + bytes + serialized transformed ciphertext). The
    /// embedded ciphertext objects are self-delimiting.
    Bytes save() const {
        ByteWriter w;
        w.raw(kMagic);
        w.u32be(static_cast<std::uint32_t>(buckets_.size()));
        for (const auto& b : buckets_) {
            b.label.write_raw(w);
            w.u32be(static_cast<std::uint32_t>(b.entries.size()));
            for (const auto& e : b.entries) {
                w.u32be(static_cast<std::uint32_t>(e.doc_ref.size()));
                w.raw(e.doc_ref);
                w.raw(serialize(e.ct));
            }
        }
        return w.take();
    }

    static InvertedIndex load(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        Bytes magic = to_bytes(kMagic);
        r.expect(magic, "inverted index");
        InvertedIndex idx;
        std::uint32_t nb = r.u32be();
        // entries of one document land in several buckets; regroup them by
        // payload so fast_search dedupes the same way as before saving
        std::map<Bytes, std::uint64_t> seq_by_payload;
        for (std::uint32_t i = 0; i < nb; ++i) {
            IndexBucket b;
            b.label = SingleTransformedCiphertext::read_raw(r);
            std::uint32_t ne = r.u32be();
            for (std::uint32_t j = 0; j < ne; ++j) {
                IndexEntry e;
                std::uint32_t dl = r.u32be();
                auto d = r.raw(dl);
                e.doc_ref.assign(d.begin(), d.end());
                wire::read_header(r, wire::Tag::transformed_ciphertext);
                e.ct = detail::read_ct_body<TransformedCiphertext>(r);
                Bytes key = e.doc_ref;
                Bytes ct_bytes = serialize(e.ct);
                key.insert(key.end(), ct_bytes.begin(), ct_bytes.end());
                auto [it, fresh] = seq_by_payload.try_emplace(std::move(key), idx.next_seq_);
                if (fresh) ++idx.next_seq_;
                e.doc_seq = it->second;
                b.entries.push_back(std::move(e));
            }
            idx.buckets_.push_back(std::move(b));
        }
        r.finish();
        return idx;
    }

    friend void insert_index(const PublicParams&, const TransformedCiphertext&,
                             InvertedIndex&, const Scalar&, std::span<const std::uint8_t>);

private:
    std::vector<IndexBucket> buckets_;
    std::uint64_t next_seq_ = 0;
};

inline InvertedIndex init_index(const PublicParams&) { return InvertedIndex(); }

/// Algorithm 1: for each keyword slot, scan bucket labels with equal_test;
/// append to the hit bucket, or open a new bucket labelled by the slot.
/// Duplicate insertions are kept.
inline void insert_index(const PublicParams& pp, const TransformedCiphertext& ct,
                         InvertedIndex& idx, const Scalar& sk_c,
                         std::span<const std::uint8_t> doc_ref) {
    if (ct.ct1.empty()) throw Error("malformed ciphertext");
    IndexEntry entry;
    entry.doc_ref.assign(doc_ref.begin(), doc_ref.end());
    entry.ct = ct;
    entry.doc_seq = idx.next_seq_++;
    for (std::size_t i = 0; i < ct.ct1.size(); ++i) {
        SingleTransformedCiphertext slot = ct_slot(ct, i);
        bool hit = false;
        for (auto& bucket : idx.buckets_) {
            if (equal_test(pp, slot, bucket.label, sk_c)) {
                bucket.entries.push_back(entry);
                hit = true;
                break;
            }
        }
        if (!hit) {
            IndexBucket fresh;
            fresh.label = slot;
            fresh.entries.push_back(entry);
            idx.buckets_.push_back(std::move(fresh));
        }
    }
}

struct FastSearchStats {
    std::uint64_t match_tests = 0;
    std::uint64_t candidates = 0;
    std::uint64_t phase2_searches = 0;
};

/// Algorithm 2: phase 1 prunes buckets by match_test per trapdoor row and
/// unions their entries; phase 2 runs the full search on each candidate.
inline std::vector<Bytes> fast_search(const PublicParams& pp, const TransformedTrapdoor& td,
                                      const InvertedIndex& idx, const Scalar& sk_c,
                                      FastSearchStats* stats = nullptr) {
    FastSearchStats local;
    std::map<std::uint64_t, const IndexEntry*> candidates;  // by doc_seq
    for (std::size_t j = 0; j < td.td12.size(); ++j) {
        SingleTransformedTrapdoor row = td_slot(td, j);
        for (const auto& bucket : idx.buckets()) {
            ++local.match_tests;
            if (match_test(pp, bucket.label, row, sk_c)) {
                for (const auto& e : bucket.entries) candidates.emplace(e.doc_seq, &e);
                break;  // bucket labels are pairwise distinct
            }
        }
    }
    local.candidates = candidates.size();

    std::vector<Bytes> results;
    std::set<Bytes> seen;
    for (const auto& [seq, entry] : candidates) {
        ++local.phase2_searches;
        if (search(sk_c, entry->ct, td) && seen.insert(entry->doc_ref).second)
            results.push_back(entry->doc_ref);
    }
    if (stats) *stats = local;
    return results;
}

/// Offline reconstruction from the stored records: re-inserts every distinct
/// document in first-insertion order.
inline InvertedIndex rebuild_index(const PublicParams& pp, const InvertedIndex& idx,
                                   const Scalar& sk_c) {
    std::map<std::uint64_t, const IndexEntry*> docs;
    for (const auto& b : idx.buckets())
        for (const auto& e : b.entries) docs.emplace(e.doc_seq, &e);
    InvertedIndex fresh;
    for (const auto& [seq, e] : docs) insert_index(pp, e->ct, fresh, sk_c, e->doc_ref);
    return fresh;
}

}  // namespace eepaeks

#endif  // EEPAEKS_INDEX_HPP_
