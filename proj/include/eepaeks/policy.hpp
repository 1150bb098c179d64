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
#ifndef EEPAEKS_POLICY_HPP_
#define EEPAEKS_POLICY_HPP_

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eepaeks/groups.hpp"

// Boolean/threshold keyword queries: parsing, compilation to an LSSS matrix
// via the Liu-Cao-Wong insertion algorithm, and secret sharing over the
// compiled matrix. Every compiled matrix has an all-ones first column, and a
// leaf subset spans (1,0,...,0) exactly when it satisfies the formula.

namespace eepaeks {

// ---------------------------------------------------------------------------
// Keywords
// ---------------------------------------------------------------------------

struct Keyword {
    std::string name;
    std::string value;

    bool operator==(const Keyword& o) const { return name == o.name && value == o.value; }
    bool operator<(const Keyword& o) const {
        return name != o.name ? name < o.name : value < o.value;
    }

    /// len(name) || name || 0x1F || len(value) || value, lengths 4-byte BE.
    Bytes canonical() const {
        if (name.empty() || value.empty()) throw Error("keyword name/value must be nonempty");
        ByteWriter w;
        w.u32be(static_cast<std::uint32_t>(name.size()));
        w.raw(name.c_str());
        w.u8(0x1F);
        w.u32be(static_cast<std::uint32_t>(value.size()));
        w.raw(value.c_str());
        return w.take();
    }
};

class KeywordSet {
public:
    explicit KeywordSet(std::vector<Keyword> kws) : kws_(std::move(kws)) {
        if (kws_.empty()) throw Error("keyword set must be nonempty");
        for (const auto& k : kws_)
            if (k.name.empty() || k.value.empty())
                throw Error("keyword name/value must be nonempty");
        auto sorted = kws_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error("duplicate keyword in set");
    }

    /// "name:value,name:value" as accepted by the CLI --keywords flag.
    static KeywordSet from_spec(std::string_view spec) {
        std::vector<Keyword> kws;
        std::size_t start = 0;
        while (start <= spec.size()) {
            std::size_t comma = spec.find(',', start);
            std::string_view item =
                spec.substr(start, comma == std::string_view::npos ? spec.size() - start
                                                                   : comma - start);
            std::size_t colon = item.find(':');
            if (colon == std::string_view::npos || colon == 0 || colon + 1 == item.size())
                throw Error("bad keyword spec, expected name:value: '" + std::string(item) + "'");
            kws.push_back(Keyword{std::string(item.substr(0, colon)),
                                  std::string(item.substr(colon + 1))});
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return KeywordSet(std::move(kws));
    }

    std::size_t size() const { return kws_.size(); }
    const Keyword& operator[](std::size_t i) const { return kws_[i]; }
    auto begin() const { return kws_.begin(); }
    auto end() const { return kws_.end(); }

    bool contains(const Keyword& k) const {
        return std::find(kws_.begin(), kws_.end(), k) != kws_.end();
    }

private:
    std::vector<Keyword> kws_;
};

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct PolicyAst {
    // leaf when children is empty; otherwise a t-of-n gate
    Keyword leaf;
    std::uint32_t threshold = 0;
    std::vector<PolicyAst> children;

    bool is_leaf() const { return children.empty(); }

    static PolicyAst make_leaf(Keyword kw) {
        PolicyAst n;
        n.leaf = std::move(kw);
        return n;
    }

    static PolicyAst gate(std::uint32_t t, std::vector<PolicyAst> kids) {
        if (kids.empty()) throw Error("gate needs at least one child");
        if (t < 1 || t > kids.size()) throw Error("gate threshold out of range");
        PolicyAst n;
        n.threshold = t;
        n.children = std::move(kids);
        return n;
    }

    std::size_t leaf_count() const {
        if (is_leaf()) return 1;
        std::size_t n = 0;
        for (const auto& c : children) n += c.leaf_count();
        return n;
    }

    std::size_t depth() const {
        if (is_leaf()) return 0;
        std::size_t d = 0;
        for (const auto& c : children) d = std::max(d, c.depth());
        return d + 1;
    }

    bool structurally_equal(const PolicyAst& o) const {
        if (is_leaf() != o.is_leaf()) return false;
        if (is_leaf()) return leaf == o.leaf;
        if (threshold != o.threshold || children.size() != o.children.size()) return false;
        for (std::size_t i = 0; i < children.size(); ++i)
            if (!children[i].structurally_equal(o.children[i])) return false;
        return true;
    }
};

/// Brute-force evaluation; the independent oracle the LSSS tests check against.
inline bool satisfies(const PolicyAst& ast, const KeywordSet& ws) {
    if (ast.is_leaf()) return ws.contains(ast.leaf);
    std::uint32_t hit = 0;
    for (const auto& c : ast.children)
        if (satisfies(c, ws)) ++hit;
    return hit >= ast.threshold;
}

// ---------------------------------------------------------------------------
// Query grammar
//   expr    := orExpr
//   orExpr  := andExpr (OR andExpr)*
//   andExpr := atom (AND atom)*
//   atom    := leaf | '(' expr ')' | THRESHOLD '(' int ';' expr (',' expr)+ ')'
//   leaf    := name ':' value
// Operator keywords are case-insensitive; names and values case-sensitive.
// ---------------------------------------------------------------------------

namespace detail {

struct QueryToken {
    enum Kind { kWord, kColon, kLParen, kRParen, kComma, kSemi, kAnd, kOr, kThreshold, kEnd };
    Kind kind;
    std::string text;
    std::size_t offset;
};

inline bool query_delim(char c) {
    return c == '(' || c == ')' || c == ',' || c == ';' || c == ':';
}

inline std::vector<QueryToken> query_tokenize(std::string_view text) {
    std::vector<QueryToken> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (query_delim(c)) {
            QueryToken::Kind k = c == '(' ? QueryToken::kLParen
                                : c == ')' ? QueryToken::kRParen
                                : c == ',' ? QueryToken::kComma
                                : c == ';' ? QueryToken::kSemi
                                           : QueryToken::kColon;
            out.push_back({k, std::string(1, c), i});
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
               !query_delim(text[i]))
            ++i;
        std::string word(text.substr(start, i - start));
        std::string upper = word;
        std::transform(upper.begin(), upper.end(), upper.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
        if (upper == "AND") out.push_back({QueryToken::kAnd, word, start});
        else if (upper == "OR") out.push_back({QueryToken::kOr, word, start});
        else if (upper == "THRESHOLD") out.push_back({QueryToken::kThreshold, word, start});
        else out.push_back({QueryToken::kWord, word, start});
    }
    out.push_back({QueryToken::kEnd, "", text.size()});
    return out;
}

class QueryParser {
public:
    explicit QueryParser(std::string_view text) : toks_(query_tokenize(text)) {}

    PolicyAst parse() {
        if (toks_.front().kind == QueryToken::kEnd) throw ParseError("empty query", 0);
        PolicyAst ast = parse_or();
        expect(QueryToken::kEnd, "end of query");
        return ast;
    }

private:
    const QueryToken& peek() const { return toks_[pos_]; }
    const QueryToken& take() { return toks_[pos_++]; }

    void expect(QueryToken::Kind k, const char* what) {
        if (peek().kind != k)
            throw ParseError(std::string("expected ") + what + ", got '" + peek().text + "'",
                             peek().offset);
        take();
    }

    PolicyAst parse_or() {
        std::vector<PolicyAst> operands;
        operands.push_back(parse_and());
        while (peek().kind == QueryToken::kOr) {
            take();
            operands.push_back(parse_and());
        }
        if (operands.size() == 1) return std::move(operands.front());
        return PolicyAst::gate(1, std::move(operands));
    }

    PolicyAst parse_and() {
        std::vector<PolicyAst> operands;
        operands.push_back(parse_atom());
        while (peek().kind == QueryToken::kAnd) {
            take();
            operands.push_back(parse_atom());
        }
        if (operands.size() == 1) return std::move(operands.front());
        auto n = static_cast<std::uint32_t>(operands.size());
        return PolicyAst::gate(n, std::move(operands));
    }

    PolicyAst parse_atom() {
        if (peek().kind == QueryToken::kLParen) {
            take();
            PolicyAst inner = parse_or();
            expect(QueryToken::kRParen, "')'");
            return inner;
        }
        if (peek().kind == QueryToken::kThreshold) return parse_threshold();
        if (peek().kind == QueryToken::kWord) {
            QueryToken name = take();
            expect(QueryToken::kColon, "':'");
            if (peek().kind != QueryToken::kWord)
                throw ParseError("expected keyword value", peek().offset);
            QueryToken value = take();
            return PolicyAst::make_leaf(Keyword{name.text, value.text});
        }
        throw ParseError("expected leaf, '(' or THRESHOLD", peek().offset);
    }

    PolicyAst parse_threshold() {
        take();  // THRESHOLD
        expect(QueryToken::kLParen, "'('");
        if (peek().kind != QueryToken::kWord)
            throw ParseError("expected threshold integer", peek().offset);
        QueryToken tk = take();
        std::uint64_t t = 0;
        for (char c : tk.text) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError("threshold must be an integer", tk.offset);
            t = t * 10 + static_cast<std::uint64_t>(c - '0');
            if (t > 0xFFFFFFFFULL) throw ParseError("threshold too large", tk.offset);
        }
        expect(QueryToken::kSemi, "';'");
        std::vector<PolicyAst> operands;
        operands.push_back(parse_or());
        while (peek().kind == QueryToken::kComma) {
            take();
            operands.push_back(parse_or());
        }
        if (operands.size() < 2)
            throw ParseError("THRESHOLD needs at least two operands", peek().offset);
        expect(QueryToken::kRParen, "')'");
        if (t < 1 || t > operands.size())
            throw ParseError("threshold out of range [1, " +
                                 std::to_string(operands.size()) + "]",
                             tk.offset);
        return PolicyAst::gate(static_cast<std::uint32_t>(t), std::move(operands));
    }

    std::vector<QueryToken> toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline PolicyAst parse_query(std::string_view text) {
    return detail::QueryParser(text).parse();
}

/// Canonical text form; render(parse(q)) reparses to a structurally equal AST.
inline std::string render_query(const PolicyAst& ast) {
    if (ast.is_leaf()) return ast.leaf.name + ":" + ast.leaf.value;
    if (ast.children.size() == 1) return render_query(ast.children.front());
    auto n = static_cast<std::uint32_t>(ast.children.size());
    if (ast.threshold == 1 || ast.threshold == n) {
        const char* op = ast.threshold == 1 ? " OR " : " AND ";
        std::string out = "(";
        for (std::size_t i = 0; i < ast.children.size(); ++i) {
            if (i) out += op;
            out += render_query(ast.children[i]);
        }
        return out + ")";
    }
    std::string out = "THRESHOLD(" + std::to_string(ast.threshold) + "; ";
    for (std::size_t i = 0; i < ast.children.size(); ++i) {
        if (i) out += ", ";
        out += render_query(ast.children[i]);
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Compiled LSSS policy
// ---------------------------------------------------------------------------

struct KeywordPolicy {
    std::vector<std::vector<Scalar>> matrix;  // l rows, t_cols columns
    std::vector<std::uint32_t> pi;            // row index -> leaf ordinal
    std::vector<Keyword> leaves;              // leaf keywords, pi(i)-indexed

    std::size_t rows() const { return matrix.size(); }
    std::size_t cols() const { return matrix.empty() ? 0 : matrix.front().size(); }

    const Keyword& leaf_of_row(std::size_t i) const { return leaves[pi[i]]; }

    void write_matrix(ByteWriter& w) const {
        w.u32be(static_cast<std::uint32_t>(rows()));
        w.u32be(static_cast<std::uint32_t>(cols()));
        for (const auto& row : matrix)
            for (const auto& s : row) s.write_raw(w);
        for (auto p : pi) w.u32be(p);
    }

    static KeywordPolicy read_matrix(ByteReader& r) {
        KeywordPolicy kp;
        std::uint32_t l = r.u32be();
        std::uint32_t t = r.u32be();
        if (l == 0 || t == 0) throw DeserializeError("empty policy matrix", r.offset() - 8);
        if (l > 100000 || t > 100000) throw DeserializeError("policy matrix too large", r.offset() - 8);
        kp.matrix.resize(l);
        for (auto& row : kp.matrix) {
            row.reserve(t);
            for (std::uint32_t j = 0; j < t; ++j) row.push_back(Scalar::read_raw(r));
        }
        kp.pi.reserve(l);
        for (std::uint32_t i = 0; i < l; ++i) {
            std::uint32_t p = r.u32be();
            if (p >= l) throw DeserializeError("row mapping out of range", r.offset() - 4);
            kp.pi.push_back(p);
        }
        return kp;
    }

    /// l, t_cols, row-major scalars, the row map, then the canonical keyword
    /// encodings (which are self-delimiting).
    Bytes serialize(CurveId curve = CurveId::bn254) const {
        if (leaves.size() != rows()) throw Error("policy has no leaf keywords");
        ByteWriter w;
        wire::write_header(w, wire::Tag::policy, curve);
        write_matrix(w);
        for (const auto& kw : leaves) w.raw(kw.canonical());
        return w.take();
    }

    static Keyword read_keyword(ByteReader& r) {
        std::size_t at = r.offset();
        std::uint32_t nl = r.u32be();
        if (nl == 0 || nl > 65536) throw DeserializeError("bad keyword name length", at);
        auto nb = r.raw(nl);
        if (r.u8() != 0x1F) throw DeserializeError("bad keyword encoding", r.offset() - 1);
        std::uint32_t vl = r.u32be();
        if (vl == 0 || vl > 65536)
            throw DeserializeError("bad keyword value length", r.offset() - 4);
        auto vb = r.raw(vl);
        return Keyword{std::string(nb.begin(), nb.end()), std::string(vb.begin(), vb.end())};
    }

    static KeywordPolicy deserialize(std::span<const std::uint8_t> data) {
        ByteReader r(data);
        wire::read_header(r, wire::Tag::policy);
        KeywordPolicy kp = read_matrix(r);
        for (std::size_t i = 0; i < kp.rows(); ++i) kp.leaves.push_back(read_keyword(r));
        r.finish();
        return kp;
    }
};

/// Liu-Cao-Wong insertion. Depth-first, left to right; each gate appends its
/// t-1 fresh columns at the current right edge, so compilation is
/// reproducible byte for byte.
inline KeywordPolicy compile_policy(const PolicyAst& ast) {
    struct Row {
        Keyword kw;
        std::map<std::uint32_t, Scalar> entries;
    };
    std::vector<Row> rows;
    std::uint32_t next_col = 1;

    auto dfs = [&](auto&& self, const PolicyAst& node,
                   std::map<std::uint32_t, Scalar> vec) -> void {
        if (node.is_leaf()) {
            rows.push_back({node.leaf, std::move(vec)});
            return;
        }
        std::uint32_t t = node.threshold;
        std::uint32_t base = next_col;
        next_col += t - 1;
        for (std::size_t j = 1; j <= node.children.size(); ++j) {
            auto child_vec = vec;
            Scalar js = Scalar::from_u64(j);
            Scalar pw = js;
            for (std::uint32_t k = 1; k < t; ++k) {
                child_vec[base + k - 1] = pw;
                pw = pw * js;
            }
            self(self, node.children[j - 1], child_vec);
        }
    };
    std::map<std::uint32_t, Scalar> root;
    root[0] = Scalar::one();
    dfs(dfs, ast, std::move(root));

    KeywordPolicy kp;
    kp.matrix.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<Scalar> dense(next_col, Scalar::zero());
        for (const auto& [col, val] : rows[i].entries) dense[col] = val;
        kp.matrix.push_back(std::move(dense));
        kp.pi.push_back(static_cast<std::uint32_t>(i));
        kp.leaves.push_back(rows[i].kw);
    }
    return kp;
}

// ---------------------------------------------------------------------------
// Sharing and reconstruction
// ---------------------------------------------------------------------------

/// lambda_i = M_i . (secret || v)^T
inline std::vector<Scalar> share_secret(const std::vector<std::vector<Scalar>>& matrix,
                                        const Scalar& secret,
                                        const std::vector<Scalar>& v) {
    if (matrix.empty()) throw Error("empty share matrix");
    std::size_t t_cols = matrix.front().size();
    if (v.size() + 1 != t_cols) throw Error("blinding vector has wrong dimension");
    std::vector<Scalar> shares;
    shares.reserve(matrix.size());
    for (const auto& row : matrix) {
        if (row.size() != t_cols) throw Error("ragged share matrix");
        Scalar acc = row[0] * secret;
        for (std::size_t j = 1; j < t_cols; ++j) acc = acc + row[j] * v[j - 1];
        shares.push_back(acc);
    }
    return shares;
}

struct ReconstructionCoeffs {
    std::map<std::size_t, Scalar> gamma;  // original row index -> coefficient
};

/// Solves gamma^T R = (1,0,...,0) by Gauss-Jordan elimination over Z_p.
/// Free variables are fixed to zero; returns nullopt when no solution exists.
inline std::optional<ReconstructionCoeffs> reconstruct_coeffs(
    const std::vector<std::pair<std::size_t, std::vector<Scalar>>>& rows) {
    if (rows.empty()) return std::nullopt;
    std::size_t t = rows.front().second.size();
    std::size_t k = rows.size();
    for (const auto& [idx, row] : rows)
        if (row.size() != t) throw Error("rows have mismatched width");

    // A is t x k: A[c][i] = rows[i][c]; augmented with e1
    std::vector<std::vector<Scalar>> a(t, std::vector<Scalar>(k + 1, Scalar::zero()));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < t; ++c) a[c][i] = rows[i].second[c];
    a[0][k] = Scalar::one();

    std::vector<std::size_t> pivot_var;
    std::size_t pr = 0;
    for (std::size_t var = 0; var < k && pr < t; ++var) {
        std::size_t sel = pr;
        while (sel < t && a[sel][var].is_zero()) ++sel;
        if (sel == t) continue;
        std::swap(a[pr], a[sel]);
        Scalar inv = a[pr][var].inverse();
        for (std::size_t j = var; j <= k; ++j) a[pr][j] = a[pr][j] * inv;
        for (std::size_t rr = 0; rr < t; ++rr) {
            if (rr == pr || a[rr][var].is_zero()) continue;
            Scalar f = a[rr][var];
            for (std::size_t j = var; j <= k; ++j) a[rr][j] = a[rr][j] - f * a[pr][j];
        }
        pivot_var.push_back(var);
        ++pr;
    }
    for (std::size_t rr = pr; rr < t; ++rr)
        if (!a[rr][k].is_zero()) return std::nullopt;

    ReconstructionCoeffs out;
    for (std::size_t i = 0; i < pivot_var.size(); ++i) {
        if (a[i][k].is_zero()) continue;
        out.gamma.emplace(rows[pivot_var[i]].first, a[i][k]);
    }
    return out;
}

/// Row indices of `policy` whose leaf keyword appears in `ws`.
inline std::vector<std::size_t> matching_rows(const KeywordPolicy& policy,
                                              const KeywordSet& ws) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < policy.rows(); ++i)
        if (ws.contains(policy.leaf_of_row(i))) out.push_back(i);
    return out;
}

/// LSSS-side satisfaction test (no AST needed): the rows matched by `ws`
/// span (1,0,...,0).
inline bool policy_satisfied(const KeywordPolicy& policy, const KeywordSet& ws) {
    std::vector<std::pair<std::size_t, std::vector<Scalar>>> rows;
    for (auto i : matching_rows(policy, ws)) rows.emplace_back(i, policy.matrix[i]);
    return reconstruct_coeffs(rows).has_value();
}

}  // namespace eepaeks

#endif  // EEPAEKS_POLICY_HPP_
