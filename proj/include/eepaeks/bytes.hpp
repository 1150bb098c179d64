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
#ifndef EEPAEKS_BYTES_HPP_
#define EEPAEKS_BYTES_HPP_

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "eepaeks/errors.hpp"

namespace eepaeks {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }

    void u32be(std::uint32_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 24));
        out_.push_back(static_cast<std::uint8_t>(v >> 16));
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }

    void raw(std::span<const std::uint8_t> b) {
        out_.insert(out_.end(), b.begin(), b.end());
    }

    void raw(const char* s) {
        out_.insert(out_.end(), s, s + std::strlen(s));
    }

    Bytes take() { return std::move(out_); }
    const Bytes& peek() const { return out_; }
    std::size_t size() const { return out_.size(); }

private:
    Bytes out_;
};

/// Bounds-checked reader; every failure reports the offending byte offset.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    std::uint32_t u32be() {
        need(4);
        std::uint32_t v = (static_cast<std::uint32_t>(data_[pos_]) << 24) |
                          (static_cast<std::uint32_t>(data_[pos_ + 1]) << 16) |
                          (static_cast<std::uint32_t>(data_[pos_ + 2]) << 8) |
                          static_cast<std::uint32_t>(data_[pos_ + 3]);
        pos_ += 4;
        return v;
    }

    std::span<const std::uint8_t> raw(std::size_t n) {
        need(n);
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    void expect(std::span<const std::uint8_t> magic, const char* what) {
        auto got = raw(magic.size());
        if (!std::equal(magic.begin(), magic.end(), got.begin()))
            throw DeserializeError(std::string("bad magic for ") + what, pos_ - magic.size());
    }

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }
    bool done() const noexcept { return pos_ == data_.size(); }

    void finish() {
        if (!done()) throw DeserializeError("trailing bytes", pos_);
    }

private:
    void need(std::size_t n) {
        if (data_.size() - pos_ < n)
            throw DeserializeError("truncated input", data_.size());
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

/// True iff `needle` occurs as a contiguous substring of `hay`.
inline bool contains_subsequence(std::span<const std::uint8_t> hay,
                                 std::span<const std::uint8_t> needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        if (std::memcmp(hay.data() + i, needle.data(), needle.size()) == 0) return true;
    }
    return false;
}

}  // namespace eepaeks

#endif  // EEPAEKS_BYTES_HPP_
