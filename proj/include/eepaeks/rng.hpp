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
#ifndef EEPAEKS_RNG_HPP_
#define EEPAEKS_RNG_HPP_

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <random>
#include <span>

namespace eepaeks {

class Rng {
public:
    virtual ~Rng() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Deterministic byte stream: block_i = SHA-256(seed || counter).
/// Output depends only on the seed, so every run replays identically.
class SeededRng final : public Rng {
public:
    explicit SeededRng(std::uint64_t seed) {
        std::memset(seed_.data(), 0, seed_.size());
        for (int i = 0; i < 8; ++i)
            seed_[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
    }

    explicit SeededRng(std::span<const std::uint8_t> seed) {
        std::memset(seed_.data(), 0, seed_.size());
        std::memcpy(seed_.data(), seed.data(), std::min(seed.size(), seed_.size()));
    }

    void fill(std::span<std::uint8_t> out) override {
        std::size_t done = 0;
        while (done < out.size()) {
            if (avail_ == 0) refill();
            std::size_t take = std::min(out.size() - done, avail_);
            std::memcpy(out.data() + done, block_.data() + (block_.size() - avail_), take);
            avail_ -= take;
            done += take;
        }
    }

    /// Derives an independent stream, e.g. one per trial or per thread.
    SeededRng fork(std::uint64_t label) const {
        std::array<std::uint8_t, 40> material{};
        std::memcpy(material.data(), seed_.data(), 32);
        for (int i = 0; i < 8; ++i)
            material[32 + i] = static_cast<std::uint8_t>(label >> (56 - 8 * i));
        std::array<std::uint8_t, 32> sub{};
        unsigned int len = 0;
        EVP_Digest(material.data(), material.size(), sub.data(), &len, EVP_sha256(), nullptr);
        return SeededRng(std::span<const std::uint8_t>(sub));
    }

private:
    void refill() {
        std::array<std::uint8_t, 40> material{};
        std::memcpy(material.data(), seed_.data(), 32);
        for (int i = 0; i < 8; ++i)
            material[32 + i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
        unsigned int len = 0;
        EVP_Digest(material.data(), material.size(), block_.data(), &len, EVP_sha256(), nullptr);
        ++counter_;
        avail_ = block_.size();
    }

    std::array<std::uint8_t, 32> seed_{};
    std::array<std::uint8_t, 32> block_{};
    std::size_t avail_ = 0;
    std::uint64_t counter_ = 0;
};

/// System entropy. Used by the CLI when no --seed is given.
class SystemRng final : public Rng {
public:
    void fill(std::span<std::uint8_t> out) override {
        for (auto& b : out) b = static_cast<std::uint8_t>(dist_(dev_));
    }

private:
    std::random_device dev_;
    std::uniform_int_distribution<unsigned> dist_{0, 255};
};

}  // namespace eepaeks

#endif  // EEPAEKS_RNG_HPP_
