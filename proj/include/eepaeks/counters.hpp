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
#ifndef EEPAEKS_COUNTERS_HPP_
#define EEPAEKS_COUNTERS_HPP_

#include <cstdint>

namespace eepaeks {

/// Operation tally for one measured call. `muls` lumps group multiplications
/// together with scalar-field products, matching the cost accounting the
/// benchmark asserts against.
struct OpCounters {
    std::uint64_t exps = 0;
    std::uint64_t muls = 0;
    std::uint64_t hashes = 0;
    std::uint64_t pairings = 0;

    OpCounters& operator+=(const OpCounters& o) {
        exps += o.exps;
        muls += o.muls;
        hashes += o.hashes;
        pairings += o.pairings;
        return *this;
    }

    OpCounters operator-(const OpCounters& o) const {
        return {exps - o.exps, muls - o.muls, hashes - o.hashes, pairings - o.pairings};
    }

    bool operator==(const OpCounters&) const = default;
};

namespace counters {

inline thread_local OpCounters* sink = nullptr;

inline void exp() { if (sink) ++sink->exps; }
inline void mul() { if (sink) ++sink->muls; }
inline void hash() { if (sink) ++sink->hashes; }
inline void pairing() { if (sink) ++sink->pairings; }

/// Installs a tally for the current thread; restores the previous one on exit.
class Scope {
public:
    explicit Scope(OpCounters& target) : prev_(sink) { sink = &target; }
    ~Scope() { sink = prev_; }

    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

private:
    OpCounters* prev_;
};

}  // namespace counters

}  // namespace eepaeks

#endif  // EEPAEKS_COUNTERS_HPP_
