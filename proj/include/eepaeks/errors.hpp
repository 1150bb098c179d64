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
#ifndef EEPAEKS_ERRORS_HPP_
#define EEPAEKS_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eepaeks {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed byte input. `offset` is the byte position the decoder rejected.
class DeserializeError : public Error {
public:
    DeserializeError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Query grammar violation. `offset` is the byte position in the query text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Thrown by game-driver oracles when an adversary breaks a query restriction.
class RestrictionViolation : public Error {
public:
    explicit RestrictionViolation(const std::string& what) : Error(what) {}
};

}  // namespace eepaeks

#endif  // EEPAEKS_ERRORS_HPP_
