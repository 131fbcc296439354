// Copyright 2026 The qcinit Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcinit {

class MissingVariable : public std::out_of_range {
 public:
    explicit MissingVariable(const std::string& label)
        : std::out_of_range("assignment is missing variable '" + label + "'"), label_(label) {}

    const std::string& label() const noexcept { return label_; }

 private:
    std::string label_;
};

class RangeError : public std::out_of_range {
 public:
    using std::out_of_range::out_of_range;
};

class TooManyVariables : public std::length_error {
 public:
    TooManyVariables(std::size_t count, std::size_t cap)
        : std::length_error("exhaustive search needs " + std::to_string(count) +
                            " enumerated variables, cap is " + std::to_string(cap)),
          count_(count),
          cap_(cap) {}

    std::size_t count() const noexcept { return count_; }
    std::size_t cap() const noexcept { return cap_; }

 private:
    std::size_t count_;
    std::size_t cap_;
};

/// Malformed input file; line is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

 private:
    std::size_t line_;
};

}  // namespace qcinit
