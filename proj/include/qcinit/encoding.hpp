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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcinit/errors.hpp"
#include "qcinit/pbp.hpp"

// Signed radix-2 integers: bits [sign, 2^p, ..., 2^0], most significant first.
// The sign bit carries weight -2^(p+1) (two's complement) or -2^(p+1) + 1
// (ones' complement, which has two encodings of zero).
namespace qcinit::encoding {

enum class SignMode { twos_complement, ones_complement };

struct RadixScheme {
    int max_power = 2;
    SignMode sign_mode = SignMode::twos_complement;

    int bit_count() const noexcept { return max_power + 2; }

    std::int64_t sign_weight() const noexcept {
        std::int64_t w = -(std::int64_t{1} << (max_power + 1));
        return sign_mode == SignMode::twos_complement ? w : w + 1;
    }

    std::int64_t min_value() const noexcept { return sign_weight(); }
    std::int64_t max_value() const noexcept { return (std::int64_t{1} << (max_power + 1)) - 1; }

    void validate() const {
        if (max_power < 0 || max_power > 60)
            throw std::invalid_argument("max power must be in [0, 60], got " +
                                        std::to_string(max_power));
    }

    friend bool operator==(const RadixScheme&, const RadixScheme&) = default;
};

using Bits = std::vector<int>;

inline Bits encode_integer(std::int64_t value, const RadixScheme& scheme) {
    scheme.validate();
    if (value < scheme.min_value() || value > scheme.max_value())
        throw RangeError("value " + std::to_string(value) + " outside representable range [" +
                         std::to_string(scheme.min_value()) + ", " +
                         std::to_string(scheme.max_value()) + "]");
    Bits bits(scheme.bit_count(), 0);
    std::int64_t magnitude = value;
    if (value < 0) {
        bits[0] = 1;
        magnitude = value - scheme.sign_weight();
    }
    for (int power = scheme.max_power; power >= 0; --power)
        bits[1 + scheme.max_power - power] = static_cast<int>((magnitude >> power) & 1);
    return bits;
}

inline std::int64_t decode_bits(std::span<const int> bits, const RadixScheme& scheme) {
    scheme.validate();
    if (bits.size() != static_cast<std::size_t>(scheme.bit_count()))
        throw std::invalid_argument("expected " + std::to_string(scheme.bit_count()) +
                                    " bits, got " + std::to_string(bits.size()));
    std::int64_t value = bits[0] ? scheme.sign_weight() : 0;
    for (int power = scheme.max_power; power >= 0; --power)
        if (bits[1 + scheme.max_power - power]) value += std::int64_t{1} << power;
    return value;
}

struct WeightedBit {
    pbp::VarLabel label;
    double weight = 0.0;
};

/// Linear bit expansion of one encoded matrix cell, in bit order.
struct BitExpansion {
    std::vector<WeightedBit> terms;

    double value(const pbp::Assignment& assignment) const {
        double v = 0.0;
        for (const auto& t : terms)
            if (pbp::detail::lookup_bit(assignment, t.label)) v += t.weight;
        return v;
    }

    Bits bits(const pbp::Assignment& assignment) const {
        Bits out;
        for (const auto& t : terms) out.push_back(pbp::detail::lookup_bit(assignment, t.label));
        return out;
    }
};

inline pbp::VarLabel cell_sign_label(const std::string& prefix, std::size_t row, std::size_t col) {
    return prefix + "_" + std::to_string(row) + "_" + std::to_string(col) + "_sign";
}

inline pbp::VarLabel cell_bit_label(const std::string& prefix, std::size_t row, std::size_t col,
                                    int power) {
    return prefix + "_" + std::to_string(row) + "_" + std::to_string(col) + "_b" +
           std::to_string(power);
}

/// Labels `<prefix>_<row>_<col>_sign` and `<prefix>_<row>_<col>_b<power>`.
inline BitExpansion expansion_for_cell(std::size_t row, std::size_t col, const RadixScheme& scheme,
                                       const std::string& prefix) {
    scheme.validate();
    BitExpansion e;
    e.terms.push_back({cell_sign_label(prefix, row, col), static_cast<double>(scheme.sign_weight())});
    for (int power = scheme.max_power; power >= 0; --power)
        e.terms.push_back({cell_bit_label(prefix, row, col, power),
                           static_cast<double>(std::int64_t{1} << power)});
    return e;
}

}  // namespace qcinit::encoding
