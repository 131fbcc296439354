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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcinit/pbp.hpp"
#include "qcinit/solvers/indexed_qubo.hpp"

namespace qcinit::solvers {

struct Sample {
    State bits;  // indexed like SampleSet::variables
    double energy = 0.0;
    std::size_t restart = 0;
};

struct SampleSet {
    std::vector<pbp::VarLabel> variables;
    std::vector<Sample> samples;  // ascending energy, ties by restart
    std::string solver;
    nlohmann::json params;
    double wall_ms = 0.0;

    bool empty() const noexcept { return samples.empty(); }

    const Sample& best() const {
        if (samples.empty()) throw std::logic_error("sample set is empty");
        return samples.front();
    }

    pbp::Assignment assignment(const Sample& s) const {
        pbp::Assignment a;
        for (std::size_t i = 0; i < variables.size(); ++i) a.emplace(variables[i], s.bits[i] != 0);
        return a;
    }
};

/// Called with (restart, step, best energy so far) after every sweep/iteration.
using TraceHook = std::function<void(std::size_t, std::size_t, double)>;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream per restart, derived from seed + restart index only.
inline std::mt19937_64 restart_engine(std::uint64_t seed, std::size_t restart) {
    return std::mt19937_64(splitmix64(seed + static_cast<std::uint64_t>(restart)));
}

inline State random_state(std::size_t n, std::mt19937_64& rng) {
    State x(n);
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() >> 63);
    return x;
}

/// Runs body(restart) for every restart on up to `workers` threads and
/// returns the samples ordered by (energy, restart).
template <class Body>
std::vector<Sample> run_restarts(std::size_t restarts, std::size_t workers, Body&& body) {
    std::vector<Sample> out(restarts);
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(restarts, 1));
    if (workers == 1) {
        for (std::size_t r = 0; r < restarts; ++r) out[r] = body(r);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < restarts; r += workers) out[r] = body(r);
            });
        for (auto& t : pool) t.join();
    }
    std::stable_sort(out.begin(), out.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.restart < b.restart;
    });
    return out;
}

}  // namespace detail

}  // namespace qcinit::solvers
