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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "qcinit/pbp.hpp"
#include "qcinit/solvers/indexed_qubo.hpp"
#include "qcinit/solvers/sample_set.hpp"

namespace qcinit::solvers {

struct TabuParams {
    /// Iterations a flipped variable stays tabu; clamped to [1, n - 1].
    std::size_t tenure = 20;
    std::size_t max_iterations = 10000;
    std::size_t restarts = 20;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    TraceHook trace;

    void validate() const {
        if (tenure < 1) throw std::invalid_argument("tenure must be >= 1");
        if (max_iterations < 1 || restarts < 1)
            throw std::invalid_argument("max_iterations and restarts must be >= 1");
    }
};

inline std::size_t effective_tenure(const TabuParams& p, std::size_t n) {
    if (n <= 1) return 1;
    return std::clamp<std::size_t>(p.tenure, 1, n - 1);
}

/**
 * Multistart tabu search over the one-flip neighbourhood.
 *
 * Each iteration applies the best non-tabu flip (ties broken uniformly at
 * random); a tabu flip is admissible only if it yields a new best energy.
 * A restart ends after max_iterations or when no flip is admissible.
 */
inline SampleSet solve_tabu(const pbp::Qubo& q, const TabuParams& params = {}) {
    params.validate();
    const auto start = std::chrono::steady_clock::now();
    IndexedQubo iq(q);
    const std::size_t n = iq.size();
    const std::size_t tenure = effective_tenure(params, n);

    auto run = [&](std::size_t restart) {
        auto rng = detail::restart_engine(params.seed, restart);
        FieldTracker tracker(iq, detail::random_state(n, rng));
        State best = tracker.state();
        double best_energy = tracker.energy();
        std::vector<std::size_t> tabu_until(n, 0);
        for (std::size_t it = 0; it < params.max_iterations && n > 0; ++it) {
            std::size_t pick = n;
            double pick_delta = std::numeric_limits<double>::infinity();
            std::size_t ties = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double delta = tracker.flip_delta(i);
                const bool tabu = tabu_until[i] > it;
                if (tabu && !(tracker.energy() + delta < best_energy)) continue;
                if (delta < pick_delta) {
                    pick = i;
                    pick_delta = delta;
                    ties = 1;
                } else if (delta == pick_delta && rng() % ++ties == 0) {
                    pick = i;
                }
            }
            if (pick == n) break;
            tracker.flip(pick);
            tabu_until[pick] = it + 1 + tenure;
            if (tracker.energy() < best_energy) {
                best_energy = tracker.energy();
                best = tracker.state();
            }
            if (params.trace) params.trace(restart, it, best_energy);
        }
        return Sample{best, iq.energy(best), restart};
    };

    SampleSet out;
    out.variables = iq.labels();
    out.samples = detail::run_restarts(params.restarts, params.workers, run);
    out.solver = "tabu";
    out.params = {{"tenure", tenure},
                  {"max_iterations", params.max_iterations},
                  {"restarts", params.restarts},
                  {"seed", params.seed}};
    out.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace qcinit::solvers
