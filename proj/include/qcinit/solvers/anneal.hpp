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

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "qcinit/pbp.hpp"
#include "qcinit/solvers/indexed_qubo.hpp"
#include "qcinit/solvers/sample_set.hpp"

namespace qcinit::solvers {

struct AnnealParams {
    std::size_t sweeps = 3000;
    double beta_initial = 0.01;
    double beta_final = 1.0;
    std::size_t restarts = 32;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    TraceHook trace;

    void validate() const {
        if (sweeps < 1 || restarts < 1) throw std::invalid_argument("sweeps and restarts must be >= 1");
        if (!(beta_initial > 0.0)) throw std::invalid_argument("beta_initial must be positive");
        if (!(beta_final > beta_initial))
            throw std::invalid_argument("beta_final must exceed beta_initial");
    }
};

/// Inverse temperature of sweep s, geometric from beta_initial to beta_final.
inline double anneal_beta(const AnnealParams& p, std::size_t sweep) {
    if (p.sweeps == 1) return p.beta_final;
    const double t = static_cast<double>(sweep) / static_cast<double>(p.sweeps - 1);
    return p.beta_initial * std::pow(p.beta_final / p.beta_initial, t);
}

/**
 * Single-flip Metropolis annealing. Each sweep proposes a flip of every
 * variable once in index order; each restart starts from a uniformly random
 * state and reports the best state it visited.
 */
inline SampleSet solve_sa(const pbp::Qubo& q, const AnnealParams& params = {}) {
    params.validate();
    const auto start = std::chrono::steady_clock::now();
    IndexedQubo iq(q);
    const std::size_t n = iq.size();

    auto run = [&](std::size_t restart) {
        auto rng = detail::restart_engine(params.seed, restart);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        FieldTracker tracker(iq, detail::random_state(n, rng));
        State best = tracker.state();
        double best_energy = tracker.energy();
        for (std::size_t s = 0; s < params.sweeps; ++s) {
            const double beta = anneal_beta(params, s);
            for (std::size_t i = 0; i < n; ++i) {
                const double delta = tracker.flip_delta(i);
                if (delta <= 0.0 || uniform(rng) < std::exp(-beta * delta)) {
                    tracker.flip(i);
                    if (tracker.energy() < best_energy) {
                        best_energy = tracker.energy();
                        best = tracker.state();
                    }
                }
            }
            if (params.trace) params.trace(restart, s, best_energy);
        }
        return Sample{best, iq.energy(best), restart};
    };

    SampleSet out;
    out.variables = iq.labels();
    out.samples = detail::run_restarts(params.restarts, params.workers, run);
    out.solver = "sa";
    out.params = {{"sweeps", params.sweeps},         {"beta_initial", params.beta_initial},
                  {"beta_final", params.beta_final}, {"restarts", params.restarts},
                  {"seed", params.seed}};
    out.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace qcinit::solvers
