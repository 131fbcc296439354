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
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "qcinit/errors.hpp"
#include "qcinit/pbp.hpp"
#include "qcinit/solvers/indexed_qubo.hpp"
#include "qcinit/solvers/sample_set.hpp"

namespace qcinit::solvers {

struct ExhaustiveParams {
    /// Upper bound on the number of enumerated (branch) variables.
    std::size_t cap = 24;
    /// Upper bound on the number of returned minimizers.
    std::size_t max_minimizers = std::size_t{1} << 16;
};

namespace detail {

// Splits variables into a branch set B and an independent set R (no two
// members of R interact). Once B is fixed, each r in R contributes
// min(0, field_r) independently, so enumerating B alone is exact.
// Greedy maximal independent set, lowest current degree first.
inline std::vector<bool> independent_remainder(const IndexedQubo& q) {
    const std::size_t n = q.size();
    std::vector<bool> in_r(n, false), removed(n, false);
    std::vector<std::size_t> degree(n);
    for (std::size_t i = 0; i < n; ++i) degree[i] = q.neighbors(i).size();
    for (;;) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!removed[i] && (pick == n || degree[i] < degree[pick])) pick = i;
        if (pick == n) break;
        in_r[pick] = true;
        removed[pick] = true;
        for (const auto& nb : q.neighbors(pick)) {
            if (removed[nb.index]) continue;
            removed[nb.index] = true;
            for (const auto& nb2 : q.neighbors(nb.index))
                if (!removed[nb2.index]) --degree[nb2.index];
        }
    }
    return in_r;
}

}  // namespace detail

/// Number of variables solve_exhaustive would enumerate for this QUBO.
inline std::size_t exhaustive_branch_size(const pbp::Qubo& q) {
    IndexedQubo iq(q);
    auto in_r = detail::independent_remainder(iq);
    return static_cast<std::size_t>(std::count(in_r.begin(), in_r.end(), false));
}

/**
 * Exact minimization returning every global minimizer.
 *
 * Enumerates the branch set in Gray-code order and minimizes the remaining
 * independent variables in closed form. Candidates are collected with a
 * small tolerance and then re-evaluated from scratch, so the returned
 * energies are exact evaluations.
 */
inline SampleSet solve_exhaustive(const pbp::Qubo& q, const ExhaustiveParams& params = {}) {
    const auto start = std::chrono::steady_clock::now();
    IndexedQubo iq(q);
    const std::size_t n = iq.size();
    const auto in_r = detail::independent_remainder(iq);

    std::vector<std::size_t> branch, rest;
    std::vector<std::size_t> slot(n);  // position within branch or rest
    for (std::size_t i = 0; i < n; ++i) {
        slot[i] = in_r[i] ? rest.size() : branch.size();
        (in_r[i] ? rest : branch).push_back(i);
    }
    if (branch.size() > params.cap || branch.size() > 62)
        throw TooManyVariables(branch.size(), std::min<std::size_t>(params.cap, 62));

    const double tol = 1e-9 * (1.0 + iq.magnitude());

    State x(n, 0);
    std::vector<double> rest_field(rest.size());
    double min_part = 0.0;
    for (std::size_t r = 0; r < rest.size(); ++r) {
        rest_field[r] = iq.linear(rest[r]);
        min_part += std::min(0.0, rest_field[r]);
    }
    double branch_energy = iq.offset();

    struct Candidate {
        std::uint64_t mask;
        double value;
    };
    std::vector<Candidate> candidates;
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](std::uint64_t mask, double value) {
        if (value > best + tol) return;
        if (value < best) {
            best = value;
            std::erase_if(candidates, [&](const Candidate& c) { return c.value > best + tol; });
        }
        candidates.push_back({mask, value});
    };

    std::uint64_t mask = 0;
    consider(mask, branch_energy + min_part);
    const std::uint64_t total = std::uint64_t{1} << branch.size();
    for (std::uint64_t step = 1; step < total; ++step) {
        const auto b = static_cast<std::size_t>(std::countr_zero(step));
        const std::size_t var = branch[b];
        double f = iq.linear(var);
        for (const auto& nb : iq.neighbors(var))
            if (!in_r[nb.index] && x[nb.index]) f += nb.weight;
        const double sign = x[var] ? -1.0 : 1.0;
        branch_energy += sign * f;
        x[var] ^= 1;
        mask ^= std::uint64_t{1} << b;
        for (const auto& nb : iq.neighbors(var)) {
            if (!in_r[nb.index]) continue;
            double& field = rest_field[slot[nb.index]];
            min_part -= std::min(0.0, field);
            field += sign * nb.weight;
            min_part += std::min(0.0, field);
        }
        consider(mask, branch_energy + min_part);
    }

    // Expand candidates: rest variables with a (near) zero field take both values.
    std::vector<Sample> found;
    for (const auto& c : candidates) {
        if (c.value > best + tol) continue;
        State y(n, 0);
        for (std::size_t b = 0; b < branch.size(); ++b) y[branch[b]] = (c.mask >> b) & 1;
        std::vector<std::size_t> free_vars;
        for (std::size_t r : rest) {
            double field = iq.linear(r);
            for (const auto& nb : iq.neighbors(r))
                if (y[nb.index]) field += nb.weight;
            if (std::abs(field) <= tol)
                free_vars.push_back(r);
            else
                y[r] = field < 0.0;
        }
        if (free_vars.size() > 20) throw TooManyVariables(free_vars.size(), 20);
        for (std::uint64_t combo = 0; combo < (std::uint64_t{1} << free_vars.size()); ++combo) {
            for (std::size_t f = 0; f < free_vars.size(); ++f) y[free_vars[f]] = (combo >> f) & 1;
            found.push_back({y, iq.energy(y), 0});
            if (found.size() > 4 * params.max_minimizers) break;
        }
    }
    double exact_min = std::numeric_limits<double>::infinity();
    for (const auto& s : found) exact_min = std::min(exact_min, s.energy);
    std::erase_if(found, [&](const Sample& s) { return s.energy > exact_min + tol; });
    std::sort(found.begin(), found.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });
    found.erase(std::unique(found.begin(), found.end(),
                            [](const Sample& a, const Sample& b) { return a.bits == b.bits; }),
                found.end());
    if (found.size() > params.max_minimizers) found.resize(params.max_minimizers);

    SampleSet out;
    out.variables = iq.labels();
    out.samples = std::move(found);
    out.solver = "exact";
    out.params = {{"cap", params.cap}, {"branch_variables", branch.size()}};
    out.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace qcinit::solvers
