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
#include <span>
#include <vector>

#include "qcinit/pbp.hpp"

namespace qcinit::solvers {

using State = std::vector<std::uint8_t>;

struct Neighbor {
    std::size_t index;
    double weight;
};

/// Dense-index view of a Qubo; variable i is q.variables()[i].
class IndexedQubo {
 public:
    explicit IndexedQubo(const pbp::Qubo& q)
        : labels_(q.variables()), offset_(q.offset()), linear_(labels_.size(), 0.0),
          adjacency_(labels_.size()) {
        auto index_of = [this](const pbp::VarLabel& v) {
            return static_cast<std::size_t>(
                std::lower_bound(labels_.begin(), labels_.end(), v) - labels_.begin());
        };
        for (const auto& [v, c] : q.linear()) {
            auto i = index_of(v);
            linear_[i] = c;
            linear_terms_.push_back({i, c});
        }
        for (const auto& [ab, c] : q.quadratic()) {
            auto i = index_of(ab.first);
            auto j = index_of(ab.second);
            quadratic_terms_.push_back({i, j, c});
            adjacency_[i].push_back({j, c});
            adjacency_[j].push_back({i, c});
        }
    }

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<pbp::VarLabel>& labels() const noexcept { return labels_; }
    double offset() const noexcept { return offset_; }
    double linear(std::size_t i) const { return linear_[i]; }
    std::span<const Neighbor> neighbors(std::size_t i) const { return adjacency_[i]; }

    /// Same summation order as pbp::evaluate_qubo, hence bit-identical.
    double energy(std::span<const std::uint8_t> x) const {
        double e = offset_;
        for (const auto& t : linear_terms_)
            if (x[t.i]) e += t.c;
        for (const auto& t : quadratic_terms_)
            if (x[t.i] && x[t.j]) e += t.c;
        return e;
    }

    /// linear_i + sum_j Q_ij x_j; flipping i changes the energy by (1 - 2 x_i) * field.
    double field(std::span<const std::uint8_t> x, std::size_t i) const {
        double f = linear_[i];
        for (const auto& nb : adjacency_[i])
            if (x[nb.index]) f += nb.weight;
        return f;
    }

    /// Sum of absolute coefficients plus |offset|; scale for float tolerances.
    double magnitude() const {
        double m = std::abs(offset_);
        for (const auto& t : linear_terms_) m += std::abs(t.c);
        for (const auto& t : quadratic_terms_) m += std::abs(t.c);
        return m;
    }

    pbp::Assignment assignment(std::span<const std::uint8_t> x) const {
        pbp::Assignment a;
        for (std::size_t i = 0; i < labels_.size(); ++i) a.emplace(labels_[i], x[i] != 0);
        return a;
    }

 private:
    struct LinearTerm {
        std::size_t i;
        double c;
    };
    struct QuadraticTerm {
        std::size_t i, j;
        double c;
    };

    std::vector<pbp::VarLabel> labels_;
    double offset_;
    std::vector<double> linear_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<LinearTerm> linear_terms_;
    std::vector<QuadraticTerm> quadratic_terms_;
};

/// Local fields for every variable, kept current across single flips.
class FieldTracker {
 public:
    FieldTracker(const IndexedQubo& q, State state) : q_(&q), state_(std::move(state)) {
        fields_.resize(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) fields_[i] = q.field(state_, i);
        energy_ = q.energy(state_);
    }

    double flip_delta(std::size_t i) const { return state_[i] ? -fields_[i] : fields_[i]; }

    void flip(std::size_t i) {
        energy_ += flip_delta(i);
        const double sign = state_[i] ? -1.0 : 1.0;
        state_[i] ^= 1;
        for (const auto& nb : q_->neighbors(i)) fields_[nb.index] += sign * nb.weight;
    }

    const State& state() const noexcept { return state_; }
    /// Incrementally tracked; re-evaluate with IndexedQubo::energy for reporting.
    double energy() const noexcept { return energy_; }

 private:
    const IndexedQubo* q_;
    State state_;
    std::vector<double> fields_;
    double energy_ = 0.0;
};

}  // namespace qcinit::solvers
