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

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcinit/encoding.hpp"
#include "qcinit/pbp.hpp"

/**
 * Clustering as a binary factorization problem.
 *
 * The data matrix V is d x n (one column per point). W is d x k with one
 * centroid per column, each entry radix-2 encoded; H is k x n with one binary
 * indicator per (cluster, point). Minimizing ||V - WH||_F^2 while each column
 * of H selects exactly one cluster places the columns of W on cluster means
 * (rounded to integers).
 */
namespace qcinit::formulation {

using encoding::RadixScheme;
using pbp::VarLabel;

/// Unset fields resolve automatically (see resolve_penalties).
struct PenaltyConfig {
    std::optional<double> delta2;
    std::optional<double> delta1;
};

struct ResolvedPenalties {
    double delta2 = 0.0;
    pbp::PenaltyPolicy delta1;
};

struct FactorizationInstance {
    Eigen::MatrixXd V;  // d x n
    std::size_t k = 1;
    RadixScheme scheme;
    PenaltyConfig penalties;

    std::size_t dims() const noexcept { return static_cast<std::size_t>(V.rows()); }
    std::size_t points() const noexcept { return static_cast<std::size_t>(V.cols()); }

    void validate() const {
        scheme.validate();
        if (V.rows() < 1) throw std::invalid_argument("data matrix needs at least one row");
        if (k < 1) throw std::invalid_argument("cluster count must be >= 1");
        if (points() < k)
            throw std::invalid_argument("cluster count " + std::to_string(k) + " exceeds point count " +
                                        std::to_string(points()));
        const auto lo = static_cast<double>(scheme.min_value());
        const auto hi = static_cast<double>(scheme.max_value());
        for (Eigen::Index j = 0; j < V.cols(); ++j)
            for (Eigen::Index i = 0; i < V.rows(); ++i)
                if (!(V(i, j) >= lo && V(i, j) <= hi))
                    throw RangeError("V(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                     std::to_string(V(i, j)) + " outside encodable range [" +
                                     std::to_string(scheme.min_value()) + ", " +
                                     std::to_string(scheme.max_value()) + "]");
        if (penalties.delta2 && !(*penalties.delta2 > 0.0))
            throw std::invalid_argument("delta2 must be positive");
        if (penalties.delta1 && !(*penalties.delta1 > 0.0))
            throw std::invalid_argument("delta1 must be positive");
    }
};

struct VariableLayout {
    std::size_t d = 0, n = 0, k = 0;
    std::vector<encoding::BitExpansion> w;  // row-major over (feature i, cluster l)
    std::vector<VarLabel> h;                // row-major over (cluster l, point j)
    pbp::ReductionMap aux;

    const encoding::BitExpansion& w_cell(std::size_t i, std::size_t l) const { return w[i * k + l]; }
    const VarLabel& h_var(std::size_t l, std::size_t j) const { return h[l * n + j]; }

    std::vector<VarLabel> original_variables() const {
        std::vector<VarLabel> out;
        for (const auto& cell : w)
            for (const auto& t : cell.terms) out.push_back(t.label);
        out.insert(out.end(), h.begin(), h.end());
        return out;
    }

    std::size_t expected_variable_count() const noexcept {
        std::size_t bits = w.empty() ? 0 : w.front().terms.size();
        return d * k * bits + k * n + aux.size();
    }
};

inline VariableLayout make_layout(const FactorizationInstance& instance) {
    VariableLayout layout;
    layout.d = instance.dims();
    layout.n = instance.points();
    layout.k = instance.k;
    for (std::size_t i = 0; i < layout.d; ++i)
        for (std::size_t l = 0; l < layout.k; ++l)
            layout.w.push_back(encoding::expansion_for_cell(i, l, instance.scheme, "w"));
    for (std::size_t l = 0; l < layout.k; ++l)
        for (std::size_t j = 0; j < layout.n; ++j)
            layout.h.push_back("h_" + std::to_string(l) + "_" + std::to_string(j));
    return layout;
}

struct Objective {
    pbp::PseudoBooleanPolynomial polynomial;
    VariableLayout layout;
};

/// sum_ij (V_ij - sum_l w_il h_lj)^2 with each w_il bit-expanded; degree <= 4.
inline Objective build_objective(const FactorizationInstance& instance) {
    instance.validate();
    auto layout = make_layout(instance);
    pbp::PseudoBooleanPolynomial poly;
    for (std::size_t i = 0; i < layout.d; ++i) {
        for (std::size_t j = 0; j < layout.n; ++j) {
            const double v = instance.V(i, j);
            poly.add_constant(v * v);
            // (WH)_ij as a list of weighted degree-2 products q * h.
            std::vector<std::pair<pbp::VarSet, double>> products;
            for (std::size_t l = 0; l < layout.k; ++l)
                for (const auto& bit : layout.w_cell(i, l).terms)
                    products.push_back({{bit.label, layout.h_var(l, j)}, bit.weight});
            for (const auto& [vars, weight] : products) poly.add_term(vars, -2.0 * v * weight);
            for (const auto& [a, wa] : products) {
                for (const auto& [b, wb] : products) {
                    pbp::VarSet vars = a;
                    vars.insert(vars.end(), b.begin(), b.end());
                    poly.add_term(std::move(vars), wa * wb);
                }
            }
        }
    }
    return {pbp::normalize(poly), std::move(layout)};
}

/// delta2 * sum_j (1 - sum_l h_lj)^2.
inline pbp::PseudoBooleanPolynomial onehot_penalty(const FactorizationInstance& instance,
                                                   const VariableLayout& layout, double delta2) {
    if (!(delta2 > 0.0)) throw std::invalid_argument("delta2 must be positive");
    if (layout.n != instance.points() || layout.k != instance.k)
        throw std::invalid_argument("layout does not match instance");
    pbp::PseudoBooleanPolynomial poly;
    for (std::size_t j = 0; j < layout.n; ++j) {
        poly.add_constant(delta2);
        for (std::size_t l = 0; l < layout.k; ++l) {
            poly.add_term({layout.h_var(l, j)}, -2.0 * delta2);
            for (std::size_t m = 0; m < layout.k; ++m)
                poly.add_term({layout.h_var(l, j), layout.h_var(m, j)}, delta2);
        }
    }
    return pbp::normalize(poly);
}

/// delta2 defaults to 1 + ||V||_F^2, which the objective can never recover
/// from a one-hot violation since the objective is at most ||V||_F^2 at W = 0.
inline ResolvedPenalties resolve_penalties(const FactorizationInstance& instance) {
    ResolvedPenalties r;
    r.delta2 = instance.penalties.delta2.value_or(1.0 + instance.V.squaredNorm());
    r.delta1.fixed_weight = instance.penalties.delta1;
    return r;
}

struct FactorizationQubo {
    pbp::Qubo qubo;
    VariableLayout layout;
    ResolvedPenalties penalties;
};

inline FactorizationQubo build_qubo(const FactorizationInstance& instance) {
    auto [poly, layout] = build_objective(instance);
    auto penalties = resolve_penalties(instance);
    poly += onehot_penalty(instance, layout, penalties.delta2);
    auto reduced = pbp::quadratize(poly, penalties.delta1);
    for (const auto& v : layout.original_variables()) reduced.qubo.add_variable(v);
    layout.aux = std::move(reduced.reduction);
    return {std::move(reduced.qubo), std::move(layout), penalties};
}

template <class DerivedW, class DerivedH>
double objective_value(const Eigen::MatrixXd& V, const Eigen::MatrixBase<DerivedW>& W,
                       const Eigen::MatrixBase<DerivedH>& H) {
    if (W.rows() != V.rows() || H.cols() != V.cols() || W.cols() != H.rows())
        throw std::invalid_argument("shape mismatch: V is " + std::to_string(V.rows()) + "x" +
                                    std::to_string(V.cols()) + ", W is " + std::to_string(W.rows()) +
                                    "x" + std::to_string(W.cols()) + ", H is " +
                                    std::to_string(H.rows()) + "x" + std::to_string(H.cols()));
    Eigen::MatrixXd residual = V - W.template cast<double>() * H.template cast<double>();
    return residual.squaredNorm();
}

struct FactorizationSolution {
    Eigen::MatrixXi W;  // d x k
    Eigen::MatrixXi H;  // k x n
    double energy = std::numeric_limits<double>::quiet_NaN();
    double objective = 0.0;
    std::size_t onehot_violations = 0;
};

/// Auxiliary variables are not needed and are ignored if present.
inline FactorizationSolution decode_solution(const pbp::Assignment& assignment,
                                             const VariableLayout& layout,
                                             const FactorizationInstance& instance,
                                             double energy = std::numeric_limits<double>::quiet_NaN()) {
    FactorizationSolution s;
    s.energy = energy;
    s.W.resize(static_cast<Eigen::Index>(layout.d), static_cast<Eigen::Index>(layout.k));
    s.H.resize(static_cast<Eigen::Index>(layout.k), static_cast<Eigen::Index>(layout.n));
    for (std::size_t i = 0; i < layout.d; ++i)
        for (std::size_t l = 0; l < layout.k; ++l)
            s.W(i, l) = static_cast<int>(
                encoding::decode_bits(layout.w_cell(i, l).bits(assignment), instance.scheme));
    for (std::size_t l = 0; l < layout.k; ++l)
        for (std::size_t j = 0; j < layout.n; ++j)
            s.H(l, j) = pbp::detail::lookup_bit(assignment, layout.h_var(l, j)) ? 1 : 0;
    for (std::size_t j = 0; j < layout.n; ++j)
        if (s.H.col(j).sum() != 1) ++s.onehot_violations;
    s.objective = objective_value(instance.V, s.W, s.H);
    return s;
}

struct CentroidSet {
    std::vector<Eigen::VectorXi> centroids;  // one per cluster, in cluster order
    std::vector<bool> empty;                 // no point selected this cluster
};

/// Columns of W; under a one-hot H these are exactly the distinct columns of WH.
inline CentroidSet extract_centroids(const FactorizationSolution& solution) {
    CentroidSet out;
    for (Eigen::Index l = 0; l < solution.W.cols(); ++l) {
        out.centroids.emplace_back(solution.W.col(l));
        out.empty.push_back(solution.H.row(l).sum() == 0);
    }
    return out;
}

}  // namespace qcinit::formulation
