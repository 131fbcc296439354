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
#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcinit/errors.hpp"

/**
 * Pseudo-Boolean polynomials over 0/1 variables, their degree-2 special case
 * (the QUBO), and reduction of higher-degree monomials to degree 2 through
 * auxiliary product variables.
 *
 * Everything is keyed by VarLabel and ordered by the label's string form, so
 * two models built from the same inputs are identical term for term.
 */
namespace qcinit::pbp {

class VarLabel {
 public:
    VarLabel() = default;
    VarLabel(std::string name) : name_(std::move(name)) {}  // NOLINT(implicit)
    VarLabel(const char* name) : name_(name) {}             // NOLINT(implicit)

    const std::string& str() const noexcept { return name_; }

    friend bool operator==(const VarLabel&, const VarLabel&) = default;
    friend std::strong_ordering operator<=>(const VarLabel& a, const VarLabel& b) {
        return a.name_.compare(b.name_) <=> 0;
    }

 private:
    std::string name_;
};

/// Sorted list of labels; may hold repeats until normalized.
using VarSet = std::vector<VarLabel>;
using Assignment = std::map<VarLabel, bool>;

namespace detail {

inline bool lookup_bit(const Assignment& assignment, const VarLabel& v) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw MissingVariable(v.str());
    return it->second;
}

}  // namespace detail

struct Monomial {
    VarSet vars;
    double coeff = 0.0;
};

class PseudoBooleanPolynomial {
 public:
    using Terms = std::map<VarSet, double>;

    PseudoBooleanPolynomial() = default;
    explicit PseudoBooleanPolynomial(double constant) : constant_(constant) {}

    /// Adds coeff * prod(vars). Identical variable lists merge; repeated
    /// variables are kept as given until normalize().
    void add_term(VarSet vars, double coeff) {
        if (vars.empty()) {
            constant_ += coeff;
            return;
        }
        std::sort(vars.begin(), vars.end());
        terms_[std::move(vars)] += coeff;
    }

    void add_constant(double c) { constant_ += c; }

    PseudoBooleanPolynomial& operator+=(const PseudoBooleanPolynomial& other) {
        for (const auto& [vars, c] : other.terms_) terms_[vars] += c;
        constant_ += other.constant_;
        return *this;
    }

    PseudoBooleanPolynomial& operator*=(double s) {
        for (auto& [vars, c] : terms_) c *= s;
        constant_ *= s;
        return *this;
    }

    const Terms& terms() const noexcept { return terms_; }
    double constant() const noexcept { return constant_; }

    /// Coefficient stored under exactly this (sorted) variable list, 0 if absent.
    double coefficient(VarSet vars) const {
        if (vars.empty()) return constant_;
        std::sort(vars.begin(), vars.end());
        auto it = terms_.find(vars);
        return it == terms_.end() ? 0.0 : it->second;
    }

    std::size_t degree() const noexcept {
        std::size_t d = 0;
        for (const auto& [vars, c] : terms_) d = std::max(d, vars.size());
        return d;
    }

    /// Distinct variables, sorted.
    std::vector<VarLabel> variables() const {
        std::set<VarLabel> seen;
        for (const auto& [vars, c] : terms_) seen.insert(vars.begin(), vars.end());
        return {seen.begin(), seen.end()};
    }

    bool is_normalized() const {
        return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
            return t.second != 0.0 &&
                   std::adjacent_find(t.first.begin(), t.first.end()) == t.first.end();
        });
    }

    friend bool operator==(const PseudoBooleanPolynomial&,
                           const PseudoBooleanPolynomial&) = default;

 private:
    Terms terms_;
    double constant_ = 0.0;
};

/// Applies x*x = x, merges equal monomials and drops zero coefficients.
inline PseudoBooleanPolynomial normalize(const PseudoBooleanPolynomial& poly) {
    PseudoBooleanPolynomial out(poly.constant());
    for (const auto& [vars, c] : poly.terms()) {
        VarSet unique = vars;
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        out.add_term(std::move(unique), c);
    }
    PseudoBooleanPolynomial pruned(out.constant());
    for (const auto& [vars, c] : out.terms())
        if (c != 0.0) pruned.add_term(vars, c);
    return pruned;
}

inline double evaluate_poly(const PseudoBooleanPolynomial& poly, const Assignment& assignment) {
    double value = poly.constant();
    for (const auto& [vars, c] : poly.terms()) {
        bool on = true;
        for (const auto& v : vars) on = detail::lookup_bit(assignment, v) && on;
        if (on) value += c;
    }
    return value;
}

/// Upper-triangular QUBO: f(x) = offset + sum_i a_i x_i + sum_{i<j} b_ij x_i x_j.
class Qubo {
 public:
    using Pair = std::pair<VarLabel, VarLabel>;

    void add_variable(const VarLabel& v) {
        auto it = std::lower_bound(variables_.begin(), variables_.end(), v);
        if (it == variables_.end() || *it != v) variables_.insert(it, v);
    }

    void add_linear(const VarLabel& v, double bias) {
        add_variable(v);
        linear_[v] += bias;
    }

    /// Pairs are stored once with the smaller label first; a == b folds into
    /// the linear term.
    void add_quadratic(const VarLabel& a, const VarLabel& b, double bias) {
        if (a == b) {
            add_linear(a, bias);
            return;
        }
        add_variable(a);
        add_variable(b);
        quadratic_[a < b ? Pair{a, b} : Pair{b, a}] += bias;
    }

    void add_offset(double c) { offset_ += c; }

    const std::vector<VarLabel>& variables() const noexcept { return variables_; }
    const std::map<VarLabel, double>& linear() const noexcept { return linear_; }
    const std::map<Pair, double>& quadratic() const noexcept { return quadratic_; }
    double offset() const noexcept { return offset_; }
    std::size_t num_variables() const noexcept { return variables_.size(); }

    double linear(const VarLabel& v) const {
        auto it = linear_.find(v);
        return it == linear_.end() ? 0.0 : it->second;
    }

    double quadratic(const VarLabel& a, const VarLabel& b) const {
        auto it = quadratic_.find(a < b ? Pair{a, b} : Pair{b, a});
        return it == quadratic_.end() ? 0.0 : it->second;
    }

    /// Converts a degree <= 2 polynomial; repeated variables fold by x*x = x.
    static Qubo from_polynomial(const PseudoBooleanPolynomial& poly) {
        auto normal = normalize(poly);
        if (normal.degree() > 2)
            throw std::invalid_argument("polynomial has degree " +
                                        std::to_string(normal.degree()) + ", expected <= 2");
        Qubo q;
        q.add_offset(normal.constant());
        for (const auto& [vars, c] : normal.terms()) {
            if (vars.size() == 1)
                q.add_linear(vars[0], c);
            else
                q.add_quadratic(vars[0], vars[1], c);
        }
        return q;
    }

    PseudoBooleanPolynomial to_polynomial() const {
        PseudoBooleanPolynomial p(offset_);
        for (const auto& [v, c] : linear_) p.add_term({v}, c);
        for (const auto& [ab, c] : quadratic_) p.add_term({ab.first, ab.second}, c);
        return p;
    }

    friend bool operator==(const Qubo&, const Qubo&) = default;

 private:
    std::vector<VarLabel> variables_;
    std::map<VarLabel, double> linear_;
    std::map<Pair, double> quadratic_;
    double offset_ = 0.0;
};

/// Sums in a fixed order: offset, linear terms by label, pairs by label pair.
/// Solvers reproduce this order so reported energies match bit for bit.
inline double evaluate_qubo(const Qubo& q, const Assignment& assignment) {
    for (const auto& v : q.variables()) detail::lookup_bit(assignment, v);
    double energy = q.offset();
    for (const auto& [v, c] : q.linear())
        if (assignment.at(v)) energy += c;
    for (const auto& [ab, c] : q.quadratic())
        if (assignment.at(ab.first) && assignment.at(ab.second)) energy += c;
    return energy;
}

/// weight * (3z + xy - 2zx - 2zy): zero exactly when z = x*y, >= weight otherwise.
inline PseudoBooleanPolynomial rosenberg_gadget(const VarLabel& x, const VarLabel& y,
                                                const VarLabel& z, double weight) {
    if (!(weight > 0.0))
        throw std::invalid_argument("gadget weight must be positive, got " + std::to_string(weight));
    if (x == y || x == z || y == z)
        throw std::invalid_argument("gadget variables must be distinct");
    PseudoBooleanPolynomial p;
    p.add_term({z}, 3.0 * weight);
    p.add_term({x, y}, weight);
    p.add_term({z, x}, -2.0 * weight);
    p.add_term({z, y}, -2.0 * weight);
    return p;
}

struct AuxDefinition {
    VarLabel aux;
    std::pair<VarLabel, VarLabel> pair;
    double weight = 0.0;

    friend bool operator==(const AuxDefinition&, const AuxDefinition&) = default;
};

/// Auxiliaries in creation order. A pair may name an earlier auxiliary.
using ReductionMap = std::vector<AuxDefinition>;

/// Weight of each substitution penalty. Unset means 1 + sum |c| over the
/// monomials that contain the substituted pair at the time of substitution.
struct PenaltyPolicy {
    std::optional<double> fixed_weight;
};

/// Canonical auxiliary name for the product of a and b (a < b).
inline VarLabel product_label(const VarLabel& a, const VarLabel& b) {
    return VarLabel("(" + a.str() + "*" + b.str() + ")");
}

struct Quadratization {
    Qubo qubo;
    ReductionMap reduction;
};

namespace detail {

// Greedy pair substitution over interned variable ids. Pair priority is
// (occurrence count desc, first label asc, second label asc).
class Quadratizer {
 public:
    Quadratizer(const PseudoBooleanPolynomial& poly, PenaltyPolicy policy)
        : policy_(policy), low_(poly.constant()) {
        for (const auto& v : poly.variables()) intern(v);
        for (const auto& [vars, c] : poly.terms()) {
            if (vars.size() <= 2) {
                low_.add_term(vars, c);
                continue;
            }
            std::vector<int> ids;
            for (const auto& v : vars) ids.push_back(ids_.at(v));
            add_high(std::move(ids), c);
        }
    }

    Quadratization run() {
        while (!queue_.empty()) {
            auto [a, b] = queue_.begin()->pair;
            substitute(a, b);
        }
        Quadratization out;
        out.qubo = Qubo::from_polynomial(low_);
        for (const auto& name : names_) out.qubo.add_variable(name);
        out.reduction = std::move(reduction_);
        return out;
    }

 private:
    struct HighTerm {
        std::vector<int> vars;  // sorted by label
        double coeff = 0.0;
        bool alive = true;
    };

    struct QueueKey {
        int count;
        std::pair<int, int> pair;
    };

    struct QueueOrder {
        const std::vector<VarLabel>* names;
        bool operator()(const QueueKey& x, const QueueKey& y) const {
            if (x.count != y.count) return x.count > y.count;
            const auto& n = *names;
            if (n[x.pair.first] != n[y.pair.first]) return n[x.pair.first] < n[y.pair.first];
            return n[x.pair.second] < n[y.pair.second];
        }
    };

    int intern(const VarLabel& v) {
        auto [it, inserted] = ids_.try_emplace(v, static_cast<int>(names_.size()));
        if (inserted) {
            names_.push_back(v);
            occurrences_.emplace_back();
        }
        return it->second;
    }

    std::pair<int, int> ordered(int a, int b) const {
        return names_[a] < names_[b] ? std::pair{a, b} : std::pair{b, a};
    }

    void bump(int a, int b, int delta) {
        auto key = ordered(a, b);
        int& count = counts_[key];
        if (count > 0) queue_.erase(QueueKey{count, key});
        count += delta;
        if (count > 0)
            queue_.insert(QueueKey{count, key});
        else
            counts_.erase(key);
    }

    void count_pairs(const std::vector<int>& vars, int delta) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            for (std::size_t j = i + 1; j < vars.size(); ++j) bump(vars[i], vars[j], delta);
    }

    void add_high(std::vector<int> vars, double coeff) {
        std::sort(vars.begin(), vars.end(),
                  [this](int x, int y) { return names_[x] < names_[y]; });
        auto index = terms_.size();
        for (int v : vars) occurrences_[v].insert(index);
        count_pairs(vars, +1);
        terms_.push_back(HighTerm{std::move(vars), coeff, true});
    }

    void substitute(int a, int b) {
        const auto& occ_a = occurrences_[a];
        const auto& occ_b = occurrences_[b];
        const auto& small = occ_a.size() <= occ_b.size() ? occ_a : occ_b;
        const auto& large = occ_a.size() <= occ_b.size() ? occ_b : occ_a;
        std::vector<std::size_t> hits;
        for (auto t : small)
            if (large.count(t)) hits.push_back(t);

        double weight = 0.0;
        if (policy_.fixed_weight) {
            weight = *policy_.fixed_weight;
        } else {
            weight = 1.0 + std::abs(low_.coefficient({names_[a], names_[b]}));
            for (auto t : hits) weight += std::abs(terms_[t].coeff);
        }

        VarLabel aux = product_label(names_[a], names_[b]);
        if (ids_.count(aux)) throw std::logic_error("auxiliary label collides: " + aux.str());
        int z = intern(aux);

        for (auto t : hits) {
            HighTerm& term = terms_[t];
            count_pairs(term.vars, -1);
            for (int v : term.vars) occurrences_[v].erase(t);
            term.alive = false;
            std::vector<int> reduced;
            for (int v : term.vars)
                if (v != a && v != b) reduced.push_back(v);
            reduced.push_back(z);
            if (reduced.size() >= 3) {
                add_high(std::move(reduced), term.coeff);
            } else {
                VarSet labels;
                for (int v : reduced) labels.push_back(names_[v]);
                low_.add_term(std::move(labels), term.coeff);
            }
        }
        low_ += rosenberg_gadget(names_[a], names_[b], aux, weight);
        reduction_.push_back(AuxDefinition{aux, {names_[a], names_[b]}, weight});
    }

    PenaltyPolicy policy_;
    PseudoBooleanPolynomial low_;
    std::vector<VarLabel> names_;
    std::map<VarLabel, int> ids_;
    std::vector<std::set<std::size_t>> occurrences_;
    std::vector<HighTerm> terms_;
    std::map<std::pair<int, int>, int> counts_;
    std::set<QueueKey, QueueOrder> queue_{QueueOrder{&names_}};
    ReductionMap reduction_;
};

}  // namespace detail

/**
 * Reduces poly to a QUBO over its variables plus auxiliaries.
 *
 * Repeatedly picks the variable pair shared by the most monomials of degree
 * >= 3 (ties: smallest label pair), replaces it by an auxiliary z and adds
 * weight * (3z + ab - 2za - 2zb). For every assignment of the original
 * variables, the minimum over auxiliaries equals the original value, and
 * every minimizer sets each auxiliary to the product of its pair.
 */
inline Quadratization quadratize(const PseudoBooleanPolynomial& poly, PenaltyPolicy policy = {}) {
    if (policy.fixed_weight && !(*policy.fixed_weight > 0.0))
        throw std::invalid_argument("fixed penalty weight must be positive");
    return detail::Quadratizer(normalize(poly), policy).run();
}

/// Value of every auxiliary implied by the original variables, in creation order.
inline Assignment extend_with_auxiliaries(Assignment assignment, const ReductionMap& reduction) {
    for (const auto& def : reduction)
        assignment[def.aux] = detail::lookup_bit(assignment, def.pair.first) &&
                              detail::lookup_bit(assignment, def.pair.second);
    return assignment;
}

}  // namespace qcinit::pbp

template <>
struct std::hash<qcinit::pbp::VarLabel> {
    std::size_t operator()(const qcinit::pbp::VarLabel& v) const noexcept {
        return std::hash<std::string>{}(v.str());
    }
};
