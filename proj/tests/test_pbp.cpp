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

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qcinit/errors.hpp"
#include "qcinit/pbp.hpp"

using namespace qcinit::pbp;

TEST_CASE("normalize applies idempotence") {
    PseudoBooleanPolynomial p;
    p.add_term({"x", "x"}, 1.0);
    auto n = normalize(p);
    CHECK(n.terms().size() == 1);
    CHECK(n.coefficient({"x"}) == 1.0);
    CHECK(n.is_normalized());
    CHECK_FALSE(p.is_normalized());
}

TEST_CASE("normalize merges commuted monomials") {
    PseudoBooleanPolynomial p;
    p.add_term({"x", "y"}, 2.0);
    p.add_term({"y", "x"}, 3.0);
    auto n = normalize(p);
    CHECK(n.terms().size() == 1);
    CHECK(n.coefficient({"x", "y"}) == 5.0);
}

TEST_CASE("normalize drops cancelled terms") {
    PseudoBooleanPolynomial p;
    p.add_term({"x"}, 1.0);
    p.add_term({"x"}, -1.0);
    auto n = normalize(p);
    CHECK(n.terms().empty());
    CHECK(n.constant() == 0.0);
}

TEST_CASE("normalize merges x*x*y into x*y") {
    PseudoBooleanPolynomial p;
    p.add_term({"x", "y", "x"}, 2.0);
    p.add_term({"y", "x"}, 1.0);
    auto n = normalize(p);
    CHECK(n.coefficient({"x", "y"}) == 3.0);
    CHECK(n.degree() == 2);
}

TEST_CASE("evaluate_poly") {
    PseudoBooleanPolynomial p;
    p.add_term({"x", "y"}, 2.0);
    p.add_term({"x"}, -1.0);
    CHECK(evaluate_poly(p, {{"x", true}, {"y", true}}) == 1.0);

    PseudoBooleanPolynomial cubic;
    cubic.add_term({"x", "y", "z"}, 5.0);
    CHECK(evaluate_poly(cubic, {{"x", true}, {"y", true}, {"z", false}}) == 0.0);

    CHECK(evaluate_poly(PseudoBooleanPolynomial(7.0), {}) == 7.0);
}

TEST_CASE("evaluate_poly names the missing variable") {
    PseudoBooleanPolynomial p;
    p.add_term({"x", "y"}, 1.0);
    try {
        evaluate_poly(p, {{"x", true}});
        FAIL("expected MissingVariable");
    } catch (const qcinit::MissingVariable& e) {
        CHECK(e.label() == "y");
        CHECK(std::string(e.what()).find("'y'") != std::string::npos);
    }
}

TEST_CASE("evaluate_qubo") {
    Qubo q;
    q.add_linear("x", 1.0);
    q.add_linear("y", 1.0);
    q.add_quadratic("x", "y", -2.0);
    CHECK(evaluate_qubo(q, {{"x", true}, {"y", true}}) == 0.0);

    q.add_offset(4.5);
    CHECK(evaluate_qubo(q, {{"x", false}, {"y", false}}) == 4.5);
    CHECK_THROWS_AS(evaluate_qubo(q, {{"x", true}}), qcinit::MissingVariable);
}

TEST_CASE("evaluate_qubo agrees with a term-by-term sum on random 3-variable QUBOs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    const std::vector<VarLabel> vars = {"a", "b", "c"};
    for (int trial = 0; trial < 20; ++trial) {
        Qubo q;
        q.add_offset(coef(rng));
        for (const auto& v : vars) q.add_linear(v, coef(rng));
        q.add_quadratic("a", "b", coef(rng));
        q.add_quadratic("c", "a", coef(rng));
        q.add_quadratic("b", "c", coef(rng));
        for (std::uint64_t mask = 0; mask < 8; ++mask) {
            auto a = oracle::assignment_from_mask(vars, mask);
            CHECK(evaluate_qubo(q, a) == Catch::Approx(oracle::qubo_value(q, a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Qubo stores each pair once in canonical order") {
    Qubo q1, q2;
    q1.add_quadratic("b", "a", 1.5);
    q1.add_quadratic("a", "c", -2.0);
    q1.add_linear("c", 3.0);
    q2.add_linear("c", 3.0);
    q2.add_quadratic("c", "a", -2.0);
    q2.add_quadratic("a", "b", 1.5);
    CHECK(q1 == q2);
    CHECK(q1.quadratic().size() == 2);
    for (const auto& [ab, c] : q1.quadratic()) CHECK(ab.first < ab.second);
    CHECK(q1.quadratic("b", "a") == 1.5);

    Qubo diag;
    diag.add_quadratic("x", "x", 2.0);
    CHECK(diag.quadratic().empty());
    CHECK(diag.linear("x") == 2.0);
}

TEST_CASE("Qubo::from_polynomial rejects cubic terms and round-trips quadratics") {
    PseudoBooleanPolynomial cubic;
    cubic.add_term({"x", "y", "z"}, 1.0);
    CHECK_THROWS_AS(Qubo::from_polynomial(cubic), std::invalid_argument);

    PseudoBooleanPolynomial p(2.0);
    p.add_term({"x", "y"}, 3.0);
    p.add_term({"y"}, -1.0);
    auto q = Qubo::from_polynomial(p);
    CHECK(q.offset() == 2.0);
    CHECK(normalize(q.to_polynomial()) == normalize(p));
}

TEST_CASE("rosenberg_gadget values") {
    auto g1 = rosenberg_gadget("x", "y", "z", 1.0);
    CHECK(evaluate_poly(g1, {{"x", true}, {"y", true}, {"z", true}}) == 0.0);
    CHECK(evaluate_poly(g1, {{"x", true}, {"y", true}, {"z", false}}) == 1.0);
    auto g2 = rosenberg_gadget("x", "y", "z", 2.0);
    CHECK(evaluate_poly(g2, {{"x", false}, {"y", false}, {"z", true}}) == 6.0);
}

TEST_CASE("rosenberg_gadget is zero exactly when z = xy") {
    const std::vector<VarLabel> vars = {"x", "y", "z"};
    for (double weight : {0.5, 1.0, 7.25}) {
        auto g = rosenberg_gadget("x", "y", "z", weight);
        for (std::uint64_t mask = 0; mask < 8; ++mask) {
            auto a = oracle::assignment_from_mask(vars, mask);
            const double v = evaluate_poly(g, a);
            if (a["z"] == (a["x"] && a["y"]))
                CHECK(v == 0.0);
            else
                CHECK(v >= weight);
        }
    }
}

TEST_CASE("rosenberg_gadget rejects bad arguments") {
    CHECK_THROWS_AS(rosenberg_gadget("x", "y", "z", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rosenberg_gadget("x", "y", "z", -1.0), std::invalid_argument);
    CHECK_THROWS_AS(rosenberg_gadget("x", "x", "z", 1.0), std::invalid_argument);
}

TEST_CASE("quadratize leaves degree-2 input unchanged") {
    PseudoBooleanPolynomial p;
    p.add_term({"x", "y"}, 3.0);
    auto r = quadratize(p);
    CHECK(r.reduction.empty());
    CHECK(r.qubo == Qubo::from_polynomial(p));
}

TEST_CASE("quadratize x*y*z: minima over all 16 assignments") {
    PseudoBooleanPolynomial p;
    p.add_term({"x", "y", "z"}, 1.0);
    auto r = quadratize(p);
    REQUIRE(r.reduction.size() == 1);
    const auto& aux = r.reduction.front().aux;
    CHECK(aux == VarLabel("(x*y)"));
    CHECK(r.reduction.front().weight == 2.0);

    const std::vector<VarLabel> all = {"x", "y", "z", aux};
    double global = 1e300;
    std::set<std::uint64_t> argmin;
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        const double v = evaluate_qubo(r.qubo, oracle::assignment_from_mask(all, mask));
        if (v < global) global = v, argmin = {mask & 7};
        else if (v == global) argmin.insert(mask & 7);
    }
    CHECK(global == 0.0);
    auto original = oracle::minimize_poly(p, {"x", "y", "z"});
    CHECK(original.value == 0.0);
    CHECK(argmin == original.argmin);
}

TEST_CASE("quadratize chooses the most shared pair, ties by label") {
    PseudoBooleanPolynomial p;
    p.add_term({"a", "b", "c"}, 1.0);
    p.add_term({"a", "b", "d"}, -2.0);
    p.add_term({"b", "c", "d"}, 4.0);
    auto r = quadratize(p);
    REQUIRE_FALSE(r.reduction.empty());
    // (a,b), (b,c), (b,d) each occur twice; (a,b) is the smallest.
    CHECK(r.reduction.front().pair == std::pair<VarLabel, VarLabel>{"a", "b"});
    CHECK(r.reduction.front().weight == 1.0 + 1.0 + 2.0);
}

TEST_CASE("quadratize counts a degree-2 monomial on the pair in the weight") {
    PseudoBooleanPolynomial p;
    p.add_term({"a", "b", "c"}, 3.0);
    p.add_term({"a", "b"}, -5.0);
    auto r = quadratize(p);
    REQUIRE(r.reduction.size() == 1);
    CHECK(r.reduction.front().weight == 1.0 + 3.0 + 5.0);
}

TEST_CASE("quadratize honours a fixed penalty weight") {
    PseudoBooleanPolynomial p;
    p.add_term({"a", "b", "c", "d"}, 1.0);
    auto r = quadratize(p, PenaltyPolicy{4.0});
    for (const auto& def : r.reduction) CHECK(def.weight == 4.0);
    CHECK_THROWS_AS(quadratize(p, PenaltyPolicy{0.0}), std::invalid_argument);
}

TEST_CASE("quadratize is deterministic and label-stable") {
    std::mt19937_64 rng(5);
    auto p = oracle::random_poly(rng, 7, 12, 4, 3);
    auto a = quadratize(p);
    auto b = quadratize(p);
    CHECK(a.qubo == b.qubo);
    CHECK(a.reduction == b.reduction);
    std::set<VarLabel> seen;
    for (const auto& def : a.reduction) {
        CHECK(def.weight > 0.0);
        CHECK(seen.insert(def.aux).second);
        CHECK(def.aux == product_label(def.pair.first, def.pair.second));
    }
}

TEST_CASE("reduced degree-4 polynomial keeps the original minimum") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = normalize(oracle::random_poly(rng, 6, 8, 4, 3));
        auto vars = p.variables();
        auto r = quadratize(p);
        oracle::FreeMinimizer aux_min(r.qubo, vars);
        REQUIRE(aux_min.free_count() == r.reduction.size());
        double reduced_min = 1e300;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask)
            reduced_min = std::min(reduced_min, aux_min.minimum(oracle::assignment_from_mask(vars, mask)));
        CHECK(reduced_min == oracle::minimize_poly(p, vars).value);
    }
}

// Property tests -------------------------------------------------------------

TEST_CASE("property: normalize preserves evaluation and multilinearity") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> nvars(1, 10), var_pick(0, 9), len(1, 5);
    std::uniform_real_distribution<double> coef(-4.0, 4.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = nvars(rng);
        PseudoBooleanPolynomial p(coef(rng));
        for (int t = 0; t < 15; ++t) {
            VarSet vars;
            const int l = len(rng);
            for (int i = 0; i < l; ++i) vars.push_back("v" + std::to_string(var_pick(rng) % n));
            p.add_term(vars, coef(rng));
        }
        auto q = normalize(p);
        CHECK(q.is_normalized());
        for (const auto& [vars, c] : q.terms())
            CHECK(std::adjacent_find(vars.begin(), vars.end()) == vars.end());
        std::vector<VarLabel> all;
        for (int i = 0; i < n; ++i) all.push_back("v" + std::to_string(i));
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            auto a = oracle::assignment_from_mask(all, mask);
            CHECK(evaluate_poly(q, a) == Catch::Approx(oracle::poly_value(p, a)).margin(1e-9));
        }
    }
}

TEST_CASE("property: reduction soundness and penalty dominance") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 25; ++trial) {
        auto p = normalize(oracle::random_poly(rng, 8, 7, 4, 5));
        auto vars = p.variables();
        auto r = quadratize(p);
        CHECK(r.qubo.to_polynomial().degree() <= 2);
        oracle::FreeMinimizer aux_min(r.qubo, vars);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
            auto a = oracle::assignment_from_mask(vars, mask);
            const double original = oracle::poly_value(p, a);
            // Minimum over auxiliaries reproduces the original value ...
            CHECK(aux_min.minimum(a) == original);
            // ... and it is attained with every auxiliary set to its product.
            CHECK(evaluate_qubo(r.qubo, extend_with_auxiliaries(a, r.reduction)) == original);
        }
    }
}

TEST_CASE("property: any auxiliary mismatch costs at least its weight") {
    std::mt19937_64 rng(8);
    auto p = normalize(oracle::random_poly(rng, 6, 6, 4, 5));
    auto vars = p.variables();
    auto r = quadratize(p);
    REQUIRE_FALSE(r.reduction.empty());
    std::vector<VarLabel> auxes;
    for (const auto& def : r.reduction) auxes.push_back(def.aux);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
        auto a = extend_with_auxiliaries(oracle::assignment_from_mask(vars, mask), r.reduction);
        const double exact = evaluate_qubo(r.qubo, a);
        for (std::uint64_t flip = 1; flip < (std::uint64_t{1} << auxes.size()); ++flip) {
            auto b = a;
            for (std::size_t i = 0; i < auxes.size(); ++i)
                if ((flip >> i) & 1U) b[auxes[i]] = !b[auxes[i]];
            CHECK(evaluate_qubo(r.qubo, b) > exact);
        }
    }
}
