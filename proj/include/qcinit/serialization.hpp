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
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcinit/data.hpp"
#include "qcinit/formulation.hpp"
#include "qcinit/pbp.hpp"
#include "qcinit/solvers/sample_set.hpp"

namespace qcinit::io {

using nlohmann::json;

/**
 * QUBO document:
 *
 *     {"variables": [...], "linear": {label: bias}, "quadratic": [[a, b, bias]],
 *      "offset": c, "reduction": [{"aux", "pair": [a, b], "weight"}]}
 *
 * Keys and entries are emitted in sorted order, and doubles use the shortest
 * representation that round-trips, so equal inputs give identical bytes.
 */
inline json qubo_to_json(const pbp::Qubo& q, const pbp::ReductionMap& reduction = {}) {
    json doc;
    doc["variables"] = json::array();
    for (const auto& v : q.variables()) doc["variables"].push_back(v.str());
    doc["linear"] = json::object();
    for (const auto& [v, c] : q.linear()) doc["linear"][v.str()] = c;
    doc["quadratic"] = json::array();
    for (const auto& [ab, c] : q.quadratic()) doc["quadratic"].push_back({ab.first.str(), ab.second.str(), c});
    doc["offset"] = q.offset();
    doc["reduction"] = json::array();
    for (const auto& def : reduction)
        doc["reduction"].push_back(
            {{"aux", def.aux.str()}, {"pair", {def.pair.first.str(), def.pair.second.str()}}, {"weight", def.weight}});
    return doc;
}

struct QuboDocument {
    pbp::Qubo qubo;
    pbp::ReductionMap reduction;
    json metadata;  // every other top-level key, untouched
};

inline QuboDocument qubo_from_json(const json& doc) {
    try {
        QuboDocument out;
        for (const auto& v : doc.at("variables")) out.qubo.add_variable(v.get<std::string>());
        for (const auto& [v, c] : doc.at("linear").items()) out.qubo.add_linear(v, c.get<double>());
        for (const auto& entry : doc.at("quadratic")) {
            if (entry.size() != 3) throw std::invalid_argument("quadratic entries need [a, b, bias]");
            out.qubo.add_quadratic(entry[0].get<std::string>(), entry[1].get<std::string>(), entry[2].get<double>());
        }
        out.qubo.add_offset(doc.at("offset").get<double>());
        if (doc.contains("reduction"))
            for (const auto& def : doc["reduction"])
                out.reduction.push_back({def.at("aux").get<std::string>(),
                                         {def.at("pair").at(0).get<std::string>(), def.at("pair").at(1).get<std::string>()},
                                         def.at("weight").get<double>()});
        for (const auto& [key, value] : doc.items())
            if (key != "variables" && key != "linear" && key != "quadratic" && key != "offset" && key != "reduction")
                out.metadata[key] = value;
        return out;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed QUBO document: ") + e.what());
    }
}

inline json layout_to_json(const formulation::VariableLayout& layout, const formulation::FactorizationInstance& instance,
                           const formulation::ResolvedPenalties& penalties) {
    json doc = {{"d", layout.d},
                {"n", layout.n},
                {"k", layout.k},
                {"max_power", instance.scheme.max_power},
                {"sign_mode", instance.scheme.sign_mode == encoding::SignMode::twos_complement ? "twos_complement"
                                                                                                 : "ones_complement"},
                {"delta2", penalties.delta2}};
    if (penalties.delta1.fixed_weight) doc["delta1"] = *penalties.delta1.fixed_weight;
    doc["w"] = json::array();
    for (const auto& cell : layout.w) {
        json bits = json::array();
        for (const auto& t : cell.terms) bits.push_back({t.label.str(), t.weight});
        doc["w"].push_back(bits);
    }
    doc["h"] = json::array();
    for (const auto& h : layout.h) doc["h"].push_back(h.str());
    return doc;
}

inline json scaling_to_json(const data::AffineTransform& t) {
    return {{"scale", std::vector<double>(t.scale.data(), t.scale.data() + t.scale.size())},
            {"offset", std::vector<double>(t.offset.data(), t.offset.data() + t.offset.size())}};
}

inline data::AffineTransform scaling_from_json(const json& doc) {
    auto scale = doc.at("scale").get<std::vector<double>>();
    auto offset = doc.at("offset").get<std::vector<double>>();
    if (scale.size() != offset.size()) throw std::invalid_argument("scale and offset lengths differ");
    data::AffineTransform t;
    t.scale = Eigen::Map<Eigen::RowVectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()));
    t.offset = Eigen::Map<Eigen::RowVectorXd>(offset.data(), static_cast<Eigen::Index>(offset.size()));
    return t;
}

/// Array of {"assignment": {label: 0|1}, "energy", "restart"} in sample order.
inline json samples_to_json(const solvers::SampleSet& set) {
    json out = json::array();
    for (const auto& s : set.samples) {
        json assignment = json::object();
        for (std::size_t i = 0; i < set.variables.size(); ++i) assignment[set.variables[i].str()] = int{s.bits[i]};
        out.push_back({{"assignment", std::move(assignment)}, {"energy", s.energy}, {"restart", s.restart}});
    }
    return out;
}

/// Reads the first sample of a samples document (or a bare assignment object).
inline pbp::Assignment assignment_from_json(const json& doc) {
    try {
        const json* node = &doc;
        if (node->is_array()) {
            if (node->empty()) throw std::invalid_argument("sample list is empty");
            node = &(*node)[0];
        }
        if (node->contains("assignment")) node = &(*node)["assignment"];
        pbp::Assignment a;
        for (const auto& [label, bit] : node->items()) {
            const int v = bit.is_boolean() ? int{bit.get<bool>()} : bit.get<int>();
            if (v != 0 && v != 1) throw std::invalid_argument("assignment value for '" + label + "' is not 0 or 1");
            a.emplace(label, v == 1);
        }
        return a;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed sample document: ") + e.what());
    }
}

inline json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(0, path.string() + ": " + e.what());
    }
}

inline void write_json(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

}  // namespace qcinit::io
