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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcinit {

/// n points of dimension d, one per row, with optional ground-truth labels.
struct Dataset {
    Eigen::MatrixXd points;
    std::optional<std::vector<int>> labels;

    std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
    std::size_t dims() const noexcept { return static_cast<std::size_t>(points.cols()); }

    void validate() const {
        if (points.rows() < 1) throw std::invalid_argument("dataset is empty");
        if (labels && labels->size() != size())
            throw std::invalid_argument("label count " + std::to_string(labels->size()) +
                                        " does not match point count " + std::to_string(size()));
    }
};

}  // namespace qcinit
