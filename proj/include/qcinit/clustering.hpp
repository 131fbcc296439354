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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcinit/dataset.hpp"

// Lloyd's k-means and the cluster-quality metrics used to compare
// initializations.
namespace qcinit::clustering {

struct KMeansReport {
    Eigen::MatrixXd centroids;  // k x d
    std::vector<int> labels;
    double inertia = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Called after each completed round with (iteration, inertia of the new
/// assignment against the updated centroids).
using KMeansTrace = std::function<void(std::size_t, double)>;

namespace detail {

// Nearest centroid by squared Euclidean distance; ties go to the lowest index.
inline std::vector<int> assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
    std::vector<int> labels(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        Eigen::Index best = 0;
        double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
        for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
            double d = (points.row(i) - centroids.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return labels;
}

// Empty clusters keep their previous centroid.
inline Eigen::MatrixXd update(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                              const Eigen::MatrixXd& previous) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(previous.rows(), previous.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(previous.rows()), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        auto c = labels[static_cast<std::size_t>(i)];
        sums.row(c) += points.row(i);
        ++counts[static_cast<std::size_t>(c)];
    }
    Eigen::MatrixXd next = previous;
    for (Eigen::Index c = 0; c < previous.rows(); ++c)
        if (auto m = counts[static_cast<std::size_t>(c)]) next.row(c) = sums.row(c) / static_cast<double>(m);
    return next;
}

}  // namespace detail

inline double inertia(const Dataset& data, const Eigen::MatrixXd& centroids,
                      std::span<const int> labels) {
    if (labels.size() != data.size())
        throw std::invalid_argument("label count does not match point count");
    if (centroids.cols() != data.points.cols())
        throw std::invalid_argument("centroid dimension does not match data");
    double total = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= centroids.rows())
            throw std::invalid_argument("label " + std::to_string(labels[i]) + " has no centroid");
        total += (data.points.row(static_cast<Eigen::Index>(i)) - centroids.row(labels[i])).squaredNorm();
    }
    return total;
}

/**
 * Alternates nearest-centroid assignment and mean update until the
 * assignment stops changing (converged) or max_iter rounds complete.
 * `iterations` counts completed update rounds; the returned labels are
 * always the assignment against the returned centroids.
 */
inline KMeansReport lloyd_kmeans(const Dataset& data, const Eigen::MatrixXd& init_centroids,
                                 std::size_t max_iter, const KMeansTrace& trace = {}) {
    data.validate();
    if (init_centroids.rows() < 1) throw std::invalid_argument("need at least one centroid");
    if (init_centroids.cols() != data.points.cols())
        throw std::invalid_argument("centroid dimension " + std::to_string(init_centroids.cols()) +
                                    " does not match data dimension " +
                                    std::to_string(data.points.cols()));
    if (static_cast<std::size_t>(init_centroids.rows()) > data.size())
        throw std::invalid_argument("more centroids than points");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    KMeansReport report;
    report.centroids = init_centroids;
    report.labels = detail::assign(data.points, report.centroids);
    while (report.iterations < max_iter) {
        report.centroids = detail::update(data.points, report.labels, report.centroids);
        ++report.iterations;
        auto next = detail::assign(data.points, report.centroids);
        if (trace) trace(report.iterations, inertia(data, report.centroids, next));
        const bool unchanged = next == report.labels;
        report.labels = std::move(next);
        if (unchanged) {
            report.converged = true;
            break;
        }
    }
    report.inertia = inertia(data, report.centroids, report.labels);
    return report;
}

/// k distinct points chosen uniformly without replacement, in draw order.
inline Eigen::MatrixXd random_init(const Dataset& data, std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > data.size())
        throw std::invalid_argument("cannot draw " + std::to_string(k) + " centroids from " +
                                    std::to_string(data.size()) + " points");
    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> order(data.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Eigen::MatrixXd out(static_cast<Eigen::Index>(k), data.points.cols());
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
        std::swap(order[i], order[pick(rng)]);
        out.row(static_cast<Eigen::Index>(i)) = data.points.row(order[i]);
    }
    return out;
}

/**
 * Mean silhouette coefficient with Euclidean distances. Points in singleton
 * clusters score 0. Requires at least two distinct labels.
 */
inline double silhouette(const Dataset& data, std::span<const int> labels) {
    const std::size_t n = data.size();
    if (labels.size() != n) throw std::invalid_argument("label count does not match point count");
    std::map<int, std::size_t> cluster_of;
    for (int l : labels) cluster_of.emplace(l, 0);
    if (cluster_of.size() < 2) throw std::invalid_argument("silhouette needs at least two clusters");
    std::size_t next = 0;
    for (auto& [l, idx] : cluster_of) idx = next++;
    const std::size_t k = cluster_of.size();

    std::vector<std::size_t> cid(n), sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) ++sizes[cid[i] = cluster_of[labels[i]]];

    double total = 0.0;
    std::vector<double> dist_sum(k);
    for (std::size_t i = 0; i < n; ++i) {
        if (sizes[cid[i]] == 1) continue;
        std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                dist_sum[cid[j]] += (data.points.row(static_cast<Eigen::Index>(i)) -
                                     data.points.row(static_cast<Eigen::Index>(j)))
                                        .norm();
        const double a = dist_sum[cid[i]] / static_cast<double>(sizes[cid[i]] - 1);
        double b = INFINITY;
        for (std::size_t c = 0; c < k; ++c)
            if (c != cid[i]) b = std::min(b, dist_sum[c] / static_cast<double>(sizes[c]));
        const double m = std::max(a, b);
        if (m > 0.0) total += (b - a) / m;
    }
    return total / static_cast<double>(n);
}

struct ExternalScores {
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v_measure = 0.0;
};

/// Entropy-based agreement between true classes and predicted clusters (nats).
inline ExternalScores homogeneity_completeness_v(std::span<const int> truth,
                                                 std::span<const int> predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("label sequences differ in length");
    if (truth.empty()) throw std::invalid_argument("label sequences are empty");
    const double n = static_cast<double>(truth.size());

    std::map<int, double> classes, clusters;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        classes[truth[i]] += 1.0;
        clusters[predicted[i]] += 1.0;
        joint[{truth[i], predicted[i]}] += 1.0;
    }
    auto entropy = [n](const std::map<int, double>& counts) {
        double h = 0.0;
        for (const auto& [label, c] : counts) h -= (c / n) * std::log(c / n);
        return h;
    };
    const double h_c = entropy(classes);
    const double h_k = entropy(clusters);
    double h_c_given_k = 0.0, h_k_given_c = 0.0;
    for (const auto& [key, c] : joint) {
        h_c_given_k -= (c / n) * std::log(c / clusters[key.second]);
        h_k_given_c -= (c / n) * std::log(c / classes[key.first]);
    }

    ExternalScores s;
    s.homogeneity = h_c == 0.0 ? 1.0 : std::clamp(1.0 - h_c_given_k / h_c, 0.0, 1.0);
    s.completeness = h_k == 0.0 ? 1.0 : std::clamp(1.0 - h_k_given_c / h_k, 0.0, 1.0);
    const double sum = s.homogeneity + s.completeness;
    s.v_measure = sum == 0.0 ? 0.0 : 2.0 * s.homogeneity * s.completeness / sum;
    return s;
}

}  // namespace qcinit::clustering
