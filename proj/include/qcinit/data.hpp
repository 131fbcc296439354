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
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qcinit/dataset.hpp"
#include "qcinit/encoding.hpp"
#include "qcinit/errors.hpp"

namespace qcinit::data {

// ---------------------------------------------------------------------------
// Gaussian blobs

struct BlobSpec {
    std::size_t n_samples = 100;
    std::size_t k_centers = 3;
    double std = 1.0;
    double box_lo = -10.0;
    double box_hi = 10.0;
    std::uint64_t seed = 0;
    std::size_t dims = 2;

    void validate() const {
        if (k_centers < 1 || dims < 1) throw std::invalid_argument("need at least one center and dimension");
        if (n_samples < k_centers) throw std::invalid_argument("n_samples must be >= k_centers");
        if (!(std > 0.0)) throw std::invalid_argument("std must be positive");
        if (!(box_lo < box_hi)) throw std::invalid_argument("center box needs lo < hi");
    }
};

/// Centers uniform in the box; sample counts split evenly with the remainder
/// going to the lowest center indices; rows shuffled with the same seed.
inline Dataset generate_blobs(const BlobSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> box(spec.box_lo, spec.box_hi);
    std::normal_distribution<double> noise(0.0, spec.std);

    const auto k = static_cast<Eigen::Index>(spec.k_centers);
    const auto d = static_cast<Eigen::Index>(spec.dims);
    Eigen::MatrixXd centers(k, d);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index j = 0; j < d; ++j) centers(c, j) = box(rng);

    std::vector<int> owner;
    for (std::size_t c = 0; c < spec.k_centers; ++c) {
        std::size_t count = spec.n_samples / spec.k_centers + (c < spec.n_samples % spec.k_centers ? 1 : 0);
        owner.insert(owner.end(), count, static_cast<int>(c));
    }
    std::shuffle(owner.begin(), owner.end(), rng);

    Dataset out;
    out.points.resize(static_cast<Eigen::Index>(spec.n_samples), d);
    for (std::size_t i = 0; i < spec.n_samples; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            out.points(static_cast<Eigen::Index>(i), j) = centers(owner[i], j) + noise(rng);
    out.labels = std::move(owner);
    return out;
}

// ---------------------------------------------------------------------------
// CSV: header x0,...,x{d-1}[,label], one point per row.

namespace detail {

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <class T>
T parse_number(std::string_view field, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    T value{};
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size() || field.empty())
        throw ParseError(line, "not a number: '" + std::string(field) + "'");
    return value;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline Dataset read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::trim(line).empty()) break;
    }
    if (detail::trim(line).empty()) throw ParseError(0, "empty file");
    for (auto f : detail::split(line)) header.emplace_back(detail::trim(f));
    const bool has_label = header.back() == "label";
    const std::size_t d = header.size() - (has_label ? 1 : 0);
    if (d == 0) throw ParseError(line_no, "header declares no coordinate columns");
    for (std::size_t j = 0; j < d; ++j)
        if (header[j] != "x" + std::to_string(j))
            throw ParseError(line_no, "expected column 'x" + std::to_string(j) + "', got '" + header[j] + "'");

    std::vector<double> coords;
    std::vector<int> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split(line);
        if (fields.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                          std::to_string(fields.size()));
        for (std::size_t j = 0; j < d; ++j) coords.push_back(detail::parse_number<double>(fields[j], line_no));
        if (has_label) {
            int label = detail::parse_number<int>(fields[d], line_no);
            if (label < 0) throw ParseError(line_no, "label must be non-negative");
            labels.push_back(label);
        }
    }
    const auto n = static_cast<Eigen::Index>(coords.size() / d);
    if (n == 0) throw ParseError(line_no, "no data rows");
    Dataset out;
    out.points = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        coords.data(), n, static_cast<Eigen::Index>(d));
    if (has_label) out.labels = std::move(labels);
    return out;
}

inline void write_csv(std::ostream& out, const Eigen::MatrixXd& points, const std::vector<int>* labels) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) out << (j ? "," : "") << "x" << j;
    if (labels) out << ",label";
    out << "\n";
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < points.cols(); ++j)
            out << (j ? "," : "") << detail::format_double(points(i, j));
        if (labels) out << "," << (*labels)[static_cast<std::size_t>(i)];
        out << "\n";
    }
}

inline Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_csv(in);
}

inline void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv(out, dataset.points, dataset.labels ? &*dataset.labels : nullptr);
}

/// Centroid file: coordinate columns only, one centroid per row.
inline void save_centroids(const Eigen::MatrixXd& centroids, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv(out, centroids, nullptr);
}

inline Eigen::MatrixXd load_centroids(const std::filesystem::path& path) {
    return load_csv(path).points;
}

// ---------------------------------------------------------------------------
// PCA

struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;  // d x c, orthonormal columns
    Eigen::VectorXd explained_variance;
};

/// Eigendecomposition of the sample covariance (n - 1 denominator). Each
/// component is oriented so its largest-magnitude entry is positive.
inline PcaModel pca_fit(const Dataset& data, std::size_t components = 2) {
    const auto d = static_cast<Eigen::Index>(data.dims());
    const auto c = static_cast<Eigen::Index>(components);
    if (c < 1 || d < c)
        throw std::invalid_argument("cannot extract " + std::to_string(components) +
                                    " components from " + std::to_string(d) + " dimensions");
    if (data.size() < 2) throw std::invalid_argument("PCA needs at least two points");

    PcaModel model;
    model.mean = data.points.colwise().mean().transpose();
    Eigen::MatrixXd centered = data.points.rowwise() - model.mean.transpose();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(data.size() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw std::runtime_error("covariance eigendecomposition failed");

    // Eigen returns ascending eigenvalues.
    model.components.resize(d, c);
    model.explained_variance.resize(c);
    for (Eigen::Index i = 0; i < c; ++i) {
        Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - i);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        model.components.col(i) = v;
        model.explained_variance(i) = std::max(0.0, eig.eigenvalues()(d - 1 - i));
    }
    return model;
}

inline Dataset pca_transform(const PcaModel& model, const Dataset& data) {
    if (static_cast<Eigen::Index>(data.dims()) != model.mean.size())
        throw std::invalid_argument("data dimension does not match PCA model");
    Dataset out;
    out.points = (data.points.rowwise() - model.mean.transpose()) * model.components;
    out.labels = data.labels;
    return out;
}

// ---------------------------------------------------------------------------
// Affine scaling into the encodable integer range

/// y = x * scale + offset, per dimension.
struct AffineTransform {
    Eigen::RowVectorXd scale;
    Eigen::RowVectorXd offset;

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
        return (x.array().rowwise() * scale.array()).rowwise() + offset.array();
    }

    Eigen::MatrixXd invert(const Eigen::MatrixXd& y) const {
        return (y.array().rowwise() - offset.array()).rowwise() / scale.array();
    }

    /// apply() rounded to the nearest integer and clamped to [lo, hi].
    Eigen::MatrixXd apply_rounded(const Eigen::MatrixXd& x, double lo, double hi) const {
        return apply(x).array().round().cwiseMax(lo).cwiseMin(hi);
    }
};

/// Per-dimension min-max map onto [min_value, max_value] of the scheme;
/// constant dimensions map to 0 with scale 1.
inline AffineTransform fit_scaling(const Eigen::MatrixXd& points, const encoding::RadixScheme& scheme) {
    if (points.rows() < 1) throw std::invalid_argument("cannot fit scaling on empty data");
    const auto lo = static_cast<double>(scheme.min_value());
    const auto hi = static_cast<double>(scheme.max_value());
    AffineTransform t;
    t.scale.resize(points.cols());
    t.offset.resize(points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const double mn = points.col(j).minCoeff();
        const double mx = points.col(j).maxCoeff();
        if (mx == mn) {
            t.scale(j) = 1.0;
            t.offset(j) = -mn;
        } else {
            t.scale(j) = (hi - lo) / (mx - mn);
            t.offset(j) = lo - mn * t.scale(j);
        }
    }
    return t;
}

}  // namespace qcinit::data
