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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcinit/clustering.hpp"
#include "qcinit/data.hpp"
#include "qcinit/dataset.hpp"
#include "qcinit/formulation.hpp"
#include "qcinit/solvers.hpp"
#include "qcinit/svg.hpp"

namespace qcinit::experiment {

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> methods = {"random", "sa", "tabu", "exact"};
    return methods;
}

inline bool is_qubo_method(const std::string& m) { return m == "sa" || m == "tabu" || m == "exact"; }

// Seeds derived from the single experiment seed.
inline constexpr std::uint64_t data_seed_offset = 0;
inline constexpr std::uint64_t random_init_seed_offset = 1;
inline constexpr std::uint64_t sa_seed_offset = 2;
inline constexpr std::uint64_t tabu_seed_offset = 3;

struct SolverSettings {
    solvers::AnnealParams sa;
    solvers::TabuParams tabu;
    solvers::ExhaustiveParams exact;
};

inline solvers::SampleSet solve(const pbp::Qubo& q, const std::string& method, const SolverSettings& settings) {
    if (method == "sa") return solvers::solve_sa(q, settings.sa);
    if (method == "tabu") return solvers::solve_tabu(q, settings.tabu);
    if (method == "exact") return solvers::solve_exhaustive(q, settings.exact);
    throw std::invalid_argument("unknown solver '" + method + "'");
}

/// How real-valued coordinates reach the integer encoding range.
enum class ScaleMode {
    automatic,  // identity when every coordinate is an in-range integer, min-max otherwise
    minmax,
    none,
};

inline ScaleMode parse_scale_mode(const std::string& s) {
    if (s == "auto") return ScaleMode::automatic;
    if (s == "minmax") return ScaleMode::minmax;
    if (s == "none") return ScaleMode::none;
    throw std::invalid_argument("unknown scale mode '" + s + "'");
}

inline data::AffineTransform identity_transform(Eigen::Index dims) {
    return {Eigen::RowVectorXd::Ones(dims), Eigen::RowVectorXd::Zero(dims)};
}

struct PreparedInstance {
    data::AffineTransform transform;
    formulation::FactorizationInstance instance;
};

/// Builds V (d x n) from the scaled, rounded points.
inline PreparedInstance prepare_instance(const Dataset& dataset, std::size_t k, const encoding::RadixScheme& scheme,
                                         const formulation::PenaltyConfig& penalties = {},
                                         ScaleMode mode = ScaleMode::automatic) {
    dataset.validate();
    scheme.validate();
    const auto lo = static_cast<double>(scheme.min_value());
    const auto hi = static_cast<double>(scheme.max_value());
    const auto& x = dataset.points;
    const bool integral = (x.array() == x.array().round()).all() && (x.array() >= lo).all() && (x.array() <= hi).all();

    PreparedInstance out;
    Eigen::MatrixXd scaled;
    if (mode == ScaleMode::none || (mode == ScaleMode::automatic && integral)) {
        if (!integral)
            throw RangeError("scaling disabled but data are not integers within [" +
                             std::to_string(scheme.min_value()) + ", " + std::to_string(scheme.max_value()) + "]");
        out.transform = identity_transform(x.cols());
        scaled = x;
    } else {
        out.transform = data::fit_scaling(x, scheme);
        scaled = out.transform.apply_rounded(x, lo, hi);
    }
    out.instance.V = scaled.transpose();
    out.instance.k = k;
    out.instance.scheme = scheme;
    out.instance.penalties = penalties;
    out.instance.validate();
    return out;
}

struct QuboInit {
    formulation::FactorizationQubo problem;
    formulation::FactorizationSolution solution;
    Eigen::MatrixXd centroids;  // k x d, original units
    solvers::SampleSet samples;
    double build_ms = 0.0;
};

/// W columns are the centroids; they are mapped back through the transform.
inline Eigen::MatrixXd centroids_from_solution(const formulation::FactorizationSolution& solution,
                                               const data::AffineTransform& transform) {
    return transform.invert(solution.W.transpose().cast<double>());
}

inline QuboInit qubo_init(const PreparedInstance& prepared, const std::string& method, const SolverSettings& settings) {
    QuboInit out;
    const auto start = std::chrono::steady_clock::now();
    out.problem = formulation::build_qubo(prepared.instance);
    out.build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.samples = solve(out.problem.qubo, method, settings);
    const auto& best = out.samples.best();
    out.solution = formulation::decode_solution(out.samples.assignment(best), out.problem.layout, prepared.instance,
                                                best.energy);
    out.centroids = centroids_from_solution(out.solution, prepared.transform);
    return out;
}

// ---------------------------------------------------------------------------
// Bench

struct BlobSource {
    double std = 1.0;
    double box_lo = -10.0;
    double box_hi = 10.0;
    std::size_t dims = 2;
};

struct CsvSource {
    std::filesystem::path path;
    bool pca = false;
};

struct ExperimentConfig {
    std::optional<BlobSource> blobs = BlobSource{};
    std::optional<CsvSource> csv;
    std::size_t k = 3;
    std::uint64_t seed = 0;
    int bits = 3;
    encoding::SignMode sign_mode = encoding::SignMode::twos_complement;
    std::vector<std::string> methods = {"random", "sa", "tabu"};
    std::vector<std::size_t> sample_sizes = {10, 15, 20, 25, 30, 35, 40};
    std::size_t max_iter = 10000;
    formulation::PenaltyConfig penalties;
    ScaleMode scale = ScaleMode::automatic;
    SolverSettings solver;
    std::filesystem::path output_dir = "bench-out";

    void validate() const {
        if (blobs.has_value() == csv.has_value()) throw std::invalid_argument("choose exactly one data source");
        if (methods.empty()) throw std::invalid_argument("no methods selected");
        for (const auto& m : methods)
            if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end())
                throw std::invalid_argument("unknown method '" + m + "'");
        if (std::set<std::string>(methods.begin(), methods.end()).size() != methods.size())
            throw std::invalid_argument("methods listed more than once");
        if (sample_sizes.empty()) throw std::invalid_argument("no sample sizes selected");
        for (std::size_t i = 1; i < sample_sizes.size(); ++i)
            if (sample_sizes[i] <= sample_sizes[i - 1])
                throw std::invalid_argument("sample sizes must be strictly ascending");
        if (k < 2) throw std::invalid_argument("k must be >= 2");
        if (sample_sizes.front() < k) throw std::invalid_argument("every sample size must be >= k");
        if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
        encoding::RadixScheme{bits, sign_mode}.validate();
    }
};

struct ResultRow {
    std::string method;
    std::size_t n = 0, k = 0;
    std::uint64_t seed = 0;
    double inertia = NAN, silhouette = NAN, homogeneity = NAN, completeness = NAN, v_measure = NAN;
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<std::size_t> qubo_variable_count;
    std::optional<double> energy, objective;
    std::optional<std::size_t> onehot_violations;
    std::string error;
    double build_wall_ms = 0.0, solve_wall_ms = 0.0, kmeans_wall_ms = 0.0;

    bool ok() const noexcept { return error.empty(); }
};

inline const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {"inertia",      "silhouette", "homogeneity",
                                                   "completeness", "v_measure",  "iterations"};
    return names;
}

inline double metric_value(const ResultRow& row, const std::string& metric) {
    if (metric == "inertia") return row.inertia;
    if (metric == "silhouette") return row.silhouette;
    if (metric == "homogeneity") return row.homogeneity;
    if (metric == "completeness") return row.completeness;
    if (metric == "v_measure") return row.v_measure;
    if (metric == "iterations") return static_cast<double>(row.iterations);
    throw std::invalid_argument("unknown metric '" + metric + "'");
}

/// Wall-time columns come last so determinism checks can drop them.
inline constexpr std::size_t wall_time_columns = 3;

inline std::string results_header() {
    return "method,n,k,seed,inertia,silhouette,homogeneity,completeness,v_measure,iterations,converged,"
           "qubo_variables,energy,objective,onehot_violations,error,build_wall_ms,solve_wall_ms,kmeans_wall_ms";
}

namespace detail {

inline std::string num(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r' || c == '"') c = c == ',' ? ';' : ' ';
    return s;
}

}  // namespace detail

inline std::string format_row(const ResultRow& r) {
    std::ostringstream out;
    auto opt_num = [](const auto& v) { return v ? detail::num(static_cast<double>(*v)) : std::string(); };
    out << r.method << "," << r.n << "," << r.k << "," << r.seed << ",";
    if (r.ok())
        out << detail::num(r.inertia) << "," << detail::num(r.silhouette) << "," << detail::num(r.homogeneity) << ","
            << detail::num(r.completeness) << "," << detail::num(r.v_measure) << "," << r.iterations << ","
            << (r.converged ? 1 : 0) << ",";
    else
        out << ",,,,,,,";
    out << opt_num(r.qubo_variable_count) << "," << opt_num(r.energy) << "," << opt_num(r.objective) << ","
        << opt_num(r.onehot_violations) << "," << detail::sanitize(r.error) << "," << detail::num(r.build_wall_ms)
        << "," << detail::num(r.solve_wall_ms) << "," << detail::num(r.kmeans_wall_ms);
    return out.str();
}

/// Dataset of the given size: fresh blobs, or the first n rows of the CSV source.
inline Dataset sample_dataset(const ExperimentConfig& config, const Dataset* loaded, std::size_t n) {
    if (config.blobs) {
        data::BlobSpec spec;
        spec.n_samples = n;
        spec.k_centers = config.k;
        spec.std = config.blobs->std;
        spec.box_lo = config.blobs->box_lo;
        spec.box_hi = config.blobs->box_hi;
        spec.dims = config.blobs->dims;
        spec.seed = config.seed + data_seed_offset;
        return data::generate_blobs(spec);
    }
    if (n > loaded->size())
        throw std::invalid_argument("sample size " + std::to_string(n) + " exceeds the " +
                                    std::to_string(loaded->size()) + " rows available");
    Dataset out;
    out.points = loaded->points.topRows(static_cast<Eigen::Index>(n));
    if (loaded->labels) out.labels = std::vector<int>(loaded->labels->begin(), loaded->labels->begin() + n);
    return out;
}

inline Dataset load_source(const CsvSource& src) {
    auto ds = data::load_csv(src.path);
    if (src.pca) ds = data::pca_transform(data::pca_fit(ds, 2), ds);
    return ds;
}

/// Metrics of a finished k-means run; silhouette is 0 when fewer than two
/// clusters are occupied.
inline void fill_metrics(ResultRow& row, const Dataset& ds, const clustering::KMeansReport& report) {
    row.inertia = report.inertia;
    row.iterations = report.iterations;
    row.converged = report.converged;
    std::set<int> used(report.labels.begin(), report.labels.end());
    row.silhouette = used.size() < 2 ? 0.0 : clustering::silhouette(ds, report.labels);
    if (ds.labels) {
        auto s = clustering::homogeneity_completeness_v(*ds.labels, report.labels);
        row.homogeneity = s.homogeneity;
        row.completeness = s.completeness;
        row.v_measure = s.v_measure;
    }
}

inline std::filesystem::path data_file(const std::filesystem::path& dir, std::size_t n) {
    return dir / ("data_n" + std::to_string(n) + ".csv");
}

inline std::filesystem::path centroid_file(const std::filesystem::path& dir, const std::string& method, std::size_t n,
                                           const std::string& stage) {
    return dir / "centroids" / (method + "_n" + std::to_string(n) + "_" + stage + ".csv");
}

/// One (size, method) cell: initial centroids, Lloyd iterations, metrics.
inline ResultRow run_cell(const ExperimentConfig& config, const Dataset& ds, const std::string& method) {
    ResultRow row;
    row.method = method;
    row.n = ds.size();
    row.k = config.k;
    row.seed = config.seed;
    try {
        Eigen::MatrixXd init;
        if (method == "random") {
            const auto start = std::chrono::steady_clock::now();
            init = clustering::random_init(ds, config.k, config.seed + random_init_seed_offset);
            row.solve_wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        } else {
            auto prepared = prepare_instance(ds, config.k, encoding::RadixScheme{config.bits, config.sign_mode},
                                             config.penalties, config.scale);
            auto settings = config.solver;
            settings.sa.seed = config.seed + sa_seed_offset;
            settings.tabu.seed = config.seed + tabu_seed_offset;
            auto result = qubo_init(prepared, method, settings);
            init = result.centroids;
            row.qubo_variable_count = result.problem.qubo.num_variables();
            row.energy = result.solution.energy;
            row.objective = result.solution.objective;
            row.onehot_violations = result.solution.onehot_violations;
            row.build_wall_ms = result.build_ms;
            row.solve_wall_ms = result.samples.wall_ms;
        }
        data::save_centroids(init, centroid_file(config.output_dir, method, row.n, "init"));
        const auto start = std::chrono::steady_clock::now();
        auto report = clustering::lloyd_kmeans(ds, init, config.max_iter);
        row.kmeans_wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        data::save_centroids(report.centroids, centroid_file(config.output_dir, method, row.n, "final"));
        fill_metrics(row, ds, report);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

inline void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << results_header() << "\n";
    for (const auto& r : rows) out << format_row(r) << "\n";
}

/// One chart per metric; rows with errors are left out.
inline void write_plots(const std::vector<ResultRow>& rows, const std::vector<std::string>& methods,
                        const std::filesystem::path& dir) {
    for (const auto& metric : metric_names()) {
        std::vector<svg::Series> series;
        for (const auto& m : methods) {
            svg::Series s{m, {}};
            for (const auto& r : rows)
                if (r.method == m && r.ok()) s.points.emplace_back(static_cast<double>(r.n), metric_value(r, metric));
            series.push_back(std::move(s));
        }
        std::ofstream out(dir / (metric + ".svg"));
        if (!out) throw std::runtime_error("cannot write " + (dir / (metric + ".svg")).string());
        out << svg::line_chart(metric + " by sample size", "samples", metric, series);
    }
}

/// Cells run in order (size-major, then method order); a failing cell is
/// recorded with its error and the sweep continues.
inline std::vector<ResultRow> run_bench(const ExperimentConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.output_dir / "centroids");
    std::optional<Dataset> loaded;
    if (config.csv) loaded = load_source(*config.csv);

    std::vector<ResultRow> rows;
    for (std::size_t n : config.sample_sizes) {
        Dataset ds;
        try {
            ds = sample_dataset(config, loaded ? &*loaded : nullptr, n);
        } catch (const std::exception& e) {
            for (const auto& m : config.methods) {
                ResultRow row;
                row.method = m;
                row.n = n;
                row.k = config.k;
                row.seed = config.seed;
                row.error = e.what();
                rows.push_back(row);
            }
            continue;
        }
        data::save_csv(ds, data_file(config.output_dir, n));
        for (const auto& m : config.methods) rows.push_back(run_cell(config, ds, m));
    }
    write_results(rows, config.output_dir / "results.csv");
    write_plots(rows, config.methods, config.output_dir);
    return rows;
}

}  // namespace qcinit::experiment
