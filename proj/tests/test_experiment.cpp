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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "qcinit/experiment.hpp"

using namespace qcinit;
using namespace qcinit::experiment;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("qcinit_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) rows.push_back(split(line));
    return rows;
}

/// results.csv with the trailing wall-time columns dropped.
std::string without_wall_time(const fs::path& p) {
    std::string out;
    for (auto& row : read_rows(p)) {
        row.resize(row.size() - wall_time_columns);
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

ExperimentConfig fast_config(const fs::path& dir) {
    ExperimentConfig c;
    c.sample_sizes = {10, 15, 20};
    c.methods = {"random", "sa"};
    c.solver.sa.sweeps = 200;
    c.solver.sa.restarts = 4;
    c.solver.tabu.max_iterations = 500;
    c.solver.tabu.restarts = 2;
    c.output_dir = dir;
    return c;
}

fs::path write_points(const fs::path& dir, const std::string& body) {
    fs::create_directories(dir);
    auto p = dir / "points.csv";
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST_CASE("prepare_instance keeps in-range integer data unscaled") {
    Dataset d;
    d.points = Eigen::MatrixXd(3, 1);
    d.points << 0, 1, 10;
    auto p = prepare_instance(d, 2, encoding::RadixScheme{3});
    CHECK(p.instance.V == d.points.transpose());
    CHECK(p.transform.scale.isOnes());
    CHECK(p.transform.offset.isZero());

    auto forced = prepare_instance(d, 2, encoding::RadixScheme{3}, {}, ScaleMode::minmax);
    CHECK(forced.instance.V(0, 0) == -16.0);
    CHECK(forced.instance.V(0, 2) == 15.0);
}

TEST_CASE("prepare_instance scales real data into range") {
    Dataset d;
    d.points = Eigen::MatrixXd(4, 2);
    d.points << 0.5, -100, 1.5, 30, 2.5, 7, 3.5, 250;
    const encoding::RadixScheme scheme{2};
    auto p = prepare_instance(d, 2, scheme);
    CHECK(p.instance.V.minCoeff() == -8.0);
    CHECK(p.instance.V.maxCoeff() == 7.0);
    CHECK(p.instance.V == p.instance.V.array().round().matrix());
    CHECK_THROWS_AS(prepare_instance(d, 2, scheme, {}, ScaleMode::none), RangeError);
    CHECK_THROWS_AS(prepare_instance(d, 5, scheme), std::invalid_argument);
    CHECK_THROWS_AS(parse_scale_mode("log"), std::invalid_argument);
}

TEST_CASE("qubo_init returns centroids in original units") {
    Dataset d;
    d.points = Eigen::MatrixXd(3, 1);
    d.points << 0, 1, 10;
    auto prepared = prepare_instance(d, 2, encoding::RadixScheme{3});
    auto r = qubo_init(prepared, "exact", SolverSettings{});
    CHECK(r.solution.energy == 1.0);
    CHECK(r.solution.objective == 1.0);
    CHECK(r.solution.onehot_violations == 0);
    std::vector<double> c = {r.centroids(0, 0), r.centroids(1, 0)};
    std::sort(c.begin(), c.end());
    CHECK(c[1] == 10.0);
    CHECK((c[0] == 0.0 || c[0] == 1.0));
    CHECK_THROWS_AS(qubo_init(prepared, "random", SolverSettings{}), std::invalid_argument);
}

TEST_CASE("config validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = c;
    bad.methods.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.methods = {"random", "quantum"};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.methods = {"sa", "sa"};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.sample_sizes = {20, 10};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.sample_sizes.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.k = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.csv = CsvSource{"x.csv", false};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.max_iter = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("result rows format with empty cells for missing values") {
    ResultRow r;
    r.method = "random";
    r.n = 10;
    r.k = 3;
    r.inertia = 2.5;
    r.silhouette = 0.5;
    auto fields = split(format_row(r));
    CHECK(fields.size() == split(results_header()).size());
    CHECK(fields[4] == "2.5");
    CHECK(fields[6].empty());
    CHECK(fields[12].empty());

    r.error = "bad, worse\nworst";
    fields = split(format_row(r));
    CHECK(fields.size() == split(results_header()).size());
    CHECK(fields[4].empty());
    CHECK(fields[15] == "bad; worse worst");
}

TEST_CASE("bench cardinality, provenance and plots") {
    auto dir = scratch("bench");
    auto config = fast_config(dir);
    auto rows = run_bench(config);
    REQUIRE(rows.size() == 6);
    auto table = read_rows(dir / "results.csv");
    REQUIRE(table.size() == 7);
    const auto header = split(results_header());
    CHECK(table[0] == header);

    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const auto& fields = table[r + 1];
        INFO(row.method << " n=" << row.n << " " << row.error);
        REQUIRE(row.ok());
        CHECK(fields.size() == header.size());
        CHECK(fields[col["method"]] == row.method);
        for (const auto& m : metric_names()) CHECK_FALSE(fields[col[m]].empty());
        CHECK(row.silhouette >= -1.0);
        CHECK(row.silhouette <= 1.0);
        for (double v : {row.homogeneity, row.completeness, row.v_measure}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(row.iterations <= config.max_iter);
        CHECK(row.qubo_variable_count.has_value() == is_qubo_method(row.method));
        CHECK(row.energy.has_value() == is_qubo_method(row.method));
        CHECK(fields[col["energy"]].empty() != is_qubo_method(row.method));

        // Recompute from the files the bench left behind.
        auto ds = data::load_csv(data_file(dir, row.n));
        auto init = data::load_centroids(centroid_file(dir, row.method, row.n, "init"));
        auto report = clustering::lloyd_kmeans(ds, init, config.max_iter);
        ResultRow again;
        fill_metrics(again, ds, report);
        CHECK(again.inertia == row.inertia);
        CHECK(again.silhouette == row.silhouette);
        CHECK(again.v_measure == row.v_measure);
        CHECK(again.iterations == row.iterations);
        CHECK(data::load_centroids(centroid_file(dir, row.method, row.n, "final")) == report.centroids);
        CHECK(std::stod(fields[col["inertia"]]) == row.inertia);
    }

    std::regex point(R"re(data-series="([a-z]+)" data-n="([0-9]+)" data-value="([^"]+)")re");
    for (const auto& metric : metric_names()) {
        auto svg = slurp(dir / (metric + ".svg"));
        INFO(metric);
        CHECK(svg.rfind("<?xml", 0) == 0);
        CHECK(svg.find("<svg xmlns=") != std::string::npos);
        CHECK(svg.find("</svg>") != std::string::npos);
        std::size_t points = 0;
        for (std::sregex_iterator it(svg.begin(), svg.end(), point), end; it != end; ++it) {
            ++points;
            const std::string method = (*it)[1];
            const auto n = static_cast<std::size_t>(std::stoul((*it)[2]));
            const double value = std::stod((*it)[3]);
            bool found = false;
            for (const auto& row : rows)
                if (row.method == method && row.n == n && metric_value(row, metric) == value) found = true;
            CHECK(found);
        }
        CHECK(points == rows.size());
        for (const auto& m : config.methods) CHECK(svg.find(">" + m + "<") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("bench is deterministic apart from wall time") {
    auto a = scratch("det_a"), b = scratch("det_b");
    auto ca = fast_config(a), cb = fast_config(b);
    ca.sample_sizes = cb.sample_sizes = {10, 15};
    ca.methods = cb.methods = {"random", "sa", "tabu"};
    run_bench(ca);
    run_bench(cb);
    CHECK(without_wall_time(a / "results.csv") == without_wall_time(b / "results.csv"));
    for (const auto& m : ca.methods)
        CHECK(slurp(centroid_file(a, m, 15, "init")) == slurp(centroid_file(b, m, 15, "init")));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("exact initialization is never beaten on QUBO energy") {
    auto dir = scratch("exact");
    auto points = write_points(dir / "in", "x0,label\n-3,0\n-2,0\n2,1\n3,1\n1,1\n");
    ExperimentConfig c;
    c.blobs.reset();
    c.csv = CsvSource{points, false};
    c.k = 2;
    c.bits = 1;
    c.sample_sizes = {3, 4, 5};
    c.methods = {"exact", "sa", "tabu", "random"};
    c.output_dir = dir / "out";
    auto rows = run_bench(c);
    REQUIRE(rows.size() == 12);
    for (std::size_t n : c.sample_sizes) {
        const ResultRow* exact = nullptr;
        for (const auto& r : rows)
            if (r.n == n && r.method == "exact") exact = &r;
        REQUIRE(exact);
        INFO("n=" << n << " " << exact->error);
        REQUIRE(exact->ok());
        CHECK(*exact->onehot_violations == 0);
        CHECK(*exact->energy == *exact->objective);
        CHECK(exact->inertia <= *exact->objective + 1e-9);
        for (const auto& r : rows) {
            if (r.n != n || !r.ok() || !r.energy || r.method == "exact") continue;
            CHECK(*exact->energy <= *r.energy);
            if (*r.onehot_violations == 0) CHECK(exact->inertia <= *r.objective + 1e-9);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("failing cells are recorded and the sweep continues") {
    auto dir = scratch("errors");
    auto points = write_points(dir / "in", "x0,x1\n0,0\n1,1\n5,5\n6,6\n");
    ExperimentConfig c;
    c.blobs.reset();
    c.csv = CsvSource{points, false};
    c.k = 2;
    c.sample_sizes = {3, 4, 8};
    c.methods = {"random", "exact"};
    c.solver.exact.cap = 4;
    c.output_dir = dir / "out";
    auto rows = run_bench(c);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].ok());
    CHECK_FALSE(rows[1].ok());
    CHECK(rows[1].error.find("cap") != std::string::npos);
    CHECK(rows[2].ok());
    CHECK_FALSE(rows[4].ok());
    CHECK_FALSE(rows[5].ok());
    CHECK(read_rows(c.output_dir / "results.csv").size() == 7);
    CHECK(fs::exists(c.output_dir / "inertia.svg"));
    fs::remove_all(dir);
}

TEST_CASE("CSV source with PCA") {
    auto dir = scratch("pca");
    data::BlobSpec spec;
    spec.n_samples = 12;
    spec.dims = 4;
    spec.seed = 3;
    fs::create_directories(dir);
    data::save_csv(data::generate_blobs(spec), dir / "blobs.csv");
    ExperimentConfig c;
    c.blobs.reset();
    c.csv = CsvSource{dir / "blobs.csv", true};
    c.sample_sizes = {6, 12};
    c.methods = {"random"};
    c.output_dir = dir / "out";
    auto rows = run_bench(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].ok());
    CHECK(data::load_csv(data_file(c.output_dir, 12)).dims() == 2);
    fs::remove_all(dir);
}
