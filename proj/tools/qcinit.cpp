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

// qcinit command-line tool: generate data, export and solve centroid QUBOs,
// run k-means, and sweep initialization methods over sample sizes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qcinit/qcinit.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemOptions {
    std::string data;
    bool pca = false;
    std::size_t k = 3;
    int bits = 3;
    std::string sign_mode = "twos";
    std::optional<double> delta1, delta2;
    std::string scale = "auto";
};

struct SolverOptions {
    std::size_t sweeps = qcinit::solvers::AnnealParams{}.sweeps;
    double beta_initial = qcinit::solvers::AnnealParams{}.beta_initial;
    double beta_final = qcinit::solvers::AnnealParams{}.beta_final;
    std::size_t sa_restarts = qcinit::solvers::AnnealParams{}.restarts;
    std::size_t tenure = qcinit::solvers::TabuParams{}.tenure;
    std::size_t tabu_iterations = qcinit::solvers::TabuParams{}.max_iterations;
    std::size_t tabu_restarts = qcinit::solvers::TabuParams{}.restarts;
    std::size_t cap = qcinit::solvers::ExhaustiveParams{}.cap;
    std::size_t workers = 1;
};

void add_problem_options(CLI::App* cmd, ProblemOptions& o, bool data_required) {
    auto* data = cmd->add_option("--data", o.data, "Input CSV (x0,...,x{d-1}[,label])");
    if (data_required) data->required();
    cmd->add_flag("--pca", o.pca, "Project the data onto its top two principal components first");
    cmd->add_option("--k", o.k, "Number of clusters")->capture_default_str();
    cmd->add_option("--bits", o.bits, "Largest power p of the centroid encoding (values in [-2^(p+1), 2^(p+1)-1])")
        ->capture_default_str();
    cmd->add_option("--sign-mode", o.sign_mode, "Sign bit weight convention")
        ->check(CLI::IsMember({"twos", "ones"}))
        ->capture_default_str();
    cmd->add_option("--delta1", o.delta1, "Fixed auxiliary substitution penalty (default: per-substitution bound)");
    cmd->add_option("--delta2", o.delta2, "One-hot penalty weight (default: 1 + ||V||_F^2)");
    cmd->add_option("--scale", o.scale, "Mapping of coordinates onto the encodable integers")
        ->check(CLI::IsMember({"auto", "minmax", "none"}))
        ->capture_default_str();
}

void add_solver_options(CLI::App* cmd, SolverOptions& o) {
    cmd->add_option("--sweeps", o.sweeps, "Annealing sweeps per restart")->capture_default_str();
    cmd->add_option("--beta-initial", o.beta_initial, "Initial inverse temperature")->capture_default_str();
    cmd->add_option("--beta-final", o.beta_final, "Final inverse temperature")->capture_default_str();
    cmd->add_option("--sa-restarts", o.sa_restarts, "Annealing restarts")->capture_default_str();
    cmd->add_option("--tenure", o.tenure, "Tabu tenure")->capture_default_str();
    cmd->add_option("--tabu-iterations", o.tabu_iterations, "Tabu iterations per restart")->capture_default_str();
    cmd->add_option("--tabu-restarts", o.tabu_restarts, "Tabu restarts")->capture_default_str();
    cmd->add_option("--cap", o.cap, "Largest branch set the exact solver will enumerate")->capture_default_str();
    cmd->add_option("--workers", o.workers, "Threads used for solver restarts")->capture_default_str();
}

qcinit::encoding::RadixScheme scheme_of(const ProblemOptions& o) {
    return {o.bits, o.sign_mode == "ones" ? qcinit::encoding::SignMode::ones_complement
                                          : qcinit::encoding::SignMode::twos_complement};
}

qcinit::formulation::PenaltyConfig penalties_of(const ProblemOptions& o) { return {o.delta2, o.delta1}; }

qcinit::experiment::SolverSettings settings_of(const SolverOptions& o, std::uint64_t seed) {
    qcinit::experiment::SolverSettings s;
    s.sa.sweeps = o.sweeps;
    s.sa.beta_initial = o.beta_initial;
    s.sa.beta_final = o.beta_final;
    s.sa.restarts = o.sa_restarts;
    s.sa.workers = o.workers;
    s.sa.seed = seed + qcinit::experiment::sa_seed_offset;
    s.tabu.tenure = o.tenure;
    s.tabu.max_iterations = o.tabu_iterations;
    s.tabu.restarts = o.tabu_restarts;
    s.tabu.workers = o.workers;
    s.tabu.seed = seed + qcinit::experiment::tabu_seed_offset;
    s.exact.cap = o.cap;
    return s;
}

qcinit::Dataset load_data(const ProblemOptions& o) {
    auto ds = qcinit::data::load_csv(o.data);
    if (o.pca) ds = qcinit::data::pca_transform(qcinit::data::pca_fit(ds, 2), ds);
    return ds;
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------

struct GenBlobsOptions {
    qcinit::data::BlobSpec spec;
    std::string out;
};

int cmd_gen_blobs(const GenBlobsOptions& o) {
    try {
        o.spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    qcinit::data::save_csv(qcinit::data::generate_blobs(o.spec), o.out);
    return exit_ok;
}

struct QuboOptions {
    ProblemOptions problem;
    std::string out;
};

int cmd_qubo(const QuboOptions& o) {
    auto ds = load_data(o.problem);
    auto prepared = qcinit::experiment::prepare_instance(ds, o.problem.k, scheme_of(o.problem),
                                                         penalties_of(o.problem),
                                                         qcinit::experiment::parse_scale_mode(o.problem.scale));
    auto fq = qcinit::formulation::build_qubo(prepared.instance);
    auto doc = qcinit::io::qubo_to_json(fq.qubo, fq.layout.aux);
    doc["layout"] = qcinit::io::layout_to_json(fq.layout, prepared.instance, fq.penalties);
    doc["scaling"] = qcinit::io::scaling_to_json(prepared.transform);
    qcinit::io::write_json(doc, o.out);
    return exit_ok;
}

struct InitOptions {
    ProblemOptions problem;
    SolverOptions solver;
    std::string method = "tabu";
    std::uint64_t seed = 0;
    std::string out;
    std::string samples_out;
    std::string samples_in;
};

int cmd_init(const InitOptions& o) {
    auto ds = load_data(o.problem);
    auto prepared = qcinit::experiment::prepare_instance(ds, o.problem.k, scheme_of(o.problem),
                                                         penalties_of(o.problem),
                                                         qcinit::experiment::parse_scale_mode(o.problem.scale));
    json report;
    Eigen::MatrixXd centroids;
    qcinit::formulation::FactorizationSolution solution;
    std::size_t variables = 0;
    if (!o.samples_in.empty()) {
        auto fq = qcinit::formulation::build_qubo(prepared.instance);
        variables = fq.qubo.num_variables();
        auto assignment = qcinit::io::assignment_from_json(qcinit::io::read_json(o.samples_in));
        double energy = NAN;
        bool complete = std::all_of(fq.qubo.variables().begin(), fq.qubo.variables().end(),
                                    [&](const auto& v) { return assignment.count(v) > 0; });
        if (complete) energy = qcinit::pbp::evaluate_qubo(fq.qubo, assignment);
        solution = qcinit::formulation::decode_solution(assignment, fq.layout, prepared.instance, energy);
        centroids = qcinit::experiment::centroids_from_solution(solution, prepared.transform);
        report["solver"] = "external";
    } else {
        auto result = qcinit::experiment::qubo_init(prepared, o.method, settings_of(o.solver, o.seed));
        if (!o.samples_out.empty()) qcinit::io::write_json(qcinit::io::samples_to_json(result.samples), o.samples_out);
        solution = result.solution;
        centroids = result.centroids;
        variables = result.problem.qubo.num_variables();
        report["solver"] = o.method;
        report["solve_wall_ms"] = result.samples.wall_ms;
    }
    qcinit::data::save_centroids(centroids, o.out);
    report["energy"] = solution.energy;
    report["objective"] = solution.objective;
    report["onehot_violations"] = solution.onehot_violations;
    report["qubo_variables"] = variables;
    report["centroids"] = matrix_json(centroids);
    std::cout << report.dump() << "\n";
    return exit_ok;
}

struct KMeansOptions {
    std::string data;
    bool pca = false;
    std::string init;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::size_t max_iter = 10000;
    std::string out;
    std::string labels_out;
};

int cmd_kmeans(const KMeansOptions& o) {
    if (o.init.empty() == (o.k == 0)) throw UsageError("give exactly one of --init or --k");
    ProblemOptions p;
    p.data = o.data;
    p.pca = o.pca;
    auto ds = load_data(p);
    Eigen::MatrixXd init = o.init.empty()
                               ? qcinit::clustering::random_init(ds, o.k, o.seed + qcinit::experiment::random_init_seed_offset)
                               : qcinit::data::load_centroids(o.init);
    auto report = qcinit::clustering::lloyd_kmeans(ds, init, o.max_iter);
    if (!o.out.empty()) qcinit::data::save_centroids(report.centroids, o.out);
    if (!o.labels_out.empty()) {
        qcinit::Dataset labelled{ds.points, report.labels};
        qcinit::data::save_csv(labelled, o.labels_out);
    }
    qcinit::experiment::ResultRow row;
    qcinit::experiment::fill_metrics(row, ds, report);
    json out = {{"inertia", row.inertia},
                {"iterations", row.iterations},
                {"converged", row.converged},
                {"silhouette", row.silhouette},
                {"centroids", matrix_json(report.centroids)}};
    if (ds.labels) {
        out["homogeneity"] = row.homogeneity;
        out["completeness"] = row.completeness;
        out["v_measure"] = row.v_measure;
    }
    std::cout << out.dump() << "\n";
    return exit_ok;
}

struct BenchOptions {
    ProblemOptions problem;
    SolverOptions solver;
    double std = 1.0, box_lo = -10.0, box_hi = 10.0;
    std::size_t dims = 2;
    std::uint64_t seed = 0;
    std::vector<std::string> methods = {"random", "sa", "tabu"};
    std::vector<std::size_t> sizes = {10, 15, 20, 25, 30, 35, 40};
    std::size_t max_iter = 10000;
    std::string out = "bench-out";
};

int cmd_bench(const BenchOptions& o) {
    qcinit::experiment::ExperimentConfig config;
    if (o.problem.data.empty()) {
        config.blobs = qcinit::experiment::BlobSource{o.std, o.box_lo, o.box_hi, o.dims};
    } else {
        config.blobs.reset();
        config.csv = qcinit::experiment::CsvSource{o.problem.data, o.problem.pca};
    }
    config.k = o.problem.k;
    config.seed = o.seed;
    config.bits = o.problem.bits;
    config.sign_mode = scheme_of(o.problem).sign_mode;
    config.methods.clear();
    for (const auto& m : o.methods)
        if (!m.empty()) config.methods.push_back(m);
    config.sample_sizes = o.sizes;
    config.max_iter = o.max_iter;
    config.penalties = penalties_of(o.problem);
    config.scale = qcinit::experiment::parse_scale_mode(o.problem.scale);
    config.solver = settings_of(o.solver, o.seed);
    config.output_dir = o.out;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    auto rows = qcinit::experiment::run_bench(config);
    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (!r.ok()) {
            ++failed;
            std::cerr << "warning: " << r.method << " n=" << r.n << ": " << r.error << "\n";
        }
    }
    std::cout << "wrote " << rows.size() << " rows (" << failed << " with errors) to "
              << (fs::path(o.out) / "results.csv").string() << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// key=value config files: entries fill in options not given on the command line.

std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
    if (args.empty()) return args;
    CLI::App* sub = nullptr;
    for (auto* s : app.get_subcommands({}))
        if (s->get_name() == args.front()) sub = s;
    if (sub == nullptr || sub->get_option_no_throw("--config") == nullptr) return args;

    std::string path;
    std::set<std::string> given;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a.rfind("--", 0) != 0) continue;
        auto name = a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2);
        given.insert(name);
        if (name == "config") path = a.find('=') != std::string::npos ? a.substr(a.find('=') + 1)
                                     : i + 1 < args.size()           ? args[i + 1]
                                                                     : "";
    }
    if (path.empty()) return args;
    if (!fs::exists(path)) throw UsageError("config file not found: " + path);

    std::vector<std::string> extra;
    for (const auto& item : CLI::ConfigTOML().from_file(path)) {
        const std::string name = item.fullname();
        if (name.empty() || item.inputs.empty()) continue;
        const auto* opt = sub->get_option_no_throw("--" + name);
        if (opt == nullptr || name == "config") throw UsageError("unknown config key '" + name + "' in " + path);
        if (given.count(name)) continue;
        if (opt->get_expected_max() == 0) {
            if (CLI::detail::to_flag_value(item.inputs.front()) > 0) extra.push_back("--" + name);
            continue;
        }
        extra.push_back("--" + name);
        std::string joined;
        for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
        extra.push_back(joined);
    }
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO-based centroid initialization for k-means", "qcinit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qcinit 0.1.0");
    std::string config_path;

    GenBlobsOptions gen;
    auto* gen_cmd = app.add_subcommand("gen-blobs", "Write isotropic Gaussian blobs to a CSV file");
    gen_cmd->add_option("--n", gen.spec.n_samples, "Number of points")->required();
    gen_cmd->add_option("--k", gen.spec.k_centers, "Number of centers")->required();
    gen_cmd->add_option("--std", gen.spec.std, "Noise standard deviation")->capture_default_str();
    gen_cmd->add_option("--box-lo", gen.spec.box_lo, "Lower bound of the center box")->capture_default_str();
    gen_cmd->add_option("--box-hi", gen.spec.box_hi, "Upper bound of the center box")->capture_default_str();
    gen_cmd->add_option("--dims", gen.spec.dims, "Dimensions")->capture_default_str();
    gen_cmd->add_option("--seed", gen.spec.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

    QuboOptions qubo;
    auto* qubo_cmd = app.add_subcommand("qubo", "Export the centroid QUBO of a data set as JSON");
    add_problem_options(qubo_cmd, qubo.problem, true);
    qubo_cmd->add_option("--out", qubo.out, "Output JSON")->required();

    InitOptions init;
    auto* init_cmd = app.add_subcommand("init", "Solve the centroid QUBO and write initial centroids");
    add_problem_options(init_cmd, init.problem, true);
    add_solver_options(init_cmd, init.solver);
    init_cmd->add_option("--solver", init.method, "Solver")
        ->check(CLI::IsMember({"sa", "tabu", "exact"}))
        ->capture_default_str();
    init_cmd->add_option("--seed", init.seed, "Experiment seed (solver seeds are derived from it)")
        ->capture_default_str();
    init_cmd->add_option("--out", init.out, "Output centroid CSV")->required();
    init_cmd->add_option("--samples-out", init.samples_out, "Also write the solver's sample set as JSON");
    init_cmd->add_option("--samples", init.samples_in, "Decode this sample JSON instead of running a solver");
    init_cmd->add_option("--config", config_path, "key=value file supplying defaults for these options");

    KMeansOptions km;
    auto* km_cmd = app.add_subcommand("kmeans", "Run Lloyd's k-means from given or random initial centroids");
    km_cmd->add_option("--data", km.data, "Input CSV")->required();
    km_cmd->add_flag("--pca", km.pca, "Project the data onto its top two principal components first");
    km_cmd->add_option("--init", km.init, "Initial centroid CSV");
    km_cmd->add_option("--k", km.k, "Draw k random initial centroids instead of --init");
    km_cmd->add_option("--seed", km.seed, "Experiment seed for random initialization")->capture_default_str();
    km_cmd->add_option("--max-iter", km.max_iter, "Iteration cap")->capture_default_str();
    km_cmd->add_option("--out", km.out, "Final centroid CSV");
    km_cmd->add_option("--labels-out", km.labels_out, "Data CSV with the final assignment as labels");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Compare initialization methods across sample sizes");
    add_problem_options(bench_cmd, bench.problem, false);
    add_solver_options(bench_cmd, bench.solver);
    bench_cmd->add_option("--std", bench.std, "Blob noise standard deviation")->capture_default_str();
    bench_cmd->add_option("--box-lo", bench.box_lo, "Lower bound of the blob center box")->capture_default_str();
    bench_cmd->add_option("--box-hi", bench.box_hi, "Upper bound of the blob center box")->capture_default_str();
    bench_cmd->add_option("--dims", bench.dims, "Blob dimensions")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Experiment seed")->capture_default_str();
    bench_cmd->add_option("--methods", bench.methods, "Comma-separated subset of random,sa,tabu,exact")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated ascending sample sizes")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--max-iter", bench.max_iter, "k-means iteration cap")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "Output directory")->capture_default_str();
    bench_cmd->add_option("--config", config_path, "key=value file supplying defaults for these options");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(app, std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*gen_cmd) return cmd_gen_blobs(gen);
        if (*qubo_cmd) return cmd_qubo(qubo);
        if (*init_cmd) return cmd_init(init);
        if (*km_cmd) return cmd_kmeans(km);
        if (*bench_cmd) return cmd_bench(bench);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_usage;
}
