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

// Library walkthrough: blobs -> centroid QUBO -> tabu search -> k-means.

#include <cstdio>

#include "qcinit/qcinit.hpp"

int main() {
    using namespace qcinit;

    data::BlobSpec spec;
    spec.n_samples = 12;
    spec.k_centers = 3;
    spec.seed = 7;
    Dataset ds = data::generate_blobs(spec);

    auto prepared = experiment::prepare_instance(ds, 3, encoding::RadixScheme{3});
    auto problem = formulation::build_qubo(prepared.instance);
    std::printf("QUBO: %zu variables (%zu auxiliaries), delta2 = %g\n", problem.qubo.num_variables(),
                problem.layout.aux.size(), problem.penalties.delta2);

    solvers::TabuParams params;
    params.seed = 1;
    auto samples = solvers::solve_tabu(problem.qubo, params);
    const auto& best = samples.best();
    auto solution = formulation::decode_solution(samples.assignment(best), problem.layout, prepared.instance,
                                                 best.energy);
    std::printf("energy %.6g, objective %.6g, one-hot violations %zu\n", solution.energy, solution.objective,
                solution.onehot_violations);

    Eigen::MatrixXd init = experiment::centroids_from_solution(solution, prepared.transform);
    auto report = clustering::lloyd_kmeans(ds, init, 10000);
    auto scores = clustering::homogeneity_completeness_v(*ds.labels, report.labels);
    std::printf("k-means: inertia %.6g after %zu iterations, silhouette %.4f, v-measure %.4f\n", report.inertia,
                report.iterations, clustering::silhouette(ds, report.labels), scores.v_measure);
    for (Eigen::Index c = 0; c < report.centroids.rows(); ++c)
        std::printf("  centroid %ld: (%.4f, %.4f)\n", static_cast<long>(c), report.centroids(c, 0),
                    report.centroids(c, 1));
    return 0;
}
