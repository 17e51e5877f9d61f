// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eot/engine.hpp"
#include "eot/metrics.hpp"

namespace eot {

/// One K-Medoids cluster over matrix indices.
struct MedoidCluster {
    std::vector<std::size_t> members;  // ascending
    std::size_t medoid = 0;
};

/// Sum over all points of the distance to their cluster's medoid.
double pam_objective(const DistanceMatrix& dist, std::span<const MedoidCluster> clusters);

/// Sum over all points of the distance to the nearest of `medoids`.
double medoid_cost(const DistanceMatrix& dist, std::span<const std::size_t> medoids);

/// K-Medoids with farthest-first seeding (first medoid drawn from `rng`) and
/// alternating assignment / medoid update. When the alternation settles, the best
/// single medoid swap is applied if it lowers the objective, and alternation
/// resumes. Stops at a fixed point or after 100 rounds. When there are at most
/// 200000 medoid subsets of size kappa, they are also enumerated and the best one
/// replaces the local optimum if it is strictly cheaper.
///
/// Ties: points join the lower-indexed medoid; a cluster's medoid is the
/// lowest-indexed member with minimal summed distance, and of two medoid sets with
/// equal cost the lexicographically smaller one is kept. Clusters are returned in
/// ascending medoid order. Throws "more clusters than points" if kappa > n.
std::vector<MedoidCluster> k_medoids(const DistanceMatrix& dist, std::size_t kappa, Rng& rng);

/// Per-iteration objective values of the last `k_medoids` call on this thread; for tests.
const std::vector<double>& last_k_medoids_trajectory();

struct Cluster {
    std::vector<CandidateId> member_ids;
    CandidateId medoid_id = 0;
    double avg_quality = 0.0;
};

struct CondensedSet {
    /// Surviving medoids, best cluster first.
    std::vector<CandidateId> medoids;
    /// Surviving clusters in the same order as `medoids`.
    std::vector<Cluster> kept;
    /// The m clusters with the lowest average quality.
    std::vector<Cluster> dropped;
};

/// Clusters the whole population on the condensation distance, drops the `m`
/// clusters with the lowest mean quality (ties drop the higher cluster index) and
/// keeps the medoids of the rest.
CondensedSet condense(const Population& population, std::size_t kappa, std::size_t m, Rng& rng,
                      EmbeddingProvider& embedder);

/// One aggregation call over the condensed medoid texts; returns the reply verbatim.
std::string aggregate(const QueryContext& query, const CondensedSet& condensed, const Population& population,
                      ModelClient& client, const PromptTemplates& templates, int max_tokens = 1024);

}  // namespace eot
