// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/condense.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "eot/error.hpp"

namespace eot {

namespace {

constexpr int kMaxRounds = 100;
constexpr double kImprovement = 1e-12;
// Instances with at most this many medoid subsets are also solved exactly.
constexpr double kExactSubsetBudget = 200000.0;

thread_local std::vector<double> trajectory;

// Cluster index of each point; medoids always own themselves.
std::vector<std::size_t> assign(const DistanceMatrix& dist, const std::vector<std::size_t>& medoids) {
    const std::size_t n = dist.size();
    std::vector<std::size_t> owner(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < medoids.size(); ++c) {
            if (medoids[c] == p) {
                owner[p] = c;
                best = -1.0;
                break;
            }
            // `medoids` is kept sorted, so strict < keeps the lower-indexed medoid on ties.
            if (dist(p, medoids[c]) < best) {
                best = dist(p, medoids[c]);
                owner[p] = c;
            }
        }
    }
    return owner;
}

std::vector<std::size_t> farthest_first(const DistanceMatrix& dist, std::size_t kappa, Rng& rng) {
    const std::size_t n = dist.size();
    std::vector<std::size_t> medoids{uniform_index(rng, n)};
    std::vector<double> nearest(n);
    for (std::size_t p = 0; p < n; ++p) nearest[p] = dist(p, medoids[0]);
    std::vector<bool> chosen(n, false);
    chosen[medoids[0]] = true;
    while (medoids.size() < kappa) {
        std::size_t pick = n;
        for (std::size_t p = 0; p < n; ++p) {
            if (!chosen[p] && (pick == n || nearest[p] > nearest[pick])) pick = p;
        }
        chosen[pick] = true;
        medoids.push_back(pick);
        for (std::size_t p = 0; p < n; ++p) nearest[p] = std::min(nearest[p], dist(p, pick));
    }
    std::sort(medoids.begin(), medoids.end());
    return medoids;
}

std::vector<MedoidCluster> build_clusters(const DistanceMatrix& dist, const std::vector<std::size_t>& medoids) {
    const auto owner = assign(dist, medoids);
    std::vector<MedoidCluster> clusters(medoids.size());
    for (std::size_t c = 0; c < medoids.size(); ++c) clusters[c].medoid = medoids[c];
    for (std::size_t p = 0; p < dist.size(); ++p) clusters[owner[p]].members.push_back(p);
    return clusters;
}

double subset_count(std::size_t n, std::size_t k) {
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c;
}

// Lexicographically first medoid set with the lowest cost.
std::vector<std::size_t> exhaustive_medoids(const DistanceMatrix& dist, std::size_t kappa, double& best_cost) {
    const std::size_t n = dist.size();
    std::vector<std::size_t> pick(kappa);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    std::vector<std::size_t> best = pick;
    best_cost = std::numeric_limits<double>::infinity();
    while (true) {
        double cost = 0.0;
        for (std::size_t p = 0; p < n && cost < best_cost; ++p) {
            double nearest = std::numeric_limits<double>::infinity();
            for (auto m : pick) nearest = std::min(nearest, dist(p, m));
            cost += nearest;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = pick;
        }
        std::size_t i = kappa;
        while (i > 0 && pick[i - 1] == n - kappa + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < kappa; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

}  // namespace

double pam_objective(const DistanceMatrix& dist, std::span<const MedoidCluster> clusters) {
    double total = 0.0;
    for (const auto& c : clusters) {
        for (auto p : c.members) total += dist(p, c.medoid);
    }
    return total;
}

double medoid_cost(const DistanceMatrix& dist, std::span<const std::size_t> medoids) {
    double total = 0.0;
    for (std::size_t p = 0; p < dist.size(); ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (auto m : medoids) best = std::min(best, dist(p, m));
        total += best;
    }
    return total;
}

const std::vector<double>& last_k_medoids_trajectory() {
    return trajectory;
}

std::vector<MedoidCluster> k_medoids(const DistanceMatrix& dist, std::size_t kappa, Rng& rng) {
    const std::size_t n = dist.size();
    if (n == 0) throw invalid_argument("k_medoids: empty distance matrix");
    if (kappa == 0) throw invalid_argument("k_medoids: kappa must be positive");
    if (kappa > n) throw invalid_argument("more clusters than points");

    trajectory.clear();
    auto medoids = farthest_first(dist, kappa, rng);
    double cost = medoid_cost(dist, medoids);
    trajectory.push_back(cost);

    for (int round = 0; round < kMaxRounds; ++round) {
        // Medoid update inside the current assignment.
        auto clusters = build_clusters(dist, medoids);
        std::vector<std::size_t> updated;
        updated.reserve(kappa);
        for (const auto& c : clusters) {
            std::size_t best = c.medoid;
            double best_sum = std::numeric_limits<double>::infinity();
            for (auto candidate : c.members) {
                double sum = 0.0;
                for (auto p : c.members) sum += dist(candidate, p);
                // Members are ascending, so the first minimum is the lowest id.
                if (sum < best_sum - kImprovement) {
                    best_sum = sum;
                    best = candidate;
                }
            }
            updated.push_back(best);
        }
        std::sort(updated.begin(), updated.end());

        double updated_cost = medoid_cost(dist, updated);
        // Equal cost moves only toward lower indices, so ties settle on the documented medoids.
        const bool tie_break = updated_cost <= cost && updated < medoids;
        if (updated != medoids && (updated_cost < cost - kImprovement || tie_break)) {
            medoids = std::move(updated);
            cost = updated_cost;
            trajectory.push_back(cost);
            continue;
        }

        // Alternation settled: try the best single swap.
        std::vector<std::size_t> best_swap;
        double best_cost = cost;
        std::vector<bool> is_medoid(n, false);
        for (auto m : medoids) is_medoid[m] = true;
        for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
            for (std::size_t p = 0; p < n; ++p) {
                if (is_medoid[p]) continue;
                auto trial = medoids;
                trial[slot] = p;
                std::sort(trial.begin(), trial.end());
                const double trial_cost = medoid_cost(dist, trial);
                if (trial_cost < best_cost - kImprovement) {
                    best_cost = trial_cost;
                    best_swap = std::move(trial);
                }
            }
        }
        if (best_swap.empty()) break;
        medoids = std::move(best_swap);
        cost = best_cost;
        trajectory.push_back(cost);
    }

    // Swap search can stop in a local optimum; small instances are cheap to settle exactly.
    if (subset_count(n, kappa) <= kExactSubsetBudget) {
        double exact_cost = 0.0;
        auto exact = exhaustive_medoids(dist, kappa, exact_cost);
        if (exact_cost < cost - kImprovement || (exact_cost <= cost && exact < medoids)) {
            medoids = std::move(exact);
            cost = exact_cost;
            trajectory.push_back(cost);
        }
    }

    return build_clusters(dist, medoids);
}

CondensedSet condense(const Population& population, std::size_t kappa, std::size_t m, Rng& rng,
                      EmbeddingProvider& embedder) {
    const auto& candidates = population.candidates;
    for (const auto& c : candidates) {
        if (!c.quality) throw invalid_argument("score missing for candidate " + std::to_string(c.id));
    }
    if (m >= kappa) throw invalid_argument("nothing would survive");
    if (kappa > candidates.size()) throw invalid_argument("more clusters than points");

    DistanceMatrix dist(candidates.size());
    if (candidates.size() >= 2) {
        const auto texts = population.texts();
        dist = ca_distance_matrix(texts, embedder.embed_batch(texts));
    }
    const auto clusters = k_medoids(dist, kappa, rng);

    std::vector<Cluster> summaries;
    summaries.reserve(clusters.size());
    for (const auto& mc : clusters) {
        Cluster c;
        c.medoid_id = candidates[mc.medoid].id;
        double sum = 0.0;
        for (auto p : mc.members) {
            c.member_ids.push_back(candidates[p].id);
            sum += *candidates[p].quality;
        }
        c.avg_quality = sum / static_cast<double>(mc.members.size());
        summaries.push_back(std::move(c));
    }

    std::vector<std::size_t> order(summaries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return summaries[a].avg_quality > summaries[b].avg_quality;
    });

    CondensedSet out;
    const std::size_t keep = summaries.size() - m;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& c = summaries[order[i]];
        if (i < keep) {
            out.medoids.push_back(c.medoid_id);
            out.kept.push_back(std::move(c));
        } else {
            out.dropped.push_back(std::move(c));
        }
    }
    return out;
}

std::string aggregate(const QueryContext& query, const CondensedSet& condensed, const Population& population,
                      ModelClient& client, const PromptTemplates& templates, int max_tokens) {
    if (condensed.medoids.empty()) throw invalid_argument("aggregate: condensed set is empty");
    std::vector<std::string> texts;
    texts.reserve(condensed.medoids.size());
    for (auto id : condensed.medoids) texts.push_back(population.at(id).text);

    ModelRequest req;
    req.kind = CallKind::aggregate;
    req.prompt = templates.aggregate.render({{"question", query.question}, {"answers", texts}});
    req.image = query.image;
    req.params = default_sampling(CallKind::aggregate);
    req.params.max_tokens = max_tokens;
    req.answers = std::move(texts);
    try {
        return client.complete(req);
    } catch (const Error& e) {
        throw Error(ErrorKind::backend, std::string("aggregation failed: ") + e.what());
    }
}

}  // namespace eot
