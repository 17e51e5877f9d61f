// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eot/backend.hpp"
#include "eot/candidate.hpp"
#include "eot/embedding.hpp"
#include "eot/moo.hpp"
#include "eot/prompts.hpp"
#include "eot/trace.hpp"

namespace eot {

/// Crossover-to-mutation ratio, written "2:1" or as a single positive number.
struct Ratio {
    double crossover = 2.0;
    double mutation = 1.0;

    [[nodiscard]] double value() const { return crossover / mutation; }
    [[nodiscard]] std::string str() const;
    static Ratio parse(std::string_view text);
};

struct RunConfig {
    int n = 3;       // initial candidates
    int t = 2;       // generations
    Ratio r;         // crossover:mutation
    int k = 3;       // parents per generation
    int kappa = 5;   // clusters
    int m = 1;       // dropped clusters
    std::uint64_t seed = 0;
    LevelMode level_mode = LevelMode::count;
    int parallel_calls = 1;  // concurrent backend calls inside one phase
    int score_attempts = 3;  // tries per candidate before an unscorable reply becomes quality 0
    int max_tokens = 1024;

    /// Size of the population after `t` generations: n * 2^t.
    [[nodiscard]] std::size_t final_population_size() const;

    /// Violations of the search parameters (n, t, r, k, ...).
    [[nodiscard]] std::vector<std::string> search_violations() const;
    /// Search violations plus the condensation parameters (kappa, m).
    [[nodiscard]] std::vector<std::string> violations() const;
};

struct QueryContext {
    std::string question;
    std::shared_ptr<const ImagePayload> image;
    std::optional<std::string> ground_truth;
};

/// The evolving answer set for one question. Candidate ids equal their position.
struct Population {
    QueryContext query;
    std::string reference;
    std::vector<Candidate> candidates;
    int generation = 0;  // generations bred so far

    [[nodiscard]] const Candidate& at(CandidateId id) const;
    /// Objective vectors; every candidate must be scored.
    [[nodiscard]] std::vector<ScorePair> scores() const;
    [[nodiscard]] std::vector<std::string> texts() const;
};

struct OffspringSplit {
    std::size_t crossover = 0;
    std::size_t mutation = 0;
};

/// crossover = round(budget * r / (1 + r)), mutation = budget - crossover, both at least one.
OffspringSplit offspring_split(std::size_t budget, const Ratio& r);

/// Runs the evolutionary search for one question. Not shareable across threads;
/// use one engine per concurrent question.
class SearchEngine {
public:
    SearchEngine(RunConfig config, ModelClient& client, EmbeddingProvider& embedder,
                 const PromptTemplates& templates, TraceSink* trace = nullptr);

    /// N generation calls plus one reference call. No scores are assigned.
    Population initialize(const QueryContext& query);

    /// Scores quality for every unscored candidate (one call each) and recomputes
    /// novelty for the whole population.
    void score_round(Population& population);

    /// Appends one generation of offspring; the population doubles.
    void breed(Population& population, std::span<const Candidate> parents, Rng& rng);

    /// initialize, then T x {score, select, breed}, then a final score round.
    Population run_search(const QueryContext& query);

    [[nodiscard]] const RunConfig& config() const noexcept { return config_; }

private:
    ModelRequest request(CallKind kind, std::string prompt, const QueryContext& query, std::uint64_t sample_id) const;
    double score_quality(const Population& population, const Candidate& candidate);
    void emit(nlohmann::json event) const;

    RunConfig config_;
    ModelClient& client_;
    EmbeddingProvider& embedder_;
    const PromptTemplates& templates_;
    TraceSink* trace_;
    std::map<CandidateId, Embedding> embeddings_;
};

/// Candidates in Pass@k order: level by level, descending quality within a level,
/// ascending id on ties. Throws "score missing" if any candidate is unscored.
std::vector<Candidate> rank_answers(const Population& population, LevelMode mode = LevelMode::count);

}  // namespace eot
