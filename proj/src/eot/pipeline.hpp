// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <string>
#include <vector>

#include "eot/backend.hpp"
#include "eot/condense.hpp"
#include "eot/embedding.hpp"
#include "eot/engine.hpp"
#include "eot/prompts.hpp"

namespace eot {

struct Solution {
    Population population;
    std::vector<Candidate> ranked;
    CondensedSet condensed;
    std::string final_answer;
    std::vector<ModelCall> calls;  // this question's ledger
    std::size_t search_calls = 0;
    std::size_t aggregate_calls = 0;
};

/// Shared services for answering questions. The backend and embedder must be
/// thread-safe; everything per-question is created inside `solve`.
struct PipelineContext {
    Backend& backend;
    EmbeddingProvider& embedder;
    const PromptTemplates& templates;
    RetryPolicy retry;
};

/// Search, rank, condense and aggregate one question with a fresh ledger.
Solution solve(const QueryContext& query, const RunConfig& config, const PipelineContext& services,
               TraceSink* trace = nullptr);

}  // namespace eot
