// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/pipeline.hpp"

#include "eot/error.hpp"
#include "eot/hash.hpp"

namespace eot {

Solution solve(const QueryContext& query, const RunConfig& config, const PipelineContext& services,
               TraceSink* trace) {
    const auto problems = config.violations();
    if (!problems.empty()) throw config_error(problems.front());

    CallLedger ledger;
    ModelClient client(services.backend, ledger, services.retry, trace);
    SearchEngine engine(config, client, services.embedder, services.templates, trace);

    Solution out;
    out.population = engine.run_search(query);
    out.ranked = rank_answers(out.population, config.level_mode);

    // Separate stream from the search RNG.
    Rng rng(mix64(config.seed ^ 0xC0'4D'E5'5EULL));
    out.condensed = condense(out.population, static_cast<std::size_t>(config.kappa),
                             static_cast<std::size_t>(config.m), rng, services.embedder);
    if (trace) {
        nlohmann::json kept = nlohmann::json::array();
        nlohmann::json dropped = nlohmann::json::array();
        const auto summary = [](const Cluster& c) {
            return nlohmann::json{{"medoid", c.medoid_id}, {"members", c.member_ids}, {"avg_quality", c.avg_quality}};
        };
        for (const auto& c : out.condensed.kept) kept.push_back(summary(c));
        for (const auto& c : out.condensed.dropped) dropped.push_back(summary(c));
        trace->emit({{"event", "condense"}, {"kept", std::move(kept)}, {"dropped", std::move(dropped)}});
    }
    out.final_answer = aggregate(query, out.condensed, out.population, client, services.templates, config.max_tokens);
    if (trace) trace->emit({{"event", "final"}, {"answer", out.final_answer}});

    out.calls = ledger.snapshot();
    out.search_calls = ledger.search_calls();
    out.aggregate_calls = ledger.count(CallKind::aggregate);
    return out;
}

}  // namespace eot
