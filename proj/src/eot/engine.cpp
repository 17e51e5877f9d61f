// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/engine.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>

#include "eot/error.hpp"
#include "eot/hash.hpp"
#include "eot/metrics.hpp"
#include "eot/parallel.hpp"

namespace eot {

namespace {

// Keeps reference/score sample ids disjoint from candidate ids.
constexpr std::uint64_t kReferenceSample = 1ULL << 40;
constexpr std::uint64_t kScoreSample = 1ULL << 41;
constexpr std::size_t kMaxPopulation = 1 << 16;

double parse_positive(std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value) || value <= 0.0) {
        throw config_error("invalid ratio component '" + std::string(text) + "'");
    }
    return value;
}

std::string format_number(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

}  // namespace

std::string Ratio::str() const {
    return format_number(crossover) + ":" + format_number(mutation);
}

Ratio Ratio::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return {parse_positive(text), 1.0};
    return {parse_positive(text.substr(0, colon)), parse_positive(text.substr(colon + 1))};
}

std::size_t RunConfig::final_population_size() const {
    if (n < 0 || t < 0 || t > 30) return 0;
    return static_cast<std::size_t>(n) << t;
}

std::vector<std::string> RunConfig::search_violations() const {
    std::vector<std::string> v;
    if (n < 2) v.push_back("N must be at least 2 (novelty needs two candidates), got " + std::to_string(n));
    if (t < 0) v.push_back("T must be non-negative, got " + std::to_string(t));
    if (!(r.crossover > 0.0) || !(r.mutation > 0.0)) v.push_back("r must be positive");
    if (k < 2) v.push_back("K must be at least 2 (crossover needs two parents), got " + std::to_string(k));
    if (k > n) v.push_back("K (" + std::to_string(k) + ") exceeds N (" + std::to_string(n) + ")");
    if (t >= 0 && n >= 2 && (t > 30 || final_population_size() > kMaxPopulation)) {
        v.push_back("N * 2^T exceeds " + std::to_string(kMaxPopulation) + " candidates");
    }
    if (parallel_calls < 1) v.push_back("parallel_calls must be at least 1");
    if (score_attempts < 1) v.push_back("score_attempts must be at least 1");
    if (max_tokens < 1) v.push_back("max_tokens must be positive");
    return v;
}

std::vector<std::string> RunConfig::violations() const {
    auto v = search_violations();
    if (kappa < 1) v.push_back("kappa must be at least 1, got " + std::to_string(kappa));
    if (m < 0) v.push_back("m must be non-negative, got " + std::to_string(m));
    if (m >= kappa) {
        v.push_back("nothing would survive: m (" + std::to_string(m) + ") must be less than kappa (" +
                    std::to_string(kappa) + ")");
    }
    const auto final_size = final_population_size();
    if (kappa >= 1 && final_size > 0 && static_cast<std::size_t>(kappa) > final_size) {
        v.push_back("more clusters than points: kappa (" + std::to_string(kappa) + ") exceeds N * 2^T (" +
                    std::to_string(final_size) + ")");
    }
    return v;
}

const Candidate& Population::at(CandidateId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= candidates.size()) {
        throw invalid_argument("unknown candidate id " + std::to_string(id));
    }
    return candidates[static_cast<std::size_t>(id)];
}

std::vector<ScorePair> Population::scores() const {
    std::vector<ScorePair> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        if (!c.scored()) throw invalid_argument("score missing for candidate " + std::to_string(c.id));
        out.push_back({*c.quality, *c.novelty});
    }
    return out;
}

std::vector<std::string> Population::texts() const {
    std::vector<std::string> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(c.text);
    return out;
}

OffspringSplit offspring_split(std::size_t budget, const Ratio& r) {
    if (budget < 2) throw invalid_argument("offspring budget must be at least 2");
    const double ratio = r.value();
    auto crossover = static_cast<std::size_t>(std::llround(static_cast<double>(budget) * ratio / (1.0 + ratio)));
    crossover = std::clamp<std::size_t>(crossover, 1, budget - 1);
    return {crossover, budget - crossover};
}

SearchEngine::SearchEngine(RunConfig config, ModelClient& client, EmbeddingProvider& embedder,
                           const PromptTemplates& templates, TraceSink* trace)
    : config_(std::move(config)), client_(client), embedder_(embedder), templates_(templates), trace_(trace) {
    const auto problems = config_.search_violations();
    if (!problems.empty()) throw config_error(problems.front());
}

void SearchEngine::emit(nlohmann::json event) const {
    if (trace_) trace_->emit(event);
}

ModelRequest SearchEngine::request(CallKind kind, std::string prompt, const QueryContext& query,
                                   std::uint64_t sample_id) const {
    ModelRequest req;
    req.kind = kind;
    req.prompt = std::move(prompt);
    req.image = query.image;
    req.params = default_sampling(kind);
    req.params.max_tokens = config_.max_tokens;
    req.params.seed = mix64(config_.seed ^ mix64(sample_id)) & 0x7FFFFFFF;
    req.sample_id = sample_id;
    return req;
}

Population SearchEngine::initialize(const QueryContext& query) {
    embeddings_.clear();
    Population pop;
    pop.query = query;
    const auto prompt = templates_.query.render({{"question", query.question}});
    const auto n = static_cast<std::size_t>(config_.n);

    // Slot n holds the reference answer.
    std::vector<std::string> replies(n + 1);
    try {
        parallel_for(n + 1, config_.parallel_calls, [&](std::size_t i) {
            replies[i] = i < n ? client_.complete(request(CallKind::generate, prompt, query, i))
                               : client_.complete(request(CallKind::reference, prompt, query, kReferenceSample));
        });
    } catch (const Error& e) {
        throw Error(ErrorKind::backend, std::string("initialization failed: ") + e.what());
    }

    for (std::size_t i = 0; i < n; ++i) {
        Candidate c;
        c.id = static_cast<CandidateId>(i);
        c.text = std::move(replies[i]);
        emit({{"event", "candidate"}, {"id", c.id}, {"generation", 0}, {"lineage", "initial"},
              {"parents", nlohmann::json::array()}, {"text", c.text}});
        pop.candidates.push_back(std::move(c));
    }
    pop.reference = std::move(replies[n]);
    emit({{"event", "reference"}, {"text", pop.reference}});
    return pop;
}

double SearchEngine::score_quality(const Population& population, const Candidate& candidate) {
    const auto prompt = templates_.score.render({{"question", population.query.question},
                                                 {"reference", population.reference},
                                                 {"answer", candidate.text}});
    std::string last_reply;
    for (int attempt = 0; attempt < config_.score_attempts; ++attempt) {
        const auto sample = kScoreSample + static_cast<std::uint64_t>(candidate.id) * 16 + attempt;
        auto req = request(CallKind::score, prompt, population.query, sample);
        req.reference = population.reference;
        req.answers = {candidate.text};
        last_reply = client_.complete(req);
        try {
            return parse_quality(last_reply);
        } catch (const Error&) {
            // try again
        }
    }
    const auto message = "candidate " + std::to_string(candidate.id) + ": unscorable reply after " +
                         std::to_string(config_.score_attempts) + " attempts; quality set to 0";
    std::clog << "warning: " << message << '\n';
    emit({{"event", "warning"}, {"message", message}, {"reply", last_reply}});
    return 0.0;
}

void SearchEngine::score_round(Population& population) {
    if (population.candidates.size() < 2) throw invalid_argument("novelty undefined");

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < population.candidates.size(); ++i) {
        if (!population.candidates[i].quality) pending.push_back(i);
    }
    std::vector<double> qualities(pending.size());
    parallel_for(pending.size(), config_.parallel_calls, [&](std::size_t j) {
        qualities[j] = score_quality(population, population.candidates[pending[j]]);
    });
    for (std::size_t j = 0; j < pending.size(); ++j) {
        population.candidates[pending[j]].quality = qualities[j];
    }

    std::vector<std::string> missing_text;
    std::vector<CandidateId> missing_id;
    for (const auto& c : population.candidates) {
        if (!embeddings_.contains(c.id)) {
            missing_id.push_back(c.id);
            missing_text.push_back(c.text);
        }
    }
    if (!missing_text.empty()) {
        auto vectors = embedder_.embed_batch(missing_text);
        for (std::size_t j = 0; j < missing_id.size(); ++j) embeddings_[missing_id[j]] = std::move(vectors[j]);
    }

    const auto texts = population.texts();
    std::vector<Embedding> vectors;
    vectors.reserve(texts.size());
    for (const auto& c : population.candidates) vectors.push_back(embeddings_.at(c.id));
    const auto novelty = novelty_scores(texts, vectors);

    nlohmann::json scores = nlohmann::json::array();
    for (std::size_t i = 0; i < population.candidates.size(); ++i) {
        auto& c = population.candidates[i];
        c.novelty = novelty[i];
        scores.push_back({{"id", c.id}, {"quality", *c.quality}, {"novelty", *c.novelty}});
    }
    emit({{"event", "scores"}, {"generation", population.generation}, {"scores", std::move(scores)}});
}

void SearchEngine::breed(Population& population, std::span<const Candidate> parents, Rng& rng) {
    if (parents.size() < 2) throw invalid_argument("crossover needs two parents");

    const auto budget = population.candidates.size();
    const auto split = offspring_split(budget, config_.r);
    const int generation = population.generation + 1;

    // Draw all parent choices up front so the RNG stream does not depend on call order.
    std::vector<Candidate> offspring(budget);
    for (std::size_t i = 0; i < budget; ++i) {
        auto& child = offspring[i];
        child.id = static_cast<CandidateId>(budget + i);
        child.generation = generation;
        if (i < split.crossover) {
            const auto a = uniform_index(rng, parents.size());
            auto b = uniform_index(rng, parents.size() - 1);
            if (b >= a) ++b;
            child.lineage = Lineage::crossover(parents[a].id, parents[b].id);
        } else {
            child.lineage = Lineage::mutation(parents[uniform_index(rng, parents.size())].id);
        }
    }

    const auto& query = population.query;
    parallel_for(budget, config_.parallel_calls, [&](std::size_t i) {
        auto& child = offspring[i];
        const auto sample = static_cast<std::uint64_t>(child.id);
        if (child.lineage.kind == Lineage::Kind::crossover) {
            const auto& a = population.at(child.lineage.parents[0]);
            const auto& b = population.at(child.lineage.parents[1]);
            auto req = request(CallKind::crossover,
                               templates_.crossover.render(
                                   {{"question", query.question}, {"answer_a", a.text}, {"answer_b", b.text}}),
                               query, sample);
            req.answers = {a.text, b.text};
            child.text = client_.complete(req);
        } else {
            const auto& p = population.at(child.lineage.parents[0]);
            auto req = request(CallKind::mutate,
                               templates_.mutate.render({{"question", query.question}, {"answer", p.text}}), query,
                               sample);
            req.answers = {p.text};
            child.text = client_.complete(req);
        }
    });

    for (auto& child : offspring) {
        emit({{"event", "candidate"}, {"id", child.id}, {"generation", child.generation},
              {"lineage", to_string(child.lineage.kind)}, {"parents", child.lineage.parents}, {"text", child.text}});
        population.candidates.push_back(std::move(child));
    }
    population.generation = generation;
}

Population SearchEngine::run_search(const QueryContext& query) {
    Rng rng(config_.seed);
    auto population = initialize(query);
    for (int t = 1; t <= config_.t; ++t) {
        score_round(population);
        const auto levels = assign_levels(population.scores(), config_.level_mode);
        const auto parents = select_parents(population.candidates, levels, static_cast<std::size_t>(config_.k));
        nlohmann::json ids = nlohmann::json::array();
        for (const auto& p : parents) ids.push_back(p.id);
        emit({{"event", "selection"}, {"generation", t}, {"parents", std::move(ids)}});
        breed(population, parents, rng);
    }
    score_round(population);
    return population;
}

std::vector<Candidate> rank_answers(const Population& population, LevelMode mode) {
    for (const auto& c : population.candidates) {
        if (!c.scored()) throw invalid_argument("score missing");
    }
    if (population.candidates.empty()) return {};
    const auto levels = assign_levels(population.scores(), mode);
    const auto order = level_order(population.candidates, levels);
    std::vector<Candidate> ranked;
    ranked.reserve(order.size());
    for (auto i : order) ranked.push_back(population.candidates[i]);
    return ranked;
}

}  // namespace eot
