// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include <doctest.h>

#include <random>
#include <set>

#include "eot/condense.hpp"
#include "eot/embedding.hpp"
#include "eot/error.hpp"
#include "support/oracles.hpp"

namespace {

eot::DistanceMatrix line(const std::vector<double>& xs) {
    eot::DistanceMatrix d(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) d.set_symmetric(i, j, std::abs(xs[i] - xs[j]));
    }
    return d;
}

std::set<std::set<std::size_t>> partition(const std::vector<eot::MedoidCluster>& clusters) {
    std::set<std::set<std::size_t>> out;
    for (const auto& c : clusters) out.emplace(c.members.begin(), c.members.end());
    return out;
}

eot::Population population(const std::vector<std::string>& texts, const std::vector<double>& quality) {
    eot::Population pop;
    pop.query.question = "q";
    for (std::size_t i = 0; i < texts.size(); ++i) {
        eot::Candidate c;
        c.id = static_cast<eot::CandidateId>(i);
        c.text = texts[i];
        c.quality = quality[i];
        c.novelty = 0.0;
        pop.candidates.push_back(c);
    }
    return pop;
}

class FailingBackend final : public eot::Backend {
public:
    std::string send(const eot::ModelRequest&) override { throw eot::RequestRejected("HTTP 400"); }
};

class RecordingBackend final : public eot::Backend {
public:
    eot::ModelRequest last;
    std::string send(const eot::ModelRequest& r) override {
        last = r;
        return "The Answer is \\boxed{5}";
    }
};

}  // namespace

TEST_CASE("k_medoids: points on a line") {
    const auto d = line({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        eot::Rng rng(seed);
        const auto clusters = eot::k_medoids(d, 2, rng);
        REQUIRE(clusters.size() == 2);
        CHECK(partition(clusters) == std::set<std::set<std::size_t>>{{0, 1, 2}, {3, 4, 5}});
        CHECK(clusters[0].medoid == 1);
        CHECK(clusters[1].medoid == 4);
        CHECK(eot::pam_objective(d, clusters) == doctest::Approx(4.0));
    }
}

TEST_CASE("k_medoids: kappa = n gives singletons and kappa = 1 the 1-median") {
    const auto d = line({0.0, 3.0, 4.0, 9.0});
    eot::Rng rng(1);
    const auto all = eot::k_medoids(d, 4, rng);
    CHECK(partition(all) == std::set<std::set<std::size_t>>{{0}, {1}, {2}, {3}});
    CHECK(eot::pam_objective(d, all) == 0.0);

    const auto one = eot::k_medoids(d, 1, rng);
    REQUIRE(one.size() == 1);
    // Sums: 16, 10, 10, 22. The lower index wins the tie.
    CHECK(one[0].medoid == 1);
}

TEST_CASE("k_medoids: duplicates and ties") {
    eot::DistanceMatrix zero(5);
    eot::Rng rng(3);
    const auto clusters = eot::k_medoids(zero, 2, rng);
    std::size_t covered = 0;
    for (const auto& c : clusters) covered += c.members.size();
    CHECK(covered == 5);
    CHECK(eot::pam_objective(zero, clusters) == 0.0);
    for (const auto& c : clusters) CHECK(std::find(c.members.begin(), c.members.end(), c.medoid) != c.members.end());
}

TEST_CASE("k_medoids: errors") {
    eot::Rng rng(0);
    CHECK_THROWS_WITH_AS(eot::k_medoids(line({0.0, 1.0}), 3, rng), "more clusters than points", eot::Error);
    CHECK_THROWS_AS(eot::k_medoids(line({0.0, 1.0}), 0, rng), eot::Error);
    CHECK_THROWS_AS(eot::k_medoids(eot::DistanceMatrix{}, 1, rng), eot::Error);
}

TEST_CASE("k_medoids: objective never increases and reaches the optimum") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 4 + trial % 9;
        const std::size_t kappa = 1 + trial % 4;
        eot::DistanceMatrix d(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) d.set_symmetric(i, j, unit(gen));
        }
        eot::Rng rng(static_cast<std::uint64_t>(trial));
        const auto clusters = eot::k_medoids(d, kappa, rng);
        const auto& traj = eot::last_k_medoids_trajectory();
        REQUIRE_FALSE(traj.empty());
        for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj[i] <= traj[i - 1]);
        CHECK(traj.back() == doctest::Approx(eot::pam_objective(d, clusters)));
        CHECK(eot::pam_objective(d, clusters) == doctest::Approx(oracle::best_medoid_cost(d, n, kappa)).epsilon(1e-12));
        // Clusters come back in ascending medoid order.
        for (std::size_t c = 1; c < clusters.size(); ++c) CHECK(clusters[c - 1].medoid < clusters[c].medoid);
    }
}

TEST_CASE("k_medoids: two planted groups match the best 2-partition") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> noise(0.0, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs;
        for (int i = 0; i < 4; ++i) xs.push_back(noise(gen));
        for (int i = 0; i < 4; ++i) xs.push_back(5.0 + noise(gen));
        const auto d = line(xs);
        eot::Rng rng(static_cast<std::uint64_t>(trial));
        const auto [a, b] = oracle::best_two_partition(d, xs.size());
        CHECK(partition(eot::k_medoids(d, 2, rng)) == std::set<std::set<std::size_t>>{a, b});
    }
}

TEST_CASE("condense: clusters ranked by average quality") {
    const std::vector<std::string> texts{
        "Add the two numbers to get five",  "Add the two numbers to get five.", "Subtract three from eight",
        "Subtract three from eight now",    "Draw a number line and count on",  "Draw a number line and count on!"};
    const auto pop = population(texts, {0.9, 0.7, 0.2, 0.4, 0.6, 0.5});
    eot::HashedTrigramEmbedder embedder;
    eot::Rng rng(2);
    const auto out = eot::condense(pop, 3, 1, rng, embedder);
    REQUIRE(out.kept.size() == 2);
    REQUIRE(out.dropped.size() == 1);
    CHECK(out.kept[0].member_ids == std::vector<eot::CandidateId>{0, 1});
    CHECK(out.kept[0].avg_quality == doctest::Approx(0.8));
    CHECK(out.kept[1].member_ids == std::vector<eot::CandidateId>{4, 5});
    CHECK(out.dropped[0].member_ids == std::vector<eot::CandidateId>{2, 3});
    CHECK(out.medoids == std::vector<eot::CandidateId>{out.kept[0].medoid_id, out.kept[1].medoid_id});
}

TEST_CASE("condense: equal averages drop the later cluster") {
    const auto pop = population({"alpha beta gamma", "one two three four", "zzzz yyyy xxxx"}, {0.5, 0.5, 0.5});
    eot::HashedTrigramEmbedder embedder;
    eot::Rng rng(0);
    const auto out = eot::condense(pop, 3, 1, rng, embedder);
    REQUIRE(out.dropped.size() == 1);
    CHECK(out.dropped[0].medoid_id == 2);
    CHECK(out.medoids == std::vector<eot::CandidateId>{0, 1});
}

TEST_CASE("condense: errors") {
    const auto pop = population({"a", "b", "c"}, {0.1, 0.2, 0.3});
    eot::HashedTrigramEmbedder embedder;
    eot::Rng rng(0);
    CHECK_THROWS_WITH_AS(eot::condense(pop, 2, 2, rng, embedder), "nothing would survive", eot::Error);
    CHECK_THROWS_WITH_AS(eot::condense(pop, 4, 1, rng, embedder), "more clusters than points", eot::Error);
    auto unscored = pop;
    unscored.candidates[1].quality.reset();
    CHECK_THROWS_AS(eot::condense(unscored, 2, 0, rng, embedder), eot::Error);
}

TEST_CASE("aggregate: one call listing surviving medoids best first") {
    const auto pop = population({"first \\boxed{5}", "second \\boxed{7}", "third \\boxed{2}"}, {0.3, 0.9, 0.6});
    eot::HashedTrigramEmbedder embedder;
    eot::Rng rng(0);
    const auto condensed = eot::condense(pop, 3, 1, rng, embedder);
    CHECK(condensed.medoids == std::vector<eot::CandidateId>{1, 2});

    RecordingBackend backend;
    eot::CallLedger ledger;
    eot::ModelClient client(backend, ledger);
    const auto templates = eot::PromptTemplates::defaults();
    const auto reply = eot::aggregate(pop.query, condensed, pop, client, templates);
    CHECK(reply == "The Answer is \\boxed{5}");
    CHECK(ledger.size() == 1);
    CHECK(backend.last.kind == eot::CallKind::aggregate);
    CHECK(backend.last.answers == std::vector<std::string>{"second \\boxed{7}", "third \\boxed{2}"});
    const auto& prompt = backend.last.prompt;
    CHECK(prompt.find("Answer 1:\nsecond") != std::string::npos);
    CHECK(prompt.find("Answer 2:\nthird") != std::string::npos);
    CHECK(prompt.find("first \\boxed{5}") == std::string::npos);

    FailingBackend failing;
    eot::CallLedger ledger2;
    eot::ModelClient failing_client(failing, ledger2);
    try {
        eot::aggregate(pop.query, condensed, pop, failing_client, templates);
        FAIL("expected an exception");
    } catch (const eot::Error& e) {
        CHECK(std::string(e.what()).rfind("aggregation failed", 0) == 0);
    }
}
