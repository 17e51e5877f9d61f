// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "eot/embedding.hpp"
#include "eot/engine.hpp"
#include "eot/error.hpp"
#include "eot/trace.hpp"
#include "support/oracles.hpp"

namespace {

eot::RetryPolicy no_sleep() {
    eot::RetryPolicy p;
    p.sleep = [](std::chrono::milliseconds) {};
    return p;
}

// Mock replies, except that score requests get an answer with no number in it.
class UnscorableBackend final : public eot::Backend {
public:
    explicit UnscorableBackend(std::uint64_t seed) : mock_(seed) {}
    std::string send(const eot::ModelRequest& r) override {
        return r.kind == eot::CallKind::score ? "I cannot judge this." : mock_.send(r);
    }

private:
    eot::MockBackend mock_;
};

struct Harness {
    eot::RunConfig cfg;
    eot::MockBackend backend;
    eot::CallLedger ledger;
    eot::HashedTrigramEmbedder embedder;
    eot::PromptTemplates templates = eot::PromptTemplates::defaults();
    eot::ModelClient client;

    explicit Harness(eot::RunConfig c) : cfg(c), backend(c.seed), client(backend, ledger, no_sleep()) {}

    eot::Population run() {
        eot::SearchEngine engine(cfg, client, embedder, templates);
        return engine.run_search({"What is 2+3?", nullptr, "5"});
    }
};

eot::RunConfig config(int n, int t, std::uint64_t seed = 1) {
    eot::RunConfig cfg;
    cfg.n = n;
    cfg.t = t;
    cfg.k = std::min(3, n);
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("Ratio parsing") {
    CHECK(eot::Ratio::parse("2:1").value() == 2.0);
    CHECK(eot::Ratio::parse("3:2").value() == 1.5);
    CHECK(eot::Ratio::parse("0.5").value() == 0.5);
    CHECK(eot::Ratio::parse("2:1").str() == "2:1");
    CHECK_THROWS_AS(eot::Ratio::parse("two"), eot::Error);
    CHECK_THROWS_AS(eot::Ratio::parse("1:0"), eot::Error);
    CHECK_THROWS_AS(eot::Ratio::parse("-1"), eot::Error);
}

TEST_CASE("offspring_split") {
    const auto split = [](std::size_t b, double r) {
        const auto s = eot::offspring_split(b, eot::Ratio{r, 1.0});
        return std::pair{s.crossover, s.mutation};
    };
    CHECK(split(3, 2.0) == std::pair<std::size_t, std::size_t>{2, 1});
    CHECK(split(6, 2.0) == std::pair<std::size_t, std::size_t>{4, 2});
    CHECK(split(12, 2.0) == std::pair<std::size_t, std::size_t>{8, 4});
    CHECK(split(4, 1.0) == std::pair<std::size_t, std::size_t>{2, 2});
    CHECK(split(2, 2.0) == std::pair<std::size_t, std::size_t>{1, 1});
    // Extreme ratios still leave one of each.
    CHECK(split(3, 100.0) == std::pair<std::size_t, std::size_t>{2, 1});
    CHECK(split(3, 0.01) == std::pair<std::size_t, std::size_t>{1, 2});
    CHECK_THROWS_AS(eot::offspring_split(1, eot::Ratio{}), eot::Error);
}

TEST_CASE("RunConfig violations") {
    eot::RunConfig cfg;
    CHECK(cfg.violations().empty());
    CHECK(cfg.final_population_size() == 12);

    cfg.n = 1;
    CHECK_FALSE(cfg.search_violations().empty());
    cfg = {};
    cfg.k = 4;
    CHECK_FALSE(cfg.search_violations().empty());
    cfg = {};
    cfg.m = 5;
    const auto v = cfg.violations();
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("nothing would survive") != std::string::npos);
    cfg = {};
    cfg.t = 0;
    cfg.kappa = 4;
    CHECK(cfg.violations().size() == 1);
    CHECK(cfg.violations()[0].find("more clusters than points") != std::string::npos);
    cfg = {};
    cfg.t = 20;
    CHECK_FALSE(cfg.search_violations().empty());
}

TEST_CASE("initialize issues N generations and one reference") {
    Harness h(config(4, 0));
    eot::SearchEngine engine(h.cfg, h.client, h.embedder, h.templates);
    const auto pop = engine.initialize({"q", nullptr, std::nullopt});
    CHECK(pop.candidates.size() == 4);
    CHECK_FALSE(pop.reference.empty());
    CHECK(h.ledger.count(eot::CallKind::generate) == 4);
    CHECK(h.ledger.count(eot::CallKind::reference) == 1);
    CHECK(h.ledger.size() == 5);
    std::set<std::string> texts;
    for (const auto& c : pop.candidates) {
        CHECK_FALSE(c.scored());
        texts.insert(c.text);
    }
    CHECK(texts.size() == 4);
}

TEST_CASE("run_search: counts, doubling and lineage") {
    for (auto [n, t] : std::vector<std::pair<int, int>>{{2, 0}, {2, 3}, {3, 2}, {5, 1}}) {
        CAPTURE(n);
        CAPTURE(t);
        Harness h(config(n, t));
        const auto pop = h.run();
        const std::size_t size = static_cast<std::size_t>(n) << t;
        CHECK(pop.candidates.size() == size);
        CHECK(h.ledger.search_calls() == 2 * size + 1);
        CHECK(h.ledger.count(eot::CallKind::score) == size);
        CHECK(h.ledger.count(eot::CallKind::aggregate) == 0);

        std::map<eot::CandidateId, const eot::Candidate*> by_id;
        for (const auto& c : pop.candidates) by_id[c.id] = &c;
        for (std::size_t i = 0; i < pop.candidates.size(); ++i) {
            const auto& c = pop.candidates[i];
            CHECK(c.id == static_cast<eot::CandidateId>(i));
            CHECK(c.scored());
            CHECK(*c.quality >= 0.0);
            CHECK(*c.quality <= 1.0);
            CHECK(*c.novelty >= 0.0);
            CHECK(*c.novelty <= 2.0);
            for (auto p : c.lineage.parents) {
                REQUIRE(by_id.contains(p));
                CHECK(by_id[p]->generation < c.generation);
            }
            if (c.lineage.kind == eot::Lineage::Kind::crossover) {
                CHECK(c.lineage.parents[0] != c.lineage.parents[1]);
            }
        }
        // Each generation g >= 1 holds n * 2^(g-1) offspring in the configured split.
        for (int g = 1; g <= t; ++g) {
            std::size_t cross = 0, mut = 0;
            for (const auto& c : pop.candidates) {
                if (c.generation != g) continue;
                (c.lineage.kind == eot::Lineage::Kind::crossover ? cross : mut)++;
            }
            const auto expected = eot::offspring_split(static_cast<std::size_t>(n) << (g - 1), h.cfg.r);
            CHECK(cross == expected.crossover);
            CHECK(mut == expected.mutation);
        }
    }
}

TEST_CASE("run_search is deterministic and independent of call concurrency") {
    Harness a(config(3, 2, 77));
    auto cfg = config(3, 2, 77);
    cfg.parallel_calls = 4;
    Harness b(cfg);
    Harness c(config(3, 2, 78));
    const auto pa = a.run();
    const auto pb = b.run();
    const auto pc = c.run();
    CHECK(pa.candidates == pb.candidates);
    CHECK(pa.reference == pb.reference);
    CHECK(pa.candidates != pc.candidates);
}

TEST_CASE("unscorable replies fall back to quality zero after the retry budget") {
    auto cfg = config(2, 1);
    cfg.score_attempts = 2;
    UnscorableBackend backend(cfg.seed);
    eot::CallLedger ledger;
    eot::ModelClient client(backend, ledger, no_sleep());
    eot::HashedTrigramEmbedder embedder;
    const auto templates = eot::PromptTemplates::defaults();
    std::ostringstream events;
    eot::JsonlTrace trace(events);
    eot::SearchEngine engine(cfg, client, embedder, templates, &trace);
    const auto pop = engine.run_search({"q", nullptr, std::nullopt});
    CHECK(pop.candidates.size() == 4);
    for (const auto& c : pop.candidates) CHECK(*c.quality == 0.0);
    CHECK(ledger.count(eot::CallKind::score) == 4 * 2);
    CHECK(events.str().find("\"event\":\"warning\"") != std::string::npos);
}

TEST_CASE("rank_answers follows level order") {
    Harness h(config(3, 2, 5));
    const auto pop = h.run();
    const auto ranked = eot::rank_answers(pop);
    REQUIRE(ranked.size() == pop.candidates.size());

    // Oracle: levels by dominated-count, quality descending inside, id ascending on ties.
    std::vector<oracle::Point> pts;
    for (const auto& c : pop.candidates) pts.push_back({*c.quality, *c.novelty});
    std::vector<eot::CandidateId> expected;
    for (const auto& level : oracle::count_levels(pts)) {
        std::vector<std::size_t> members(level.begin(), level.end());
        std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return *pop.candidates[a].quality > *pop.candidates[b].quality;
        });
        for (auto i : members) expected.push_back(pop.candidates[i].id);
    }
    std::vector<eot::CandidateId> got;
    for (const auto& c : ranked) got.push_back(c.id);
    CHECK(got == expected);

    auto unscored = pop;
    unscored.candidates[0].quality.reset();
    CHECK_THROWS_AS(eot::rank_answers(unscored), eot::Error);
}
