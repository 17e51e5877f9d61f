// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "eot/config.hpp"
#include "eot/error.hpp"

namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const auto path = fs::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    return std::any_of(problems.begin(), problems.end(),
                       [&](const auto& p) { return p.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("set and get round-trip every key") {
    eot::CliConfig cfg;
    for (const auto& key : eot::config_keys()) {
        const auto value = cfg.get(key);
        CHECK_NOTHROW(cfg.set(key, value));
        CHECK(cfg.get(key) == value);
    }
    cfg.set("search.n", "6");
    cfg.set("search.r", "3:1");
    cfg.set("search.level_mode", "classical");
    cfg.set("backend.mock", "yes");
    cfg.set("eval.k_list", "1, 2,16");
    CHECK(cfg.run.n == 6);
    CHECK(cfg.run.r.value() == 3.0);
    CHECK(cfg.run.level_mode == eot::LevelMode::classical);
    CHECK(cfg.backend.mock);
    CHECK(cfg.k_list == std::vector<int>{1, 2, 16});

    CHECK_THROWS_AS(cfg.set("search.bogus", "1"), eot::Error);
    CHECK_THROWS_AS(cfg.set("search.n", "three"), eot::Error);
    CHECK_THROWS_AS(cfg.set("backend.mock", "maybe"), eot::Error);
    CHECK_THROWS_AS(cfg.set("search.level_mode", "best"), eot::Error);
}

TEST_CASE("load_file: INI") {
    const auto path = write_temp("eot-test.ini",
                                 "[search]\nn = 4\nt = 1\nkappa = 3\n\n[backend]\nmock = true\n\n[eval]\nk_list = 1,4\n");
    eot::CliConfig cfg;
    cfg.load_file(path);
    CHECK(cfg.run.n == 4);
    CHECK(cfg.run.t == 1);
    CHECK(cfg.backend.mock);
    CHECK(cfg.k_list == std::vector<int>{1, 4});
    fs::remove(path);

    const auto commented = write_temp("eot-commented.ini",
                                      "[search]\nn = 5   ; initial candidates\nr = 3:1 # ratio\n[backend]\n"
                                      "system_prompt = a;b\n");
    cfg.load_file(commented);
    CHECK(cfg.run.n == 5);
    CHECK(cfg.run.r.value() == 3.0);
    CHECK(cfg.backend.system_prompt == "a;b");
    fs::remove(commented);

    const auto bad = write_temp("eot-bad.ini", "[search]\nwhatever = 1\n");
    CHECK_THROWS_AS(cfg.load_file(bad), eot::Error);
    fs::remove(bad);
}

TEST_CASE("load_file: JSON, flat or nested, including a summary") {
    const auto flat = write_temp("eot-flat.json", R"({"search.n": 5, "backend.mock": true})");
    const auto nested = write_temp("eot-nested.json", R"({"search": {"n": 7, "r": "1:1"}})");
    eot::CliConfig cfg;
    cfg.load_file(flat);
    CHECK(cfg.run.n == 5);
    CHECK(cfg.backend.mock);
    cfg.load_file(nested);
    CHECK(cfg.run.n == 7);
    CHECK(cfg.run.r.value() == 1.0);

    // A summary written by an eval run reproduces that run's config.
    eot::CliConfig original;
    original.set("search.seed", "99");
    original.set("search.kappa", "4");
    const auto summary = write_temp("eot-summary.json", nlohmann::ordered_json{{"schema", "x"}, {"config", original.to_json()}}.dump());
    eot::CliConfig restored;
    restored.load_file(summary);
    CHECK(restored.entries() == original.entries());
    for (const auto& p : {flat, nested, summary}) fs::remove(p);
}

TEST_CASE("load_file: missing file") {
    eot::CliConfig cfg;
    CHECK_THROWS_WITH_AS(cfg.load_file("/nonexistent/eot.ini"), "config file not found: /nonexistent/eot.ini",
                         eot::Error);
}

TEST_CASE("validate") {
    eot::CliConfig cfg;
    CHECK(mentions(eot::validate(cfg, false), "no backend"));

    cfg.backend.mock = true;
    CHECK(eot::validate(cfg, true).empty());

    cfg.set("search.m", "5");
    CHECK(mentions(eot::validate(cfg, false), "nothing would survive"));
    cfg.set("search.m", "1");

    cfg.set("search.t", "0");
    CHECK(mentions(eot::validate(cfg, false), "more clusters than points"));
    cfg.set("search.t", "2");

    cfg.backend.mock = false;
    cfg.backend.endpoint = "ftp://host/x";
    const auto problems = eot::validate(cfg, false);
    CHECK(mentions(problems, "http://"));
    CHECK(mentions(problems, "backend.model"));

    cfg.backend.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.backend.model = "m";
    cfg.backend.max_attempts = 1;
    cfg.backend.timeout_ms = 300;
    CHECK(eot::validate(cfg, false).empty());
    CHECK(mentions(eot::validate(cfg, true), "backend probe failed"));

    cfg.embedding.provider = "http";
    CHECK(mentions(eot::validate(cfg, false), "embedding.endpoint"));
    cfg.embedding.provider = "trigram";
    cfg.prompts_dir = "/nonexistent/prompts";
    CHECK(mentions(eot::validate(cfg, false), "prompt directory not found"));
}

TEST_CASE("factories") {
    eot::CliConfig cfg;
    cfg.backend.mock = true;
    CHECK(eot::make_backend(cfg) != nullptr);
    CHECK(eot::make_embedder(cfg) != nullptr);
    cfg.embedding.provider = "word2vec";
    CHECK_THROWS_AS(eot::make_embedder(cfg), eot::Error);
    const auto policy = eot::make_retry_policy(cfg);
    CHECK(policy.max_attempts == 3);
    CHECK(policy.base_delay == std::chrono::milliseconds(500));
}
