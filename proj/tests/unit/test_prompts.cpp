// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "eot/error.hpp"
#include "eot/prompts.hpp"

namespace fs = std::filesystem;

TEST_CASE("Template rendering") {
    const eot::Template t("Q: ${question}\nA: ${answer} (${question})");
    CHECK(t.placeholders() == std::vector<std::string>{"question", "answer"});
    CHECK(t.render({{"question", std::string("2+3")}, {"answer", std::string("5")}}) == "Q: 2+3\nA: 5 (2+3)");
    CHECK_THROWS_WITH_AS((void)t.render({{"question", std::string("x")}}), "unbound: answer", eot::Error);

    // Substituted text is not rescanned.
    CHECK(t.render({{"question", std::string("${answer}")}, {"answer", std::string("y")}}) ==
          "Q: ${answer}\nA: y (${answer})");
}

TEST_CASE("Template literals that only look like placeholders") {
    CHECK(eot::Template("cost $5 and ${} and ${a b} and \\boxed{}").placeholders().empty());
    CHECK(eot::Template("${x").render({}) == "${x");
}

TEST_CASE("Template list bindings") {
    const eot::Template t("Candidates:\n${answers}\nDone");
    const auto out = t.render({{"answers", std::vector<std::string>{"first", "second"}}});
    CHECK(out == "Candidates:\nAnswer 1:\nfirst\n\nAnswer 2:\nsecond\nDone");
}

TEST_CASE("default templates pass their own check") {
    const auto t = eot::PromptTemplates::defaults();
    CHECK(t.check().empty());
    CHECK(t.query.text().find("\\boxed{") != std::string::npos);
    CHECK(t.score.text().find("Score:") != std::string::npos);
}

TEST_CASE("load_dir overrides some roles and keeps the rest") {
    const auto dir = fs::temp_directory_path() / "eot-prompts-test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "mutate.txt") << "Rewrite ${answer} differently.";
    std::ofstream(dir / "score.txt") << "Rate ${answer}.";

    const auto t = eot::PromptTemplates::load_dir(dir);
    CHECK(t.mutate.text() == "Rewrite ${answer} differently.");
    CHECK(t.query.text() == eot::PromptTemplates::defaults().query.text());
    const auto problems = t.check();
    // The score override lacks ${reference} and the "Score:" instruction.
    CHECK(problems.size() == 2);
    fs::remove_all(dir);

    CHECK_THROWS_AS(eot::PromptTemplates::load_dir(dir), eot::Error);
}
