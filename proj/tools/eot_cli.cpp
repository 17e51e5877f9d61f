// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

// Command-line front end. Talks to the engine only through the C API in eot/eot.h.

#include <CLI11.hpp>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eot/eot.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct ConfigDeleter {
    void operator()(eot_config* c) const { eot_config_destroy(c); }
};
struct SessionDeleter {
    void operator()(eot_session* s) const { eot_session_destroy(s); }
};
struct StringDeleter {
    void operator()(char* s) const { eot_string_free(s); }
};
using ConfigPtr = std::unique_ptr<eot_config, ConfigDeleter>;
using SessionPtr = std::unique_ptr<eot_session, SessionDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int exit_code(eot_status status) {
    switch (status) {
        case EOT_OK: return kExitOk;
        case EOT_ERROR_CONFIG:
        case EOT_ERROR_INVALID_ARGUMENT: return kExitConfig;
        default: return kExitRuntime;
    }
}

int report(eot_status status, const std::string& context) {
    std::cerr << "eot: " << context << ": " << eot_last_error() << '\n';
    return exit_code(status);
}

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool mock = false;
    std::optional<int> jobs;
    std::vector<std::string> overrides;
};

/// Config file first, then --set overrides, then dedicated flags.
int build_config(const GlobalOptions& opts, ConfigPtr& out) {
    eot_config* raw = nullptr;
    if (auto st = eot_config_create(&raw); st != EOT_OK) return report(st, "config");
    out.reset(raw);

    if (!opts.config_path.empty()) {
        if (auto st = eot_config_load(out.get(), opts.config_path.c_str()); st != EOT_OK) {
            return report(st, "config");
        }
    }
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "eot: --set expects key=value, got '" << kv << "'\n";
            return kExitConfig;
        }
        const auto key = kv.substr(0, eq);
        const auto value = kv.substr(eq + 1);
        if (auto st = eot_config_set(out.get(), key.c_str(), value.c_str()); st != EOT_OK) {
            return report(st, "--set " + key);
        }
    }
    const auto set = [&](const char* key, const std::string& value) {
        return eot_config_set(out.get(), key, value.c_str());
    };
    if (opts.seed) {
        if (auto st = set("search.seed", std::to_string(*opts.seed)); st != EOT_OK) return report(st, "--seed");
    }
    if (opts.mock) {
        if (auto st = set("backend.mock", "true"); st != EOT_OK) return report(st, "--mock");
    }
    if (opts.jobs) {
        if (auto st = set("eval.jobs", std::to_string(*opts.jobs)); st != EOT_OK) return report(st, "--jobs");
    }
    return kExitOk;
}

int cmd_ask(const ConfigPtr& config, const std::string& question, const std::string& image,
            const std::string& trace_path, const std::string& result_path) {
    eot_session* raw = nullptr;
    if (auto st = eot_session_create(config.get(), &raw); st != EOT_OK) return report(st, "ask");
    SessionPtr session(raw);

    char* answer_raw = nullptr;
    const auto st = eot_session_ask(session.get(), question.c_str(), image.empty() ? nullptr : image.c_str(),
                                    &answer_raw);
    if (!trace_path.empty()) {
        // Written even on failure so the calls made so far can be inspected.
        if (auto ts = eot_session_write_trace(session.get(), trace_path.c_str()); ts != EOT_OK) {
            return report(ts, "trace");
        }
    }
    if (st != EOT_OK) return report(st, "ask");
    StringPtr answer(answer_raw);

    if (!result_path.empty()) {
        char* json_raw = nullptr;
        if (auto rs = eot_session_result_json(session.get(), &json_raw); rs != EOT_OK) return report(rs, "result");
        StringPtr json(json_raw);
        std::FILE* f = std::fopen(result_path.c_str(), "wb");
        if (!f) {
            std::cerr << "eot: cannot write " << result_path << '\n';
            return kExitRuntime;
        }
        std::fputs(json.get(), f);
        std::fputc('\n', f);
        std::fclose(f);
    }
    std::cout << answer.get() << '\n';
    return kExitOk;
}

void print_summary(const nlohmann::json& s) {
    std::cout << "questions: " << s.value("completed", 0) << " completed, " << s.value("failed", 0) << " failed\n\n";
    std::cout << std::left << std::setw(10) << "k" << "Pass@k\n";
    for (const auto& [k, v] : s.at("pass_at").items()) {
        std::cout << std::left << std::setw(10) << k << std::fixed << std::setprecision(4) << v.get<double>() << '\n';
    }
    std::cout << '\n'
              << "final-answer accuracy: " << std::fixed << std::setprecision(4)
              << s.value("final_accuracy", 0.0) << '\n';
    const auto& calls = s.at("calls");
    std::cout << "model calls: " << calls.value("total", 0) << " total (" << calls.value("search", 0) << " search, "
              << calls.value("aggregate", 0) << " aggregate)\n";
    std::cout << "search calls per answer: " << std::setprecision(4) << s.value("search_calls_per_answer", 0.0)
              << '\n';
}

int cmd_eval(const ConfigPtr& config, const std::string& dataset, const std::string& out_dir,
             const std::string& k_list) {
    if (!k_list.empty()) {
        if (auto st = eot_config_set(config.get(), "eval.k_list", k_list.c_str()); st != EOT_OK) {
            return report(st, "--k-list");
        }
    }
    char* summary_raw = nullptr;
    const auto st = eot_eval(config.get(), dataset.empty() ? nullptr : dataset.c_str(),
                             out_dir.empty() ? nullptr : out_dir.c_str(), &summary_raw);
    StringPtr summary(summary_raw);
    if (summary) print_summary(nlohmann::json::parse(summary.get()));
    if (st != EOT_OK) return report(st, "eval");
    return kExitOk;
}

int cmd_validate(const ConfigPtr& config, bool probe) {
    char* report_raw = nullptr;
    const auto st = eot_config_validate(config.get(), probe ? 1 : 0, &report_raw);
    StringPtr json(report_raw);
    if (!json) return report(st, "validate");
    const auto problems = nlohmann::json::parse(json.get());
    if (problems.empty()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    for (const auto& p : problems) std::cerr << "violation: " << p.get<std::string>() << '\n';
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary multi-objective answer search with condensation and aggregation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", eot_version());

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "Config file (INI or JSON)");
    app.add_option("--seed", opts.seed, "Search seed");
    app.add_flag("--mock", opts.mock, "Use the deterministic mock backend");
    app.add_option("--jobs", opts.jobs, "Questions evaluated concurrently")->check(CLI::PositiveNumber);
    app.add_option("--set", opts.overrides, "Override a config key: --set search.n=6")->allow_extra_args(false);

    std::string question, image, trace_path, result_path;
    auto* ask = app.add_subcommand("ask", "Answer one question");
    ask->add_option("question", question, "Question text")->required();
    ask->add_option("--image", image, "Image file sent with the question");
    ask->add_option("--trace", trace_path, "Write the run trace (JSON lines)");
    ask->add_option("--result", result_path, "Write ranked candidates and clusters as JSON");

    std::string dataset, out_dir, k_list;
    auto* eval = app.add_subcommand("eval", "Evaluate a JSONL dataset");
    eval->add_option("dataset", dataset, "Dataset file (default: eval.dataset)");
    eval->add_option("--out", out_dir, "Output directory (default: eval.out)");
    eval->add_option("--k-list", k_list, "Comma-separated k values for Pass@k");

    bool no_probe = false;
    auto* validate = app.add_subcommand("validate", "Check the configuration");
    validate->add_flag("--no-probe", no_probe, "Skip the backend probe call");

    // Global flags are accepted after the subcommand too.
    for (auto* sub : {ask, eval, validate}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    ConfigPtr config;
    if (const int code = build_config(opts, config); code != kExitOk) return code;

    if (*ask) return cmd_ask(config, question, image, trace_path, result_path);
    if (*eval) return cmd_eval(config, dataset, out_dir, k_list);
    return cmd_validate(config, !no_probe);
}
