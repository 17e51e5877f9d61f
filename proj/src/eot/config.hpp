// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eot/backend.hpp"
#include "eot/embedding.hpp"
#include "eot/engine.hpp"
#include "eot/prompts.hpp"

namespace eot {

struct BackendSettings {
    bool mock = false;
    std::vector<std::string> mock_answers;  // empty: the mock's default pool
    std::string endpoint;
    std::string model;
    std::string system_prompt;
    int timeout_ms = 120000;
    int max_attempts = 3;
    int backoff_ms = 500;
};

struct EmbeddingSettings {
    std::string provider = "trigram";  // trigram | http
    std::string endpoint;
    int dimension = static_cast<int>(HashedTrigramEmbedder::kDefaultDimension);
};

/// Everything the CLI resolves before running: search parameters, backend and
/// embedding settings, prompt directory and evaluation options.
///
/// Settings are addressed by dotted keys ("search.n", "backend.mock", ...). Config
/// files are INI ("[search]\nn = 3") or JSON; a summary.json written by an eval
/// run is accepted as-is, its "config" object is used.
struct CliConfig {
    RunConfig run;
    BackendSettings backend;
    EmbeddingSettings embedding;
    std::string prompts_dir;  // empty: built-in templates
    std::string dataset;
    std::vector<int> k_list{1, 4, 8};
    std::string out_dir = "eot-out";
    int jobs = 1;

    /// Throws a config error for unknown keys or unparseable values.
    void set(std::string_view key, std::string_view value);
    [[nodiscard]] std::string get(std::string_view key) const;

    /// Every key with its current value, in a fixed order.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> entries() const;
    [[nodiscard]] nlohmann::ordered_json to_json() const;

    /// Applies a config file on top of the current values.
    void load_file(const std::filesystem::path& path);
};

/// All keys understood by `CliConfig::set`.
const std::vector<std::string>& config_keys();

/// Static checks (and, with `probe`, one backend round trip when not mocked).
std::vector<std::string> validate(const CliConfig& config, bool probe);

std::unique_ptr<Backend> make_backend(const CliConfig& config);
std::unique_ptr<EmbeddingProvider> make_embedder(const CliConfig& config);
PromptTemplates make_templates(const CliConfig& config);
RetryPolicy make_retry_policy(const CliConfig& config);

/// API key for the model endpoint (EOT_API_KEY) or empty.
std::string api_key_from_env();

}  // namespace eot
