// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>

#include "eot/error.hpp"

namespace eot {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

template <class T>
T parse_integer(std::string_view key, std::string_view text) {
    const auto value_text = trim(text);
    T value{};
    const auto* end = value_text.data() + value_text.size();
    const auto [ptr, ec] = std::from_chars(value_text.data(), end, value);
    if (value_text.empty() || ec != std::errc{} || ptr != end) {
        throw config_error(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

int parse_int(std::string_view key, std::string_view text) { return parse_integer<int>(key, text); }

bool parse_bool(std::string_view key, std::string_view text) {
    std::string v = trim(text);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error(std::string(key) + ": expected a boolean, got '" + std::string(text) + "'");
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string_view rest = text;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        auto item = trim(rest.substr(0, comma));
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

struct Field {
    std::string key;
    std::function<void(CliConfig&, std::string_view)> set;
    std::function<std::string(const CliConfig&)> get;
};

Field int_field(std::string key, int CliConfig::*group_member) {
    return {key, [key, group_member](CliConfig& c, std::string_view v) { c.*group_member = parse_int(key, v); },
            [group_member](const CliConfig& c) { return std::to_string(c.*group_member); }};
}

template <class Group>
Field nested_int(std::string key, Group CliConfig::*group, int Group::*member) {
    return {key, [key, group, member](CliConfig& c, std::string_view v) { (c.*group).*member = parse_int(key, v); },
            [group, member](const CliConfig& c) { return std::to_string((c.*group).*member); }};
}

template <class Group>
Field nested_string(std::string key, Group CliConfig::*group, std::string Group::*member) {
    return {key, [group, member](CliConfig& c, std::string_view v) { (c.*group).*member = trim(v); },
            [group, member](const CliConfig& c) { return (c.*group).*member; }};
}

Field string_field(std::string key, std::string CliConfig::*member) {
    return {key, [member](CliConfig& c, std::string_view v) { c.*member = trim(v); },
            [member](const CliConfig& c) { return c.*member; }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(nested_int("search.n", &CliConfig::run, &RunConfig::n));
        f.push_back(nested_int("search.t", &CliConfig::run, &RunConfig::t));
        f.push_back({"search.r", [](CliConfig& c, std::string_view v) { c.run.r = Ratio::parse(trim(v)); },
                     [](const CliConfig& c) { return c.run.r.str(); }});
        f.push_back(nested_int("search.k", &CliConfig::run, &RunConfig::k));
        f.push_back(nested_int("search.kappa", &CliConfig::run, &RunConfig::kappa));
        f.push_back(nested_int("search.m", &CliConfig::run, &RunConfig::m));
        f.push_back({"search.seed",
                     [](CliConfig& c, std::string_view v) { c.run.seed = parse_integer<std::uint64_t>("search.seed", v); },
                     [](const CliConfig& c) { return std::to_string(c.run.seed); }});
        f.push_back({"search.level_mode",
                     [](CliConfig& c, std::string_view v) { c.run.level_mode = parse_level_mode(trim(v)); },
                     [](const CliConfig& c) { return std::string(to_string(c.run.level_mode)); }});
        f.push_back(nested_int("search.parallel_calls", &CliConfig::run, &RunConfig::parallel_calls));
        f.push_back(nested_int("search.score_attempts", &CliConfig::run, &RunConfig::score_attempts));
        f.push_back(nested_int("search.max_tokens", &CliConfig::run, &RunConfig::max_tokens));

        f.push_back({"backend.mock",
                     [](CliConfig& c, std::string_view v) { c.backend.mock = parse_bool("backend.mock", v); },
                     [](const CliConfig& c) { return std::string(c.backend.mock ? "true" : "false"); }});
        f.push_back({"backend.mock_answers",
                     [](CliConfig& c, std::string_view v) { c.backend.mock_answers = split_list(v); },
                     [](const CliConfig& c) { return join(c.backend.mock_answers); }});
        f.push_back(nested_string("backend.endpoint", &CliConfig::backend, &BackendSettings::endpoint));
        f.push_back(nested_string("backend.model", &CliConfig::backend, &BackendSettings::model));
        f.push_back(nested_string("backend.system_prompt", &CliConfig::backend, &BackendSettings::system_prompt));
        f.push_back(nested_int("backend.timeout_ms", &CliConfig::backend, &BackendSettings::timeout_ms));
        f.push_back(nested_int("backend.max_attempts", &CliConfig::backend, &BackendSettings::max_attempts));
        f.push_back(nested_int("backend.backoff_ms", &CliConfig::backend, &BackendSettings::backoff_ms));

        f.push_back(nested_string("embedding.provider", &CliConfig::embedding, &EmbeddingSettings::provider));
        f.push_back(nested_string("embedding.endpoint", &CliConfig::embedding, &EmbeddingSettings::endpoint));
        f.push_back(nested_int("embedding.dimension", &CliConfig::embedding, &EmbeddingSettings::dimension));

        f.push_back(string_field("prompts.dir", &CliConfig::prompts_dir));

        f.push_back(string_field("eval.dataset", &CliConfig::dataset));
        f.push_back({"eval.k_list",
                     [](CliConfig& c, std::string_view v) {
                         std::vector<int> ks;
                         for (const auto& item : split_list(v)) ks.push_back(parse_int("eval.k_list", item));
                         if (ks.empty()) throw config_error("eval.k_list: at least one k is required");
                         c.k_list = std::move(ks);
                     },
                     [](const CliConfig& c) {
                         std::vector<std::string> items;
                         for (int k : c.k_list) items.push_back(std::to_string(k));
                         return join(items);
                     }});
        f.push_back(string_field("eval.out", &CliConfig::out_dir));
        f.push_back(int_field("eval.jobs", &CliConfig::jobs));
        return f;
    }();
    return table;
}

const Field& field(std::string_view key) {
    for (const auto& f : fields()) {
        if (f.key == key) return f;
    }
    throw config_error("unknown config key '" + std::string(key) + "'");
}

std::string json_scalar(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    if (v.is_array()) {
        std::vector<std::string> items;
        for (const auto& item : v) items.push_back(json_scalar(item, key));
        return join(items);
    }
    throw config_error(key + ": unsupported JSON value");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& f : fields()) out.push_back(f.key);
        return out;
    }();
    return keys;
}

void CliConfig::set(std::string_view key, std::string_view value) {
    field(key).set(*this, value);
}

std::string CliConfig::get(std::string_view key) const {
    return field(key).get(*this);
}

std::vector<std::pair<std::string, std::string>> CliConfig::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
    return out;
}

nlohmann::ordered_json CliConfig::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : entries()) j[k] = v;
    return j;
}

namespace {

// Drops a trailing "; comment" or "# comment". The marker must follow whitespace,
// so values such as "a;b" survive.
std::string strip_inline_comment(const std::string& value) {
    for (std::size_t i = 1; i < value.size(); ++i) {
        if ((value[i] == ';' || value[i] == '#') && std::isspace(static_cast<unsigned char>(value[i - 1]))) {
            auto end = i;
            while (end > 0 && std::isspace(static_cast<unsigned char>(value[end - 1]))) --end;
            return value.substr(0, end);
        }
    }
    return value;
}

}  // namespace

void CliConfig::load_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw config_error("config file not found: " + path.string());
    }
    const auto where = path.string();
    if (path.extension() == ".json") {
        std::ifstream in(path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw config_error(where + ": " + e.what());
        }
        if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
        if (!j.is_object()) throw config_error(where + ": expected a JSON object");
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                for (const auto& [sub, v] : value.items()) set(key + "." + sub, json_scalar(v, key + "." + sub));
            } else {
                set(key, json_scalar(value, key));
            }
        }
        return;
    }

    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(where, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw config_error(e.what());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            // Top-level "key = value" lines must already carry a dotted key.
            set(section, strip_inline_comment(body.data()));
            continue;
        }
        for (const auto& [key, leaf] : body) set(section + "." + key, strip_inline_comment(leaf.data()));
    }
}

std::vector<std::string> validate(const CliConfig& config, bool probe) {
    auto problems = config.run.violations();

    const auto& b = config.backend;
    if (!b.mock) {
        if (b.endpoint.empty()) problems.emplace_back("no backend: set backend.mock = true or backend.endpoint");
        if (!b.endpoint.empty() && b.endpoint.rfind("http://", 0) != 0 && b.endpoint.rfind("https://", 0) != 0) {
            problems.push_back("backend.endpoint must start with http:// or https://");
        }
        if (b.model.empty() && !b.endpoint.empty()) problems.emplace_back("backend.model is required with an endpoint");
    }
    if (b.max_attempts < 1) problems.emplace_back("backend.max_attempts must be at least 1");
    if (b.timeout_ms < 1) problems.emplace_back("backend.timeout_ms must be positive");
    if (b.backoff_ms < 0) problems.emplace_back("backend.backoff_ms must be non-negative");

    const auto& e = config.embedding;
    if (e.provider == "http") {
        if (e.endpoint.empty()) problems.emplace_back("embedding.endpoint is required for the http provider");
    } else if (e.provider != "trigram") {
        problems.push_back("embedding.provider must be trigram or http, got '" + e.provider + "'");
    }
    if (e.dimension < 1) problems.emplace_back("embedding.dimension must be positive");

    for (int k : config.k_list) {
        if (k < 1) problems.push_back("eval.k_list: k must be at least 1, got " + std::to_string(k));
    }
    if (config.jobs < 1) problems.emplace_back("eval.jobs must be at least 1");

    try {
        for (auto& p : make_templates(config).check()) problems.push_back(std::move(p));
    } catch (const Error& err) {
        problems.emplace_back(err.what());
    }

    if (probe && problems.empty() && !b.mock) {
        try {
            auto backend = make_backend(config);
            CallLedger ledger;
            ModelClient client(*backend, ledger, make_retry_policy(config));
            ModelRequest req;
            req.kind = CallKind::generate;
            req.prompt = "Reply with OK.";
            req.params = default_sampling(CallKind::score);
            req.params.max_tokens = 8;
            (void)client.complete(req);
        } catch (const std::exception& err) {
            problems.push_back(std::string("backend probe failed: ") + err.what());
        }
    }
    return problems;
}

std::unique_ptr<Backend> make_backend(const CliConfig& config) {
    const auto& b = config.backend;
    if (b.mock) {
        MockOptions options;
        if (!b.mock_answers.empty()) options.answer_pool = b.mock_answers;
        return std::make_unique<MockBackend>(config.run.seed, std::move(options));
    }
    HttpBackendOptions options;
    options.endpoint = b.endpoint;
    options.model = b.model;
    options.api_key = api_key_from_env();
    options.system_prompt = b.system_prompt;
    options.timeout = std::chrono::milliseconds(b.timeout_ms);
    return std::make_unique<HttpBackend>(std::move(options));
}

std::unique_ptr<EmbeddingProvider> make_embedder(const CliConfig& config) {
    const auto& e = config.embedding;
    if (e.provider == "http") {
        HttpEmbedderOptions options;
        options.endpoint = e.endpoint;
        const char* key = std::getenv("EOT_EMBEDDING_API_KEY");
        options.api_key = key ? key : api_key_from_env();
        return std::make_unique<HttpEmbedder>(std::move(options));
    }
    if (e.provider != "trigram") throw config_error("unknown embedding provider '" + e.provider + "'");
    if (e.dimension < 1) throw config_error("embedding.dimension must be positive");
    return std::make_unique<HashedTrigramEmbedder>(static_cast<std::size_t>(e.dimension));
}

PromptTemplates make_templates(const CliConfig& config) {
    if (config.prompts_dir.empty()) return PromptTemplates::defaults();
    return PromptTemplates::load_dir(config.prompts_dir);
}

RetryPolicy make_retry_policy(const CliConfig& config) {
    RetryPolicy p;
    p.max_attempts = config.backend.max_attempts;
    p.base_delay = std::chrono::milliseconds(config.backend.backoff_ms);
    return p;
}

std::string api_key_from_env() {
    const char* key = std::getenv("EOT_API_KEY");
    return key ? key : "";
}

}  // namespace eot
