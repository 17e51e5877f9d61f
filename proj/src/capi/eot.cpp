// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/eot.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eot/answer_format.hpp"
#include "eot/config.hpp"
#include "eot/error.hpp"
#include "eot/eval.hpp"
#include "eot/metrics.hpp"
#include "eot/pipeline.hpp"

struct eot_config {
    eot::CliConfig value;
};

namespace {

thread_local std::string last_error;

/// Buffers trace events in memory.
class BufferTrace final : public eot::TraceSink {
public:
    void emit(const nlohmann::json& event) override {
        std::lock_guard lock(mutex_);
        events_.push_back(event);
    }
    std::vector<nlohmann::json> take() {
        std::lock_guard lock(mutex_);
        return std::exchange(events_, {});
    }

private:
    std::mutex mutex_;
    std::vector<nlohmann::json> events_;
};

eot_status status_of(eot::ErrorKind kind) {
    switch (kind) {
        case eot::ErrorKind::invalid_argument: return EOT_ERROR_INVALID_ARGUMENT;
        case eot::ErrorKind::config: return EOT_ERROR_CONFIG;
        case eot::ErrorKind::io: return EOT_ERROR_IO;
        case eot::ErrorKind::backend: return EOT_ERROR_BACKEND;
        case eot::ErrorKind::runtime: return EOT_ERROR_RUNTIME;
    }
    return EOT_ERROR_RUNTIME;
}

template <class Fn>
eot_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const eot::Error& e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return EOT_ERROR_RUNTIME;
    } catch (const std::exception& e) {
        last_error = e.what();
        return EOT_ERROR_RUNTIME;
    } catch (...) {
        last_error = "unknown error";
        return EOT_ERROR_RUNTIME;
    }
}

eot_status fail(eot_status status, const char* message) {
    last_error = message;
    return status;
}

char* duplicate(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

}  // namespace

struct eot_session {
    eot::CliConfig config;
    std::unique_ptr<eot::Backend> backend;
    std::unique_ptr<eot::EmbeddingProvider> embedder;
    eot::PromptTemplates templates;
    std::optional<eot::Solution> last;
    std::vector<nlohmann::json> trace;
};

extern "C" {

const char* eot_version(void) {
    return "1.0.0";
}

const char* eot_status_string(eot_status status) {
    switch (status) {
        case EOT_OK: return "ok";
        case EOT_ERROR_INVALID_ARGUMENT: return "invalid argument";
        case EOT_ERROR_CONFIG: return "configuration error";
        case EOT_ERROR_IO: return "i/o error";
        case EOT_ERROR_BACKEND: return "backend error";
        case EOT_ERROR_RUNTIME: return "runtime error";
    }
    return "unknown status";
}

const char* eot_last_error(void) {
    return last_error.c_str();
}

void eot_string_free(char* s) {
    std::free(s);
}

eot_status eot_config_create(eot_config** out) {
    if (!out) return fail(EOT_ERROR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        *out = new eot_config{};
        return EOT_OK;
    });
}

void eot_config_destroy(eot_config* config) {
    delete config;
}

eot_status eot_config_load(eot_config* config, const char* path) {
    if (!config || !path) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        config->value.load_file(path);
        return EOT_OK;
    });
}

eot_status eot_config_set(eot_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        config->value.set(key, value);
        return EOT_OK;
    });
}

eot_status eot_config_get(const eot_config* config, const char* key, char** value) {
    if (!config || !key || !value) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *value = duplicate(config->value.get(key));
        return EOT_OK;
    });
}

eot_status eot_config_to_json(const eot_config* config, char** json) {
    if (!config || !json) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *json = duplicate(config->value.to_json().dump(2));
        return EOT_OK;
    });
}

eot_status eot_config_validate(const eot_config* config, int probe_backend, char** report) {
    if (!config || !report) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto problems = eot::validate(config->value, probe_backend != 0);
        *report = duplicate(nlohmann::json(problems).dump(2));
        if (problems.empty()) return EOT_OK;
        last_error = problems.front();
        return EOT_ERROR_CONFIG;
    });
}

eot_status eot_session_create(const eot_config* config, eot_session** out) {
    if (!config || !out) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto problems = eot::validate(config->value, false);
        if (!problems.empty()) throw eot::config_error(problems.front());
        auto session = std::make_unique<eot_session>();
        session->config = config->value;
        session->backend = eot::make_backend(session->config);
        session->embedder = eot::make_embedder(session->config);
        session->templates = eot::make_templates(session->config);
        *out = session.release();
        return EOT_OK;
    });
}

void eot_session_destroy(eot_session* session) {
    delete session;
}

eot_status eot_session_ask(eot_session* session, const char* question, const char* image_path, char** answer) {
    if (!session || !question || !answer) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        eot::QueryContext query;
        query.question = question;
        if (image_path) query.image = std::make_shared<const eot::ImagePayload>(eot::load_image(image_path));

        BufferTrace trace;
        const eot::PipelineContext services{*session->backend, *session->embedder, session->templates,
                                            eot::make_retry_policy(session->config)};
        session->last.reset();
        session->trace.clear();
        try {
            session->last = eot::solve(query, session->config.run, services, &trace);
        } catch (...) {
            session->trace = trace.take();
            throw;
        }
        session->trace = trace.take();
        *answer = duplicate(session->last->final_answer);
        return EOT_OK;
    });
}

eot_status eot_session_result_json(const eot_session* session, char** json) {
    if (!session || !json) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    if (!session->last) return fail(EOT_ERROR_INVALID_ARGUMENT, "no completed question in this session");
    return guarded([&] {
        const auto& s = *session->last;
        nlohmann::ordered_json j;
        nlohmann::ordered_json ranked = nlohmann::ordered_json::array();
        for (const auto& c : s.ranked) {
            const auto boxed = eot::extract_boxed(c.text);
            ranked.push_back({{"id", c.id},
                              {"generation", c.generation},
                              {"lineage", eot::to_string(c.lineage.kind)},
                              {"parents", c.lineage.parents},
                              {"quality", c.quality.value_or(0.0)},
                              {"novelty", c.novelty.value_or(0.0)},
                              {"boxed", boxed ? nlohmann::ordered_json(*boxed) : nlohmann::ordered_json(nullptr)},
                              {"text", c.text}});
        }
        const auto cluster = [](const eot::Cluster& c) {
            return nlohmann::ordered_json{
                {"medoid", c.medoid_id}, {"members", c.member_ids}, {"avg_quality", c.avg_quality}};
        };
        nlohmann::ordered_json kept = nlohmann::ordered_json::array();
        nlohmann::ordered_json dropped = nlohmann::ordered_json::array();
        for (const auto& c : s.condensed.kept) kept.push_back(cluster(c));
        for (const auto& c : s.condensed.dropped) dropped.push_back(cluster(c));
        j["reference"] = s.population.reference;
        j["ranked"] = std::move(ranked);
        j["clusters"] = {{"kept", std::move(kept)}, {"dropped", std::move(dropped)}};
        j["final_answer"] = s.final_answer;
        j["calls"] = {{"total", s.calls.size()}, {"search", s.search_calls}, {"aggregate", s.aggregate_calls}};
        *json = duplicate(j.dump(2));
        return EOT_OK;
    });
}

size_t eot_session_call_count(const eot_session* session) {
    return session && session->last ? session->last->calls.size() : 0;
}

size_t eot_session_call_count_kind(const eot_session* session, eot_call_kind kind) {
    if (!session || !session->last) return 0;
    size_t n = 0;
    for (const auto& c : session->last->calls) {
        if (static_cast<int>(c.kind) == static_cast<int>(kind)) ++n;
    }
    return n;
}

eot_status eot_session_write_trace(const eot_session* session, const char* path) {
    if (!session || !path) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw eot::io_error(std::string("cannot write trace ") + path);
        for (const auto& event : session->trace) out << event.dump() << '\n';
        if (!out) throw eot::io_error(std::string("failed writing trace ") + path);
        return EOT_OK;
    });
}

eot_status eot_eval(const eot_config* config, const char* dataset_path, const char* out_dir, char** summary) {
    if (!config) return fail(EOT_ERROR_INVALID_ARGUMENT, "null config");
    return guarded([&] {
        const auto& cfg = config->value;
        const std::string dataset = dataset_path ? dataset_path : cfg.dataset;
        if (dataset.empty()) throw eot::config_error("no dataset given (eval.dataset)");
        const std::string out = out_dir ? out_dir : cfg.out_dir;

        const auto problems = eot::validate(cfg, false);
        if (!problems.empty()) throw eot::config_error(problems.front());

        const auto records = eot::load_dataset(dataset);
        auto backend = eot::make_backend(cfg);
        auto embedder = eot::make_embedder(cfg);
        const auto templates = eot::make_templates(cfg);
        const eot::PipelineContext services{*backend, *embedder, templates, eot::make_retry_policy(cfg)};

        eot::EvalOptions options;
        options.k_list = cfg.k_list;
        options.jobs = cfg.jobs;
        options.image_root = std::filesystem::path(dataset).parent_path();

        const auto report = eot::run_dataset(records, cfg.run, options, services);
        const auto echo = cfg.to_json();
        eot::write_report(report, out, echo, cfg.run.seed);
        if (summary) *summary = duplicate(report.summary(echo, cfg.run.seed).dump(2));
        if (report.failed) {
            last_error = std::to_string(report.failures()) + " of " + std::to_string(report.results.size()) +
                         " questions failed";
            return EOT_ERROR_RUNTIME;
        }
        return EOT_OK;
    });
}

eot_status eot_edit_distance(const char* a, const char* b, size_t* out) {
    if (!a || !b || !out) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = eot::edit_distance(std::string_view(a), std::string_view(b));
        return EOT_OK;
    });
}

eot_status eot_extract_boxed(const char* reply, char** out) {
    if (!reply || !out) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto boxed = eot::extract_boxed(reply);
        *out = boxed ? duplicate(*boxed) : nullptr;
        return EOT_OK;
    });
}

eot_status eot_pass_at_k(const char* const* ranked, size_t count, const char* truth, int k, int* out) {
    if ((!ranked && count > 0) || !truth || !out) return fail(EOT_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::vector<std::optional<std::string>> answers;
        answers.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            answers.push_back(ranked[i] ? std::optional<std::string>(ranked[i]) : std::nullopt);
        }
        *out = eot::pass_at_k(answers, truth, k);
        return EOT_OK;
    });
}

}  // extern "C"
