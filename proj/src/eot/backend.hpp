// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eot/error.hpp"
#include "eot/trace.hpp"

namespace eot {

enum class CallKind { generate, score, crossover, mutate, aggregate, reference };
inline constexpr std::size_t kCallKindCount = 6;

const char* to_string(CallKind kind);

/// Opaque image bytes; forwarded to the model untouched.
struct ImagePayload {
    std::string bytes;
    std::string media_type;  // e.g. "image/png"
};

struct SamplingParams {
    double temperature = 0.0;
    int max_tokens = 1024;
    std::uint64_t seed = 0;
};

/// Default sampling: 0.8 for the answer-producing kinds, 0.0 for score and aggregate.
SamplingParams default_sampling(CallKind kind);

struct ModelRequest {
    CallKind kind = CallKind::generate;
    std::string prompt;
    std::shared_ptr<const ImagePayload> image;
    SamplingParams params;
    /// Distinguishes otherwise identical requests (the N initial generations share a prompt).
    std::uint64_t sample_id = 0;

    // The texts embedded in `prompt`, kept structured for backends that need them (the mock).
    std::optional<std::string> reference;
    std::vector<std::string> answers;
};

/// One attempt against a backend.
struct ModelCall {
    CallKind kind = CallKind::generate;
    std::string prompt;
    bool has_image = false;
    std::string reply;
    std::string error;  // empty on success
    std::chrono::microseconds latency{0};
    int attempt = 1;
};

/// Append-only, internally synchronized record of every backend attempt.
class CallLedger {
public:
    void record(ModelCall call);

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t count(CallKind kind) const;
    /// generate + crossover + mutate + score + reference: the search's inference steps.
    [[nodiscard]] std::size_t search_calls() const;
    [[nodiscard]] std::vector<ModelCall> snapshot() const;

private:
    mutable std::mutex mutex_;
    std::vector<ModelCall> calls_;
    std::array<std::size_t, kCallKindCount> counts_{};
};

/// Retryable failure (connection refused, timeout, 5xx, malformed reply).
class TransportError : public Error {
public:
    explicit TransportError(const std::string& what) : Error(ErrorKind::backend, what) {}
};

/// Non-retryable rejection (HTTP 4xx).
class RequestRejected : public Error {
public:
    explicit RequestRejected(const std::string& what) : Error(ErrorKind::backend, what) {}
};

/// A model endpoint. `send` performs exactly one round trip and must be safe to
/// call concurrently.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string send(const ModelRequest& request) = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_delay{500};
    double multiplier = 2.0;
    /// Replaced in tests to avoid real sleeps.
    std::function<void(std::chrono::milliseconds)> sleep;
};

/// Front door for all model traffic: retries transport errors with exponential
/// backoff, records one ModelCall per attempt, and mirrors each into the trace.
class ModelClient {
public:
    ModelClient(Backend& backend, CallLedger& ledger, RetryPolicy policy = {}, TraceSink* trace = nullptr);

    /// Throws "backend unavailable" after exhausting retries, or "request rejected"
    /// immediately on a 4xx.
    std::string complete(const ModelRequest& request);

    [[nodiscard]] CallLedger& ledger() noexcept { return ledger_; }

private:
    Backend& backend_;
    CallLedger& ledger_;
    RetryPolicy policy_;
    TraceSink* trace_;
};

struct MockOptions {
    /// Boxed values the mock answers with.
    std::vector<std::string> answer_pool{"2", "3", "5", "7", "11", "13"};
};

/// Deterministic offline backend. Replies are a pure function of
/// (seed, kind, prompt, sample_id):
///   - generate/reference/crossover/mutate: a short synthetic solution ending in
///     "The Answer is \boxed{v}" with v from the answer pool;
///   - score: "Score: q", q in [60, 100] when the answer's boxed value matches the
///     reference's (or the texts are equal), otherwise q in [0, 59];
///   - aggregate: the first embedded answer, verbatim.
class MockBackend final : public Backend {
public:
    explicit MockBackend(std::uint64_t seed, MockOptions options = {});

    std::string send(const ModelRequest& request) override;

private:
    std::uint64_t seed_;
    MockOptions options_;
};

struct HttpBackendOptions {
    std::string endpoint;  // full URL of a chat-completions style endpoint
    std::string model;
    std::string api_key;  // bearer token; usually from EOT_API_KEY
    std::string system_prompt;
    std::chrono::milliseconds timeout{120000};
};

/// Chat-completions client. The request body carries model, messages, temperature,
/// max_tokens and seed; the reply is read from choices[0].message.content.
class HttpBackend final : public Backend {
public:
    explicit HttpBackend(HttpBackendOptions options);

    std::string send(const ModelRequest& request) override;

    /// Request body for `request`; exposed for wire-format tests.
    [[nodiscard]] std::string request_body(const ModelRequest& request) const;

private:
    HttpBackendOptions options_;
};

/// Standard base64 (with padding).
std::string base64_encode(std::string_view bytes);

}  // namespace eot
