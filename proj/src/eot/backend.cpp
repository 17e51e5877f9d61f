// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/backend.hpp"

#include <cmath>
#include <thread>

namespace eot {

const char* to_string(CallKind kind) {
    switch (kind) {
        case CallKind::generate: return "generate";
        case CallKind::score: return "score";
        case CallKind::crossover: return "crossover";
        case CallKind::mutate: return "mutate";
        case CallKind::aggregate: return "aggregate";
        case CallKind::reference: return "reference";
    }
    return "unknown";
}

SamplingParams default_sampling(CallKind kind) {
    SamplingParams p;
    switch (kind) {
        case CallKind::generate:
        case CallKind::reference:
        case CallKind::crossover:
        case CallKind::mutate: p.temperature = 0.8; break;
        case CallKind::score:
        case CallKind::aggregate: p.temperature = 0.0; break;
    }
    return p;
}

void CallLedger::record(ModelCall call) {
    std::lock_guard lock(mutex_);
    ++counts_[static_cast<std::size_t>(call.kind)];
    calls_.push_back(std::move(call));
}

std::size_t CallLedger::size() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
}

std::size_t CallLedger::count(CallKind kind) const {
    std::lock_guard lock(mutex_);
    return counts_[static_cast<std::size_t>(kind)];
}

std::size_t CallLedger::search_calls() const {
    std::lock_guard lock(mutex_);
    return counts_[static_cast<std::size_t>(CallKind::generate)] +
           counts_[static_cast<std::size_t>(CallKind::crossover)] +
           counts_[static_cast<std::size_t>(CallKind::mutate)] +
           counts_[static_cast<std::size_t>(CallKind::score)] +
           counts_[static_cast<std::size_t>(CallKind::reference)];
}

std::vector<ModelCall> CallLedger::snapshot() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

ModelClient::ModelClient(Backend& backend, CallLedger& ledger, RetryPolicy policy, TraceSink* trace)
    : backend_(backend), ledger_(ledger), policy_(std::move(policy)), trace_(trace) {
    if (policy_.max_attempts < 1) policy_.max_attempts = 1;
    if (!policy_.sleep) {
        policy_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
}

std::string ModelClient::complete(const ModelRequest& request) {
    std::string last_error;
    for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
        ModelCall call;
        call.kind = request.kind;
        call.prompt = request.prompt;
        call.has_image = request.image != nullptr;
        call.attempt = attempt;

        const auto start = std::chrono::steady_clock::now();
        bool retry = false;
        bool rejected = false;
        try {
            call.reply = backend_.send(request);
        } catch (const RequestRejected& e) {
            call.error = e.what();
            rejected = true;
        } catch (const TransportError& e) {
            call.error = e.what();
            retry = true;
        }
        call.latency = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);

        if (trace_) {
            nlohmann::json event{{"event", "call"},
                                 {"kind", to_string(call.kind)},
                                 {"attempt", call.attempt},
                                 {"sample_id", request.sample_id},
                                 {"has_image", call.has_image},
                                 {"latency_us", call.latency.count()},
                                 {"prompt", call.prompt},
                                 {"reply", call.reply}};
            if (!call.error.empty()) event["error"] = call.error;
            trace_->emit(event);
        }
        std::string reply = call.reply;
        last_error = call.error;
        ledger_.record(std::move(call));

        if (rejected) {
            throw Error(ErrorKind::backend, "request rejected: " + last_error);
        }
        if (!retry) {
            return reply;
        }
        if (attempt < policy_.max_attempts) {
            const double factor = std::pow(policy_.multiplier, attempt - 1);
            policy_.sleep(std::chrono::milliseconds(
                static_cast<std::int64_t>(static_cast<double>(policy_.base_delay.count()) * factor)));
        }
    }
    throw Error(ErrorKind::backend, "backend unavailable: " + last_error);
}

}  // namespace eot
