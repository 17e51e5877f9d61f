// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <mutex>
#include <ostream>

#include <json.hpp>

namespace eot {

/// Receives run-trace events. Implementations must be thread-safe.
class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void emit(const nlohmann::json& event) = 0;
};

/// Writes one compact JSON object per line.
class JsonlTrace final : public TraceSink {
public:
    explicit JsonlTrace(std::ostream& out) : out_(out) {}

    void emit(const nlohmann::json& event) override {
        std::lock_guard lock(mutex_);
        out_ << event.dump() << '\n';
    }

private:
    std::mutex mutex_;
    std::ostream& out_;
};

/// Fans one event out to two sinks; either may be null.
class TeeTrace final : public TraceSink {
public:
    TeeTrace(TraceSink* a, TraceSink* b) : a_(a), b_(b) {}

    void emit(const nlohmann::json& event) override {
        if (a_) a_->emit(event);
        if (b_) b_->emit(event);
    }

private:
    TraceSink* a_;
    TraceSink* b_;
};

}  // namespace eot
