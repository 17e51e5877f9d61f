// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include <array>
#include <cstdio>

#include "eot/answer_format.hpp"
#include "eot/backend.hpp"
#include "eot/hash.hpp"

namespace eot {

namespace {

constexpr std::array<const char*, 12> kSteps{
    "First, restate the quantities given in the problem.",
    "Set up an equation relating the unknowns.",
    "Check the units of each term.",
    "Try a small example to test the pattern.",
    "Work backwards from the required quantity.",
    "Label the known lengths on the figure.",
    "Split the problem into two cases and handle each.",
    "Simplify the expression before substituting values.",
    "Estimate the magnitude to sanity-check the result.",
    "Apply the standard formula and compute carefully.",
    "Count the possibilities systematically.",
    "Compare the two candidate values and keep the consistent one.",
};

class Stream {
public:
    explicit Stream(std::uint64_t state) : state_(state) {}
    std::uint64_t next() { return state_ = mix64(state_); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
    std::uint64_t state_;
};

std::string hex16(std::uint64_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04x", static_cast<unsigned>(v & 0xFFFF));
    return buf;
}

std::string solution(Stream& s, std::string_view opener, const std::string& value) {
    std::string text(opener);
    text += " (variant " + hex16(s.next()) + ")";
    const std::size_t steps = 2 + s.below(3);
    for (std::size_t i = 0; i < steps; ++i) {
        text += ' ';
        text += kSteps[s.below(kSteps.size())];
    }
    text += " The Answer is \\boxed{" + value + "}";
    return text;
}

}  // namespace

MockBackend::MockBackend(std::uint64_t seed, MockOptions options) : seed_(seed), options_(std::move(options)) {
    if (options_.answer_pool.empty()) options_.answer_pool.emplace_back("0");
}

std::string MockBackend::send(const ModelRequest& request) {
    std::uint64_t h = fnv1a_u64(seed_);
    h = fnv1a(to_string(request.kind), h);
    h = fnv1a(request.prompt, h);
    h = fnv1a_u64(request.sample_id, h);
    Stream s(h);

    const auto& pool = options_.answer_pool;
    const auto pick = [&] { return pool[s.below(pool.size())]; };

    switch (request.kind) {
        case CallKind::generate:
            return solution(s, "Direct solution", pick());
        case CallKind::reference:
            return solution(s, "Reference solution", pick());
        case CallKind::crossover: {
            std::string value = pick();
            // Three times in four the offspring keeps one parent's answer.
            if (!request.answers.empty() && s.below(4) != 0) {
                if (auto inherited = extract_boxed(request.answers[s.below(request.answers.size())])) {
                    value = *inherited;
                }
            }
            return solution(s, "Combined solution", value);
        }
        case CallKind::mutate: {
            std::string value = pick();
            const auto parent = request.answers.empty() ? std::nullopt : extract_boxed(request.answers.front());
            for (int tries = 0; parent && value == *parent && pool.size() > 1 && tries < 16; ++tries) {
                value = pick();
            }
            return solution(s, "Alternative method", value);
        }
        case CallKind::score: {
            bool match = false;
            if (request.reference && !request.answers.empty()) {
                const auto& answer = request.answers.front();
                const auto a = extract_boxed(answer);
                const auto r = extract_boxed(*request.reference);
                match = answer == *request.reference || (a && r && *a == *r);
            }
            const auto q = match ? 60 + s.below(41) : s.below(60);
            return "Score: " + std::to_string(q);
        }
        case CallKind::aggregate:
            if (!request.answers.empty()) return request.answers.front();
            return solution(s, "Final answer", pick());
    }
    return {};
}

}  // namespace eot
