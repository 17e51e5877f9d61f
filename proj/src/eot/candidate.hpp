// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace eot {

using CandidateId = std::int64_t;

/// Engine-wide RNG. All draws go through `uniform_index` so results do not
/// depend on the standard library's distribution implementations.
using Rng = std::mt19937_64;

/// Unbiased draw from [0, n). `n` must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

struct Lineage {
    enum class Kind { initial, crossover, mutation };

    Kind kind = Kind::initial;
    std::vector<CandidateId> parents;

    static Lineage initial() { return {}; }
    static Lineage crossover(CandidateId a, CandidateId b) { return {Kind::crossover, {a, b}}; }
    static Lineage mutation(CandidateId p) { return {Kind::mutation, {p}}; }

    friend bool operator==(const Lineage&, const Lineage&) = default;
};

const char* to_string(Lineage::Kind kind);

struct Candidate {
    CandidateId id = 0;
    std::string text;
    std::optional<double> quality;  // normalized to [0, 1]
    std::optional<double> novelty;  // in [0, 2]
    int generation = 0;
    Lineage lineage;

    [[nodiscard]] bool scored() const { return quality.has_value() && novelty.has_value(); }

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

}  // namespace eot
