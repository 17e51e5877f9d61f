// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "eot/candidate.hpp"

namespace eot {

/// Objective vector of one candidate; both components are maximized.
struct ScorePair {
    double quality = 0.0;  // [0, 1]
    double novelty = 0.0;  // [0, 2]

    friend bool operator==(const ScorePair&, const ScorePair&) = default;
};

/// Throws if either component is non-finite or outside its range.
void validate(const ScorePair& score);

/// Strict Pareto dominance: `a` is no worse in both objectives and better in at least one.
[[nodiscard]] bool dominates(const ScorePair& a, const ScorePair& b) noexcept;

/// Partition of a population into ordered levels, level 0 best.
/// Indices refer to positions in the scored population.
struct LevelAssignment {
    std::vector<std::vector<std::size_t>> levels;
    /// Number of population members each candidate dominates.
    std::vector<std::size_t> dominance_count;

    /// Level index of each population member.
    [[nodiscard]] std::vector<std::size_t> level_of() const;
};

enum class LevelMode {
    count,      // group by number of dominated candidates, most first
    classical,  // iterated non-dominated front peeling
};

LevelMode parse_level_mode(std::string_view text);
const char* to_string(LevelMode mode);

/// Groups candidates by how many others they dominate; higher counts rank first.
/// Members of each level are listed in ascending index order.
LevelAssignment assign_levels(std::span<const ScorePair> population);

/// Front peeling: level 0 is the non-dominated set, level 1 the non-dominated set
/// of the remainder, and so on. `dominance_count` is filled as in `assign_levels`.
LevelAssignment assign_levels_classical(std::span<const ScorePair> population);

LevelAssignment assign_levels(std::span<const ScorePair> population, LevelMode mode);

/// Full ordering of the population: level by level, descending quality inside a
/// level, ascending candidate id on ties. Every candidate must carry a quality.
std::vector<std::size_t> level_order(std::span<const Candidate> population, const LevelAssignment& levels);

/// The first `k` candidates of `level_order`.
std::vector<Candidate> select_parents(std::span<const Candidate> population,
                                      const LevelAssignment& levels,
                                      std::size_t k);

}  // namespace eot
