// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/moo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "eot/error.hpp"

namespace eot {

namespace {

void require_finite(std::span<const ScorePair> population) {
    for (const auto& s : population) {
        if (!std::isfinite(s.quality) || !std::isfinite(s.novelty)) {
            throw invalid_argument("non-finite score");
        }
    }
}

std::vector<std::size_t> count_dominated(std::span<const ScorePair> population) {
    std::vector<std::size_t> counts(population.size(), 0);
    for (std::size_t i = 0; i < population.size(); ++i) {
        for (std::size_t j = 0; j < population.size(); ++j) {
            if (i != j && dominates(population[i], population[j])) {
                ++counts[i];
            }
        }
    }
    return counts;
}

}  // namespace

void validate(const ScorePair& score) {
    if (!std::isfinite(score.quality) || score.quality < 0.0 || score.quality > 1.0) {
        throw invalid_argument("quality out of range [0,1]: " + std::to_string(score.quality));
    }
    if (!std::isfinite(score.novelty) || score.novelty < 0.0 || score.novelty > 2.0) {
        throw invalid_argument("novelty out of range [0,2]: " + std::to_string(score.novelty));
    }
}

bool dominates(const ScorePair& a, const ScorePair& b) noexcept {
    return a.quality >= b.quality && a.novelty >= b.novelty &&
           (a.quality > b.quality || a.novelty > b.novelty);
}

std::vector<std::size_t> LevelAssignment::level_of() const {
    std::vector<std::size_t> out(dominance_count.size(), 0);
    for (std::size_t l = 0; l < levels.size(); ++l) {
        for (auto i : levels[l]) {
            out[i] = l;
        }
    }
    return out;
}

LevelMode parse_level_mode(std::string_view text) {
    if (text == "count") return LevelMode::count;
    if (text == "classical") return LevelMode::classical;
    throw config_error("unknown level mode '" + std::string(text) + "' (expected count or classical)");
}

const char* to_string(LevelMode mode) {
    return mode == LevelMode::count ? "count" : "classical";
}

LevelAssignment assign_levels(std::span<const ScorePair> population) {
    if (population.empty()) {
        throw invalid_argument("empty population");
    }
    require_finite(population);

    LevelAssignment out;
    out.dominance_count = count_dominated(population);

    std::map<std::size_t, std::vector<std::size_t>, std::greater<>> by_count;
    for (std::size_t i = 0; i < population.size(); ++i) {
        by_count[out.dominance_count[i]].push_back(i);
    }
    for (auto& [count, members] : by_count) {
        out.levels.push_back(std::move(members));
    }
    return out;
}

LevelAssignment assign_levels_classical(std::span<const ScorePair> population) {
    if (population.empty()) {
        throw invalid_argument("empty population");
    }
    require_finite(population);

    LevelAssignment out;
    out.dominance_count = count_dominated(population);

    // dominated_by[i] = number of remaining candidates that dominate i.
    const std::size_t n = population.size();
    std::vector<std::size_t> dominated_by(n, 0);
    std::vector<std::vector<std::size_t>> dominated_set(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(population[i], population[j])) {
                dominated_set[i].push_back(j);
                ++dominated_by[j];
            }
        }
    }

    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < n; ++i) {
        if (dominated_by[i] == 0) front.push_back(i);
    }
    while (!front.empty()) {
        std::vector<std::size_t> next;
        for (auto i : front) {
            for (auto j : dominated_set[i]) {
                if (--dominated_by[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        out.levels.push_back(std::move(front));
        front = std::move(next);
    }
    return out;
}

LevelAssignment assign_levels(std::span<const ScorePair> population, LevelMode mode) {
    return mode == LevelMode::count ? assign_levels(population) : assign_levels_classical(population);
}

std::vector<std::size_t> level_order(std::span<const Candidate> population, const LevelAssignment& levels) {
    std::vector<std::size_t> order;
    order.reserve(population.size());
    for (const auto& level : levels.levels) {
        std::vector<std::size_t> members(level.begin(), level.end());
        for (auto i : members) {
            if (i >= population.size()) {
                throw invalid_argument("level assignment does not match population");
            }
            if (!population[i].quality) {
                throw invalid_argument("score missing for candidate " + std::to_string(population[i].id));
            }
        }
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            const auto qa = *population[a].quality;
            const auto qb = *population[b].quality;
            if (qa != qb) return qa > qb;
            return population[a].id < population[b].id;
        });
        order.insert(order.end(), members.begin(), members.end());
    }
    if (order.size() != population.size()) {
        throw invalid_argument("level assignment does not match population");
    }
    return order;
}

std::vector<Candidate> select_parents(std::span<const Candidate> population,
                                      const LevelAssignment& levels,
                                      std::size_t k) {
    if (k < 1) {
        throw invalid_argument("select_parents: K must be at least 1");
    }
    if (k > population.size()) {
        throw invalid_argument("insufficient candidates");
    }
    const auto order = level_order(population, levels);
    std::vector<Candidate> parents;
    parents.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        parents.push_back(population[order[i]]);
    }
    return parents;
}

}  // namespace eot
