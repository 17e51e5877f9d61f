// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/candidate.hpp"

#include <limits>

#include "eot/error.hpp"

namespace eot {

std::size_t uniform_index(Rng& rng, std::size_t n) {
    if (n == 0) {
        throw invalid_argument("uniform_index: empty range");
    }
    const std::uint64_t bound = n;
    // Rejection sampling on the largest multiple of `bound`.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = rng();
    while (draw >= limit) {
        draw = rng();
    }
    return static_cast<std::size_t>(draw % bound);
}

const char* to_string(Lineage::Kind kind) {
    switch (kind) {
        case Lineage::Kind::initial: return "initial";
        case Lineage::Kind::crossover: return "crossover";
        case Lineage::Kind::mutation: return "mutation";
    }
    return "unknown";
}

}  // namespace eot
