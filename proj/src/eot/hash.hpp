// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <cstdint>
#include <string_view>

namespace eot {

// Stable across processes and platforms; used wherever reproducible hashing is required.

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = kFnvOffset) {
    for (char c : bytes) {
        state ^= static_cast<unsigned char>(c);
        state *= kFnvPrime;
    }
    return state;
}

constexpr std::uint64_t fnv1a_u64(std::uint64_t value, std::uint64_t state = kFnvOffset) {
    for (int i = 0; i < 8; ++i) {
        state ^= (value >> (8 * i)) & 0xFF;
        state *= kFnvPrime;
    }
    return state;
}

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace eot
