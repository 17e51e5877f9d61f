// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/embedding.hpp"

#include <cctype>
#include <cmath>

#include "eot/error.hpp"
#include "eot/hash.hpp"

namespace eot {

std::vector<Embedding> EmbeddingProvider::embed_batch(std::span<const std::string> texts) {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t));
    return out;
}

HashedTrigramEmbedder::HashedTrigramEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
    if (dimension_ == 0) {
        throw invalid_argument("embedding dimension must be positive");
    }
}

Embedding HashedTrigramEmbedder::embed(std::string_view text) {
    Embedding out(dimension_, 0.0);
    if (text.empty()) {
        out[0] = 1.0;
        return out;
    }

    constexpr char32_t kBoundary = 0x02;
    std::u32string padded;
    padded.push_back(kBoundary);
    for (char32_t c : decode_utf8(text)) {
        padded.push_back(c < 0x80 ? static_cast<char32_t>(std::tolower(static_cast<int>(c))) : c);
    }
    padded.push_back(kBoundary);

    const std::uint64_t base = fnv1a_u64(seed_);
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        std::uint64_t h = base;
        for (std::size_t k = 0; k < 3; ++k) h = fnv1a_u64(padded[i + k], h);
        out[mix64(h) % dimension_] += 1.0;
    }

    double norm = 0.0;
    for (double v : out) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : out) v /= norm;
    return out;
}

}  // namespace eot
