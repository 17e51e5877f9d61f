// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eot/metrics.hpp"

namespace eot {

/// Semantic encoder. Implementations must be deterministic for a given input and
/// safe to call from several threads at once.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual Embedding embed(std::string_view text) = 0;
    virtual std::vector<Embedding> embed_batch(std::span<const std::string> texts);
};

/// Offline encoder: term frequencies of character trigrams hashed into `dimension`
/// buckets, L2-normalized. Text is lowercased (ASCII) and padded with a boundary
/// marker on each side. The empty string maps to the unit vector e1.
class HashedTrigramEmbedder final : public EmbeddingProvider {
public:
    static constexpr std::size_t kDefaultDimension = 512;
    static constexpr std::uint64_t kDefaultSeed = 0x5eed'e07ULL;

    explicit HashedTrigramEmbedder(std::size_t dimension = kDefaultDimension, std::uint64_t seed = kDefaultSeed);

    Embedding embed(std::string_view text) override;

    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

private:
    std::size_t dimension_;
    std::uint64_t seed_;
};

struct HttpEmbedderOptions {
    std::string endpoint;  // full URL, e.g. http://localhost:8080/embed
    std::string api_key;   // sent as a bearer token when non-empty
    std::chrono::milliseconds timeout{30000};
};

/// Remote encoder: POST {"input": [...]} -> {"embeddings": [[...], ...]}.
/// Failures raise "embedding unavailable".
class HttpEmbedder final : public EmbeddingProvider {
public:
    explicit HttpEmbedder(HttpEmbedderOptions options);

    Embedding embed(std::string_view text) override;
    std::vector<Embedding> embed_batch(std::span<const std::string> texts) override;

private:
    HttpEmbedderOptions options_;
};

}  // namespace eot
