// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eot {

using Embedding = std::vector<double>;

/// Decodes UTF-8 into Unicode scalar values. Each invalid byte becomes U+FFFD.
std::u32string decode_utf8(std::string_view text);

/// Levenshtein distance over Unicode scalar values with unit costs.
std::size_t edit_distance(std::string_view a, std::string_view b);
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// Cosine similarity clamped to [-1, 1]. Throws "degenerate embedding" on a zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// (1 - cos(a, b)) / 2, in [0, 1].
double semantic_pair_distance(std::span<const double> a, std::span<const double> b);

/// Symmetric n x n matrix stored row-major.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    /// Writes both (i, j) and (j, i).
    void set_symmetric(std::size_t i, std::size_t j, double value) {
        (*this)(i, j) = value;
        (*this)(j, i) = value;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Pairwise edit distances between all answers.
std::vector<std::vector<std::size_t>> pairwise_edit_distances(std::span<const std::string> answers);

/// Novelty of every answer relative to the rest of the set:
///
///   novelty(A) = S(A) / max_B S(B) + 1/(2(n-1)) * sum_{A' != A} (1 - cos(E(A), E(A')))
///
/// where S(A) is the summed edit distance from A to every other answer. When every
/// pairwise edit distance is zero the first term is zero for all answers.
std::vector<double> novelty_scores(std::span<const std::string> answers, std::span<const Embedding> embeddings);

/// Condensation distance: edit(i,j) / max_{k,l} edit(k,l) + semantic_pair_distance(i, j).
/// Zero diagonal; the edit term is zero everywhere when the maximum is zero.
DistanceMatrix ca_distance_matrix(std::span<const std::string> answers, std::span<const Embedding> embeddings);

/// Reads a 0-100 score from a model reply and returns it divided by 100. The first
/// integer in [0, 100] wins; integers out of range are skipped.
/// Throws "unscorable reply" when no such integer exists.
double parse_quality(std::string_view reply);

}  // namespace eot
