// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "eot/error.hpp"

namespace eot {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

void check_inputs(std::span<const std::string> answers, std::span<const Embedding> embeddings) {
    if (answers.size() != embeddings.size()) {
        throw invalid_argument("answer and embedding counts differ");
    }
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        char32_t min = 0;
        if (lead < 0x80) {
            out.push_back(lead);
            ++i;
            continue;
        } else if ((lead & 0xE0) == 0xC0) {
            len = 2, cp = lead & 0x1F, min = 0x80;
        } else if ((lead & 0xF0) == 0xE0) {
            len = 3, cp = lead & 0x0F, min = 0x800;
        } else if ((lead & 0xF8) == 0xF0) {
            len = 4, cp = lead & 0x07, min = 0x10000;
        }
        bool ok = len != 0 && i + len <= text.size();
        for (std::size_t k = 1; ok && k < len; ++k) {
            const auto cont = static_cast<unsigned char>(text[i + k]);
            if ((cont & 0xC0) != 0x80) {
                ok = false;
            } else {
                cp = (cp << 6) | (cont & 0x3F);
            }
        }
        ok = ok && cp >= min && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
        if (ok) {
            out.push_back(cp);
            i += len;
        } else {
            out.push_back(kReplacement);
            ++i;
        }
    }
    return out;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    // Two-row DP over the shorter string.
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({up + 1, row[j - 1] + 1, sub});
            diag = up;
        }
    }
    return row[b.size()];
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    if (a == b) return 0;
    return edit_distance(std::u32string_view(decode_utf8(a)), std::u32string_view(decode_utf8(b)));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw invalid_argument("embedding dimensions differ");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (!(na > 0.0) || !(nb > 0.0) || !std::isfinite(na) || !std::isfinite(nb)) {
        throw invalid_argument("degenerate embedding");
    }
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double semantic_pair_distance(std::span<const double> a, std::span<const double> b) {
    return 0.5 - cosine_similarity(a, b) / 2.0;
}

std::vector<std::vector<std::size_t>> pairwise_edit_distances(std::span<const std::string> answers) {
    const std::size_t n = answers.size();
    std::vector<std::u32string> decoded;
    decoded.reserve(n);
    for (const auto& s : answers) decoded.push_back(decode_utf8(s));

    std::vector<std::vector<std::size_t>> out(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto d = answers[i] == answers[j] ? 0 : edit_distance(decoded[i], decoded[j]);
            out[i][j] = out[j][i] = d;
        }
    }
    return out;
}

std::vector<double> novelty_scores(std::span<const std::string> answers, std::span<const Embedding> embeddings) {
    check_inputs(answers, embeddings);
    const std::size_t n = answers.size();
    if (n < 2) {
        throw invalid_argument("novelty undefined");
    }

    const auto edits = pairwise_edit_distances(answers);
    std::vector<double> edit_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        edit_sum[i] = static_cast<double>(std::accumulate(edits[i].begin(), edits[i].end(), std::size_t{0}));
    }
    const double max_sum = *std::max_element(edit_sum.begin(), edit_sum.end());

    std::vector<double> semantic_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = 1.0 - cosine_similarity(embeddings[i], embeddings[j]);
            semantic_sum[i] += d;
            semantic_sum[j] += d;
        }
    }

    std::vector<double> out(n);
    const double others = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double edit_term = max_sum > 0.0 ? edit_sum[i] / max_sum : 0.0;
        out[i] = edit_term + semantic_sum[i] / (2.0 * others);
    }
    return out;
}

DistanceMatrix ca_distance_matrix(std::span<const std::string> answers, std::span<const Embedding> embeddings) {
    check_inputs(answers, embeddings);
    const std::size_t n = answers.size();
    if (n < 2) {
        throw invalid_argument("distance matrix needs at least two answers");
    }
    const auto edits = pairwise_edit_distances(answers);
    std::size_t max_edit = 0;
    for (const auto& row : edits) max_edit = std::max(max_edit, *std::max_element(row.begin(), row.end()));

    DistanceMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double edit_term =
                max_edit > 0 ? static_cast<double>(edits[i][j]) / static_cast<double>(max_edit) : 0.0;
            out.set_symmetric(i, j, edit_term + semantic_pair_distance(embeddings[i], embeddings[j]));
        }
    }
    return out;
}

double parse_quality(std::string_view reply) {
    std::size_t i = 0;
    while (i < reply.size()) {
        if (!std::isdigit(static_cast<unsigned char>(reply[i]))) {
            ++i;
            continue;
        }
        const bool negative = i > 0 && reply[i - 1] == '-';
        std::size_t j = i;
        while (j < reply.size() && std::isdigit(static_cast<unsigned char>(reply[j]))) ++j;
        const auto digits = reply.substr(i, j - i);
        // Anything longer than three digits (ignoring leading zeros) is out of range.
        const auto first = digits.find_first_not_of('0');
        const auto significant = first == std::string_view::npos ? std::string_view{} : digits.substr(first);
        if (!negative && significant.size() <= 3) {
            int value = 0;
            for (char c : significant) value = value * 10 + (c - '0');
            if (value <= 100) {
                return value / 100.0;
            }
        }
        i = j;
    }
    throw Error(ErrorKind::backend, "unscorable reply");
}

}  // namespace eot
