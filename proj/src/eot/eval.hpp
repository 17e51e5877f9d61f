// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eot/answer_format.hpp"
#include "eot/pipeline.hpp"

namespace eot {

inline constexpr const char* kResultsSchema = "eot-results/1";

/// One line of a dataset file: {"id", "question", "image"?, "answer"}.
struct DatasetRecord {
    std::string id;
    std::string question;
    std::optional<std::string> image;  // path relative to the dataset file
    std::string answer;
};

/// Parses JSON lines; blank lines are skipped. Errors cite "<source>:<line>".
std::vector<DatasetRecord> parse_dataset(std::istream& in, const std::string& source = "dataset");
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);

/// Reads an image file; the media type is guessed from the extension.
ImagePayload load_image(const std::filesystem::path& path);

/// 1 when one of the first min(k, |ranked|) answers matches `truth`, else 0.
/// Unparseable answers (nullopt) never match.
int pass_at_k(std::span<const std::optional<std::string>> ranked, std::string_view truth, int k);

struct EvalResult {
    std::string question_id;
    bool ok = true;
    std::string error;
    std::vector<std::optional<std::string>> ranked_answers;
    std::map<int, int> pass_at;
    std::string final_answer;
    std::optional<std::string> final_extracted;
    int final_correct = 0;
    std::size_t call_count = 0;    // every ledger entry for this question
    std::size_t search_calls = 0;  // generate + crossover + mutate + score + reference
    std::size_t population_size = 0;
    std::chrono::milliseconds wall_time{0};
};

/// Scores a finished solution against the ground truth.
EvalResult evaluate_solution(const std::string& question_id, const Solution& solution, std::string_view truth,
                             std::span<const int> k_list);

/// Result line as written to results.jsonl (no wall-clock fields).
nlohmann::ordered_json to_json(const EvalResult& result);

/// Mean Pass@k over successfully evaluated questions.
double mean_pass_at(std::span<const EvalResult> results, int k);

struct EvalOptions {
    std::vector<int> k_list{1, 4, 8};
    int jobs = 1;
    std::filesystem::path image_root;  // base for relative image paths
};

struct EvalReport {
    std::vector<EvalResult> results;  // dataset order
    std::vector<int> k_list;
    bool failed = false;  // at least half of the questions failed
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;

    [[nodiscard]] std::size_t failures() const;
    [[nodiscard]] std::string results_jsonl() const;
    /// Deterministic summary: metrics, call totals, seed and the resolved config.
    [[nodiscard]] nlohmann::ordered_json summary(const nlohmann::ordered_json& config, std::uint64_t seed) const;
    /// Wall-clock data kept out of the summary so reruns stay byte-identical.
    [[nodiscard]] nlohmann::ordered_json timing() const;
};

/// Runs every question; failures are recorded and skipped. Up to `jobs` questions
/// run concurrently; results keep dataset order.
EvalReport run_dataset(std::span<const DatasetRecord> dataset, const RunConfig& config, const EvalOptions& options,
                       const PipelineContext& services);

/// Writes results.jsonl, summary.json and timing.json into `dir`.
void write_report(const EvalReport& report, const std::filesystem::path& dir, const nlohmann::ordered_json& config,
                  std::uint64_t seed);

}  // namespace eot
