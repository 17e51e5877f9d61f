// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/eval.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "eot/error.hpp"
#include "eot/parallel.hpp"

namespace eot {

namespace {

using ojson = nlohmann::ordered_json;

std::string iso8601(std::chrono::system_clock::time_point tp) {
    const auto t = std::chrono::system_clock::to_time_t(tp);
    std::tm utc{};
    gmtime_r(&t, &utc);
    std::ostringstream ss;
    ss << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + path.string());
    out << content;
    if (!out) throw io_error("failed writing " + path.string());
}

}  // namespace

std::vector<DatasetRecord> parse_dataset(std::istream& in, const std::string& source) {
    std::vector<DatasetRecord> records;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto where = source + ":" + std::to_string(line_no);
        DatasetRecord r;
        try {
            const auto j = nlohmann::json::parse(line);
            if (!j.is_object()) throw invalid_argument(where + ": expected a JSON object");
            const auto& id = j.at("id");
            r.id = id.is_string() ? id.get<std::string>() : id.dump();
            r.question = j.at("question").get<std::string>();
            const auto& answer = j.at("answer");
            r.answer = answer.is_string() ? answer.get<std::string>() : answer.dump();
            if (j.contains("image") && !j["image"].is_null()) r.image = j["image"].get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw invalid_argument(where + ": malformed record: " + e.what());
        }
        if (r.answer.empty()) throw invalid_argument(where + ": empty answer");
        if (std::find(seen.begin(), seen.end(), r.id) != seen.end()) {
            throw invalid_argument(where + ": duplicate id '" + r.id + "'");
        }
        seen.push_back(r.id);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read dataset " + path.string());
    return parse_dataset(in, path.string());
}

ImagePayload load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read image " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto ext = lowercase(path.extension().string());
    std::string type = "application/octet-stream";
    if (ext == ".png") type = "image/png";
    else if (ext == ".jpg" || ext == ".jpeg") type = "image/jpeg";
    else if (ext == ".gif") type = "image/gif";
    else if (ext == ".webp") type = "image/webp";
    return {ss.str(), type};
}

int pass_at_k(std::span<const std::optional<std::string>> ranked, std::string_view truth, int k) {
    if (k < 1) throw invalid_argument("k must be at least 1");
    const auto limit = std::min(ranked.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < limit; ++i) {
        if (ranked[i] && answers_match(*ranked[i], truth)) return 1;
    }
    return 0;
}

EvalResult evaluate_solution(const std::string& question_id, const Solution& solution, std::string_view truth,
                             std::span<const int> k_list) {
    EvalResult r;
    r.question_id = question_id;
    for (const auto& c : solution.ranked) r.ranked_answers.push_back(extract_boxed(c.text));
    for (int k : k_list) r.pass_at[k] = pass_at_k(r.ranked_answers, truth, k);
    r.final_answer = solution.final_answer;
    r.final_extracted = extract_boxed(solution.final_answer);
    r.final_correct = r.final_extracted && answers_match(*r.final_extracted, truth) ? 1 : 0;
    r.call_count = solution.calls.size();
    r.search_calls = solution.search_calls;
    r.population_size = solution.population.candidates.size();
    return r;
}

ojson to_json(const EvalResult& r) {
    ojson j;
    j["schema"] = kResultsSchema;
    j["question_id"] = r.question_id;
    j["status"] = r.ok ? "ok" : "failed";
    if (!r.ok) {
        j["error"] = r.error;
        return j;
    }
    ojson ranked = ojson::array();
    for (const auto& a : r.ranked_answers) ranked.push_back(a ? ojson(*a) : ojson(nullptr));
    j["ranked_answers"] = std::move(ranked);
    ojson pass = ojson::object();
    for (const auto& [k, v] : r.pass_at) pass[std::to_string(k)] = v;
    j["pass_at"] = std::move(pass);
    j["final_answer"] = r.final_answer;
    j["final_extracted"] = r.final_extracted ? ojson(*r.final_extracted) : ojson(nullptr);
    j["final_correct"] = r.final_correct;
    j["call_count"] = r.call_count;
    j["search_calls"] = r.search_calls;
    j["population_size"] = r.population_size;
    return j;
}

double mean_pass_at(std::span<const EvalResult> results, int k) {
    std::size_t n = 0;
    int hits = 0;
    for (const auto& r : results) {
        if (!r.ok) continue;
        ++n;
        const auto it = r.pass_at.find(k);
        if (it != r.pass_at.end()) hits += it->second;
    }
    return n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
}

std::size_t EvalReport::failures() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.ok; }));
}

std::string EvalReport::results_jsonl() const {
    std::string out;
    for (const auto& r : results) out += to_json(r).dump() + "\n";
    return out;
}

ojson EvalReport::summary(const ojson& config, std::uint64_t seed) const {
    std::size_t completed = 0, total_calls = 0, search_calls = 0, answers = 0;
    int final_hits = 0;
    for (const auto& r : results) {
        if (!r.ok) continue;
        ++completed;
        total_calls += r.call_count;
        search_calls += r.search_calls;
        answers += r.population_size;
        final_hits += r.final_correct;
    }
    const auto mean = [&](double num) { return completed == 0 ? 0.0 : num / static_cast<double>(completed); };

    ojson s;
    s["schema"] = kResultsSchema;
    s["status"] = failed ? "failed" : "ok";
    s["questions"] = results.size();
    s["completed"] = completed;
    s["failed"] = failures();
    ojson pass = ojson::object();
    for (int k : k_list) pass[std::to_string(k)] = mean_pass_at(results, k);
    s["pass_at"] = std::move(pass);
    s["final_accuracy"] = mean(final_hits);
    s["calls"] = {{"total", total_calls},
                  {"search", search_calls},
                  {"aggregate", total_calls - search_calls},
                  {"per_question", mean(static_cast<double>(total_calls))}};
    s["answers"] = answers;
    s["search_calls_per_answer"] = answers == 0 ? 0.0 : static_cast<double>(search_calls) / static_cast<double>(answers);
    s["answer_normalization"] =
        "trim; collapse whitespace; strip trailing period; canonical decimal numbers";
    s["seed"] = seed;
    s["config"] = config;
    return s;
}

ojson EvalReport::timing() const {
    ojson t;
    t["schema"] = "eot-timing/1";
    t["started_at"] = iso8601(started);
    t["finished_at"] = iso8601(finished);
    double total_seconds = 0.0;
    std::size_t answers = 0;
    ojson per = ojson::array();
    for (const auto& r : results) {
        const double seconds = static_cast<double>(r.wall_time.count()) / 1000.0;
        per.push_back({{"question_id", r.question_id}, {"wall_time_s", seconds}});
        if (r.ok) {
            total_seconds += seconds;
            answers += r.population_size;
        }
    }
    t["questions"] = std::move(per);
    t["time_per_answer_s"] = answers == 0 ? 0.0 : total_seconds / static_cast<double>(answers);
    return t;
}

EvalReport run_dataset(std::span<const DatasetRecord> dataset, const RunConfig& config, const EvalOptions& options,
                       const PipelineContext& services) {
    if (dataset.empty()) throw invalid_argument("dataset is empty");
    for (int k : options.k_list) {
        if (k < 1) throw config_error("k values must be at least 1");
    }
    const auto problems = config.violations();
    if (!problems.empty()) throw config_error(problems.front());

    EvalReport report;
    report.k_list = options.k_list;
    report.results.resize(dataset.size());
    report.started = std::chrono::system_clock::now();

    parallel_for(dataset.size(), options.jobs, [&](std::size_t i) {
        const auto& record = dataset[i];
        const auto start = std::chrono::steady_clock::now();
        EvalResult result;
        try {
            QueryContext query;
            query.question = record.question;
            query.ground_truth = record.answer;
            if (record.image) {
                query.image = std::make_shared<const ImagePayload>(load_image(options.image_root / *record.image));
            }
            result = evaluate_solution(record.id, solve(query, config, services), record.answer, options.k_list);
        } catch (const std::exception& e) {
            result = EvalResult{};
            result.question_id = record.id;
            result.ok = false;
            result.error = e.what();
        }
        result.wall_time =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        report.results[i] = std::move(result);
    });

    report.finished = std::chrono::system_clock::now();
    report.failed = report.failures() * 2 >= dataset.size();
    return report;
}

void write_report(const EvalReport& report, const std::filesystem::path& dir, const ojson& config,
                  std::uint64_t seed) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir.string() + ": " + ec.message());
    write_file(dir / "results.jsonl", report.results_jsonl());
    write_file(dir / "summary.json", report.summary(config, seed).dump(2) + "\n");
    write_file(dir / "timing.json", report.timing().dump(2) + "\n");
}

}  // namespace eot
