// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "eot/default_prompts.hpp"
#include "eot/error.hpp"

namespace eot {

namespace {

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot read template " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Template::Template(std::string text) : text_(std::move(text)) {
    std::string literal;
    std::size_t i = 0;
    while (i < text_.size()) {
        if (text_[i] == '$' && i + 1 < text_.size() && text_[i + 1] == '{') {
            auto close = i + 2;
            while (close < text_.size() && is_name_char(text_[close])) ++close;
            if (close < text_.size() && text_[close] == '}' && close > i + 2) {
                if (!literal.empty()) pieces_.push_back({false, std::move(literal)});
                literal.clear();
                pieces_.push_back({true, text_.substr(i + 2, close - i - 2)});
                i = close + 1;
                continue;
            }
        }
        literal.push_back(text_[i]);
        ++i;
    }
    if (!literal.empty()) pieces_.push_back({false, std::move(literal)});
}

std::string Template::render(const Bindings& bindings) const {
    std::string out;
    for (const auto& piece : pieces_) {
        if (!piece.placeholder) {
            out += piece.value;
            continue;
        }
        auto it = bindings.find(piece.value);
        if (it == bindings.end()) {
            throw invalid_argument("unbound: " + piece.value);
        }
        if (const auto* s = std::get_if<std::string>(&it->second)) {
            out += *s;
        } else {
            const auto& items = std::get<std::vector<std::string>>(it->second);
            for (std::size_t k = 0; k < items.size(); ++k) {
                if (k > 0) out += "\n\n";
                out += "Answer " + std::to_string(k + 1) + ":\n" + items[k];
            }
        }
    }
    return out;
}

std::vector<std::string> Template::placeholders() const {
    std::vector<std::string> names;
    for (const auto& piece : pieces_) {
        if (piece.placeholder && std::find(names.begin(), names.end(), piece.value) == names.end()) {
            names.push_back(piece.value);
        }
    }
    return names;
}

PromptTemplates PromptTemplates::defaults() {
    return {
        Template(default_prompts::query),
        Template(default_prompts::score),
        Template(default_prompts::crossover),
        Template(default_prompts::mutate),
        Template(default_prompts::aggregate),
    };
}

PromptTemplates PromptTemplates::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw config_error("prompt directory not found: " + dir.string());
    }
    auto templates = defaults();
    const auto load = [&](const char* role, Template& slot) {
        const auto path = dir / (std::string(role) + ".txt");
        if (std::filesystem::exists(path)) slot = Template(read_file(path));
    };
    load("query", templates.query);
    load("score", templates.score);
    load("crossover", templates.crossover);
    load("mutate", templates.mutate);
    load("aggregate", templates.aggregate);
    return templates;
}

std::vector<std::string> PromptTemplates::check() const {
    const std::string q = "q";
    std::vector<std::string> problems;
    const auto try_render = [&](const char* role, const Template& t, const Bindings& bindings,
                                std::initializer_list<const char*> required) {
        try {
            (void)t.render(bindings);
        } catch (const Error& e) {
            problems.push_back(std::string(role) + " template: " + e.what());
        }
        const auto names = t.placeholders();
        for (const char* name : required) {
            if (std::find(names.begin(), names.end(), name) == names.end()) {
                problems.push_back(std::string(role) + " template: missing ${" + name + "}");
            }
        }
    };
    try_render("query", query, {{"question", q}}, {"question"});
    try_render("score", score, {{"question", q}, {"reference", std::string("r")}, {"answer", std::string("a")}},
               {"reference", "answer"});
    try_render("crossover", crossover,
               {{"question", q}, {"answer_a", std::string("a")}, {"answer_b", std::string("b")}},
               {"answer_a", "answer_b"});
    try_render("mutate", mutate, {{"question", q}, {"answer", std::string("a")}}, {"answer"});
    try_render("aggregate", aggregate, {{"question", q}, {"answers", std::vector<std::string>{"a", "b"}}},
               {"answers"});
    if (query.text().find("\\boxed{") == std::string::npos) {
        problems.emplace_back("query template: must ask for the \\boxed{} answer format");
    }
    if (score.text().find("Score:") == std::string::npos) {
        problems.emplace_back("score template: must ask for a \"Score: <0-100>\" reply");
    }
    return problems;
}

}  // namespace eot
