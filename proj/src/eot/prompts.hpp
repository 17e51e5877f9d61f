// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace eot {

/// A list binding renders as numbered "Answer i:" blocks separated by blank lines.
using BindingValue = std::variant<std::string, std::vector<std::string>>;
using Bindings = std::map<std::string, BindingValue, std::less<>>;

/// Plain-text template with `${name}` placeholders. Rendering substitutes values
/// verbatim: no escaping, no truncation.
class Template {
public:
    Template() = default;
    explicit Template(std::string text);

    /// Throws "unbound: <name>" when a placeholder has no binding.
    [[nodiscard]] std::string render(const Bindings& bindings) const;

    /// Placeholder names in order of first appearance.
    [[nodiscard]] std::vector<std::string> placeholders() const;

    [[nodiscard]] const std::string& text() const noexcept { return text_; }

private:
    struct Piece {
        bool placeholder = false;
        std::string value;  // literal text or placeholder name
    };

    std::string text_;
    std::vector<Piece> pieces_;
};

/// The five prompt roles. Placeholders:
///   query     ${question}
///   score     ${question} ${reference} ${answer}
///   crossover ${question} ${answer_a} ${answer_b}
///   mutate    ${question} ${answer}
///   aggregate ${question} ${answers} (list)
struct PromptTemplates {
    Template query;
    Template score;
    Template crossover;
    Template mutate;
    Template aggregate;

    /// The texts shipped in prompts/*.txt, compiled in.
    static PromptTemplates defaults();

    /// Reads <dir>/<role>.txt for each role; roles without a file keep the default.
    static PromptTemplates load_dir(const std::filesystem::path& dir);

    /// Renders every template with sample bindings; returns one message per failure.
    [[nodiscard]] std::vector<std::string> check() const;
};

}  // namespace eot
