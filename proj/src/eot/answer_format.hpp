// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace eot {

/// Content of the last `\boxed{...}` in `reply`, brace-balanced and trimmed.
/// Returns nullopt when there is no marker or the last marker's braces never close.
std::optional<std::string> extract_boxed(std::string_view reply);

/// Normalization applied before comparing answers: trim, collapse internal
/// whitespace runs to one space, strip one trailing period, and rewrite plain
/// decimal numbers canonically ("3.0" -> "3", "-0.50" -> "-0.5").
std::string normalize_answer(std::string_view answer);

/// Equality after `normalize_answer`.
bool answers_match(std::string_view extracted, std::string_view truth);

}  // namespace eot
