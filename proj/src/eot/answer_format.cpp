// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#include "eot/answer_format.hpp"

#include <cctype>

namespace eot {

namespace {

constexpr std::string_view kMarker = "\\boxed{";

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Canonical form of an optionally signed decimal literal, or nullopt if `s` is not one.
std::optional<std::string> canonical_number(std::string_view s) {
    std::string sign;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        if (s.front() == '-') sign = "-";
        s.remove_prefix(1);
    }
    const auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    for (char c : whole) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    for (char c : frac) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    while (whole.size() > 1 && whole.front() == '0') whole.remove_prefix(1);
    while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
    std::string out = whole.empty() ? std::string("0") : std::string(whole);
    if (!frac.empty()) out += "." + std::string(frac);
    if (out == "0") sign.clear();
    return sign + out;
}

}  // namespace

std::optional<std::string> extract_boxed(std::string_view reply) {
    const auto pos = reply.rfind(kMarker);
    if (pos == std::string_view::npos) return std::nullopt;

    const std::size_t begin = pos + kMarker.size();
    int depth = 1;
    for (std::size_t i = begin; i < reply.size(); ++i) {
        if (reply[i] == '{') {
            ++depth;
        } else if (reply[i] == '}') {
            if (--depth == 0) {
                return std::string(trim(reply.substr(begin, i - begin)));
            }
        }
    }
    return std::nullopt;
}

std::string normalize_answer(std::string_view answer) {
    answer = trim(answer);
    std::string collapsed;
    collapsed.reserve(answer.size());
    bool in_space = false;
    for (char c : answer) {
        if (is_space(c)) {
            in_space = true;
            continue;
        }
        if (in_space) collapsed.push_back(' ');
        in_space = false;
        collapsed.push_back(c);
    }
    if (!collapsed.empty() && collapsed.back() == '.') {
        collapsed.pop_back();
        while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    }
    if (auto number = canonical_number(collapsed)) return *number;
    return collapsed;
}

bool answers_match(std::string_view extracted, std::string_view truth) {
    return normalize_answer(extracted) == normalize_answer(truth);
}

}  // namespace eot
