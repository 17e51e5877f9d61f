// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

#pragma once

#include <stdexcept>
#include <string>

namespace eot {

enum class ErrorKind {
    invalid_argument,
    config,
    io,
    backend,
    runtime,
};

/// Base of every error thrown by the engine. The C API maps `kind()` to a status code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error invalid_argument(const std::string& what) { return {ErrorKind::invalid_argument, what}; }
inline Error config_error(const std::string& what) { return {ErrorKind::config, what}; }
inline Error io_error(const std::string& what) { return {ErrorKind::io, what}; }
inline Error runtime_error(const std::string& what) { return {ErrorKind::runtime, what}; }

}  // namespace eot
