// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace intentforge {

// --- type system / catalog ---

struct MalformedType : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicateName : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TableFrozen : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownFunction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentTypeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by host callbacks. Carries an optional protocol status code so
// HTTP-shaped failures (e.g. a 400 from an oversized model query) survive
// into traces.
struct HostError : std::runtime_error {
    explicit HostError(std::string msg, std::optional<int> status = std::nullopt)
        : std::runtime_error(std::move(msg)), status(status) {}
    std::optional<int> status;
};

// --- prompt building ---

struct EmptyTable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- gateway / transport ---

struct TransportError : std::runtime_error {
    explicit TransportError(std::string msg, int status = 0)
        : std::runtime_error(std::move(msg)), status(status) {}
    int status;  // 0 when the failure happened below HTTP
};

struct EmptyStream : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RequestTimeout : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FixtureParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingTranscript : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- harness / CLI ---

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownFormat : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace intentforge
