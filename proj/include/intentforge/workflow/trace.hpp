// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "intentforge/value.hpp"

namespace intentforge::workflow {

enum class RunStatus { Completed, RuntimeError, LimitExceeded, ParseRejected };

const char* run_status_name(RunStatus status);
std::optional<RunStatus> run_status_from_name(std::string_view name);

struct BeginEvent {
    int intention_id = 0;
};
struct CallEvent {
    std::string name;
    std::vector<HostValue> args;
    HostValue result;       // Null when the call errored
    std::string error;      // empty = success
};
struct OutputEvent {
    std::string text;
};
struct ErrorEvent {
    std::string kind;
    std::string message;
};
struct EndEvent {
    RunStatus status = RunStatus::Completed;
    std::size_t steps_used = 0;
};

struct TraceEvent {
    double t_ms = 0.0;  // virtual timestamp, non-decreasing
    std::variant<BeginEvent, CallEvent, OutputEvent, ErrorEvent, EndEvent> event;
};

/// Ordered record of one workflow execution: exactly one Begin, exactly one
/// End, Call/Output/Error events in between. Immutable once returned.
struct ExecutionTrace {
    std::vector<TraceEvent> events;
    RunStatus status = RunStatus::Completed;
    std::size_t steps_used = 0;

    bool called(std::string_view name) const;
    const CallEvent* find_call(std::string_view name) const;
    std::vector<const CallEvent*> calls() const;
    /// All Output event texts joined with newlines.
    std::string output_text() const;

    /// Line-delimited JSON, one event per line. Deterministic for
    /// deterministic runs; used by --trace-out and golden tests.
    std::string to_jsonl() const;
};

}  // namespace intentforge::workflow
