// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "intentforge/function_table.hpp"
#include "intentforge/workflow/ast.hpp"
#include "intentforge/workflow/trace.hpp"

namespace intentforge {
class HostEnvironment;
}

namespace intentforge::workflow {

/// Hard resource ceilings for one workflow execution. A step is one AST
/// node evaluation; wall time is virtual under a virtual clock.
struct ExecLimits {
    std::size_t max_steps = 100000;
    std::size_t max_call_depth = 64;
    double max_wall_time_ms = 30000.0;

    bool valid() const { return max_steps > 0 && max_call_depth > 0 && max_wall_time_ms > 0; }
};

/// Runs a parsed workflow against a frozen function table. The only
/// reachable effects are table entries; every host call is type-checked and
/// recorded. Errors never escape as exceptions: the trace carries the
/// terminal status (completed, runtime_error, limit_exceeded).
ExecutionTrace execute_workflow(const WorkflowProgram& program, const FunctionTable& table,
                                HostEnvironment& env, const ExecLimits& limits,
                                int intention_id = 0);

/// Convenience wrapper: parse then execute. Parse failures become a trace
/// with status parse_rejected (kind "syntax_error" or "unsupported_construct")
/// instead of an exception.
ExecutionTrace run_workflow_source(std::string_view source, const FunctionTable& table,
                                   HostEnvironment& env, const ExecLimits& limits,
                                   int intention_id = 0);

}  // namespace intentforge::workflow
