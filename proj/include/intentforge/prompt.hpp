// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "intentforge/function_table.hpp"
#include "intentforge/model_config.hpp"

namespace intentforge {

/// A user goal to resolve, e.g. "Please sleep for 5 seconds".
struct Intention {
    int id = 0;
    std::string text;
};

struct ModelParams {
    double temperature = 0.0;
    std::string model_name;
};

/// The two messages sent to the model plus request parameters. Identical
/// inputs yield byte-identical bundles.
struct PromptBundle {
    std::string role_message;
    std::string user_message;
    ModelParams model_params;
    int intention_id = 0;  // carried along so fixture transports can key replays
};

/// The fixed user-message template. `{functions}` and `{intention}` are the
/// only placeholders; the wording is versioned here and published verbatim
/// in docs/prompt_template.md so runs stay reproducible.
extern const char* const kUserPromptTemplate;

/// Newline-joined catalog doc lines in registration order, one per entry.
/// Throws EmptyTable when there is nothing to call.
std::string render_docs(const FunctionTable& table);

/// Deterministically assembles the role and user messages for an intention.
PromptBundle build_prompt(const Intention& intention, const FunctionTable& table,
                          const ModelConfig& config);

}  // namespace intentforge
