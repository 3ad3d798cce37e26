// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/prompt.hpp"

#include <stdexcept>

#include "intentforge/errors.hpp"

namespace intentforge {

// Keep in sync with docs/prompt_template.md.
const char* const kUserPromptTemplate =
    "Resolve the user's intention by generating a short program.\n"
    "\n"
    "Rules:\n"
    "- Respond with exactly one fenced code block and no text before or after it.\n"
    "- Call only the functions listed below; do not import anything.\n"
    "- If you define a function, you must also invoke it.\n"
    "\n"
    "Available functions:\n"
    "{functions}\n"
    "\n"
    "Intention:\n"
    "{intention}\n";

std::string render_docs(const FunctionTable& table) {
    if (!table.frozen()) throw std::logic_error("render_docs needs a frozen table");
    if (table.size() == 0) throw EmptyTable("function table has no entries");
    std::string out;
    bool first = true;
    for (const FunctionSpec* spec : table.specs()) {
        if (!first) out += '\n';
        first = false;
        out += render_doc_line(*spec);
    }
    return out;
}

namespace {

std::string replace_once(std::string text, std::string_view placeholder, const std::string& value) {
    auto pos = text.find(placeholder);
    if (pos == std::string::npos)
        throw std::logic_error("prompt template lost placeholder " + std::string(placeholder));
    text.replace(pos, placeholder.size(), value);
    return text;
}

}  // namespace

PromptBundle build_prompt(const Intention& intention, const FunctionTable& table,
                          const ModelConfig& config) {
    if (intention.text.empty()) throw ConfigError("intention text is empty");
    if (!config.valid()) throw ConfigError("model config out of range for " + config.model_name);

    PromptBundle bundle;
    bundle.role_message = config.role;
    bundle.user_message =
        replace_once(replace_once(kUserPromptTemplate, "{functions}", render_docs(table)),
                     "{intention}", intention.text);
    bundle.model_params = ModelParams{config.temperature, config.model_name};
    bundle.intention_id = intention.id;
    return bundle;
}

}  // namespace intentforge
