// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "intentforge/workflow/ast.hpp"
#include "intentforge/workflow/lexer.hpp"

namespace intentforge::workflow {

/// Parses workflow source into an AST.
///
/// The accepted subset of the object language's indentation-based syntax:
/// assignments (incl. augmented, on names and subscripts), expression
/// statements, def/return, if/elif/else, while, for-in over a single name,
/// try/except (single catch-all handler, optional `as` binding), pass,
/// break, continue; expressions cover literals, names, calls by name,
/// whitelisted value methods, arithmetic, comparisons (incl. is / in),
/// boolean logic, subscripts, list/map displays, single-clause list
/// comprehensions, conditional expressions, and f-strings with default
/// formatting.
///
/// Everything else is rejected: WorkflowSyntaxError for text that does not
/// scan, UnsupportedConstruct for recognizable object-language features the
/// sandbox does not admit (import, class, with, lambda, attribute access
/// outside the method whitelist, ...).
WorkflowProgram parse_workflow(std::string_view source);

/// Parses a single expression (used for f-string interpolations).
ExprPtr parse_embedded_expression(std::string_view source, int line);

bool is_whitelisted_method(std::string_view name);

}  // namespace intentforge::workflow
