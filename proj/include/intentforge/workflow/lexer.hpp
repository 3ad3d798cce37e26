// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intentforge::workflow {

/// Parse-time rejection with a source position.
struct WorkflowSyntaxError : std::runtime_error {
    WorkflowSyntaxError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

/// Valid-looking source using a construct the sandbox deliberately does not
/// support (import, class, attribute access outside the method whitelist...).
/// Kept distinct from WorkflowSyntaxError so coverage gaps stay measurable.
struct UnsupportedConstruct : std::runtime_error {
    UnsupportedConstruct(int line, std::string construct_name)
        : std::runtime_error("line " + std::to_string(line) + ": unsupported construct: " + construct_name),
          line(line),
          construct(std::move(construct_name)) {}
    int line;
    std::string construct;
};

enum class TokenKind {
    Name,
    Keyword,
    Int,
    Float,
    String,   // text = decoded value
    FString,  // text = raw body, undecoded; parser splits interpolations
    Op,       // text = operator spelling
    Newline,
    Indent,
    Dedent,
    EndOfFile,
};

struct Token {
    TokenKind kind;
    std::string text;
    std::int64_t int_value = 0;
    double float_value = 0.0;
    int line = 0;

    bool is_op(std::string_view s) const { return kind == TokenKind::Op && text == s; }
    bool is_keyword(std::string_view s) const { return kind == TokenKind::Keyword && text == s; }
};

/// Result of tokenizing a whole source text. Comment/docstring counts feed
/// the response analyzer; the parser only consumes `tokens`.
struct TokenStream {
    std::vector<Token> tokens;
    int comment_count = 0;
    int docstring_count = 0;
};

/// Tokenizes indentation-based workflow source. Blank and comment-only lines
/// vanish; newlines inside brackets are implicit continuations. Throws
/// WorkflowSyntaxError on bad input (unterminated strings, stray indent...).
TokenStream tokenize(std::string_view source);

bool is_workflow_keyword(std::string_view word);

}  // namespace intentforge::workflow
