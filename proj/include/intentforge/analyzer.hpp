// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace intentforge {

/// Decoded model response: the fenced code, the prose around it, and the
/// classification flags the report tables need.
///
/// For a response with exactly one fenced block,
///   preamble + opening_fence + code + closing_fence + postamble
/// reconstructs the input byte for byte. With several blocks the interiors
/// are concatenated (newline-separated) and reconstruction is not promised.
struct ParsedResponse {
    std::string code;
    std::string preamble;
    std::string postamble;
    std::string opening_fence;  // raw first fence line, including its newline
    std::string closing_fence;  // raw final closing fence, including the newline before it
    bool has_preamble = false;
    bool has_postamble = false;
    bool has_comments = false;
    bool comments_via_fallback = false;  // lexing failed; substring scan used
    std::optional<std::string> fence_label;
    int block_count = 0;
};

/// Finds well-formed triple-backtick fenced blocks (labelled or bare).
/// Returns nullopt when no complete fence exists — a marker failure, not a
/// crash; the caller still holds the raw text.
std::optional<ParsedResponse> extract_code(std::string_view response_text);

struct CommentScan {
    bool present = false;
    bool lexical = true;  // false when the conservative fallback scan ran
};

/// True iff a comment token exists outside any string literal, decided by
/// lexical scan. Bare string literals standing alone as statements count as
/// docstring commentary. Unlexable input falls back to a quote-tracking
/// substring scan, flagged via `lexical = false`.
CommentScan detect_comments(std::string_view code);

}  // namespace intentforge
