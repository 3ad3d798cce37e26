// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/analyzer.hpp"

#include <cctype>
#include <vector>

#include "intentforge/workflow/lexer.hpp"

namespace intentforge {

namespace {

bool all_whitespace(std::string_view s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

struct FencedBlock {
    std::size_t open_begin;   // offset of the opening fence line
    std::size_t body_begin;   // first byte of the interior
    std::size_t body_end;     // one past the interior (before closing fence's newline)
    std::size_t close_end;    // one past the closing fence line
    std::string label;
};

// One line of the response, [begin, end) excluding the newline.
struct Line {
    std::size_t begin, end, next;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back({pos, text.size(), text.size()});
            break;
        }
        lines.push_back({pos, nl, nl + 1});
        pos = nl + 1;
    }
    return lines;
}

std::string_view strip_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<ParsedResponse> extract_code(std::string_view text) {
    auto lines = split_lines(text);
    std::vector<FencedBlock> blocks;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = text.substr(lines[i].begin, lines[i].end - lines[i].begin);
        std::string_view stripped = strip_view(line);
        if (stripped.substr(0, 3) != "```") continue;
        std::string_view label = strip_view(stripped.substr(3));
        if (label.find('`') != std::string_view::npos) continue;  // ````-style, not a fence

        // find the closing fence
        std::size_t close = i + 1;
        bool closed = false;
        for (; close < lines.size(); ++close) {
            std::string_view candidate =
                strip_view(text.substr(lines[close].begin, lines[close].end - lines[close].begin));
            if (candidate == "```") {
                closed = true;
                break;
            }
        }
        if (!closed) continue;  // the opening marker never completes a block

        FencedBlock block;
        block.open_begin = lines[i].begin;
        block.body_begin = lines[i].next;
        // the newline before the closing fence belongs to the fence
        block.body_end = lines[close].begin > block.body_begin ? lines[close].begin - 1
                                                               : block.body_begin;
        block.close_end = lines[close].next;
        block.label = std::string(label);
        blocks.push_back(block);
        i = close;  // resume after this block
    }

    if (blocks.empty()) return std::nullopt;

    ParsedResponse out;
    out.block_count = static_cast<int>(blocks.size());
    out.preamble = std::string(text.substr(0, blocks.front().open_begin));
    out.postamble = std::string(text.substr(blocks.back().close_end));
    out.opening_fence = std::string(
        text.substr(blocks.front().open_begin, blocks.front().body_begin - blocks.front().open_begin));
    out.closing_fence =
        std::string(text.substr(blocks.back().body_end, blocks.back().close_end - blocks.back().body_end));
    if (!blocks.front().label.empty()) out.fence_label = blocks.front().label;

    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (b) out.code += '\n';
        out.code += std::string(text.substr(blocks[b].body_begin,
                                            blocks[b].body_end - blocks[b].body_begin));
    }

    out.has_preamble = !all_whitespace(out.preamble);
    out.has_postamble = !all_whitespace(out.postamble);
    CommentScan scan = detect_comments(out.code);
    out.has_comments = scan.present;
    out.comments_via_fallback = !scan.lexical;
    return out;
}

CommentScan detect_comments(std::string_view code) {
    try {
        workflow::TokenStream stream = workflow::tokenize(code);
        return {stream.comment_count > 0 || stream.docstring_count > 0, true};
    } catch (const workflow::WorkflowSyntaxError&) {
        // Conservative fallback: track quoting by hand and look for a '#'
        // outside quotes.
        bool in_string = false;
        char quote = '\0';
        for (std::size_t i = 0; i < code.size(); ++i) {
            char c = code[i];
            if (in_string) {
                if (c == '\\') {
                    ++i;
                } else if (c == quote) {
                    in_string = false;
                } else if (c == '\n') {
                    in_string = false;  // assume single-line strings when guessing
                }
                continue;
            }
            if (c == '"' || c == '\'') {
                in_string = true;
                quote = c;
            } else if (c == '#') {
                return {true, false};
            }
        }
        return {false, false};
    }
}

}  // namespace intentforge
