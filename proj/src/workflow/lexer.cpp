// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/workflow/lexer.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

namespace intentforge::workflow {

namespace {

// Words with statement/expression meaning. Unsupported statement keywords
// (import, class, ...) are lexed as keywords too so the parser can reject
// them by name instead of mis-parsing them as identifiers.
const std::set<std::string, std::less<>> kKeywords = {
    "False", "None",   "True",   "and",   "as",     "assert", "async", "await",
    "break", "class",  "continue", "def", "del",    "elif",   "else",  "except",
    "for",   "from",   "global", "if",    "import", "in",     "is",    "lambda",
    "nonlocal", "not", "or",     "pass",  "raise",  "return", "try",   "while",
    "with",  "yield",
};

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;
    int line = 1;
    int bracket_depth = 0;
    std::vector<int> indents{0};
    TokenStream out;

    bool at_end() const { return pos >= src.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }
    char take() { return src[pos++]; }

    void push(TokenKind kind, std::string text = {}) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = line;
        out.tokens.push_back(std::move(t));
    }

    [[noreturn]] void fail(const std::string& msg) { throw WorkflowSyntaxError(line, msg); }

    void run() {
        bool at_line_start = true;
        while (!at_end()) {
            if (at_line_start && bracket_depth == 0) {
                if (!handle_indentation()) break;  // ran off the end
                at_line_start = false;
                continue;
            }
            char c = peek();
            if (c == '\n') {
                take();
                ++line;
                if (bracket_depth == 0) {
                    if (!out.tokens.empty() && out.tokens.back().kind != TokenKind::Newline &&
                        out.tokens.back().kind != TokenKind::Indent)
                        push_newline_for_previous_line();
                    at_line_start = true;
                }
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                take();
                continue;
            }
            if (c == '#') {
                ++out.comment_count;
                while (!at_end() && peek() != '\n') take();
                continue;
            }
            if (c == '\\' && peek(1) == '\n') {  // explicit continuation
                take();
                take();
                ++line;
                continue;
            }
            lex_token();
        }
        if (!out.tokens.empty() && out.tokens.back().kind != TokenKind::Newline &&
            out.tokens.back().kind != TokenKind::Dedent)
            push(TokenKind::Newline);
        while (indents.back() > 0) {
            indents.pop_back();
            push(TokenKind::Dedent);
        }
        push(TokenKind::EndOfFile);
        mark_docstrings();
    }

    // Newline tokens carry the line they terminate, which reads better in
    // error messages than the line they start.
    void push_newline_for_previous_line() {
        Token t;
        t.kind = TokenKind::Newline;
        t.line = line - 1;
        out.tokens.push_back(std::move(t));
    }

    // Measures leading whitespace of the next logical line and emits
    // Indent/Dedent tokens. Returns false when the input is exhausted.
    bool handle_indentation() {
        while (true) {
            std::size_t start = pos;
            int width = 0;
            while (!at_end() && (peek() == ' ' || peek() == '\t')) {
                width += (take() == '\t') ? 8 - (width % 8) : 1;
            }
            if (at_end()) return false;
            if (peek() == '\n') {  // blank line
                take();
                ++line;
                continue;
            }
            if (peek() == '\r') {
                take();
                continue;
            }
            if (peek() == '#') {  // comment-only line
                ++out.comment_count;
                while (!at_end() && peek() != '\n') take();
                continue;
            }
            (void)start;
            if (width > indents.back()) {
                indents.push_back(width);
                push(TokenKind::Indent);
            } else {
                while (width < indents.back()) {
                    indents.pop_back();
                    push(TokenKind::Dedent);
                }
                if (width != indents.back()) fail("unindent does not match any outer level");
            }
            return true;
        }
    }

    void lex_token() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            lex_word();
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string(false);
            return;
        }
        lex_operator();
    }

    void lex_number() {
        std::string digits;
        bool is_float = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits += take();
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            is_float = true;
            digits += take();
            while (std::isdigit(static_cast<unsigned char>(peek()))) digits += take();
        } else if (peek() == '.' && !std::isalpha(static_cast<unsigned char>(peek(1))) &&
                   peek(1) != '_') {
            is_float = true;
            digits += take();
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t mark = pos;
            std::string exp;
            exp += take();
            if (peek() == '+' || peek() == '-') exp += take();
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                is_float = true;
                while (std::isdigit(static_cast<unsigned char>(peek()))) exp += take();
                digits += exp;
            } else {
                pos = mark;
            }
        }
        Token t;
        t.line = line;
        if (is_float) {
            t.kind = TokenKind::Float;
            t.float_value = std::stod(digits);
        } else {
            t.kind = TokenKind::Int;
            try {
                t.int_value = std::stoll(digits);
            } catch (const std::out_of_range&) {
                fail("integer literal out of range");
            }
        }
        t.text = std::move(digits);
        out.tokens.push_back(std::move(t));
    }

    void lex_word() {
        std::string word;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') word += take();
        if ((word == "f" || word == "F") && (peek() == '"' || peek() == '\'')) {
            lex_string(true);
            return;
        }
        if (kKeywords.count(word)) {
            push(TokenKind::Keyword, std::move(word));
        } else {
            push(TokenKind::Name, std::move(word));
        }
    }

    // Decodes quoted text. For f-strings the body is kept raw (escapes and
    // braces intact) so the parser can split interpolations itself.
    void lex_string(bool fstring) {
        char quote = take();
        bool triple = false;
        if (peek() == quote && peek(1) == quote) {
            triple = true;
            take();
            take();
        }
        std::string value;
        while (true) {
            if (at_end()) fail("unterminated string literal");
            char c = take();
            if (c == '\n') {
                if (!triple) fail("unterminated string literal");
                ++line;
                value += c;
                continue;
            }
            if (c == quote) {
                if (!triple) break;
                if (peek() == quote && peek(1) == quote) {
                    take();
                    take();
                    break;
                }
                value += c;
                continue;
            }
            if (c == '\\' && !at_end()) {
                char esc = take();
                if (fstring) {
                    value += c;
                    value += esc;
                    continue;
                }
                switch (esc) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case 'r': value += '\r'; break;
                    case '\\': value += '\\'; break;
                    case '\'': value += '\''; break;
                    case '"': value += '"'; break;
                    case '\n': ++line; break;  // line continuation inside string
                    default:
                        value += '\\';
                        value += esc;
                }
                continue;
            }
            value += c;
        }
        Token t;
        t.kind = fstring ? TokenKind::FString : TokenKind::String;
        t.text = std::move(value);
        t.line = line;
        out.tokens.push_back(std::move(t));
    }

    void lex_operator() {
        static const char* kThree[] = {"//=", "**="};
        static const char* kTwo[] = {"==", "!=", "<=", ">=", "//", "**", "->",
                                     "+=", "-=", "*=", "/=", "%="};
        for (const char* op : kThree) {
            if (src.substr(pos, 3) == op) {
                pos += 3;
                push(TokenKind::Op, op);
                return;
            }
        }
        for (const char* op : kTwo) {
            if (src.substr(pos, 2) == op) {
                pos += 2;
                push(TokenKind::Op, op);
                return;
            }
        }
        char c = take();
        switch (c) {
            case '(': case '[': case '{':
                ++bracket_depth;
                if (bracket_depth > 200) fail("bracket nesting too deep");
                break;
            case ')': case ']': case '}':
                if (bracket_depth > 0) --bracket_depth;
                break;
            case '+': case '-': case '*': case '/': case '%': case '<': case '>':
            case '=': case ',': case ':': case '.': case '|': case '&': case '^':
            case '~': case ';':
                break;
            default:
                fail(std::string("unexpected character '") + c + "'");
        }
        push(TokenKind::Op, std::string(1, c));
    }

    // A bare string literal alone on a logical line is docstring-style
    // commentary; counted for the comment-detection report.
    void mark_docstrings() {
        bool line_start = true;
        for (std::size_t i = 0; i < out.tokens.size(); ++i) {
            const Token& t = out.tokens[i];
            if (t.kind == TokenKind::Newline || t.kind == TokenKind::Indent ||
                t.kind == TokenKind::Dedent) {
                line_start = true;
                continue;
            }
            if (line_start && t.kind == TokenKind::String && i + 1 < out.tokens.size() &&
                out.tokens[i + 1].kind == TokenKind::Newline)
                ++out.docstring_count;
            line_start = false;
        }
    }
};

}  // namespace

bool is_workflow_keyword(std::string_view word) { return kKeywords.count(word) != 0; }

TokenStream tokenize(std::string_view source) {
    Lexer lexer;
    lexer.src = source;
    lexer.run();
    return std::move(lexer.out);
}

}  // namespace intentforge::workflow
