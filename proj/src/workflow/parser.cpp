// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/workflow/parser.hpp"

#include <set>

namespace intentforge::workflow {

namespace {

const std::set<std::string, std::less<>> kMethodWhitelist = {
    // text
    "split", "join", "strip", "lower", "upper", "startswith", "endswith", "replace", "format",
    // list
    "append", "extend",
    // map
    "get", "keys", "items"};

// Statement keywords the sandbox refuses outright.
const std::set<std::string, std::less<>> kRejectedStatements = {
    "import", "from", "with", "class", "global", "nonlocal", "raise",
    "assert", "del",  "yield", "async", "await", "lambda"};

constexpr int kMaxExprDepth = 200;
constexpr int kMaxBlockDepth = 100;

struct Parser {
    const std::vector<Token>& toks;
    std::size_t pos = 0;
    int expr_depth = 0;
    int block_depth = 0;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    const Token& take() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
    int line() const { return peek().line; }

    [[noreturn]] void fail(const std::string& msg) { throw WorkflowSyntaxError(line(), msg); }
    [[noreturn]] void unsupported(const std::string& what) { throw UnsupportedConstruct(line(), what); }

    bool eat_op(std::string_view op) {
        if (peek().is_op(op)) {
            take();
            return true;
        }
        return false;
    }
    bool eat_keyword(std::string_view kw) {
        if (peek().is_keyword(kw)) {
            take();
            return true;
        }
        return false;
    }
    void expect_op(std::string_view op) {
        if (!eat_op(op)) fail("expected '" + std::string(op) + "'");
    }
    void expect_newline() {
        if (peek().kind == TokenKind::EndOfFile) return;
        if (peek().kind != TokenKind::Newline) fail("expected end of line");
        take();
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.expr_depth > kMaxExprDepth) p.fail("expression nesting too deep");
        }
        ~DepthGuard() { --p.expr_depth; }
    };

    // --- program / blocks ---

    WorkflowProgram parse_program() {
        WorkflowProgram program;
        while (peek().kind != TokenKind::EndOfFile) {
            if (peek().kind == TokenKind::Newline) {
                take();
                continue;
            }
            parse_statement_into(program.statements);
        }
        return program;
    }

    Block parse_block() {
        if (++block_depth > kMaxBlockDepth) fail("blocks nested too deep");
        Block block;
        expect_op(":");
        if (peek().kind != TokenKind::Newline) {
            // inline suite: a single simple statement on the same line
            parse_simple_statement_into(block);
            expect_newline();
        } else {
            take();
            if (peek().kind != TokenKind::Indent) fail("expected an indented block");
            take();
            while (peek().kind != TokenKind::Dedent && peek().kind != TokenKind::EndOfFile) {
                if (peek().kind == TokenKind::Newline) {
                    take();
                    continue;
                }
                parse_statement_into(block);
            }
            if (peek().kind == TokenKind::Dedent) take();
        }
        if (block.empty()) fail("empty block");
        --block_depth;
        return block;
    }

    void parse_statement_into(Block& out) {
        const Token& t = peek();
        if (t.kind == TokenKind::Keyword) {
            const std::string& kw = t.text;
            if (kRejectedStatements.count(kw)) unsupported(kw);
            if (kw == "if") return out.push_back(parse_if());
            if (kw == "while") return out.push_back(parse_while());
            if (kw == "for") return out.push_back(parse_for());
            if (kw == "def") return out.push_back(parse_def());
            if (kw == "try") return out.push_back(parse_try());
            if (kw == "else" || kw == "elif" || kw == "except")
                fail("'" + kw + "' without a matching block");
        }
        parse_simple_statement_into(out);
        expect_newline();
    }

    // One or more simple statements separated by ';'.
    void parse_simple_statement_into(Block& out) {
        while (true) {
            out.push_back(parse_simple_statement());
            if (!eat_op(";")) break;
            if (peek().kind == TokenKind::Newline || peek().kind == TokenKind::EndOfFile) break;
        }
    }

    StmtPtr parse_simple_statement() {
        int ln = line();
        if (eat_keyword("pass")) return make_stmt<PassStmt>(ln);
        if (eat_keyword("break")) return make_stmt<BreakStmt>(ln);
        if (eat_keyword("continue")) return make_stmt<ContinueStmt>(ln);
        if (eat_keyword("return")) {
            ReturnStmt ret;
            if (peek().kind != TokenKind::Newline && peek().kind != TokenKind::EndOfFile &&
                !peek().is_op(";"))
                ret.value = parse_expression();
            return make_stmt<ReturnStmt>(ln, std::move(ret));
        }

        ExprPtr first = parse_expression();
        if (peek().is_op(",")) unsupported("tuple");
        if (peek().is_op(":")) unsupported("annotated assignment");

        static const char* kAugOps[] = {"+=", "-=", "*=", "/=", "//=", "%=", "**="};
        for (const char* aug : kAugOps) {
            if (peek().is_op(aug)) {
                take();
                validate_target(*first);
                ExprPtr rhs = parse_expression();
                BinOp op = aug_bin_op(aug);
                // desugar: t op= v  ->  t = t op v
                ExprPtr lhs_copy = clone_expr(*first);
                ExprPtr combined = make_expr<BinaryExpr>(ln, op, std::move(lhs_copy), std::move(rhs));
                return make_stmt<AssignStmt>(ln, std::move(first), std::move(combined));
            }
        }
        if (eat_op("=")) {
            validate_target(*first);
            ExprPtr value = parse_expression();
            if (peek().is_op("=")) unsupported("chained assignment");
            return make_stmt<AssignStmt>(ln, std::move(first), std::move(value));
        }
        return make_stmt<ExprStmt>(ln, std::move(first));
    }

    static BinOp aug_bin_op(std::string_view aug) {
        if (aug == "+=") return BinOp::Add;
        if (aug == "-=") return BinOp::Sub;
        if (aug == "*=") return BinOp::Mul;
        if (aug == "/=") return BinOp::Div;
        if (aug == "//=") return BinOp::FloorDiv;
        if (aug == "%=") return BinOp::Mod;
        return BinOp::Pow;
    }

    void validate_target(const Expr& e) {
        if (std::holds_alternative<NameExpr>(e.node)) return;
        if (std::holds_alternative<SubscriptExpr>(e.node)) return;
        throw WorkflowSyntaxError(e.line, "cannot assign to this expression");
    }

    // Deep copy; needed only for augmented-assignment desugaring, so the
    // target grammar (names and subscripts) is all it must cover.
    ExprPtr clone_expr(const Expr& e) {
        if (const auto* n = std::get_if<NameExpr>(&e.node)) return make_expr<NameExpr>(e.line, n->name);
        if (const auto* s = std::get_if<SubscriptExpr>(&e.node))
            return make_expr<SubscriptExpr>(e.line, clone_expr(*s->object), clone_expr(*s->index));
        throw WorkflowSyntaxError(e.line, "cannot assign to this expression");
    }

    // --- compound statements ---

    StmtPtr parse_if() {
        int ln = line();
        take();  // if
        IfStmt node;
        ExprPtr cond = parse_expression();
        Block body = parse_block();  // sequenced: arg order in a call is unspecified
        node.branches.emplace_back(std::move(cond), std::move(body));
        while (peek().is_keyword("elif")) {
            take();
            cond = parse_expression();
            body = parse_block();
            node.branches.emplace_back(std::move(cond), std::move(body));
        }
        if (eat_keyword("else")) node.orelse = parse_block();
        return make_stmt<IfStmt>(ln, std::move(node));
    }

    StmtPtr parse_while() {
        int ln = line();
        take();
        WhileStmt node;
        node.cond = parse_expression();
        node.body = parse_block();
        if (peek().is_keyword("else")) unsupported("while-else");
        return make_stmt<WhileStmt>(ln, std::move(node));
    }

    StmtPtr parse_for() {
        int ln = line();
        take();
        if (peek().kind != TokenKind::Name) fail("expected a loop variable");
        ForStmt node;
        node.var = take().text;
        if (peek().is_op(",")) unsupported("tuple unpacking in for");
        if (!eat_keyword("in")) fail("expected 'in'");
        node.iterable = parse_expression();
        node.body = parse_block();
        if (peek().is_keyword("else")) unsupported("for-else");
        return make_stmt<ForStmt>(ln, std::move(node));
    }

    StmtPtr parse_def() {
        int ln = line();
        take();
        if (peek().kind != TokenKind::Name) fail("expected a function name");
        DefStmt node;
        node.name = take().text;
        expect_op("(");
        while (!peek().is_op(")")) {
            if (peek().is_op("*")) unsupported("starred parameter");
            if (peek().is_op("**")) unsupported("keyword parameter pack");
            if (peek().kind != TokenKind::Name) fail("expected a parameter name");
            node.params.push_back(take().text);
            if (eat_op(":")) consume_annotation();
            if (peek().is_op("=")) unsupported("default parameter value");
            if (!eat_op(",")) break;
        }
        expect_op(")");
        if (eat_op("->")) consume_annotation();
        node.body = parse_block();
        return make_stmt<DefStmt>(ln, std::move(node));
    }

    // Annotations are tolerated on defs and discarded. Only simple forms:
    // a name, a string, or None.
    void consume_annotation() {
        const Token& t = peek();
        if (t.kind == TokenKind::Name || t.kind == TokenKind::String || t.is_keyword("None")) {
            take();
            return;
        }
        unsupported("annotation");
    }

    StmtPtr parse_try() {
        int ln = line();
        take();
        TryStmt node;
        node.body = parse_block();
        if (!peek().is_keyword("except")) {
            if (peek().is_keyword("finally")) unsupported("finally");
            fail("expected 'except'");
        }
        bool first = true;
        while (peek().is_keyword("except")) {
            take();
            std::string bind;
            if (!peek().is_op(":")) {
                if (eat_op("(")) {  // except (A, B):
                    while (peek().kind == TokenKind::Name) {
                        take();
                        if (!eat_op(",")) break;
                    }
                    expect_op(")");
                } else if (peek().kind == TokenKind::Name) {
                    take();  // exception class name; single error model ignores it
                } else {
                    fail("expected an exception name");
                }
                if (eat_keyword("as")) {
                    if (peek().kind != TokenKind::Name) fail("expected a name after 'as'");
                    bind = take().text;
                }
            }
            Block handler = parse_block();
            if (first) {
                node.bind_name = std::move(bind);
                node.handler = std::move(handler);
                first = false;
            }
            // later handlers are unreachable under the single-error model
        }
        if (peek().is_keyword("else")) unsupported("try-else");
        if (peek().is_keyword("finally")) unsupported("finally");
        return make_stmt<TryStmt>(ln, std::move(node));
    }

    // --- expressions ---

    ExprPtr parse_expression() {
        DepthGuard guard(*this);
        return parse_conditional();
    }

    ExprPtr parse_conditional() {
        int ln = line();
        ExprPtr body = parse_or();
        if (eat_keyword("if")) {
            ExprPtr cond = parse_or();
            if (!eat_keyword("else")) fail("conditional expression needs 'else'");
            ExprPtr orelse = parse_conditional();
            return make_expr<CondExpr>(ln, std::move(body), std::move(cond), std::move(orelse));
        }
        return body;
    }

    ExprPtr parse_or() {
        int ln = line();
        ExprPtr first = parse_and();
        if (!peek().is_keyword("or")) return first;
        BoolExpr node{BoolOp::Or, {}};
        node.operands.push_back(std::move(first));
        while (eat_keyword("or")) node.operands.push_back(parse_and());
        return make_expr<BoolExpr>(ln, std::move(node));
    }

    ExprPtr parse_and() {
        int ln = line();
        ExprPtr first = parse_not();
        if (!peek().is_keyword("and")) return first;
        BoolExpr node{BoolOp::And, {}};
        node.operands.push_back(std::move(first));
        while (eat_keyword("and")) node.operands.push_back(parse_not());
        return make_expr<BoolExpr>(ln, std::move(node));
    }

    ExprPtr parse_not() {
        DepthGuard guard(*this);
        int ln = line();
        if (eat_keyword("not")) return make_expr<UnaryExpr>(ln, UnaryOp::Not, parse_not());
        return parse_comparison();
    }

    ExprPtr parse_comparison() {
        int ln = line();
        ExprPtr first = parse_arith();
        std::vector<std::pair<CmpOp, ExprPtr>> rest;
        while (true) {
            CmpOp op;
            if (eat_op("==")) op = CmpOp::Eq;
            else if (eat_op("!=")) op = CmpOp::Ne;
            else if (eat_op("<=")) op = CmpOp::Le;
            else if (eat_op(">=")) op = CmpOp::Ge;
            else if (eat_op("<")) op = CmpOp::Lt;
            else if (eat_op(">")) op = CmpOp::Gt;
            else if (peek().is_keyword("in")) { take(); op = CmpOp::In; }
            else if (peek().is_keyword("not") && peek(1).is_keyword("in")) { take(); take(); op = CmpOp::NotIn; }
            else if (peek().is_keyword("is") && peek(1).is_keyword("not")) { take(); take(); op = CmpOp::IsNot; }
            else if (peek().is_keyword("is")) { take(); op = CmpOp::Is; }
            else break;
            rest.emplace_back(op, parse_arith());
        }
        if (rest.empty()) return first;
        return make_expr<CompareExpr>(ln, std::move(first), std::move(rest));
    }

    ExprPtr parse_arith() {
        int ln = line();
        ExprPtr lhs = parse_term();
        while (true) {
            BinOp op;
            if (eat_op("+")) op = BinOp::Add;
            else if (eat_op("-")) op = BinOp::Sub;
            else break;
            lhs = make_expr<BinaryExpr>(ln, op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    ExprPtr parse_term() {
        int ln = line();
        ExprPtr lhs = parse_factor();
        while (true) {
            BinOp op;
            if (eat_op("*")) op = BinOp::Mul;
            else if (eat_op("//")) op = BinOp::FloorDiv;
            else if (eat_op("/")) op = BinOp::Div;
            else if (eat_op("%")) op = BinOp::Mod;
            else break;
            lhs = make_expr<BinaryExpr>(ln, op, std::move(lhs), parse_factor());
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        DepthGuard guard(*this);
        int ln = line();
        if (eat_op("-")) return make_expr<UnaryExpr>(ln, UnaryOp::Neg, parse_factor());
        if (eat_op("+")) return make_expr<UnaryExpr>(ln, UnaryOp::Pos, parse_factor());
        return parse_power();
    }

    ExprPtr parse_power() {
        int ln = line();
        ExprPtr base = parse_postfix();
        if (eat_op("**"))
            return make_expr<BinaryExpr>(ln, BinOp::Pow, std::move(base), parse_factor());
        return base;
    }

    ExprPtr parse_postfix() {
        ExprPtr expr = parse_primary();
        while (true) {
            int ln = line();
            if (peek().is_op("(")) {
                const auto* name = std::get_if<NameExpr>(&expr->node);
                if (!name) unsupported("computed call target");
                take();
                CallExpr call{name->name, parse_call_args()};
                expr = make_expr<CallExpr>(expr->line, std::move(call));
            } else if (eat_op("[")) {
                ExprPtr index = parse_expression();
                if (peek().is_op(":")) unsupported("slice");
                expect_op("]");
                expr = make_expr<SubscriptExpr>(ln, std::move(expr), std::move(index));
            } else if (peek().is_op(".")) {
                take();
                if (peek().kind != TokenKind::Name && peek().kind != TokenKind::Keyword)
                    fail("expected a name after '.'");
                std::string method = take().text;
                if (!peek().is_op("(")) unsupported("attribute access");
                if (!kMethodWhitelist.count(method)) unsupported("method " + method);
                take();
                MethodCallExpr call{std::move(expr), std::move(method), parse_call_args()};
                expr = make_expr<MethodCallExpr>(ln, std::move(call));
            } else {
                break;
            }
        }
        return expr;
    }

    std::vector<ExprPtr> parse_call_args() {
        std::vector<ExprPtr> args;
        while (!peek().is_op(")")) {
            if (peek().is_op("*")) unsupported("argument unpacking");
            if (peek().is_op("**")) unsupported("keyword argument unpacking");
            if (peek().kind == TokenKind::Name && peek(1).is_op("=")) unsupported("keyword argument");
            args.push_back(parse_expression());
            if (!eat_op(",")) break;
        }
        expect_op(")");
        return args;
    }

    ExprPtr parse_primary() {
        DepthGuard guard(*this);
        const Token& t = peek();
        int ln = t.line;
        switch (t.kind) {
            case TokenKind::Int: {
                take();
                return make_expr<LiteralExpr>(ln, HostValue(t.int_value));
            }
            case TokenKind::Float: {
                take();
                return make_expr<LiteralExpr>(ln, HostValue(t.float_value));
            }
            case TokenKind::String: {
                std::string text = take().text;
                // adjacent string literals concatenate
                while (peek().kind == TokenKind::String) text += take().text;
                return make_expr<LiteralExpr>(ln, HostValue(std::move(text)));
            }
            case TokenKind::FString:
                return parse_fstring();
            case TokenKind::Name:
                return make_expr<NameExpr>(ln, take().text);
            case TokenKind::Keyword: {
                const std::string& kw = t.text;
                if (kw == "True") { take(); return make_expr<LiteralExpr>(ln, HostValue(true)); }
                if (kw == "False") { take(); return make_expr<LiteralExpr>(ln, HostValue(false)); }
                if (kw == "None") { take(); return make_expr<LiteralExpr>(ln, HostValue::null()); }
                if (kRejectedStatements.count(kw)) unsupported(kw);
                fail("unexpected '" + kw + "'");
            }
            case TokenKind::Op:
                if (t.text == "(") {
                    take();
                    ExprPtr inner = parse_expression();
                    if (peek().is_op(",")) unsupported("tuple");
                    expect_op(")");
                    return inner;
                }
                if (t.text == "[") return parse_list_or_comprehension();
                if (t.text == "{") return parse_map_display();
                fail("unexpected '" + t.text + "'");
            default:
                fail("unexpected token");
        }
    }

    ExprPtr parse_list_or_comprehension() {
        int ln = line();
        take();  // [
        if (eat_op("]")) return make_expr<ListExpr>(ln);
        ExprPtr first = parse_expression();
        if (peek().is_keyword("for")) {
            take();
            if (peek().kind != TokenKind::Name) fail("expected a comprehension variable");
            ListCompExpr comp;
            comp.element = std::move(first);
            comp.var = take().text;
            if (peek().is_op(",")) unsupported("tuple unpacking in comprehension");
            if (!eat_keyword("in")) fail("expected 'in'");
            comp.iterable = parse_or();
            if (eat_keyword("if")) comp.filter = parse_or();
            if (peek().is_keyword("for")) unsupported("nested comprehension clause");
            expect_op("]");
            return make_expr<ListCompExpr>(ln, std::move(comp));
        }
        ListExpr list;
        list.items.push_back(std::move(first));
        while (eat_op(",")) {
            if (peek().is_op("]")) break;  // trailing comma
            list.items.push_back(parse_expression());
        }
        expect_op("]");
        return make_expr<ListExpr>(ln, std::move(list));
    }

    ExprPtr parse_map_display() {
        int ln = line();
        take();  // {
        MapExpr map;
        if (eat_op("}")) return make_expr<MapExpr>(ln, std::move(map));
        while (true) {
            ExprPtr key = parse_expression();
            if (!eat_op(":")) unsupported("set display");
            ExprPtr value = parse_expression();
            map.items.emplace_back(std::move(key), std::move(value));
            if (peek().is_keyword("for")) unsupported("dict comprehension");
            if (!eat_op(",")) break;
            if (peek().is_op("}")) break;  // trailing comma
        }
        expect_op("}");
        return make_expr<MapExpr>(ln, std::move(map));
    }

    ExprPtr parse_fstring() {
        const Token& t = take();
        int ln = t.line;
        FStringExpr node;
        const std::string& raw = t.text;
        std::string run;
        std::size_t i = 0;
        auto flush = [&]() {
            if (!run.empty()) {
                node.parts.emplace_back(decode_escapes(run, ln));
                run.clear();
            }
        };
        while (i < raw.size()) {
            char c = raw[i];
            if (c == '{' && i + 1 < raw.size() && raw[i + 1] == '{') {
                run += '{';
                i += 2;
                continue;
            }
            if (c == '}' && i + 1 < raw.size() && raw[i + 1] == '}') {
                run += '}';
                i += 2;
                continue;
            }
            if (c == '}') throw WorkflowSyntaxError(ln, "single '}' in f-string");
            if (c != '{') {
                run += c;
                ++i;
                continue;
            }
            // embedded expression: scan to the matching brace
            std::size_t start = ++i;
            int depth = 1;
            char quote = '\0';
            std::size_t spec_colon = std::string::npos;
            while (i < raw.size() && depth > 0) {
                char e = raw[i];
                if (quote != '\0') {
                    if (e == '\\') ++i;
                    else if (e == quote) quote = '\0';
                } else if (e == '"' || e == '\'') {
                    quote = e;
                } else if (e == '{' || e == '[' || e == '(') {
                    ++depth;
                } else if (e == '}' || e == ']' || e == ')') {
                    --depth;
                    if (depth == 0 && e != '}')
                        throw WorkflowSyntaxError(ln, "unbalanced brackets in f-string");
                } else if (e == ':' && depth == 1 && spec_colon == std::string::npos) {
                    spec_colon = i;
                } else if (e == '!' && depth == 1 && i + 1 < raw.size() && raw[i + 1] != '=') {
                    throw UnsupportedConstruct(ln, "f-string conversion");
                }
                ++i;
            }
            if (depth != 0) throw WorkflowSyntaxError(ln, "unterminated expression in f-string");
            std::size_t end = i - 1;
            if (spec_colon != std::string::npos) throw UnsupportedConstruct(ln, "f-string format spec");
            std::string inner = raw.substr(start, end - start);
            if (inner.find_first_not_of(" \t") == std::string::npos)
                throw WorkflowSyntaxError(ln, "empty expression in f-string");
            flush();
            node.parts.emplace_back(parse_embedded_expression(inner, ln));
        }
        flush();
        return make_expr<FStringExpr>(ln, std::move(node));
    }

    static std::string decode_escapes(const std::string& raw, int ln) {
        std::string out;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '\\' || i + 1 >= raw.size()) {
                out += raw[i];
                continue;
            }
            char esc = raw[++i];
            switch (esc) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '\\': out += '\\'; break;
                case '\'': out += '\''; break;
                case '"': out += '"'; break;
                default:
                    out += '\\';
                    out += esc;
            }
        }
        (void)ln;
        return out;
    }
};

}  // namespace

bool is_whitelisted_method(std::string_view name) { return kMethodWhitelist.count(name) != 0; }

WorkflowProgram parse_workflow(std::string_view source) {
    TokenStream stream = tokenize(source);
    Parser parser{stream.tokens};
    return parser.parse_program();
}

ExprPtr parse_embedded_expression(std::string_view source, int line) {
    TokenStream stream = tokenize(source);
    for (Token& t : stream.tokens) t.line = line;
    Parser parser{stream.tokens};
    ExprPtr expr = parser.parse_expression();
    if (!parser.peek().is_op(";") && parser.peek().kind != TokenKind::Newline &&
        parser.peek().kind != TokenKind::EndOfFile)
        throw WorkflowSyntaxError(line, "trailing input in embedded expression");
    return expr;
}

}  // namespace intentforge::workflow
