// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "intentforge/workflow/parser.hpp"

using namespace intentforge::workflow;

TEST_CASE("a bare call parses to one expression statement") {
    WorkflowProgram program = parse_workflow("sleep(5)");
    REQUIRE(program.statements.size() == 1);
    const auto* stmt = std::get_if<ExprStmt>(&program.statements[0]->node);
    REQUIRE(stmt);
    const auto* call = std::get_if<CallExpr>(&stmt->expr->node);
    REQUIRE(call);
    CHECK(call->callee == "sleep");
    REQUIRE(call->args.size() == 1);
    const auto* lit = std::get_if<LiteralExpr>(&call->args[0]->node);
    REQUIRE(lit);
    CHECK(lit->value == intentforge::HostValue(5));
}

TEST_CASE("definition plus invocation parses to the expected shape") {
    WorkflowProgram program = parse_workflow("def f():\n    print('x')\nf()");
    REQUIRE(program.statements.size() == 2);
    const auto* def = std::get_if<DefStmt>(&program.statements[0]->node);
    REQUIRE(def);
    CHECK(def->name == "f");
    CHECK(def->params.empty());
    REQUIRE(def->body.size() == 1);
    const auto* body_stmt = std::get_if<ExprStmt>(&def->body[0]->node);
    REQUIRE(body_stmt);
    const auto* inner = std::get_if<CallExpr>(&body_stmt->expr->node);
    REQUIRE(inner);
    CHECK(inner->callee == "print");
    const auto* invoke = std::get_if<ExprStmt>(&program.statements[1]->node);
    REQUIRE(invoke);
    CHECK(std::get_if<CallExpr>(&invoke->expr->node)->callee == "f");
}

TEST_CASE("sandbox rejections are UnsupportedConstruct, named") {
    auto rejects = [](const char* src, const char* what) {
        CAPTURE(src);
        try {
            parse_workflow(src);
            FAIL_CHECK("expected UnsupportedConstruct");
        } catch (const UnsupportedConstruct& err) {
            CHECK(err.construct == what);
        }
    };
    rejects("import os", "import");
    rejects("from os import path", "from");
    rejects("with open('f') as f:\n    pass", "with");
    rejects("class A:\n    pass", "class");
    rejects("f = lambda x: x", "lambda");
    rejects("global x", "global");
    rejects("raise ValueError('x')", "raise");
    rejects("del x", "del");
    rejects("assert x", "assert");
    rejects("x.unknown_method()", "method unknown_method");
    rejects("x.append", "attribute access");
    rejects("x.__class__()", "method __class__");
    rejects("a, b = 1, 2", "tuple");
    rejects("for k, v in d.items():\n    pass", "tuple unpacking in for");
    rejects("x[1:2]", "slice");
    rejects("f(key=1)", "keyword argument");
    rejects("def f(x=1):\n    pass", "default parameter value");
    rejects("[x for x in xs for y in ys]", "nested comprehension clause");
    rejects("{k: v for k in xs}", "dict comprehension");
    rejects("g()()", "computed call target");
}

TEST_CASE("syntax errors carry a position") {
    auto fails = [](const char* src) {
        CAPTURE(src);
        CHECK_THROWS_AS(parse_workflow(src), WorkflowSyntaxError);
    };
    fails("if x\n    pass");
    fails("x = ");
    fails("def ():\n    pass");
    fails("print('unterminated");
    fails("if x:\npass");          // missing indent
    fails("x = 1\n        y = 2"); // stray indent
    fails("x = (1 + ");
    try {
        parse_workflow("a = 1\nb = ]");
        FAIL_CHECK("expected WorkflowSyntaxError");
    } catch (const WorkflowSyntaxError& err) {
        CHECK(err.line == 2);
    }
}

TEST_CASE("supported surface: control flow, methods, displays, f-strings") {
    CHECK_NOTHROW(parse_workflow("if a:\n    pass\nelif b:\n    pass\nelse:\n    pass"));
    CHECK_NOTHROW(parse_workflow("while i < 10:\n    i += 1\n    if i == 5:\n        break"));
    CHECK_NOTHROW(parse_workflow("for x in [1, 2, 3]:\n    continue"));
    CHECK_NOTHROW(parse_workflow("try:\n    x = 1\nexcept Exception as e:\n    print(e)"));
    CHECK_NOTHROW(parse_workflow("try:\n    pass\nexcept:\n    pass"));
    CHECK_NOTHROW(parse_workflow("xs = [n * 2 for n in range(10) if n % 2 == 0]"));
    CHECK_NOTHROW(parse_workflow("d = {\"a\": 1, \"b\": 2}\nprint(d[\"a\"])"));
    CHECK_NOTHROW(parse_workflow("s = \"a,b\".split(\",\")\nprint(\", \".join(s))"));
    CHECK_NOTHROW(parse_workflow("x = 1 if flag else 2"));
    CHECK_NOTHROW(parse_workflow("ok = a is not None and b != 3"));
    CHECK_NOTHROW(parse_workflow("print(f\"sum is {a + b} units\")"));
    CHECK_NOTHROW(parse_workflow("def f(x: 'Integer') -> None:\n    return x"));
    CHECK_NOTHROW(parse_workflow("send_email(\n    a,\n    b,\n    c,\n    [d],\n)"));
    CHECK_NOTHROW(parse_workflow("if x: y = 1"));
    CHECK_NOTHROW(parse_workflow("a = 1; b = 2"));
}

TEST_CASE("comments and blank lines are discarded") {
    WorkflowProgram program = parse_workflow("# leading comment\n\nx = 1  # trailing\n\n# end\n");
    CHECK(program.statements.size() == 1);
}

TEST_CASE("f-string restrictions") {
    CHECK_THROWS_AS(parse_workflow("x = f\"{v:>10}\""), UnsupportedConstruct);
    CHECK_THROWS_AS(parse_workflow("x = f\"{v!r}\""), UnsupportedConstruct);
    CHECK_THROWS_AS(parse_workflow("x = f\"{}\""), WorkflowSyntaxError);
    CHECK_THROWS_AS(parse_workflow("x = f\"{unclosed\""), WorkflowSyntaxError);
    // escaped braces are literal text
    WorkflowProgram program = parse_workflow("x = f\"{{literal}} {v}\"");
    const auto* stmt = std::get_if<AssignStmt>(&program.statements[0]->node);
    REQUIRE(stmt);
    const auto* fstr = std::get_if<FStringExpr>(&stmt->value->node);
    REQUIRE(fstr);
    REQUIRE(fstr->parts.size() == 2);
    CHECK(std::get<std::string>(fstr->parts[0]) == "{literal} ");
}

TEST_CASE("deep nesting is rejected instead of overflowing") {
    std::string deep(300, '(');
    deep += "1";
    deep += std::string(300, ')');
    CHECK_THROWS_AS(parse_workflow("x = " + deep), WorkflowSyntaxError);
}
