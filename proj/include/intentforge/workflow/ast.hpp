// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "intentforge/value.hpp"

namespace intentforge::workflow {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

enum class BinOp { Add, Sub, Mul, Div, FloorDiv, Mod, Pow };
enum class UnaryOp { Neg, Pos, Not };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge, In, NotIn, Is, IsNot };
enum class BoolOp { And, Or };

// --- expressions ---

struct LiteralExpr {
    HostValue value;
};
struct NameExpr {
    std::string name;
};
struct CallExpr {
    std::string callee;
    std::vector<ExprPtr> args;
};
struct MethodCallExpr {
    ExprPtr object;
    std::string method;
    std::vector<ExprPtr> args;
};
struct BinaryExpr {
    BinOp op;
    ExprPtr lhs, rhs;
};
struct UnaryExpr {
    UnaryOp op;
    ExprPtr operand;
};
struct CompareExpr {
    ExprPtr first;
    std::vector<std::pair<CmpOp, ExprPtr>> rest;  // chained comparisons
};
struct BoolExpr {
    BoolOp op;
    std::vector<ExprPtr> operands;  // short-circuit, left to right
};
struct SubscriptExpr {
    ExprPtr object;
    ExprPtr index;
};
struct ListExpr {
    std::vector<ExprPtr> items;
};
struct MapExpr {
    std::vector<std::pair<ExprPtr, ExprPtr>> items;
};
struct CondExpr {
    ExprPtr body, cond, orelse;  // body if cond else orelse
};
struct FStringExpr {
    // literal runs interleaved with embedded expressions, in order
    std::vector<std::variant<std::string, ExprPtr>> parts;
};
struct ListCompExpr {
    ExprPtr element;
    std::string var;
    ExprPtr iterable;
    ExprPtr filter;  // may be null
};

struct Expr {
    int line = 0;
    std::variant<LiteralExpr, NameExpr, CallExpr, MethodCallExpr, BinaryExpr, UnaryExpr,
                 CompareExpr, BoolExpr, SubscriptExpr, ListExpr, MapExpr, CondExpr, FStringExpr,
                 ListCompExpr>
        node;
};

// --- statements ---

struct ExprStmt {
    ExprPtr expr;
};
struct AssignStmt {
    ExprPtr target;  // NameExpr or SubscriptExpr
    ExprPtr value;
};
struct DefStmt {
    std::string name;
    std::vector<std::string> params;
    Block body;
};
struct ReturnStmt {
    ExprPtr value;  // may be null
};
struct IfStmt {
    std::vector<std::pair<ExprPtr, Block>> branches;  // if + elifs
    Block orelse;
};
struct WhileStmt {
    ExprPtr cond;
    Block body;
};
struct ForStmt {
    std::string var;
    ExprPtr iterable;
    Block body;
};
struct TryStmt {
    Block body;
    std::string bind_name;  // empty = no `as` binding
    Block handler;
};
struct PassStmt {};
struct BreakStmt {};
struct ContinueStmt {};

struct Stmt {
    int line = 0;
    std::variant<ExprStmt, AssignStmt, DefStmt, ReturnStmt, IfStmt, WhileStmt, ForStmt, TryStmt,
                 PassStmt, BreakStmt, ContinueStmt>
        node;
};

/// Parsed workflow source: a sequence of top-level statements.
struct WorkflowProgram {
    Block statements;
};

template <typename T, typename... Args>
ExprPtr make_expr(int line, Args&&... args) {
    auto e = std::make_unique<Expr>();
    e->line = line;
    e->node = T{std::forward<Args>(args)...};
    return e;
}

template <typename T, typename... Args>
StmtPtr make_stmt(int line, Args&&... args) {
    auto s = std::make_unique<Stmt>();
    s->line = line;
    s->node = T{std::forward<Args>(args)...};
    return s;
}

}  // namespace intentforge::workflow
