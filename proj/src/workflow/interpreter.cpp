// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/workflow/interpreter.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <variant>

#include "intentforge/errors.hpp"
#include "intentforge/host_env.hpp"
#include "intentforge/workflow/parser.hpp"

namespace intentforge::workflow {

namespace {

constexpr std::size_t kMaxTextBytes = 16u << 20;
constexpr std::size_t kMaxContainerItems = 1u << 20;
constexpr std::size_t kMaxRangeItems = 1u << 20;
constexpr int kMaxEvalDepth = 2000;

// --- internal control-flow signals; never escape execute_workflow ---

struct BreakSignal {};
struct ContinueSignal {};
struct ReturnSignal {
    HostValue value;
};

// Catchable by try/except: the single error value of the object language.
struct RuntimeSignal {
    std::string kind;
    std::string message;
};

// Not catchable: resource ceilings.
struct LimitSignal {
    std::string kind;   // step_limit | depth_limit | time_limit
    std::string message;
};

[[noreturn]] void raise(std::string kind, std::string message) {
    throw RuntimeSignal{std::move(kind), std::move(message)};
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

// Floor division / modulo with the sign rules generated code assumes.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
    std::int64_t r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) r += b;
    return r;
}

// Container cells in a value tree; text and scalars count 1. Reading a
// variable charges this many steps, so loops that grow nested structures
// exponentially exhaust the step budget instead of host memory.
std::size_t deep_cells(const HostValue& v) {
    switch (v.kind()) {
        case HostValue::Kind::List: {
            std::size_t n = 1;
            for (const auto& item : v.as_list()) n += deep_cells(item);
            return n;
        }
        case HostValue::Kind::Map: {
            std::size_t n = 1;
            for (const auto& [_, item] : v.as_map()) n += deep_cells(item);
            return n;
        }
        default:
            return 1;
    }
}

bool truthy(const HostValue& v) {
    switch (v.kind()) {
        case HostValue::Kind::Null: return false;
        case HostValue::Kind::Boolean: return v.as_bool();
        case HostValue::Kind::Integer: return v.as_int() != 0;
        case HostValue::Kind::Float: return v.as_float() != 0.0;
        case HostValue::Kind::Text: return !v.as_text().empty();
        case HostValue::Kind::List: return !v.as_list().empty();
        case HostValue::Kind::Map: return !v.as_map().empty();
    }
    return false;
}

// Value equality as the object language sees it: numeric kinds compare by
// value, everything else structurally.
bool language_equals(const HostValue& a, const HostValue& b) {
    if (a.is_number() && b.is_number()) {
        if (a.is_int() && b.is_int()) return a.as_int() == b.as_int();
        return a.number() == b.number();
    }
    if (a.kind() != b.kind()) return false;
    if (a.is_list()) {
        const auto& la = a.as_list();
        const auto& lb = b.as_list();
        if (la.size() != lb.size()) return false;
        for (std::size_t i = 0; i < la.size(); ++i)
            if (!language_equals(la[i], lb[i])) return false;
        return true;
    }
    if (a.is_map()) {
        const auto& ma = a.as_map();
        const auto& mb = b.as_map();
        if (ma.size() != mb.size()) return false;
        for (auto ia = ma.begin(), ib = mb.begin(); ia != ma.end(); ++ia, ++ib) {
            if (ia->first != ib->first || !language_equals(ia->second, ib->second)) return false;
        }
        return true;
    }
    return a == b;
}

int order_compare(const HostValue& a, const HostValue& b) {
    if (a.is_number() && b.is_number()) {
        double x = a.number(), y = b.number();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    if (a.is_text() && b.is_text()) return a.as_text().compare(b.as_text()) < 0 ? -1
                                         : (a.as_text() == b.as_text() ? 0 : 1);
    if (a.is_list() && b.is_list()) {
        const auto& la = a.as_list();
        const auto& lb = b.as_list();
        for (std::size_t i = 0; i < la.size() && i < lb.size(); ++i) {
            int c = order_compare(la[i], lb[i]);
            if (c != 0) return c;
        }
        return la.size() < lb.size() ? -1 : (la.size() == lb.size() ? 0 : 1);
    }
    raise("type_error", std::string("cannot order ") + a.kind_name() + " and " + b.kind_name());
}

struct Binding {
    std::variant<HostValue, const DefStmt*> slot;

    bool is_function() const { return std::holds_alternative<const DefStmt*>(slot); }
    HostValue& value() { return std::get<HostValue>(slot); }
    const DefStmt* function() const { return std::get<const DefStmt*>(slot); }
};

using Scope = std::map<std::string, Binding>;

class Interpreter {
public:
    Interpreter(const FunctionTable& table, HostEnvironment& env, const ExecLimits& limits)
        : table_(table), env_(env), limits_(limits) {}

    ExecutionTrace run(const WorkflowProgram& program, int intention_id) {
        scopes_.emplace_back();
        start_ms_ = env_.clock().now_ms();
        record(BeginEvent{intention_id});
        env_.set_output_sink([this](const std::string& text) { pending_output_.push_back(text); });

        ExecutionTrace trace;
        try {
            for (const auto& stmt : program.statements) exec(*stmt);
            trace.status = RunStatus::Completed;
        } catch (const RuntimeSignal& sig) {
            record(ErrorEvent{sig.kind, sig.message});
            trace.status = RunStatus::RuntimeError;
        } catch (const LimitSignal& sig) {
            record(ErrorEvent{sig.kind, sig.message});
            trace.status = RunStatus::LimitExceeded;
        } catch (const BreakSignal&) {
            record(ErrorEvent{"control_flow", "break outside loop"});
            trace.status = RunStatus::RuntimeError;
        } catch (const ContinueSignal&) {
            record(ErrorEvent{"control_flow", "continue outside loop"});
            trace.status = RunStatus::RuntimeError;
        } catch (const ReturnSignal&) {
            record(ErrorEvent{"control_flow", "return outside function"});
            trace.status = RunStatus::RuntimeError;
        }
        env_.set_output_sink(nullptr);
        record(EndEvent{trace.status, steps_});
        trace.events = std::move(events_);
        trace.steps_used = steps_;
        return trace;
    }

private:
    // --- bookkeeping ---

    void record(BeginEvent e) { events_.push_back({env_.clock().now_ms(), std::move(e)}); }
    void record(CallEvent e) {
        events_.push_back({env_.clock().now_ms(), std::move(e)});
        flush_output();
    }
    void record(OutputEvent e) { events_.push_back({env_.clock().now_ms(), std::move(e)}); }
    void record(ErrorEvent e) {
        flush_output();
        events_.push_back({env_.clock().now_ms(), std::move(e)});
    }
    void record(EndEvent e) {
        flush_output();
        events_.push_back({env_.clock().now_ms(), std::move(e)});
    }

    void flush_output() {
        for (auto& text : pending_output_) record(OutputEvent{std::move(text)});
        pending_output_.clear();
    }

    void tick(std::size_t cost = 1) {
        steps_ += cost;
        if (steps_ >= limits_.max_steps) {
            steps_ = limits_.max_steps;
            throw LimitSignal{"step_limit",
                              "step limit of " + std::to_string(limits_.max_steps) + " exceeded"};
        }
        if (env_.clock().now_ms() - start_ms_ > limits_.max_wall_time_ms)
            throw LimitSignal{"time_limit", "wall time limit exceeded"};
    }

    struct EvalDepthGuard {
        Interpreter& in;
        explicit EvalDepthGuard(Interpreter& i) : in(i) {
            if (++in.eval_depth_ > kMaxEvalDepth) {
                --in.eval_depth_;  // destructor will not run after a throwing ctor
                raise("type_error", "expression evaluation too deep");
            }
        }
        ~EvalDepthGuard() { --in.eval_depth_; }
    };

    Scope& locals() { return scopes_.back(); }
    Scope& globals() { return scopes_.front(); }

    Binding* lookup(const std::string& name) {
        if (auto it = locals().find(name); it != locals().end()) return &it->second;
        if (scopes_.size() > 1) {
            if (auto it = globals().find(name); it != globals().end()) return &it->second;
        }
        return nullptr;
    }

    // --- statements ---

    void exec(const Stmt& stmt) {
        tick();
        std::visit([&](const auto& node) { exec_node(stmt, node); }, stmt.node);
    }

    void exec_block(const Block& block) {
        for (const auto& stmt : block) exec(*stmt);
    }

    void exec_node(const Stmt&, const ExprStmt& node) { eval(*node.expr); }

    void exec_node(const Stmt&, const AssignStmt& node) {
        HostValue value = eval(*node.value);
        assign(*node.target, std::move(value));
    }

    void exec_node(const Stmt&, const DefStmt& node) {
        locals()[node.name] = Binding{&node};
    }

    void exec_node(const Stmt&, const ReturnStmt& node) {
        HostValue value = node.value ? eval(*node.value) : HostValue::null();
        throw ReturnSignal{std::move(value)};
    }

    void exec_node(const Stmt&, const IfStmt& node) {
        for (const auto& [cond, body] : node.branches) {
            if (truthy(eval(*cond))) {
                exec_block(body);
                return;
            }
        }
        exec_block(node.orelse);
    }

    void exec_node(const Stmt&, const WhileStmt& node) {
        while (truthy(eval(*node.cond))) {
            try {
                exec_block(node.body);
            } catch (const BreakSignal&) {
                return;
            } catch (const ContinueSignal&) {
            }
        }
    }

    void exec_node(const Stmt&, const ForStmt& node) {
        // `for x in range(...)` iterates lazily; nothing is materialized.
        if (const auto* call = std::get_if<CallExpr>(&node.iterable->node);
            call && call->callee == "range" && !lookup("range")) {
            auto [start, stop, step] = eval_range_args(*call);
            for (std::int64_t i = start; step > 0 ? i < stop : i > stop; i += step) {
                tick();
                locals()[node.var] = Binding{HostValue(i)};
                try {
                    exec_block(node.body);
                } catch (const BreakSignal&) {
                    return;
                } catch (const ContinueSignal&) {
                }
            }
            return;
        }

        HostValue iterable = eval(*node.iterable);
        std::vector<HostValue> items = iteration_items(iterable);
        for (auto& item : items) {
            tick();
            locals()[node.var] = Binding{std::move(item)};
            try {
                exec_block(node.body);
            } catch (const BreakSignal&) {
                return;
            } catch (const ContinueSignal&) {
            }
        }
    }

    void exec_node(const Stmt&, const TryStmt& node) {
        try {
            exec_block(node.body);
        } catch (const RuntimeSignal& sig) {
            if (!node.bind_name.empty()) locals()[node.bind_name] = Binding{HostValue(sig.message)};
            exec_block(node.handler);
        }
    }

    void exec_node(const Stmt&, const PassStmt&) {}
    void exec_node(const Stmt&, const BreakStmt&) { throw BreakSignal{}; }
    void exec_node(const Stmt&, const ContinueStmt&) { throw ContinueSignal{}; }

    std::vector<HostValue> iteration_items(const HostValue& iterable) {
        switch (iterable.kind()) {
            case HostValue::Kind::List: return iterable.as_list();
            case HostValue::Kind::Text: {
                std::vector<HostValue> chars;
                for (char c : iterable.as_text()) chars.emplace_back(std::string(1, c));
                return chars;
            }
            case HostValue::Kind::Map: {
                std::vector<HostValue> keys;
                for (const auto& [key, _] : iterable.as_map()) keys.emplace_back(key);
                return keys;
            }
            default:
                raise("type_error", std::string(iterable.kind_name()) + " is not iterable");
        }
    }

    // --- assignment targets ---

    void assign(const Expr& target, HostValue value) {
        if (const auto* name = std::get_if<NameExpr>(&target.node)) {
            locals()[name->name] = Binding{std::move(value)};
            return;
        }
        const auto& sub = std::get<SubscriptExpr>(target.node);
        HostValue* object = try_resolve_lvalue(*sub.object);
        HostValue local;
        if (!object) {  // assigning into a temporary: evaluate, mutate, discard
            local = eval(*sub.object);
            object = &local;
        }
        HostValue index = eval(*sub.index);
        subscript_store(*object, index, std::move(value));
    }

    // Resolves a Name or nested Subscript chain to the live storage slot so
    // mutations (x[i] = v, lst.append) are visible. Returns nullptr for any
    // other base expression; callers then evaluate it as a plain rvalue and
    // mutate the resulting temporary, which is legal and has no lasting
    // effect. Nothing is evaluated on the nullptr path, so call side effects
    // happen exactly once in the caller.
    HostValue* try_resolve_lvalue(const Expr& expr) {
        if (const auto* name = std::get_if<NameExpr>(&expr.node)) {
            Binding* binding = lookup(name->name);
            if (!binding) raise("name_error", "name '" + name->name + "' is not defined");
            if (binding->is_function())
                raise("type_error", "'" + name->name + "' is a function, not a value");
            return &binding->value();
        }
        if (const auto* sub = std::get_if<SubscriptExpr>(&expr.node)) {
            HostValue* object = try_resolve_lvalue(*sub->object);
            if (!object) return nullptr;
            HostValue index = eval(*sub->index);
            return &subscript_slot(*object, index);
        }
        return nullptr;
    }

    HostValue& subscript_slot(HostValue& object, const HostValue& index) {
        if (object.is_list()) {
            auto& list = object.as_list();
            std::int64_t i = require_int(index, "list index");
            std::int64_t n = static_cast<std::int64_t>(list.size());
            if (i < 0) i += n;
            if (i < 0 || i >= n) raise("index_error", "list index out of range");
            return list[static_cast<std::size_t>(i)];
        }
        if (object.is_map()) {
            if (!index.is_text()) raise("type_error", "map keys are text");
            auto& map = object.as_map();
            auto it = map.find(index.as_text());
            if (it == map.end()) raise("key_error", "key '" + index.as_text() + "' not found");
            return it->second;
        }
        raise("type_error", std::string(object.kind_name()) + " is not subscriptable");
    }

    void subscript_store(HostValue& object, const HostValue& index, HostValue value) {
        if (object.is_map()) {
            if (!index.is_text()) raise("type_error", "map keys are text");
            auto& map = object.as_map();
            if (map.size() >= kMaxContainerItems) raise("value_error", "map too large");
            map[index.as_text()] = std::move(value);
            return;
        }
        if (object.is_list()) {
            subscript_slot(object, index) = std::move(value);
            return;
        }
        raise("type_error",
              std::string(object.kind_name()) + " does not support item assignment");
    }

    static std::int64_t require_int(const HostValue& v, const char* what) {
        if (!v.is_int()) raise("type_error", std::string(what) + " must be an integer");
        return v.as_int();
    }

    // --- expressions ---

    HostValue eval(const Expr& expr) {
        tick();
        EvalDepthGuard guard(*this);
        return std::visit([&](const auto& node) { return eval_node(expr, node); }, expr.node);
    }

    HostValue eval_node(const Expr&, const LiteralExpr& node) { return node.value; }

    HostValue eval_node(const Expr&, const NameExpr& node) {
        Binding* binding = lookup(node.name);
        if (!binding) {
            if (table_.contains(node.name) || is_builtin(node.name))
                raise("type_error", "'" + node.name + "' is a function, not a value");
            raise("name_error", "name '" + node.name + "' is not defined");
        }
        if (binding->is_function())
            raise("type_error", "'" + node.name + "' is a function, not a value");
        const HostValue& value = binding->value();
        // Reading a container copies it; charge the copy so growth loops hit
        // the step budget before host memory.
        if (value.is_list() || value.is_map()) tick(deep_cells(value) - 1);
        return value;
    }

    HostValue eval_node(const Expr&, const CallExpr& node) { return call_function(node); }

    HostValue eval_node(const Expr&, const MethodCallExpr& node) { return call_method(node); }

    HostValue eval_node(const Expr&, const BinaryExpr& node) {
        HostValue lhs = eval(*node.lhs);
        HostValue rhs = eval(*node.rhs);
        return binary_op(node.op, lhs, rhs);
    }

    HostValue eval_node(const Expr&, const UnaryExpr& node) {
        HostValue v = eval(*node.operand);
        switch (node.op) {
            case UnaryOp::Not: return HostValue(!truthy(v));
            case UnaryOp::Neg:
                if (v.is_int()) return HostValue(wrap_sub(0, v.as_int()));
                if (v.is_float()) return HostValue(-v.as_float());
                raise("type_error", std::string("cannot negate ") + v.kind_name());
            case UnaryOp::Pos:
                if (v.is_number()) return v;
                raise("type_error", std::string("bad operand for unary +: ") + v.kind_name());
        }
        return HostValue::null();
    }

    HostValue eval_node(const Expr&, const CompareExpr& node) {
        HostValue left = eval(*node.first);
        for (const auto& [op, rhs_expr] : node.rest) {
            HostValue right = eval(*rhs_expr);
            if (!compare(op, left, right)) return HostValue(false);
            left = std::move(right);
        }
        return HostValue(true);
    }

    HostValue eval_node(const Expr&, const BoolExpr& node) {
        HostValue value;
        for (const auto& operand : node.operands) {
            value = eval(*operand);
            bool t = truthy(value);
            if (node.op == BoolOp::And && !t) return value;
            if (node.op == BoolOp::Or && t) return value;
        }
        return value;
    }

    HostValue eval_node(const Expr&, const SubscriptExpr& node) {
        HostValue object = eval(*node.object);
        HostValue index = eval(*node.index);
        if (object.is_text()) {
            const auto& s = object.as_text();
            std::int64_t i = require_int(index, "string index");
            std::int64_t n = static_cast<std::int64_t>(s.size());
            if (i < 0) i += n;
            if (i < 0 || i >= n) raise("index_error", "string index out of range");
            return HostValue(std::string(1, s[static_cast<std::size_t>(i)]));
        }
        return subscript_slot(object, index);
    }

    HostValue eval_node(const Expr&, const ListExpr& node) {
        HostValue::List list;
        list.reserve(node.items.size());
        for (const auto& item : node.items) list.push_back(eval(*item));
        return HostValue(std::move(list));
    }

    HostValue eval_node(const Expr&, const MapExpr& node) {
        HostValue::Map map;
        for (const auto& [key_expr, value_expr] : node.items) {
            HostValue key = eval(*key_expr);
            if (!key.is_text()) raise("type_error", "map keys are text");
            map[key.as_text()] = eval(*value_expr);
        }
        return HostValue(std::move(map));
    }

    HostValue eval_node(const Expr&, const CondExpr& node) {
        return truthy(eval(*node.cond)) ? eval(*node.body) : eval(*node.orelse);
    }

    HostValue eval_node(const Expr&, const FStringExpr& node) {
        std::string out;
        for (const auto& part : node.parts) {
            if (const auto* text = std::get_if<std::string>(&part)) {
                out += *text;
            } else {
                out += eval(*std::get<ExprPtr>(part)).str_text();
            }
            if (out.size() > kMaxTextBytes) raise("value_error", "string too large");
        }
        return HostValue(std::move(out));
    }

    HostValue eval_node(const Expr&, const ListCompExpr& node) {
        HostValue::List result;
        auto emit = [&](HostValue item) {
            locals()[node.var] = Binding{std::move(item)};
            if (node.filter && !truthy(eval(*node.filter))) return;
            if (result.size() >= kMaxContainerItems) raise("value_error", "list too large");
            result.push_back(eval(*node.element));
        };
        if (const auto* call = std::get_if<CallExpr>(&node.iterable->node);
            call && call->callee == "range" && !lookup("range")) {
            auto [start, stop, step] = eval_range_args(*call);
            for (std::int64_t i = start; step > 0 ? i < stop : i > stop; i += step) {
                tick();
                emit(HostValue(i));
            }
        } else {
            for (auto& item : iteration_items(eval(*node.iterable))) {
                tick();
                emit(std::move(item));
            }
        }
        return HostValue(std::move(result));
    }

    // --- operators ---

    HostValue binary_op(BinOp op, const HostValue& a, const HostValue& b) {
        switch (op) {
            case BinOp::Add:
                if (a.is_int() && b.is_int()) return HostValue(wrap_add(a.as_int(), b.as_int()));
                if (a.is_number() && b.is_number()) return HostValue(a.number() + b.number());
                if (a.is_text() && b.is_text()) {
                    if (a.as_text().size() + b.as_text().size() > kMaxTextBytes)
                        raise("value_error", "string too large");
                    return HostValue(a.as_text() + b.as_text());
                }
                if (a.is_list() && b.is_list()) {
                    if (a.as_list().size() + b.as_list().size() > kMaxContainerItems)
                        raise("value_error", "list too large");
                    HostValue::List out = a.as_list();
                    out.insert(out.end(), b.as_list().begin(), b.as_list().end());
                    return HostValue(std::move(out));
                }
                break;
            case BinOp::Sub:
                if (a.is_int() && b.is_int()) return HostValue(wrap_sub(a.as_int(), b.as_int()));
                if (a.is_number() && b.is_number()) return HostValue(a.number() - b.number());
                break;
            case BinOp::Mul:
                if (a.is_int() && b.is_int()) return HostValue(wrap_mul(a.as_int(), b.as_int()));
                if (a.is_number() && b.is_number()) return HostValue(a.number() * b.number());
                break;
            case BinOp::Div:
                if (a.is_number() && b.is_number()) {
                    if (b.number() == 0.0) raise("division_by_zero", "division by zero");
                    return HostValue(a.number() / b.number());
                }
                break;
            case BinOp::FloorDiv:
                if (a.is_int() && b.is_int()) {
                    if (b.as_int() == 0) raise("division_by_zero", "integer division by zero");
                    return HostValue(floor_div(a.as_int(), b.as_int()));
                }
                if (a.is_number() && b.is_number()) {
                    if (b.number() == 0.0) raise("division_by_zero", "division by zero");
                    return HostValue(std::floor(a.number() / b.number()));
                }
                break;
            case BinOp::Mod:
                if (a.is_int() && b.is_int()) {
                    if (b.as_int() == 0) raise("division_by_zero", "integer modulo by zero");
                    return HostValue(floor_mod(a.as_int(), b.as_int()));
                }
                if (a.is_number() && b.is_number()) {
                    if (b.number() == 0.0) raise("division_by_zero", "modulo by zero");
                    double r = std::fmod(a.number(), b.number());
                    if (r != 0.0 && ((r < 0) != (b.number() < 0))) r += b.number();
                    return HostValue(r);
                }
                break;
            case BinOp::Pow:
                if (a.is_int() && b.is_int() && b.as_int() >= 0) {
                    std::int64_t base = a.as_int(), exp = b.as_int(), result = 1;
                    while (exp > 0) {
                        if (exp & 1) result = wrap_mul(result, base);
                        base = wrap_mul(base, base);
                        exp >>= 1;
                    }
                    return HostValue(result);
                }
                if (a.is_number() && b.is_number())
                    return HostValue(std::pow(a.number(), b.number()));
                break;
        }
        raise("type_error", std::string("unsupported operand types: ") + a.kind_name() + " and " +
                                b.kind_name());
    }

    bool compare(CmpOp op, const HostValue& a, const HostValue& b) {
        switch (op) {
            case CmpOp::Eq:
            case CmpOp::Is:
                return language_equals(a, b);
            case CmpOp::Ne:
            case CmpOp::IsNot:
                return !language_equals(a, b);
            case CmpOp::Lt: return order_compare(a, b) < 0;
            case CmpOp::Le: return order_compare(a, b) <= 0;
            case CmpOp::Gt: return order_compare(a, b) > 0;
            case CmpOp::Ge: return order_compare(a, b) >= 0;
            case CmpOp::In: return contains(b, a);
            case CmpOp::NotIn: return !contains(b, a);
        }
        return false;
    }

    bool contains(const HostValue& container, const HostValue& item) {
        if (container.is_text()) {
            if (!item.is_text()) raise("type_error", "'in <string>' needs a string");
            return container.as_text().find(item.as_text()) != std::string::npos;
        }
        if (container.is_list()) {
            for (const auto& v : container.as_list())
                if (language_equals(v, item)) return true;
            return false;
        }
        if (container.is_map()) {
            if (!item.is_text()) return false;
            return container.as_map().count(item.as_text()) != 0;
        }
        raise("type_error", std::string(container.kind_name()) + " is not a container");
    }

    // --- calls ---

    static bool is_builtin(const std::string& name) {
        return name == "len" || name == "range" || name == "str" || name == "int" ||
               name == "float";
    }

    HostValue call_function(const CallExpr& call) {
        if (Binding* binding = lookup(call.callee)) {
            if (!binding->is_function())
                raise("type_error", "'" + call.callee + "' is not callable");
            return call_user_function(*binding->function(), call);
        }
        if (is_builtin(call.callee)) return call_builtin(call);
        if (table_.contains(call.callee)) return call_host(call);
        raise("name_error", "name '" + call.callee + "' is not defined");
    }

    HostValue call_user_function(const DefStmt& def, const CallExpr& call) {
        if (call.args.size() != def.params.size())
            raise("type_error", def.name + "() takes " + std::to_string(def.params.size()) +
                                    " argument(s), got " + std::to_string(call.args.size()));
        if (call_depth_ + 1 > limits_.max_call_depth)
            throw LimitSignal{"depth_limit", "call depth limit of " +
                                                 std::to_string(limits_.max_call_depth) +
                                                 " exceeded"};
        Scope frame;
        for (std::size_t i = 0; i < call.args.size(); ++i)
            frame[def.params[i]] = Binding{eval(*call.args[i])};

        ++call_depth_;
        scopes_.push_back(std::move(frame));
        HostValue result;
        try {
            exec_block(def.body);
        } catch (const ReturnSignal& ret) {
            result = ret.value;
        } catch (...) {
            scopes_.pop_back();
            --call_depth_;
            throw;
        }
        scopes_.pop_back();
        --call_depth_;
        return result;
    }

    HostValue call_host(const CallExpr& call) {
        std::vector<HostValue> args;
        args.reserve(call.args.size());
        for (const auto& arg : call.args) args.push_back(eval(*arg));

        // print bridges the object language to the catalog's one-text-arg
        // signature: arguments are stringified and space-joined.
        if (call.callee == "print") {
            std::string joined;
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (i) joined += ' ';
                joined += args[i].str_text();
            }
            args.assign(1, HostValue(std::move(joined)));
        }

        try {
            HostValue result = table_.invoke(call.callee, args, env_);
            record(CallEvent{call.callee, std::move(args), result, ""});
            return result;
        } catch (const HostError& err) {
            record(CallEvent{call.callee, std::move(args), HostValue::null(), err.what()});
            raise("host_error", err.what());
        } catch (const ArityMismatch& err) {
            pending_output_.clear();
            raise("type_error", err.what());
        } catch (const ArgumentTypeMismatch& err) {
            pending_output_.clear();
            raise("type_error", err.what());
        }
    }

    std::tuple<std::int64_t, std::int64_t, std::int64_t> eval_range_args(const CallExpr& call) {
        if (call.args.empty() || call.args.size() > 3)
            raise("type_error", "range() takes 1 to 3 arguments");
        std::vector<std::int64_t> vals;
        for (const auto& arg : call.args) vals.push_back(require_int(eval(*arg), "range() argument"));
        std::int64_t start = 0, stop = 0, step = 1;
        if (vals.size() == 1) {
            stop = vals[0];
        } else {
            start = vals[0];
            stop = vals[1];
            if (vals.size() == 3) step = vals[2];
        }
        if (step == 0) raise("value_error", "range() step must not be zero");
        return {start, stop, step};
    }

    HostValue call_builtin(const CallExpr& call) {
        const std::string& name = call.callee;
        if (name == "range") {
            auto [start, stop, step] = eval_range_args(call);
            HostValue::List out;
            for (std::int64_t i = start; step > 0 ? i < stop : i > stop; i += step) {
                if (out.size() >= kMaxRangeItems) raise("value_error", "range too large");
                out.emplace_back(i);
            }
            return HostValue(std::move(out));
        }

        std::vector<HostValue> args;
        for (const auto& arg : call.args) args.push_back(eval(*arg));

        if (name == "len") {
            if (args.size() != 1) raise("type_error", "len() takes exactly one argument");
            const HostValue& v = args[0];
            if (v.is_text()) return HostValue(static_cast<std::int64_t>(v.as_text().size()));
            if (v.is_list()) return HostValue(static_cast<std::int64_t>(v.as_list().size()));
            if (v.is_map()) return HostValue(static_cast<std::int64_t>(v.as_map().size()));
            raise("type_error", std::string(v.kind_name()) + " has no len()");
        }
        if (name == "str") {
            if (args.size() != 1) raise("type_error", "str() takes exactly one argument");
            return HostValue(args[0].str_text());
        }
        if (name == "int") {
            if (args.size() != 1) raise("type_error", "int() takes exactly one argument");
            const HostValue& v = args[0];
            if (v.is_int()) return v;
            if (v.is_bool()) return HostValue(static_cast<std::int64_t>(v.as_bool() ? 1 : 0));
            if (v.is_float()) return HostValue(static_cast<std::int64_t>(v.as_float()));
            if (v.is_text()) {
                try {
                    std::size_t used = 0;
                    std::string s = strip_ascii(v.as_text());
                    std::int64_t out = std::stoll(s, &used);
                    if (used != s.size()) throw std::invalid_argument("");
                    return HostValue(out);
                } catch (const std::exception&) {
                    raise("value_error", "invalid literal for int(): '" + v.as_text() + "'");
                }
            }
            raise("type_error", std::string("cannot convert ") + v.kind_name() + " to int");
        }
        if (name == "float") {
            if (args.size() != 1) raise("type_error", "float() takes exactly one argument");
            const HostValue& v = args[0];
            if (v.is_float()) return v;
            if (v.is_int()) return HostValue(static_cast<double>(v.as_int()));
            if (v.is_bool()) return HostValue(v.as_bool() ? 1.0 : 0.0);
            if (v.is_text()) {
                try {
                    std::size_t used = 0;
                    std::string s = strip_ascii(v.as_text());
                    double out = std::stod(s, &used);
                    if (used != s.size()) throw std::invalid_argument("");
                    return HostValue(out);
                } catch (const std::exception&) {
                    raise("value_error", "could not convert string to float: '" + v.as_text() + "'");
                }
            }
            raise("type_error", std::string("cannot convert ") + v.kind_name() + " to float");
        }
        raise("name_error", "name '" + name + "' is not defined");
    }

    static std::string strip_ascii(const std::string& s) {
        std::size_t begin = s.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) return "";
        std::size_t end = s.find_last_not_of(" \t\r\n");
        return s.substr(begin, end - begin + 1);
    }

    // --- methods ---

    HostValue call_method(const MethodCallExpr& call) {
        const std::string& m = call.method;
        if (m == "append" || m == "extend") {
            HostValue* object = try_resolve_lvalue(*call.object);
            HostValue local;
            if (!object) {  // mutating a temporary drops the change, as in source order
                local = eval(*call.object);
                object = &local;
            }
            std::vector<HostValue> args;
            for (const auto& arg : call.args) args.push_back(eval(*arg));
            if (!object->is_list())
                raise("type_error", std::string(object->kind_name()) + " has no method " + m);
            auto& list = object->as_list();
            if (m == "append") {
                if (args.size() != 1) raise("type_error", "append() takes exactly one argument");
                if (list.size() >= kMaxContainerItems) raise("value_error", "list too large");
                list.push_back(std::move(args[0]));
            } else {
                if (args.size() != 1 || !args[0].is_list())
                    raise("type_error", "extend() takes a list");
                if (list.size() + args[0].as_list().size() > kMaxContainerItems)
                    raise("value_error", "list too large");
                for (auto& item : args[0].as_list()) list.push_back(item);
            }
            return HostValue::null();
        }

        HostValue object = eval(*call.object);
        std::vector<HostValue> args;
        for (const auto& arg : call.args) args.push_back(eval(*arg));
        if (object.is_text()) return text_method(object.as_text(), m, args);
        if (object.is_map()) return map_method(object.as_map(), m, args);
        raise("type_error", std::string(object.kind_name()) + " has no method " + m);
    }

    HostValue text_method(const std::string& s, const std::string& m,
                          std::vector<HostValue>& args) {
        auto want_text = [&](std::size_t i) -> const std::string& {
            if (i >= args.size() || !args[i].is_text())
                raise("type_error", m + "() expects a string argument");
            return args[i].as_text();
        };
        if (m == "split") {
            HostValue::List parts;
            if (args.empty()) {
                std::size_t i = 0;
                while (i < s.size()) {
                    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
                    std::size_t start = i;
                    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
                    if (i > start) parts.emplace_back(s.substr(start, i - start));
                }
            } else {
                const std::string& sep = want_text(0);
                if (sep.empty()) raise("value_error", "empty separator");
                std::size_t start = 0, pos;
                while ((pos = s.find(sep, start)) != std::string::npos) {
                    parts.emplace_back(s.substr(start, pos - start));
                    start = pos + sep.size();
                }
                parts.emplace_back(s.substr(start));
            }
            return HostValue(std::move(parts));
        }
        if (m == "join") {
            if (args.size() != 1 || !args[0].is_list()) raise("type_error", "join() takes a list");
            std::string out;
            const auto& items = args[0].as_list();
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (!items[i].is_text()) raise("type_error", "join() needs a list of strings");
                if (i) out += s;
                out += items[i].as_text();
                if (out.size() > kMaxTextBytes) raise("value_error", "string too large");
            }
            return HostValue(std::move(out));
        }
        if (m == "strip") {
            std::string chars = args.empty() ? " \t\r\n" : want_text(0);
            std::size_t begin = s.find_first_not_of(chars);
            if (begin == std::string::npos) return HostValue(std::string());
            std::size_t end = s.find_last_not_of(chars);
            return HostValue(s.substr(begin, end - begin + 1));
        }
        if (m == "lower" || m == "upper") {
            if (!args.empty()) raise("type_error", m + "() takes no arguments");
            std::string out = s;
            for (char& c : out)
                c = m == "lower" ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                                 : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            return HostValue(std::move(out));
        }
        if (m == "startswith") return HostValue(s.rfind(want_text(0), 0) == 0);
        if (m == "endswith") {
            const std::string& suffix = want_text(0);
            return HostValue(s.size() >= suffix.size() &&
                             s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0);
        }
        if (m == "replace") {
            const std::string& from = want_text(0);
            const std::string& to = want_text(1);
            if (from.empty()) raise("value_error", "replace() with an empty substring");
            std::string out;
            std::size_t start = 0, pos;
            while ((pos = s.find(from, start)) != std::string::npos) {
                out += s.substr(start, pos - start);
                out += to;
                start = pos + from.size();
                if (out.size() > kMaxTextBytes) raise("value_error", "string too large");
            }
            out += s.substr(start);
            return HostValue(std::move(out));
        }
        if (m == "format") return format_text(s, args);
        raise("type_error", "string has no method " + m);
    }

    HostValue format_text(const std::string& tmpl, const std::vector<HostValue>& args) {
        std::string out;
        std::size_t auto_index = 0;
        for (std::size_t i = 0; i < tmpl.size(); ++i) {
            char c = tmpl[i];
            if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                out += '{';
                ++i;
                continue;
            }
            if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
                out += '}';
                ++i;
                continue;
            }
            if (c != '{') {
                out += c;
                continue;
            }
            std::size_t close = tmpl.find('}', i);
            if (close == std::string::npos) raise("value_error", "unmatched '{' in format()");
            std::string field = tmpl.substr(i + 1, close - i - 1);
            std::size_t index;
            if (field.empty()) {
                index = auto_index++;
            } else if (field.find_first_not_of("0123456789") == std::string::npos) {
                index = static_cast<std::size_t>(std::stoll(field));
            } else {
                raise("value_error", "format() supports only positional fields");
            }
            if (index >= args.size()) raise("index_error", "format() field index out of range");
            out += args[index].str_text();
            i = close;
        }
        return HostValue(std::move(out));
    }

    HostValue map_method(const HostValue::Map& map, const std::string& m,
                         std::vector<HostValue>& args) {
        if (m == "get") {
            if (args.empty() || args.size() > 2) raise("type_error", "get() takes 1 or 2 arguments");
            if (!args[0].is_text()) raise("type_error", "map keys are text");
            auto it = map.find(args[0].as_text());
            if (it != map.end()) return it->second;
            return args.size() == 2 ? args[1] : HostValue::null();
        }
        if (m == "keys") {
            if (!args.empty()) raise("type_error", "keys() takes no arguments");
            HostValue::List out;
            for (const auto& [key, _] : map) out.emplace_back(key);
            return HostValue(std::move(out));
        }
        if (m == "items") {
            if (!args.empty()) raise("type_error", "items() takes no arguments");
            HostValue::List out;
            for (const auto& [key, val] : map) {
                HostValue::List pair;
                pair.emplace_back(key);
                pair.push_back(val);
                out.emplace_back(std::move(pair));
            }
            return HostValue(std::move(out));
        }
        raise("type_error", "map has no method " + m);
    }

    const FunctionTable& table_;
    HostEnvironment& env_;
    ExecLimits limits_;
    std::vector<TraceEvent> events_;
    std::vector<std::string> pending_output_;
    std::vector<Scope> scopes_;
    std::size_t steps_ = 0;
    std::size_t call_depth_ = 0;
    int eval_depth_ = 0;
    double start_ms_ = 0.0;
};

}  // namespace

ExecutionTrace execute_workflow(const WorkflowProgram& program, const FunctionTable& table,
                                HostEnvironment& env, const ExecLimits& limits, int intention_id) {
    if (!table.frozen()) throw std::logic_error("execute_workflow needs a frozen table");
    if (!limits.valid()) throw std::logic_error("execute_workflow needs positive limits");
    Interpreter interpreter(table, env, limits);
    return interpreter.run(program, intention_id);
}

ExecutionTrace run_workflow_source(std::string_view source, const FunctionTable& table,
                                   HostEnvironment& env, const ExecLimits& limits,
                                   int intention_id) {
    WorkflowProgram program;
    try {
        program = parse_workflow(source);
    } catch (const UnsupportedConstruct& err) {
        ExecutionTrace trace;
        trace.status = RunStatus::ParseRejected;
        trace.events.push_back({env.clock().now_ms(), BeginEvent{intention_id}});
        trace.events.push_back({env.clock().now_ms(), ErrorEvent{"unsupported_construct", err.what()}});
        trace.events.push_back({env.clock().now_ms(), EndEvent{RunStatus::ParseRejected, 0}});
        return trace;
    } catch (const WorkflowSyntaxError& err) {
        ExecutionTrace trace;
        trace.status = RunStatus::ParseRejected;
        trace.events.push_back({env.clock().now_ms(), BeginEvent{intention_id}});
        trace.events.push_back({env.clock().now_ms(), ErrorEvent{"syntax_error", err.what()}});
        trace.events.push_back({env.clock().now_ms(), EndEvent{RunStatus::ParseRejected, 0}});
        return trace;
    }
    return execute_workflow(program, table, env, limits, intention_id);
}

}  // namespace intentforge::workflow
