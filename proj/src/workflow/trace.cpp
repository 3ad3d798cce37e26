// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/workflow/trace.hpp"

#include <nlohmann/json.hpp>

#include "intentforge/json_conv.hpp"

namespace intentforge {

nlohmann::json value_to_json(const HostValue& value) {
    using nlohmann::json;
    switch (value.kind()) {
        case HostValue::Kind::Null: return nullptr;
        case HostValue::Kind::Boolean: return value.as_bool();
        case HostValue::Kind::Integer: return value.as_int();
        case HostValue::Kind::Float: return value.as_float();
        case HostValue::Kind::Text: return value.as_text();
        case HostValue::Kind::List: {
            json arr = json::array();
            for (const auto& item : value.as_list()) arr.push_back(value_to_json(item));
            return arr;
        }
        case HostValue::Kind::Map: {
            json obj = json::object();
            for (const auto& [key, val] : value.as_map()) obj[key] = value_to_json(val);
            return obj;
        }
    }
    return nullptr;
}

HostValue value_from_json(const nlohmann::json& j) {
    using nlohmann::json;
    switch (j.type()) {
        case json::value_t::null: return HostValue::null();
        case json::value_t::boolean: return HostValue(j.get<bool>());
        case json::value_t::number_integer: return HostValue(j.get<std::int64_t>());
        case json::value_t::number_unsigned: return HostValue(static_cast<std::int64_t>(j.get<std::uint64_t>()));
        case json::value_t::number_float: return HostValue(j.get<double>());
        case json::value_t::string: return HostValue(j.get<std::string>());
        case json::value_t::array: {
            HostValue::List list;
            for (const auto& item : j) list.push_back(value_from_json(item));
            return HostValue(std::move(list));
        }
        case json::value_t::object: {
            HostValue::Map map;
            for (auto it = j.begin(); it != j.end(); ++it) map[it.key()] = value_from_json(it.value());
            return HostValue(std::move(map));
        }
        default: return HostValue::null();
    }
}

}  // namespace intentforge

namespace intentforge::workflow {

const char* run_status_name(RunStatus status) {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::RuntimeError: return "runtime_error";
        case RunStatus::LimitExceeded: return "limit_exceeded";
        case RunStatus::ParseRejected: return "parse_rejected";
    }
    return "?";
}

std::optional<RunStatus> run_status_from_name(std::string_view name) {
    if (name == "completed") return RunStatus::Completed;
    if (name == "runtime_error") return RunStatus::RuntimeError;
    if (name == "limit_exceeded") return RunStatus::LimitExceeded;
    if (name == "parse_rejected") return RunStatus::ParseRejected;
    return std::nullopt;
}

bool ExecutionTrace::called(std::string_view name) const { return find_call(name) != nullptr; }

const CallEvent* ExecutionTrace::find_call(std::string_view name) const {
    for (const auto& te : events) {
        if (const auto* call = std::get_if<CallEvent>(&te.event)) {
            if (call->name == name) return call;
        }
    }
    return nullptr;
}

std::vector<const CallEvent*> ExecutionTrace::calls() const {
    std::vector<const CallEvent*> out;
    for (const auto& te : events) {
        if (const auto* call = std::get_if<CallEvent>(&te.event)) out.push_back(call);
    }
    return out;
}

std::string ExecutionTrace::output_text() const {
    std::string out;
    for (const auto& te : events) {
        if (const auto* output = std::get_if<OutputEvent>(&te.event)) {
            if (!out.empty()) out += '\n';
            out += output->text;
        }
    }
    return out;
}

std::string ExecutionTrace::to_jsonl() const {
    using nlohmann::json;
    std::string out;
    for (const auto& te : events) {
        json line;
        line["t_ms"] = te.t_ms;
        if (const auto* begin = std::get_if<BeginEvent>(&te.event)) {
            line["event"] = "begin";
            line["intention_id"] = begin->intention_id;
        } else if (const auto* call = std::get_if<CallEvent>(&te.event)) {
            line["event"] = "call";
            line["name"] = call->name;
            json args = json::array();
            for (const auto& a : call->args) args.push_back(value_to_json(a));
            line["args"] = std::move(args);
            if (call->error.empty())
                line["result"] = value_to_json(call->result);
            else
                line["error"] = call->error;
        } else if (const auto* output = std::get_if<OutputEvent>(&te.event)) {
            line["event"] = "output";
            line["text"] = output->text;
        } else if (const auto* error = std::get_if<ErrorEvent>(&te.event)) {
            line["event"] = "error";
            line["kind"] = error->kind;
            line["message"] = error->message;
        } else if (const auto* end = std::get_if<EndEvent>(&te.event)) {
            line["event"] = "end";
            line["status"] = run_status_name(end->status);
            line["steps_used"] = end->steps_used;
        }
        out += line.dump();
        out += '\n';
    }
    return out;
}

}  // namespace intentforge::workflow
