// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/value.hpp"

#include <nlohmann/json.hpp>

namespace intentforge {

const char* HostValue::kind_name() const {
    switch (kind()) {
        case Kind::Null: return "Null";
        case Kind::Boolean: return "Boolean";
        case Kind::Integer: return "Integer";
        case Kind::Float: return "Float";
        case Kind::Text: return "Text";
        case Kind::List: return "List";
        case Kind::Map: return "Map";
    }
    return "?";
}

double HostValue::number() const {
    if (is_int()) return static_cast<double>(as_int());
    return as_float();
}

std::string float_to_text(double d) {
    // nlohmann emits the shortest round-trip decimal and keeps a ".0" on
    // integral values, which is the rendering the object language wants.
    return nlohmann::json(d).dump();
}

static void quote_single(const std::string& s, std::string& out) {
    out += '\'';
    for (char c : s) {
        switch (c) {
            case '\'': out += "\\'"; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '\'';
}

std::string HostValue::repr_text() const {
    switch (kind()) {
        case Kind::Text: {
            std::string out;
            quote_single(as_text(), out);
            return out;
        }
        default:
            return str_text();
    }
}

std::string HostValue::str_text() const {
    switch (kind()) {
        case Kind::Null: return "None";
        case Kind::Boolean: return as_bool() ? "True" : "False";
        case Kind::Integer: return std::to_string(as_int());
        case Kind::Float: return float_to_text(as_float());
        case Kind::Text: return as_text();
        case Kind::List: {
            std::string out = "[";
            bool first = true;
            for (const auto& item : as_list()) {
                if (!first) out += ", ";
                first = false;
                out += item.repr_text();
            }
            out += "]";
            return out;
        }
        case Kind::Map: {
            std::string out = "{";
            bool first = true;
            for (const auto& [key, val] : as_map()) {
                if (!first) out += ", ";
                first = false;
                quote_single(key, out);
                out += ": ";
                out += val.repr_text();
            }
            out += "}";
            return out;
        }
    }
    return "?";
}

}  // namespace intentforge
