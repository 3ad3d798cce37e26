// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/types.hpp"

#include <algorithm>
#include <cctype>

#include "intentforge/errors.hpp"

namespace intentforge {

SemanticType SemanticType::collection(SemanticType element) {
    SemanticType t(Kind::Collection);
    t.args_.push_back(std::move(element));
    return t;
}

SemanticType SemanticType::dictionary(SemanticType key, SemanticType value) {
    SemanticType t(Kind::Dictionary);
    t.args_.push_back(std::move(key));
    t.args_.push_back(std::move(value));
    return t;
}

SemanticType SemanticType::union_of(std::vector<SemanticType> members) {
    SemanticType t(Kind::Union);
    for (auto& m : members) {
        if (m.is_union()) {
            for (auto& inner : m.args_) {
                if (std::find(t.args_.begin(), t.args_.end(), inner) == t.args_.end())
                    t.args_.push_back(std::move(inner));
            }
        } else if (std::find(t.args_.begin(), t.args_.end(), m) == t.args_.end()) {
            t.args_.push_back(std::move(m));
        }
    }
    if (t.args_.size() < 2) throw MalformedType("union needs at least two distinct members");
    return t;
}

bool SemanticType::admits_null() const {
    if (kind_ == Kind::Null) return true;
    if (kind_ == Kind::Union)
        return std::any_of(args_.begin(), args_.end(),
                           [](const SemanticType& m) { return m.kind() == Kind::Null; });
    return false;
}

bool SemanticType::operator==(const SemanticType& other) const {
    return kind_ == other.kind_ && args_ == other.args_;
}

namespace {

struct TypeScanner {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    std::string word() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return std::string(text.substr(start, pos - start));
    }

    SemanticType parse_unit() {
        std::string name = word();
        if (name.empty()) throw MalformedType("expected a type name in '" + std::string(text) + "'");
        if (name == "String") return SemanticType::string();
        if (name == "Integer") return SemanticType::integer();
        if (name == "Float") return SemanticType::floating();
        if (name == "Boolean") return SemanticType::boolean();
        if (name == "void") return SemanticType::void_type();
        if (name == "null") return SemanticType::null_type();
        if (name == "Collection") {
            if (!eat('<')) throw MalformedType("Collection needs '<'");
            SemanticType element = parse_union();
            if (!eat('>')) throw MalformedType("unbalanced angle brackets in Collection");
            return SemanticType::collection(std::move(element));
        }
        if (name == "Dictionary") {
            if (!eat('<')) throw MalformedType("Dictionary needs '<'");
            SemanticType key = parse_union();
            if (!eat(',')) throw MalformedType("Dictionary needs ','");
            SemanticType value = parse_union();
            if (!eat('>')) throw MalformedType("unbalanced angle brackets in Dictionary");
            return SemanticType::dictionary(std::move(key), std::move(value));
        }
        throw MalformedType("unknown type name '" + name + "'");
    }

    SemanticType parse_union() {
        std::vector<SemanticType> members;
        members.push_back(parse_unit());
        while (peek() == '|') {
            eat('|');
            if (peek() == '\0' || peek() == '|' || peek() == '>' || peek() == ',')
                throw MalformedType("empty union arm");
            members.push_back(parse_unit());
        }
        if (members.size() == 1) return std::move(members.front());
        return SemanticType::union_of(std::move(members));
    }
};

}  // namespace

SemanticType parse_type(std::string_view text) {
    TypeScanner scanner{text};
    SemanticType t = scanner.parse_union();
    scanner.skip_ws();
    if (scanner.pos != text.size())
        throw MalformedType("trailing input after type: '" + std::string(text) + "'");
    return t;
}

std::string render_type(const SemanticType& type) {
    switch (type.kind()) {
        case SemanticType::Kind::String: return "String";
        case SemanticType::Kind::Integer: return "Integer";
        case SemanticType::Kind::Float: return "Float";
        case SemanticType::Kind::Boolean: return "Boolean";
        case SemanticType::Kind::Void: return "void";
        case SemanticType::Kind::Null: return "null";
        case SemanticType::Kind::Collection:
            return "Collection<" + render_type(type.args()[0]) + ">";
        case SemanticType::Kind::Dictionary:
            return "Dictionary<" + render_type(type.args()[0]) + ", " + render_type(type.args()[1]) + ">";
        case SemanticType::Kind::Union: {
            std::string out;
            for (std::size_t i = 0; i < type.args().size(); ++i) {
                if (i) out += "|";
                out += render_type(type.args()[i]);
            }
            return out;
        }
    }
    return "?";
}

bool value_matches(const HostValue& value, const SemanticType& type) {
    switch (type.kind()) {
        case SemanticType::Kind::String: return value.is_text();
        case SemanticType::Kind::Integer: return value.is_int();
        case SemanticType::Kind::Float: return value.is_float() || value.is_int();
        case SemanticType::Kind::Boolean: return value.is_bool();
        case SemanticType::Kind::Null: return value.is_null();
        case SemanticType::Kind::Void: return value.is_null();
        case SemanticType::Kind::Collection:
            if (!value.is_list()) return false;
            return std::all_of(value.as_list().begin(), value.as_list().end(),
                               [&](const HostValue& v) { return value_matches(v, type.args()[0]); });
        case SemanticType::Kind::Dictionary: {
            if (!value.is_map()) return false;
            for (const auto& [key, val] : value.as_map()) {
                if (!value_matches(HostValue(key), type.args()[0])) return false;
                if (!value_matches(val, type.args()[1])) return false;
            }
            return true;
        }
        case SemanticType::Kind::Union:
            return std::any_of(type.args().begin(), type.args().end(),
                               [&](const SemanticType& m) { return value_matches(value, m); });
    }
    return false;
}

}  // namespace intentforge
