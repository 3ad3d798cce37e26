// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "intentforge/value.hpp"

namespace intentforge {

/// Semantic type of a catalog parameter or return value.
///
/// The surface grammar is exactly what the catalog documentation shows:
/// bare names (String, Integer, Float, Boolean, void, null),
/// Collection<T>, Dictionary<K, V>, and A|B unions.
class SemanticType {
public:
    enum class Kind { String, Integer, Float, Boolean, Void, Null, Collection, Dictionary, Union };

    static SemanticType string() { return SemanticType(Kind::String); }
    static SemanticType integer() { return SemanticType(Kind::Integer); }
    static SemanticType floating() { return SemanticType(Kind::Float); }
    static SemanticType boolean() { return SemanticType(Kind::Boolean); }
    static SemanticType void_type() { return SemanticType(Kind::Void); }
    static SemanticType null_type() { return SemanticType(Kind::Null); }
    static SemanticType collection(SemanticType element);
    static SemanticType dictionary(SemanticType key, SemanticType value);

    /// Builds a union; nested unions are flattened and duplicate members
    /// dropped. Fewer than two distinct members is malformed.
    static SemanticType union_of(std::vector<SemanticType> members);

    Kind kind() const { return kind_; }
    bool is_union() const { return kind_ == Kind::Union; }

    /// Collection: [element]; Dictionary: [key, value]; Union: members.
    const std::vector<SemanticType>& args() const { return args_; }

    /// True when a Null value satisfies this type (the null type itself or
    /// a union carrying null).
    bool admits_null() const;

    bool operator==(const SemanticType& other) const;
    bool operator!=(const SemanticType& other) const { return !(*this == other); }

private:
    explicit SemanticType(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<SemanticType> args_;
};

/// Parses a signature-type string ("Integer|null", "Collection<String>", ...).
/// Throws MalformedType on unknown names, unbalanced brackets or empty
/// union arms.
SemanticType parse_type(std::string_view text);

/// Renders the canonical surface form; parse_type(render_type(t)) == t.
std::string render_type(const SemanticType& type);

/// Structural check of a runtime value against a type. Integers are
/// accepted where Float is declared; Null satisfies only null-admitting
/// types; Void (a return-only type) is satisfied by Null.
bool value_matches(const HostValue& value, const SemanticType& type);

}  // namespace intentforge
