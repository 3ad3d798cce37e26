// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace intentforge {

/// Tagged runtime value exchanged between workflows and host functions.
/// One of: Null, Boolean, Integer, Float, Text, List, Map (text keys).
/// Values are finite trees with plain value semantics; copies never alias.
class HostValue {
public:
    enum class Kind { Null, Boolean, Integer, Float, Text, List, Map };

    using List = std::vector<HostValue>;
    using Map = std::map<std::string, HostValue>;

    HostValue() : v_(std::monostate{}) {}
    HostValue(bool b) : v_(b) {}
    HostValue(std::int64_t i) : v_(i) {}
    HostValue(int i) : v_(static_cast<std::int64_t>(i)) {}
    HostValue(double d) : v_(d) {}
    HostValue(std::string s) : v_(std::move(s)) {}
    HostValue(const char* s) : v_(std::string(s)) {}
    HostValue(List l) : v_(std::move(l)) {}
    HostValue(Map m) : v_(std::move(m)) {}

    static HostValue null() { return HostValue(); }

    Kind kind() const { return static_cast<Kind>(v_.index()); }
    const char* kind_name() const;

    bool is_null() const { return kind() == Kind::Null; }
    bool is_bool() const { return kind() == Kind::Boolean; }
    bool is_int() const { return kind() == Kind::Integer; }
    bool is_float() const { return kind() == Kind::Float; }
    bool is_text() const { return kind() == Kind::Text; }
    bool is_list() const { return kind() == Kind::List; }
    bool is_map() const { return kind() == Kind::Map; }
    bool is_number() const { return is_int() || is_float(); }

    bool as_bool() const { return get<bool>("Boolean"); }
    std::int64_t as_int() const { return get<std::int64_t>("Integer"); }
    double as_float() const { return get<double>("Float"); }
    const std::string& as_text() const { return get<std::string>("Text"); }
    const List& as_list() const { return get<List>("List"); }
    List& as_list() { return get<List>("List"); }
    const Map& as_map() const { return get<Map>("Map"); }
    Map& as_map() { return get<Map>("Map"); }

    /// Numeric content widened to double; Integer and Float only.
    double number() const;

    bool operator==(const HostValue& other) const { return v_ == other.v_; }
    bool operator!=(const HostValue& other) const { return !(*this == other); }

    /// str()-style rendering: Null -> "None", Boolean -> "True"/"False",
    /// text unquoted, containers rendered like repr_text.
    std::string str_text() const;

    /// repr-style rendering: text single-quoted, used inside containers.
    std::string repr_text() const;

private:
    template <typename T>
    const T& get(const char* want) const {
        if (const T* p = std::get_if<T>(&v_)) return *p;
        throw std::logic_error(std::string("HostValue: expected ") + want + ", got " + kind_name());
    }
    template <typename T>
    T& get(const char* want) {
        if (T* p = std::get_if<T>(&v_)) return *p;
        throw std::logic_error(std::string("HostValue: expected ") + want + ", got " + kind_name());
    }

    std::variant<std::monostate, bool, std::int64_t, double, std::string, List, Map> v_;
};

/// Canonical text for a floating point value (shortest round-trip form,
/// always with a decimal point or exponent).
std::string float_to_text(double d);

}  // namespace intentforge
