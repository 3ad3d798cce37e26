// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "intentforge/types.hpp"
#include "intentforge/value.hpp"

namespace intentforge {

class HostEnvironment;

struct ParamSpec {
    std::string name;
    SemanticType type;

    bool operator==(const ParamSpec& other) const {
        return name == other.name && type == other.type;
    }
};

/// Catalog entry: the signature the model sees plus an optional one-line doc.
struct FunctionSpec {
    enum class Kind { Stub, Real };

    std::string name;
    std::vector<ParamSpec> params;
    SemanticType return_type = SemanticType::void_type();
    std::string doc;  // empty = none
    Kind kind = Kind::Stub;

    bool operator==(const FunctionSpec& other) const {
        return name == other.name && params == other.params && return_type == other.return_type;
    }
};

/// Renders the catalog line: `function <name>(<p>: <T>, ...): <Ret>`.
std::string render_signature(const FunctionSpec& spec);

/// Parses a catalog line back into a spec; a trailing `# text` comment is
/// taken as the doc. Inverse of render_signature on valid specs.
FunctionSpec parse_signature(std::string_view line);

/// Doc line as published to the model: the signature, plus `  # doc` when a
/// doc is present.
std::string render_doc_line(const FunctionSpec& spec);

using HostCallback = std::function<HostValue(const std::vector<HostValue>&, HostEnvironment&)>;

/// Catalog of callable host functions. Registration happens before freeze();
/// a frozen table is immutable and safe to share across concurrent readers.
class FunctionTable {
public:
    void register_function(FunctionSpec spec, HostCallback callback);
    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    std::size_t size() const { return entries_.size(); }
    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    /// Spec for a name, or nullptr.
    const FunctionSpec* find(const std::string& name) const;

    /// Specs in registration order (defines doc order).
    std::vector<const FunctionSpec*> specs() const;

    /// Type-checked invocation. The table must be frozen. Arguments are
    /// checked against the declared signature before the callback runs; the
    /// return value is checked against the return type (void maps to Null).
    HostValue invoke(const std::string& name, const std::vector<HostValue>& args,
                     HostEnvironment& env) const;

private:
    struct Entry {
        FunctionSpec spec;
        HostCallback callback;
    };
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    bool frozen_ = false;
};

bool is_identifier(std::string_view text);

}  // namespace intentforge
