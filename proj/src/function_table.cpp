// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/function_table.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

#include "intentforge/errors.hpp"

namespace intentforge {

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(text[0])) && text[0] != '_') return false;
    for (char c : text)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::string render_signature(const FunctionSpec& spec) {
    std::string out = "function " + spec.name + "(";
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        if (i) out += ", ";
        out += spec.params[i].name + ": " + render_type(spec.params[i].type);
    }
    out += "): " + render_type(spec.return_type);
    return out;
}

std::string render_doc_line(const FunctionSpec& spec) {
    std::string line = render_signature(spec);
    if (!spec.doc.empty()) line += "  # " + spec.doc;
    return line;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

FunctionSpec parse_signature(std::string_view line) {
    FunctionSpec spec;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
        spec.doc = std::string(trim(line.substr(hash + 1)));
        line = line.substr(0, hash);
    }
    line = trim(line);
    constexpr std::string_view kPrefix = "function ";
    if (line.substr(0, kPrefix.size()) != kPrefix)
        throw MalformedType("signature must start with 'function '");
    line.remove_prefix(kPrefix.size());

    auto open = line.find('(');
    if (open == std::string_view::npos) throw MalformedType("signature missing '('");
    spec.name = std::string(trim(line.substr(0, open)));
    if (!is_identifier(spec.name)) throw MalformedType("bad function name '" + spec.name + "'");

    auto close = line.rfind(')');
    if (close == std::string_view::npos || close < open)
        throw MalformedType("signature missing ')'");

    std::string_view params = line.substr(open + 1, close - open - 1);
    // Split on top-level commas; Dictionary<K, V> keeps its own comma.
    int depth = 0;
    std::size_t start = 0;
    std::vector<std::string_view> parts;
    for (std::size_t i = 0; i <= params.size(); ++i) {
        if (i == params.size() || (params[i] == ',' && depth == 0)) {
            if (auto piece = trim(params.substr(start, i - start)); !piece.empty())
                parts.push_back(piece);
            start = i + 1;
        } else if (params[i] == '<') {
            ++depth;
        } else if (params[i] == '>') {
            --depth;
        }
    }
    for (auto part : parts) {
        auto colon = part.find(':');
        if (colon == std::string_view::npos) throw MalformedType("parameter missing ':'");
        ParamSpec p{std::string(trim(part.substr(0, colon))), parse_type(trim(part.substr(colon + 1)))};
        if (!is_identifier(p.name)) throw MalformedType("bad parameter name '" + p.name + "'");
        spec.params.push_back(std::move(p));
    }

    std::string_view rest = trim(line.substr(close + 1));
    if (rest.empty() || rest.front() != ':') throw MalformedType("signature missing return type");
    spec.return_type = parse_type(trim(rest.substr(1)));
    return spec;
}

void FunctionTable::register_function(FunctionSpec spec, HostCallback callback) {
    if (frozen_) throw TableFrozen("cannot register '" + spec.name + "' after freeze");
    if (!is_identifier(spec.name)) throw std::invalid_argument("bad function name '" + spec.name + "'");
    if (index_.count(spec.name)) throw DuplicateName("function '" + spec.name + "' already registered");
    if (!callback) throw std::invalid_argument("null callback for '" + spec.name + "'");

    std::set<std::string> seen;
    for (const auto& p : spec.params) {
        if (!is_identifier(p.name))
            throw std::invalid_argument("bad parameter name '" + p.name + "' in '" + spec.name + "'");
        if (!seen.insert(p.name).second)
            throw std::invalid_argument("duplicate parameter '" + p.name + "' in '" + spec.name + "'");
        if (p.type.kind() == SemanticType::Kind::Void)
            throw std::invalid_argument("void parameter '" + p.name + "' in '" + spec.name + "'");
    }

    index_.emplace(spec.name, entries_.size());
    entries_.push_back(Entry{std::move(spec), std::move(callback)});
}

const FunctionSpec* FunctionTable::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &entries_[it->second].spec;
}

std::vector<const FunctionSpec*> FunctionTable::specs() const {
    std::vector<const FunctionSpec*> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(&e.spec);
    return out;
}

HostValue FunctionTable::invoke(const std::string& name, const std::vector<HostValue>& args,
                                HostEnvironment& env) const {
    if (!frozen_) throw std::logic_error("invoke on a table that is not frozen");
    auto it = index_.find(name);
    if (it == index_.end()) throw UnknownFunction("unknown function '" + name + "'");
    const Entry& entry = entries_[it->second];

    if (args.size() != entry.spec.params.size())
        throw ArityMismatch("'" + name + "' takes " + std::to_string(entry.spec.params.size()) +
                            " argument(s), got " + std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i) {
        const ParamSpec& p = entry.spec.params[i];
        if (!value_matches(args[i], p.type))
            throw ArgumentTypeMismatch("'" + name + "' parameter '" + p.name + "' expects " +
                                       render_type(p.type) + ", got " + args[i].kind_name());
    }

    HostValue result = entry.callback(args, env);
    if (!value_matches(result, entry.spec.return_type))
        throw std::logic_error("'" + name + "' callback returned " + std::string(result.kind_name()) +
                               ", declared " + render_type(entry.spec.return_type));
    return result;
}

}  // namespace intentforge
