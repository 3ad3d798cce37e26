// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "intentforge/errors.hpp"
#include "intentforge/types.hpp"

using namespace intentforge;

TEST_CASE("parse_type handles the catalog surface grammar") {
    CHECK(parse_type("String") == SemanticType::string());
    CHECK(parse_type("Integer") == SemanticType::integer());
    CHECK(parse_type("void") == SemanticType::void_type());
    CHECK(parse_type("Collection<String>") == SemanticType::collection(SemanticType::string()));
    CHECK(parse_type("Dictionary<String, String>") ==
          SemanticType::dictionary(SemanticType::string(), SemanticType::string()));
    CHECK(parse_type("Integer|null") ==
          SemanticType::union_of({SemanticType::integer(), SemanticType::null_type()}));
    CHECK(parse_type(" Collection < Integer > ") ==
          SemanticType::collection(SemanticType::integer()));
    CHECK(parse_type("Collection<Integer|null>") ==
          SemanticType::collection(
              SemanticType::union_of({SemanticType::integer(), SemanticType::null_type()})));
}

TEST_CASE("parse_type rejects malformed input") {
    CHECK_THROWS_AS(parse_type("Collection<String"), MalformedType);
    CHECK_THROWS_AS(parse_type("Collection<>"), MalformedType);
    CHECK_THROWS_AS(parse_type("Number"), MalformedType);
    CHECK_THROWS_AS(parse_type("Integer|"), MalformedType);
    CHECK_THROWS_AS(parse_type("|Integer"), MalformedType);
    CHECK_THROWS_AS(parse_type("Integer||null"), MalformedType);
    CHECK_THROWS_AS(parse_type("Dictionary<String>"), MalformedType);
    CHECK_THROWS_AS(parse_type("Integer extra"), MalformedType);
    CHECK_THROWS_AS(parse_type(""), MalformedType);
}

TEST_CASE("unions flatten and deduplicate") {
    auto inner = SemanticType::union_of({SemanticType::integer(), SemanticType::null_type()});
    auto outer = SemanticType::union_of({inner, SemanticType::string()});
    CHECK(outer.args().size() == 3);
    for (const auto& member : outer.args()) CHECK_FALSE(member.is_union());
    CHECK(parse_type("Integer|null|String") == outer);

    CHECK_THROWS_AS(SemanticType::union_of({SemanticType::integer(), SemanticType::integer()}),
                    MalformedType);
    CHECK_THROWS_AS(SemanticType::union_of({SemanticType::integer()}), MalformedType);
}

TEST_CASE("value_matches implements the conversion rules") {
    // Integer accepted where Float is declared, not vice versa
    CHECK(value_matches(HostValue(std::int64_t{3}), SemanticType::floating()));
    CHECK_FALSE(value_matches(HostValue(3.5), SemanticType::integer()));
    // Null satisfies only null-admitting types
    auto opt_int = SemanticType::union_of({SemanticType::integer(), SemanticType::null_type()});
    CHECK(value_matches(HostValue::null(), opt_int));
    CHECK_FALSE(value_matches(HostValue::null(), SemanticType::integer()));
    CHECK_FALSE(value_matches(HostValue::null(), SemanticType::string()));
    // Bool is not Integer
    CHECK_FALSE(value_matches(HostValue(true), SemanticType::integer()));
    // containers check element-wise
    HostValue::List list{HostValue("a"), HostValue("b")};
    CHECK(value_matches(HostValue(list), SemanticType::collection(SemanticType::string())));
    list.push_back(HostValue(std::int64_t{1}));
    CHECK_FALSE(value_matches(HostValue(list), SemanticType::collection(SemanticType::string())));
    HostValue::Map map{{"k", HostValue("v")}};
    CHECK(value_matches(HostValue(map),
                        SemanticType::dictionary(SemanticType::string(), SemanticType::string())));
    // Void maps to Null as a return type
    CHECK(value_matches(HostValue::null(), SemanticType::void_type()));
}

namespace {

SemanticType random_type(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 5);
    switch (pick(rng)) {
        case 0: return SemanticType::string();
        case 1: return SemanticType::integer();
        case 2: return SemanticType::floating();
        case 3: return SemanticType::boolean();
        case 4: return SemanticType::null_type();
        case 5: return SemanticType::void_type();
        case 6: return SemanticType::collection(random_type(rng, depth - 1));
        case 7:
            return SemanticType::dictionary(random_type(rng, depth - 1),
                                            random_type(rng, depth - 1));
        default: {
            // distinct non-union members so construction cannot throw
            std::vector<SemanticType> pool{SemanticType::string(), SemanticType::integer(),
                                           SemanticType::floating(), SemanticType::boolean(),
                                           SemanticType::null_type(),
                                           SemanticType::collection(random_type(rng, depth - 1))};
            std::shuffle(pool.begin(), pool.end(), rng);
            std::uniform_int_distribution<std::size_t> n(2, 4);
            pool.erase(pool.begin() + static_cast<long>(n(rng)), pool.end());
            return SemanticType::union_of(std::move(pool));
        }
    }
}

}  // namespace

TEST_CASE("round-trip: parse_type(render_type(t)) == t over randomized types") {
    std::mt19937 rng(20250808);
    for (int i = 0; i < 600; ++i) {
        SemanticType t = random_type(rng, 3);
        CAPTURE(render_type(t));
        CHECK(parse_type(render_type(t)) == t);
    }
}

TEST_CASE("float_to_text keeps a decimal point and shortest form") {
    CHECK(float_to_text(2.0) == "2.0");
    CHECK(float_to_text(0.1) == "0.1");
    CHECK(float_to_text(-3.5) == "-3.5");
}

TEST_CASE("HostValue rendering follows the object language") {
    CHECK(HostValue::null().str_text() == "None");
    CHECK(HostValue(true).str_text() == "True");
    CHECK(HostValue(std::int64_t{42}).str_text() == "42");
    CHECK(HostValue("hi").str_text() == "hi");
    CHECK(HostValue("hi").repr_text() == "'hi'");
    HostValue::List list{HostValue(std::int64_t{1}), HostValue("a")};
    CHECK(HostValue(list).str_text() == "[1, 'a']");
    HostValue::Map map{{"k", HostValue(std::int64_t{2})}};
    CHECK(HostValue(map).str_text() == "{'k': 2}");
}
