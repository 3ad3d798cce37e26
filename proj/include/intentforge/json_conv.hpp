// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include "intentforge/value.hpp"

namespace intentforge {

nlohmann::json value_to_json(const HostValue& value);
HostValue value_from_json(const nlohmann::json& j);

}  // namespace intentforge
