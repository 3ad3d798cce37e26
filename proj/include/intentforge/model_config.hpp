// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace intentforge {

inline constexpr const char* kDefaultRole = "You are a Python 3 code generator";

enum class TransportKind { Live, Fixture };

/// Per-model request configuration. Fixture transports replay bundled
/// transcripts; live transports speak the OpenAI-compatible streaming
/// chat-completions protocol.
struct ModelConfig {
    std::string model_name;
    std::string endpoint_url;  // live mode base URL, e.g. http://host:port
    double temperature = 0.0;
    std::string role = kDefaultRole;
    TransportKind transport = TransportKind::Fixture;
    std::string fixture_path;
    double request_timeout_ms = 120000.0;

    bool valid() const {
        return temperature >= 0.0 && temperature <= 2.0 && request_timeout_ms > 0.0;
    }
};

}  // namespace intentforge
