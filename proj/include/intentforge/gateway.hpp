// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "intentforge/clock.hpp"
#include "intentforge/model_config.hpp"
#include "intentforge/prompt.hpp"

namespace intentforge {

struct StreamEvent {
    std::string chunk_text;
    double at_ms = 0.0;  // monotonic timestamp of arrival
};

/// Streamed model output with timing: Time to First Token is measured from
/// request send to the first chunk carrying at least one character; Response
/// Time from request send to stream end.
struct TimedResponse {
    std::string full_text;  // concatenation of chunk texts in arrival order
    std::vector<StreamEvent> events;
    double time_to_first_token_ms = 0.0;
    double response_time_s = 0.0;
};

struct TranscriptChunk {
    double offset_ms = 0.0;  // relative to request send
    std::string text;
};

struct TranscriptAnnotations {
    bool expected_success = false;
    std::string notes;
};

/// One recorded (model, intention) response, replayed on a virtual clock.
struct Transcript {
    std::string model;
    int intention_id = 0;
    std::vector<TranscriptChunk> chunks;
    TranscriptAnnotations annotations;
};

/// Deterministic replay source keyed by (model_name, intention_id).
/// Read-only after load and shareable across gateways; replay never opens a
/// network connection.
class FixtureTransport {
public:
    explicit FixtureTransport(std::vector<Transcript> transcripts);

    static FixtureTransport load_file(const std::string& path);
    static FixtureTransport from_json_text(const std::string& text);

    const Transcript& lookup(const std::string& model, int intention_id) const;
    bool has(const std::string& model, int intention_id) const;

    /// Model names in first-seen order.
    const std::vector<std::string>& models() const { return models_; }
    std::vector<int> intention_ids(const std::string& model) const;
    std::size_t size() const { return transcripts_.size(); }

private:
    std::vector<Transcript> transcripts_;
    std::map<std::pair<std::string, int>, std::size_t> index_;
    std::vector<std::string> models_;
};

/// Chat-completion client measuring Time to First Token and Response Time.
/// One in-flight request per instance; distinct instances may run
/// concurrently. Transport is either the fixture replay above or a live
/// OpenAI-compatible endpoint (SSE streaming, one retry on transient
/// failures, API key from INTENT_FORGE_API_KEY).
class Gateway {
public:
    explicit Gateway(ModelConfig config,
                     std::shared_ptr<const FixtureTransport> fixtures = nullptr);

    TimedResponse complete_stream(const PromptBundle& bundle, Clock& clock);

    /// Number of HTTP attempts made; stays zero in fixture mode.
    int network_calls() const { return network_calls_; }

private:
    TimedResponse replay_fixture(const PromptBundle& bundle, Clock& clock);
    TimedResponse stream_live(const PromptBundle& bundle, Clock& clock);

    ModelConfig config_;
    std::shared_ptr<const FixtureTransport> fixtures_;
    int network_calls_ = 0;
};

}  // namespace intentforge
