// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "intentforge/errors.hpp"

namespace intentforge {

using nlohmann::json;

FixtureTransport::FixtureTransport(std::vector<Transcript> transcripts)
    : transcripts_(std::move(transcripts)) {
    for (std::size_t i = 0; i < transcripts_.size(); ++i) {
        const Transcript& t = transcripts_[i];
        double prev = 0.0;
        for (const auto& chunk : t.chunks) {
            if (chunk.offset_ms < prev)
                throw FixtureParseError("offsets not monotone for " + t.model + "/" +
                                        std::to_string(t.intention_id));
            prev = chunk.offset_ms;
        }
        auto key = std::make_pair(t.model, t.intention_id);
        if (!index_.emplace(key, i).second)
            throw FixtureParseError("duplicate transcript for " + t.model + "/" +
                                    std::to_string(t.intention_id));
        bool seen = false;
        for (const auto& m : models_) seen = seen || m == t.model;
        if (!seen) models_.push_back(t.model);
    }
}

FixtureTransport FixtureTransport::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw FixtureParseError(std::string("fixture file is not valid JSON: ") + err.what());
    }
    std::vector<Transcript> transcripts;
    try {
        for (const auto& record : j.at("transcripts")) {
            Transcript t;
            t.model = record.at("model").get<std::string>();
            t.intention_id = record.at("intention_id").get<int>();
            for (const auto& c : record.at("chunks")) {
                TranscriptChunk chunk;
                chunk.offset_ms = c.at("offset_ms").get<double>();
                chunk.text = c.at("text").get<std::string>();
                if (chunk.offset_ms < 0) throw FixtureParseError("negative chunk offset");
                t.chunks.push_back(std::move(chunk));
            }
            if (record.contains("annotations")) {
                const auto& a = record.at("annotations");
                t.annotations.expected_success = a.value("expected_success", false);
                t.annotations.notes = a.value("notes", "");
            }
            transcripts.push_back(std::move(t));
        }
    } catch (const json::exception& err) {
        throw FixtureParseError(std::string("bad fixture field: ") + err.what());
    }
    return FixtureTransport(std::move(transcripts));
}

FixtureTransport FixtureTransport::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FixtureParseError("cannot open fixture file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

bool FixtureTransport::has(const std::string& model, int intention_id) const {
    return index_.count({model, intention_id}) != 0;
}

const Transcript& FixtureTransport::lookup(const std::string& model, int intention_id) const {
    auto it = index_.find({model, intention_id});
    if (it == index_.end())
        throw MissingTranscript("no transcript for " + model + "/" + std::to_string(intention_id));
    return transcripts_[it->second];
}

std::vector<int> FixtureTransport::intention_ids(const std::string& model) const {
    std::vector<int> ids;
    for (const auto& [key, _] : index_) {
        if (key.first == model) ids.push_back(key.second);
    }
    return ids;
}

Gateway::Gateway(ModelConfig config, std::shared_ptr<const FixtureTransport> fixtures)
    : config_(std::move(config)), fixtures_(std::move(fixtures)) {
    if (!config_.valid()) throw ConfigError("model config out of range for " + config_.model_name);
}

TimedResponse Gateway::complete_stream(const PromptBundle& bundle, Clock& clock) {
    if (bundle.user_message.empty()) throw ConfigError("empty user message");
    if (config_.transport == TransportKind::Fixture) return replay_fixture(bundle, clock);
    return stream_live(bundle, clock);
}

TimedResponse Gateway::replay_fixture(const PromptBundle& bundle, Clock& clock) {
    if (!fixtures_) throw ConfigError("fixture transport not loaded for " + config_.model_name);
    const Transcript& transcript = fixtures_->lookup(config_.model_name, bundle.intention_id);
    if (transcript.chunks.empty())
        throw EmptyStream("transcript for " + config_.model_name + "/" +
                          std::to_string(bundle.intention_id) + " has no chunks");

    TimedResponse out;
    double t0 = clock.now_ms();
    double first_token_at = -1.0;
    for (const auto& chunk : transcript.chunks) {
        double target = t0 + chunk.offset_ms;
        clock.advance_ms(target - clock.now_ms());
        StreamEvent event{chunk.text, clock.now_ms()};
        if (first_token_at < 0 && !chunk.text.empty()) first_token_at = event.at_ms;
        out.full_text += chunk.text;
        out.events.push_back(std::move(event));
    }
    if (first_token_at < 0)
        throw EmptyStream("transcript for " + config_.model_name + " carries no text");
    out.time_to_first_token_ms = first_token_at - t0;
    out.response_time_s = (out.events.back().at_ms - t0) / 1000.0;
    return out;
}

namespace {

struct SseAssembler {
    std::string buffer;
    bool done = false;

    // Feeds raw bytes; returns completed content deltas in order.
    std::vector<std::string> feed(const char* data, std::size_t len) {
        std::vector<std::string> chunks;
        buffer.append(data, len);
        std::size_t pos;
        while ((pos = buffer.find('\n')) != std::string::npos) {
            std::string line = buffer.substr(0, pos);
            buffer.erase(0, pos + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.rfind("data:", 0) != 0) continue;
            std::string payload = line.substr(5);
            if (!payload.empty() && payload.front() == ' ') payload.erase(0, 1);
            if (payload == "[DONE]") {
                done = true;
                continue;
            }
            json event = json::parse(payload, nullptr, false);
            if (event.is_discarded()) continue;
            const auto& choices = event.value("choices", json::array());
            if (choices.empty()) continue;
            const auto& delta = choices[0].value("delta", json::object());
            std::string content = delta.value("content", "");
            if (!content.empty()) chunks.push_back(std::move(content));
        }
        return chunks;
    }
};

}  // namespace

TimedResponse Gateway::stream_live(const PromptBundle& bundle, Clock& clock) {
    if (config_.endpoint_url.empty()) throw ConfigError("live mode needs an endpoint URL");
    if (config_.endpoint_url.rfind("https://", 0) == 0)
        throw TransportError(
            "TLS endpoints need a build with OpenSSL; point at an http:// endpoint or proxy");

    json body;
    body["model"] = config_.model_name;
    body["temperature"] = config_.temperature;
    body["stream"] = true;
    body["messages"] = json::array({json{{"role", "system"}, {"content", bundle.role_message}},
                                    json{{"role", "user"}, {"content", bundle.user_message}}});
    const std::string payload = body.dump();

    std::string base = config_.endpoint_url;
    while (!base.empty() && base.back() == '/') base.pop_back();

    httplib::Headers headers{{"Accept", "text/event-stream"}};
    if (const char* key = std::getenv("INTENT_FORGE_API_KEY"); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    const auto timeout =
        std::chrono::milliseconds(static_cast<std::int64_t>(config_.request_timeout_ms));

    TimedResponse out;
    double t0 = 0.0;
    httplib::Error last_error = httplib::Error::Success;
    int last_status = 0;
    std::string error_body;

    for (int attempt = 0; attempt < 2; ++attempt) {
        out = TimedResponse{};
        error_body.clear();
        SseAssembler sse;

        httplib::Client client(base);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        httplib::Request req;
        req.method = "POST";
        req.path = "/v1/chat/completions";
        req.headers = headers;
        req.set_header("Content-Type", "application/json");
        req.body = payload;
        req.content_receiver = [&](const char* data, std::size_t len, std::uint64_t,
                                   std::uint64_t) {
            for (auto& chunk : sse.feed(data, len)) {
                StreamEvent event{std::move(chunk), clock.now_ms()};
                out.full_text += event.chunk_text;
                out.events.push_back(std::move(event));
            }
            return true;
        };

        ++network_calls_;
        t0 = clock.now_ms();
        httplib::Result result = client.send(req);
        double t_end = clock.now_ms();

        if (!result) {
            last_error = result.error();
            if (last_error == httplib::Error::ConnectionTimeout ||
                last_error == httplib::Error::Read || last_error == httplib::Error::Write) {
                if (!out.events.empty()) break;  // stream broke midway; do not replay
                continue;                        // transient: one retry
            }
            continue;
        }
        last_status = result->status;
        if (result->status != 200) {
            error_body = result->body.substr(0, 200);
            if (out.events.empty() &&
                (result->status == 429 || result->status >= 500))
                continue;
            break;
        }

        // success path
        if (out.events.empty())
            throw EmptyStream("stream from " + config_.model_name + " carried no content");
        out.time_to_first_token_ms = out.events.front().at_ms - t0;
        out.response_time_s = (t_end - t0) / 1000.0;
        return out;
    }

    if (last_status != 0 && last_status != 200)
        throw TransportError("HTTP " + std::to_string(last_status) + " from " + base +
                                 (error_body.empty() ? "" : ": " + error_body),
                             last_status);
    if (last_error == httplib::Error::ConnectionTimeout || last_error == httplib::Error::Read ||
        last_error == httplib::Error::Write)
        throw RequestTimeout("request to " + base + " timed out");
    throw TransportError("transport failure talking to " + base + " (" +
                         httplib::to_string(last_error) + ")");
}

}  // namespace intentforge
