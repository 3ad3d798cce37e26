// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "intentforge/clock.hpp"
#include "intentforge/function_table.hpp"
#include "intentforge/value.hpp"

namespace intentforge {

/// Pinned PRNG behind generate_random_number. The algorithm is fixed so
/// golden values survive reimplementation: state advances by the 64-bit
/// constant 0x9E3779B97F4A7C15, output is the standard SplitMix64 mix.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

struct Contact {
    std::int64_t id = 0;
    std::string display;
    std::string email;
};

struct StoredFile {
    std::string path;
    std::string content;
    bool audio = false;
};

struct WebEntry {
    int status = 200;
    std::map<std::string, std::string> headers;
    std::string body;
};

struct SentEmail {
    std::string to, subject, text;
    std::vector<std::string> attachments;
};

/// Everything a desk-scale environment needs, loadable from a fixture file.
struct EnvConfig {
    std::vector<StoredFile> files;
    std::vector<Contact> contacts;
    std::uint64_t rng_seed = 0;
    std::int64_t temperature = 20;
    std::vector<std::string> answers;                  // scripted ask_question replies
    std::map<std::string, WebEntry> web_store;         // url -> response
    std::map<std::string, std::string> subqueries;     // normalized query -> reply
    std::map<std::string, std::string> shell_script;   // exact command -> output
    std::size_t query_llm_context_limit = 8000;        // chars before a 400

    static EnvConfig from_json_file(const std::string& path);
    static EnvConfig from_json_text(const std::string& text);
};

/// Deterministic backing state for the 16 standard functions: virtual file
/// system, contact list, seeded randomness, virtual clock, scripted answers,
/// recorded web responses. Fixture-mode environments never touch the network,
/// the real file system, or a real shell.
class HostEnvironment {
public:
    explicit HostEnvironment(EnvConfig config);

    // --- standard function semantics ---
    HostValue find_contact_id(const std::string& expression) const;
    HostValue find_contact_email(std::int64_t contact_id) const;
    std::string ask_question(const std::string& question);
    void send_email(SentEmail email);
    std::int64_t get_temperature() const { return config_.temperature; }
    std::vector<std::string> find_files(const std::string& expression) const;
    HostValue find_file(const std::string& expression) const;
    std::vector<std::string> find_all_audio_files() const;
    std::string shell(const std::string& command);
    void sleep_seconds(std::int64_t seconds);
    std::int64_t generate_random_number(std::int64_t inclusive_start, std::int64_t exclusive_end);
    void play_audio_file(const std::string& file_path);
    void stop_audio_player();
    std::string query_llm(const std::string& query);
    std::string http_get_request(const std::string& url,
                                 const std::map<std::string, std::string>& headers);
    void print_text(const std::string& text);

    // --- plumbing ---
    Clock& clock() { return external_clock_ ? *external_clock_ : *owned_clock_; }
    /// Replaces the owned virtual clock (e.g. with a real one for live runs).
    void use_clock(Clock* external) { external_clock_ = external; }

    /// Where print() lines go; the interpreter points this at the trace.
    void set_output_sink(std::function<void(const std::string&)> sink) { sink_ = std::move(sink); }

    const std::vector<SentEmail>& sent_emails() const { return sent_emails_; }
    const std::vector<std::string>& shell_history() const { return shell_history_; }
    const std::optional<std::string>& playing() const { return playing_; }
    const std::vector<std::string>& printed() const { return printed_; }

    /// Named post-state probes referenced by success criteria.
    bool run_env_check(const std::string& name) const;
    static std::vector<std::string> env_check_names();

    /// Whitespace-normalized form used as the query_llm fixture key.
    static std::string normalize_query(const std::string& query);

    // --- optional hooks (interactive / live modes) ---
    std::function<std::string(const std::string&)> interactive_ask;  // terminal prompt
    std::function<std::string(const std::string&)> live_query_llm;   // gateway-backed query
    bool allow_real_shell = false;

private:
    static std::string normalize_match(const std::string& s);

    EnvConfig config_;
    std::unique_ptr<Clock> owned_clock_;
    Clock* external_clock_ = nullptr;
    SplitMix64 rng_;
    std::size_t next_answer_ = 0;
    std::vector<SentEmail> sent_emails_;
    std::vector<std::string> shell_history_;
    std::optional<std::string> playing_;
    std::vector<std::string> printed_;
    std::function<void(const std::string&)> sink_;
    std::vector<std::string> sorted_paths_;
    std::vector<std::string> sorted_audio_paths_;
};

/// Registers the 16 standard functions with their exact catalog signatures,
/// in catalog order. Callbacks bind to whichever environment invoke()
/// receives, so one frozen table serves many runs. Throws DuplicateName if
/// any of the 16 is already present.
void install_standard_functions(FunctionTable& table);

}  // namespace intentforge
