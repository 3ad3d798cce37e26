// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/host_env.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "intentforge/errors.hpp"

namespace intentforge {

using nlohmann::json;

EnvConfig EnvConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("environment fixture is not valid JSON: ") + err.what());
    }
    EnvConfig cfg;
    try {
        for (const auto& f : j.value("files", json::array())) {
            StoredFile file;
            file.path = f.at("path").get<std::string>();
            file.content = f.value("content", "");
            file.audio = f.value("audio", false);
            cfg.files.push_back(std::move(file));
        }
        for (const auto& c : j.value("contacts", json::array())) {
            Contact contact;
            contact.id = c.at("id").get<std::int64_t>();
            contact.display = c.at("display").get<std::string>();
            contact.email = c.value("email", "");
            cfg.contacts.push_back(std::move(contact));
        }
        cfg.rng_seed = j.value("rng_seed", 0ULL);
        cfg.temperature = j.value("temperature", 20);
        for (const auto& a : j.value("answers", json::array()))
            cfg.answers.push_back(a.get<std::string>());
        for (const auto& w : j.value("web_store", json::array())) {
            WebEntry entry;
            entry.status = w.value("status", 200);
            entry.body = w.value("body", "");
            if (w.contains("headers")) {
                for (const auto& [k, v] : w.at("headers").items())
                    entry.headers[k] = v.get<std::string>();
            }
            cfg.web_store[w.at("url").get<std::string>()] = std::move(entry);
        }
        for (const auto& q : j.value("subqueries", json::array()))
            cfg.subqueries[HostEnvironment::normalize_query(q.at("query").get<std::string>())] =
                q.at("response").get<std::string>();
        for (const auto& s : j.value("shell", json::array()))
            cfg.shell_script[s.at("command").get<std::string>()] = s.value("output", "");
        cfg.query_llm_context_limit = j.value("query_llm_context_limit", 8000u);
    } catch (const json::exception& err) {
        throw ConfigError(std::string("bad environment fixture field: ") + err.what());
    }
    return cfg;
}

EnvConfig EnvConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open environment fixture: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

HostEnvironment::HostEnvironment(EnvConfig config)
    : config_(std::move(config)),
      owned_clock_(std::make_unique<VirtualClock>()),
      rng_(config_.rng_seed) {
    for (const auto& f : config_.files) {
        sorted_paths_.push_back(f.path);
        if (f.audio) sorted_audio_paths_.push_back(f.path);
    }
    std::sort(sorted_paths_.begin(), sorted_paths_.end());
    std::sort(sorted_audio_paths_.begin(), sorted_audio_paths_.end());
}

std::string HostEnvironment::normalize_match(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '_') {
            out += ' ';
        } else {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return out;
}

std::string HostEnvironment::normalize_query(const std::string& query) {
    std::string out;
    bool in_space = true;
    for (char c : query) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) out += ' ';
            in_space = true;
        } else {
            out += c;
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

HostValue HostEnvironment::find_contact_id(const std::string& expression) const {
    std::string needle = normalize_match(expression);
    for (const auto& contact : config_.contacts) {
        if (normalize_match(contact.display).find(needle) != std::string::npos)
            return HostValue(contact.id);
    }
    return HostValue::null();
}

HostValue HostEnvironment::find_contact_email(std::int64_t contact_id) const {
    for (const auto& contact : config_.contacts) {
        if (contact.id == contact_id) return HostValue(contact.email);
    }
    return HostValue::null();
}

std::string HostEnvironment::ask_question(const std::string& question) {
    if (next_answer_ < config_.answers.size()) return config_.answers[next_answer_++];
    if (interactive_ask) return interactive_ask(question);
    throw HostError("no scripted answer for question: " + question);
}

void HostEnvironment::send_email(SentEmail email) { sent_emails_.push_back(std::move(email)); }

std::vector<std::string> HostEnvironment::find_files(const std::string& expression) const {
    std::string needle = normalize_match(expression);
    std::vector<std::string> out;
    for (const auto& path : sorted_paths_) {
        if (needle.empty() || normalize_match(path).find(needle) != std::string::npos)
            out.push_back(path);
    }
    return out;
}

HostValue HostEnvironment::find_file(const std::string& expression) const {
    auto matches = find_files(expression);
    if (matches.empty()) return HostValue::null();
    return HostValue(matches.front());
}

std::vector<std::string> HostEnvironment::find_all_audio_files() const {
    return sorted_audio_paths_;
}

std::string HostEnvironment::shell(const std::string& command) {
    shell_history_.push_back(command);
    if (auto it = config_.shell_script.find(command); it != config_.shell_script.end())
        return it->second;
    if (allow_real_shell) {
        std::string output;
        if (FILE* pipe = ::popen(command.c_str(), "r")) {
            char buf[4096];
            std::size_t n;
            while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
            ::pclose(pipe);
            return output;
        }
        throw HostError("failed to run command: " + command);
    }
    throw HostError("command not scripted: " + command, 127);
}

void HostEnvironment::sleep_seconds(std::int64_t seconds) {
    if (seconds < 0) throw HostError("sleep needs a non-negative duration");
    clock().advance_ms(static_cast<double>(seconds) * 1000.0);
}

std::int64_t HostEnvironment::generate_random_number(std::int64_t inclusive_start,
                                                     std::int64_t exclusive_end) {
    if (inclusive_start >= exclusive_end)
        throw HostError("empty range [" + std::to_string(inclusive_start) + ", " +
                        std::to_string(exclusive_end) + ")");
    std::uint64_t span = static_cast<std::uint64_t>(exclusive_end - inclusive_start);
    return inclusive_start + static_cast<std::int64_t>(rng_.next() % span);
}

void HostEnvironment::play_audio_file(const std::string& file_path) {
    bool known = std::binary_search(sorted_paths_.begin(), sorted_paths_.end(), file_path);
    if (!known) throw HostError("no such file: " + file_path);
    playing_ = file_path;
}

void HostEnvironment::stop_audio_player() { playing_.reset(); }

std::string HostEnvironment::query_llm(const std::string& query) {
    if (query.size() > config_.query_llm_context_limit)
        throw HostError("Bad Request: query exceeds the model context window", 400);
    std::string key = normalize_query(query);
    if (auto it = config_.subqueries.find(key); it != config_.subqueries.end()) return it->second;
    if (live_query_llm) return live_query_llm(query);
    // Distinct from model-visible errors: this marks a harness gap, not a
    // model failure.
    throw HostError("fixture miss: no scripted response for query: " + key);
}

std::string HostEnvironment::http_get_request(const std::string& url,
                                              const std::map<std::string, std::string>& headers) {
    (void)headers;
    auto it = config_.web_store.find(url);
    if (it == config_.web_store.end()) throw HostError("Not Found: " + url, 404);
    if (it->second.status >= 400)
        throw HostError("HTTP " + std::to_string(it->second.status) + " for " + url,
                        it->second.status);
    return it->second.body;
}

void HostEnvironment::print_text(const std::string& text) {
    printed_.push_back(text);
    if (sink_) sink_(text);
}

bool HostEnvironment::run_env_check(const std::string& name) const {
    if (name == "car_title_email_sent") {
        for (const auto& email : sent_emails_) {
            for (const auto& attachment : email.attachments) {
                if (normalize_match(attachment).find("car title") != std::string::npos &&
                    !email.to.empty())
                    return true;
            }
        }
        return false;
    }
    if (name == "audio_player_stopped") return !playing_.has_value();
    if (name == "email_sent") return !sent_emails_.empty();
    if (name == "no_email_sent") return sent_emails_.empty();
    if (name == "nginx_install_logged") {
        for (const auto& command : shell_history_) {
            if (command.find("nginx") != std::string::npos &&
                command.find("install") != std::string::npos)
                return true;
        }
        return false;
    }
    throw ConfigError("unknown env_check: " + name);
}

std::vector<std::string> HostEnvironment::env_check_names() {
    return {"car_title_email_sent", "audio_player_stopped", "email_sent", "no_email_sent",
            "nginx_install_logged"};
}

namespace {

const HostValue& arg(const std::vector<HostValue>& args, std::size_t i) { return args[i]; }

std::vector<std::string> text_list(const HostValue& v) {
    std::vector<std::string> out;
    for (const auto& item : v.as_list()) out.push_back(item.as_text());
    return out;
}

HostValue to_text_list(const std::vector<std::string>& items) {
    HostValue::List list;
    for (const auto& s : items) list.emplace_back(s);
    return HostValue(std::move(list));
}

struct StandardFunction {
    const char* signature;
    FunctionSpec::Kind kind;
    HostCallback callback;
};

}  // namespace

void install_standard_functions(FunctionTable& table) {
    using Args = const std::vector<HostValue>&;
    const StandardFunction functions[] = {
        {"function find_contact_id(expression: String): Integer|null", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) { return env.find_contact_id(arg(a, 0).as_text()); }},
        {"function find_contact_email(contact_id: Integer): String|null", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) { return env.find_contact_email(arg(a, 0).as_int()); }},
        {"function ask_question(question: String): String", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) { return HostValue(env.ask_question(arg(a, 0).as_text())); }},
        {"function send_email(email: String, subject: String, text: String, "
         "attachment_paths: Collection<String>): void",
         FunctionSpec::Kind::Stub,
         [](Args a, HostEnvironment& env) {
             env.send_email(SentEmail{arg(a, 0).as_text(), arg(a, 1).as_text(),
                                      arg(a, 2).as_text(), text_list(arg(a, 3))});
             return HostValue::null();
         }},
        {"function get_temperature(): Integer", FunctionSpec::Kind::Stub,
         [](Args, HostEnvironment& env) { return HostValue(env.get_temperature()); }},
        {"function find_files(expression: String): Collection<String>", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) { return to_text_list(env.find_files(arg(a, 0).as_text())); }},
        {"function print(text: String): void", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) {
             env.print_text(arg(a, 0).as_text());
             return HostValue::null();
         }},
        {"function shell(command: String): String", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) { return HostValue(env.shell(arg(a, 0).as_text())); }},
        {"function sleep(seconds: Integer): void", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) {
             env.sleep_seconds(arg(a, 0).as_int());
             return HostValue::null();
         }},
        {"function find_all_audio_files(): Collection<String>", FunctionSpec::Kind::Real,
         [](Args, HostEnvironment& env) { return to_text_list(env.find_all_audio_files()); }},
        {"function generate_random_number(inclusiveStart: Integer, exclusiveEnd: Integer): Integer",
         FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) {
             return HostValue(env.generate_random_number(arg(a, 0).as_int(), arg(a, 1).as_int()));
         }},
        {"function play_audio_file(file_path: String): void", FunctionSpec::Kind::Stub,
         [](Args a, HostEnvironment& env) {
             env.play_audio_file(arg(a, 0).as_text());
             return HostValue::null();
         }},
        {"function find_file(expression: String): String|null", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) { return env.find_file(arg(a, 0).as_text()); }},
        {"function stop_audio_player(): void", FunctionSpec::Kind::Stub,
         [](Args, HostEnvironment& env) {
             env.stop_audio_player();
             return HostValue::null();
         }},
        {"function query_llm(query: String): String", FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) { return HostValue(env.query_llm(arg(a, 0).as_text())); }},
        {"function http_get_request(url: String, headers: Dictionary<String, String>): String",
         FunctionSpec::Kind::Real,
         [](Args a, HostEnvironment& env) {
             std::map<std::string, std::string> headers;
             for (const auto& [key, value] : arg(a, 1).as_map()) headers[key] = value.as_text();
             return HostValue(env.http_get_request(arg(a, 0).as_text(), headers));
         }},
    };

    for (const auto& fn : functions) {
        FunctionSpec spec = parse_signature(fn.signature);
        spec.kind = fn.kind;
        table.register_function(std::move(spec), fn.callback);
    }
}

}  // namespace intentforge
