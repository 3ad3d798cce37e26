// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentforge/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "intentforge/errors.hpp"
#include "intentforge/json_conv.hpp"

namespace intentforge {

using nlohmann::json;
using workflow::ExecutionTrace;
using workflow::RunStatus;

const char* failure_reason_name(FailureReason reason) {
    switch (reason) {
        case FailureReason::None: return "";
        case FailureReason::NoCodeBlock: return "no_code_block";
        case FailureReason::ParseRejected: return "parse_rejected";
        case FailureReason::RuntimeError: return "runtime_error";
        case FailureReason::LimitExceeded: return "limit_exceeded";
        case FailureReason::WrongFunctions: return "wrong_functions";
        case FailureReason::PredicateFailed: return "predicate_failed";
    }
    return "";
}

FailureReason failure_reason_from_name(const std::string& name) {
    if (name.empty()) return FailureReason::None;
    if (name == "no_code_block") return FailureReason::NoCodeBlock;
    if (name == "parse_rejected") return FailureReason::ParseRejected;
    if (name == "runtime_error") return FailureReason::RuntimeError;
    if (name == "limit_exceeded") return FailureReason::LimitExceeded;
    if (name == "wrong_functions") return FailureReason::WrongFunctions;
    if (name == "predicate_failed") return FailureReason::PredicateFailed;
    throw ConfigError("unknown failure reason: " + name);
}

bool ArgPattern::matches(const HostValue& value) const {
    switch (kind) {
        case Kind::Any: return true;
        case Kind::Exact: return value == exact;
        case Kind::Contains: {
            if (!value.is_text()) return false;
            for (const auto& needle : contains) {
                if (value.as_text().find(needle) == std::string::npos) return false;
            }
            return true;
        }
    }
    return false;
}

bool Predicate::evaluate(const ExecutionTrace& trace, const HostEnvironment& env) const {
    switch (kind) {
        case Kind::All:
            return std::all_of(children.begin(), children.end(),
                               [&](const Predicate& p) { return p.evaluate(trace, env); });
        case Kind::Any:
            return std::any_of(children.begin(), children.end(),
                               [&](const Predicate& p) { return p.evaluate(trace, env); });
        case Kind::Not:
            return !children.at(0).evaluate(trace, env);
        case Kind::Called:
            return trace.called(name);
        case Kind::NotCalled:
            return !trace.called(name);
        case Kind::CalledWith:
            for (const auto* call : trace.calls()) {
                if (call->name != name || call->args.size() != args.size()) continue;
                bool ok = true;
                for (std::size_t i = 0; i < args.size(); ++i)
                    ok = ok && args[i].matches(call->args[i]);
                if (ok) return true;
            }
            return false;
        case Kind::StatusIs:
            return trace.status == status;
        case Kind::OutputContains:
            return trace.output_text().find(text) != std::string::npos;
        case Kind::EnvCheck:
            return env.run_env_check(name);
    }
    return false;
}

namespace {

ArgPattern pattern_from_json(const json& j) {
    ArgPattern p;
    if (j.is_object()) {
        if (j.contains("contains")) {
            p.kind = ArgPattern::Kind::Contains;
            if (j.at("contains").is_array()) {
                for (const auto& item : j.at("contains"))
                    p.contains.push_back(item.get<std::string>());
            } else {
                p.contains.push_back(j.at("contains").get<std::string>());
            }
            return p;
        }
        if (j.value("any", false)) {
            p.kind = ArgPattern::Kind::Any;
            return p;
        }
        throw ConfigError("bad argument pattern: " + j.dump());
    }
    p.kind = ArgPattern::Kind::Exact;
    p.exact = value_from_json(j);
    return p;
}

Predicate predicate_from_json(const json& j) {
    if (!j.is_object() || j.size() != 1)
        throw ConfigError("a predicate must be an object with exactly one key: " + j.dump());
    Predicate p;
    const auto& key = j.begin().key();
    const auto& value = j.begin().value();
    if (key == "all" || key == "any") {
        p.kind = key == "all" ? Predicate::Kind::All : Predicate::Kind::Any;
        for (const auto& child : value) p.children.push_back(predicate_from_json(child));
        if (p.children.empty()) throw ConfigError("'" + key + "' needs at least one clause");
    } else if (key == "not") {
        p.kind = Predicate::Kind::Not;
        p.children.push_back(predicate_from_json(value));
    } else if (key == "called") {
        p.kind = Predicate::Kind::Called;
        p.name = value.get<std::string>();
    } else if (key == "not_called") {
        p.kind = Predicate::Kind::NotCalled;
        p.name = value.get<std::string>();
    } else if (key == "called_with") {
        p.kind = Predicate::Kind::CalledWith;
        p.name = value.at("name").get<std::string>();
        for (const auto& arg : value.at("args")) p.args.push_back(pattern_from_json(arg));
    } else if (key == "status") {
        p.kind = Predicate::Kind::StatusIs;
        auto status = workflow::run_status_from_name(value.get<std::string>());
        if (!status) throw ConfigError("unknown status: " + value.get<std::string>());
        p.status = *status;
    } else if (key == "output_contains") {
        p.kind = Predicate::Kind::OutputContains;
        p.text = value.get<std::string>();
    } else if (key == "env_check") {
        p.kind = Predicate::Kind::EnvCheck;
        p.name = value.get<std::string>();
        auto known = HostEnvironment::env_check_names();
        if (std::find(known.begin(), known.end(), p.name) == known.end())
            throw ConfigError("unknown env_check: " + p.name);
    } else {
        throw ConfigError("unknown predicate key: " + key);
    }
    return p;
}

}  // namespace

CriteriaSet CriteriaSet::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("criteria file is not valid JSON: ") + err.what());
    }
    CriteriaSet set;
    std::set<int> seen;
    try {
        for (const auto& record : j.at("intentions")) {
            SuccessCriterion c;
            c.intention_id = record.at("id").get<int>();
            c.intention_text = record.at("text").get<std::string>();
            if (c.intention_text.empty()) throw ConfigError("intention text is empty");
            if (!seen.insert(c.intention_id).second)
                throw ConfigError("duplicate intention id " + std::to_string(c.intention_id));
            c.predicate = predicate_from_json(record.at("predicate"));
            for (const auto& r : record.value("relevant", json::array()))
                c.relevant.push_back(r.get<std::string>());
            set.criteria_.push_back(std::move(c));
        }
    } catch (const json::exception& err) {
        throw ConfigError(std::string("bad criteria field: ") + err.what());
    }
    return set;
}

CriteriaSet CriteriaSet::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open criteria file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

const SuccessCriterion* CriteriaSet::find(int intention_id) const {
    for (const auto& c : criteria_)
        if (c.intention_id == intention_id) return &c;
    return nullptr;
}

const SuccessCriterion* CriteriaSet::find_by_text(const std::string& intention_text) const {
    std::string needle = HostEnvironment::normalize_query(intention_text);
    for (const auto& c : criteria_)
        if (HostEnvironment::normalize_query(c.intention_text) == needle) return &c;
    return nullptr;
}

std::vector<Intention> CriteriaSet::intentions() const {
    std::vector<Intention> out;
    for (const auto& c : criteria_) out.push_back(Intention{c.intention_id, c.intention_text});
    return out;
}

std::pair<bool, FailureReason> classify_success(const std::optional<ParsedResponse>& parsed,
                                                const ExecutionTrace& trace,
                                                const HostEnvironment& env_after,
                                                const SuccessCriterion& criterion) {
    if (!parsed) return {false, FailureReason::NoCodeBlock};
    if (trace.status == RunStatus::ParseRejected) return {false, FailureReason::ParseRejected};
    if (trace.status == RunStatus::LimitExceeded) return {false, FailureReason::LimitExceeded};

    if (criterion.predicate.evaluate(trace, env_after)) return {true, FailureReason::None};

    if (trace.status == RunStatus::RuntimeError) return {false, FailureReason::RuntimeError};

    // Completed but wrong. If the workflow invoked host functions yet none
    // of the ones a plausible resolution uses, the model picked the wrong
    // set of functions.
    auto calls = trace.calls();
    if (!calls.empty() && !criterion.relevant.empty()) {
        bool any_relevant = false;
        for (const auto* call : calls) {
            any_relevant =
                any_relevant || std::find(criterion.relevant.begin(), criterion.relevant.end(),
                                          call->name) != criterion.relevant.end();
        }
        if (!any_relevant) return {false, FailureReason::WrongFunctions};
    }
    return {false, FailureReason::PredicateFailed};
}

BenchmarkReport run_matrix(const CriteriaSet& criteria, const std::vector<ModelConfig>& models,
                           const FunctionTable& table, const EnvConfig& env_config,
                           const workflow::ExecLimits& limits,
                           std::shared_ptr<const FixtureTransport> fixtures,
                           const BenchOptions& options) {
    if (!table.frozen()) throw ConfigError("run_matrix needs a frozen table");
    if (options.repeat < 1) throw ConfigError("--repeat must be at least 1");

    // Configuration gaps abort before any run.
    for (const auto& model : models) {
        if (!model.valid()) throw ConfigError("model config out of range for " + model.model_name);
        if (model.transport == TransportKind::Fixture) {
            if (!fixtures) throw ConfigError("fixture transport required for " + model.model_name);
            for (const auto& c : criteria.ordered()) {
                if (!fixtures->has(model.model_name, c.intention_id))
                    throw MissingTranscript("no transcript for " + model.model_name + "/" +
                                            std::to_string(c.intention_id));
            }
        }
    }

    BenchmarkReport report;
    report.fixture_mode = std::all_of(models.begin(), models.end(), [](const ModelConfig& m) {
        return m.transport == TransportKind::Fixture;
    });

    SteadyClock live_clock;
    for (const auto& model : models) {
        for (int round = 0; round < options.repeat; ++round) {
            for (const auto& c : criteria.ordered()) {
                HostEnvironment env(env_config);
                Gateway gateway(model, fixtures);
                VirtualClock replay_clock;
                Clock& stream_clock = model.transport == TransportKind::Fixture
                                          ? static_cast<Clock&>(replay_clock)
                                          : static_cast<Clock&>(live_clock);

                PromptBundle bundle =
                    build_prompt(Intention{c.intention_id, c.intention_text}, table, model);
                TimedResponse response = gateway.complete_stream(bundle, stream_clock);
                std::optional<ParsedResponse> parsed = extract_code(response.full_text);

                ExecutionTrace trace;
                if (parsed) {
                    trace = workflow::run_workflow_source(parsed->code, table, env, limits,
                                                          c.intention_id);
                } else {
                    trace.status = RunStatus::ParseRejected;
                }

                auto [success, reason] = classify_success(parsed, trace, env, c);

                RunRecord record;
                record.model_name = model.model_name;
                record.intention_id = c.intention_id;
                record.success = success;
                record.failure_reason = reason;
                record.has_preamble = parsed && parsed->has_preamble;
                record.has_postamble = parsed && parsed->has_postamble;
                record.has_comments = parsed && parsed->has_comments;
                record.ttft_ms = response.time_to_first_token_ms;
                record.response_time_s = response.response_time_s;
                record.trace_ref = model.model_name + "/" + std::to_string(c.intention_id);

                if (!options.trace_dir.empty() && parsed) {
                    std::string file = options.trace_dir + "/" + model.model_name + "__" +
                                       std::to_string(c.intention_id) + ".trace.jsonl";
                    std::ofstream out(file);
                    if (out) out << trace.to_jsonl();
                    record.trace_ref = file;
                }
                report.records.push_back(std::move(record));
            }
        }
    }
    report.aggregates = aggregate_report(report.records);
    return report;
}

std::vector<ModelAggregate> aggregate_report(const std::vector<RunRecord>& records) {
    std::vector<ModelAggregate> out;
    auto find = [&](const std::string& model) -> ModelAggregate& {
        for (auto& agg : out)
            if (agg.model_name == model) return agg;
        out.push_back(ModelAggregate{model});
        return out.back();
    };
    for (const auto& r : records) {
        ModelAggregate& agg = find(r.model_name);
        if (r.success)
            ++agg.success_count;
        else
            ++agg.fail_count;
        if (r.has_preamble || r.has_postamble) ++agg.preamble_count;
        if (r.has_comments) ++agg.comment_count;
        agg.avg_response_time_s += r.response_time_s;
        agg.avg_ttft_ms += r.ttft_ms;
    }
    for (auto& agg : out) {
        int n = agg.success_count + agg.fail_count;
        if (n > 0) {
            agg.avg_response_time_s /= n;
            agg.avg_ttft_ms /= n;
        }
    }
    return out;
}

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "markdown" || name == "md") return ReportFormat::Markdown;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "plot-data" || name == "plot") return ReportFormat::PlotData;
    throw UnknownFormat("unknown report format: " + name);
}

namespace {

std::string fmt(double value, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, value);
    return buf;
}

std::vector<int> intention_columns(const std::vector<RunRecord>& records) {
    std::set<int> ids;
    for (const auto& r : records) ids.insert(r.intention_id);
    return {ids.begin(), ids.end()};
}

const RunRecord* first_record(const std::vector<RunRecord>& records, const std::string& model,
                              int intention_id) {
    for (const auto& r : records) {
        if (r.model_name == model && r.intention_id == intention_id) return &r;
    }
    return nullptr;
}

std::string grid_table(const BenchmarkReport& report, const std::vector<int>& columns,
                       bool (*cell)(const RunRecord&)) {
    std::string out = "| Model |";
    for (int id : columns) out += " " + std::to_string(id) + " |";
    out += " ✓ | ✗ |\n|---|";
    for (std::size_t i = 0; i < columns.size() + 2; ++i) out += "---|";
    out += "\n";
    for (const auto& agg : report.aggregates) {
        out += "| " + agg.model_name + " |";
        int yes = 0;
        for (int id : columns) {
            const RunRecord* r = first_record(report.records, agg.model_name, id);
            bool v = r && cell(*r);
            yes += v ? 1 : 0;
            out += v ? " ✓ |" : " ✗ |";
        }
        out += " " + std::to_string(yes) + " | " +
               std::to_string(static_cast<int>(columns.size()) - yes) + " |\n";
    }
    return out;
}

std::string render_markdown(const BenchmarkReport& report) {
    std::vector<int> columns = intention_columns(report.records);
    std::string out = "# Intention resolution benchmark\n\n";
    if (report.fixture_mode)
        out +=
            "_Fixture replay: transcripts are reconstructions of previously measured model "
            "behavior, and chunk timings are authored so per-model averages match the recorded "
            "summary statistics. No live measurement happened in this run._\n\n";
    out += "## Resolutions\n\n";
    out += grid_table(report, columns, [](const RunRecord& r) { return r.success; });
    out += "\n## Failure reasons\n\n";
    bool any_failure = false;
    for (const auto& r : report.records) any_failure = any_failure || !r.success;
    if (any_failure) {
        out += "| Model | Intention | Reason |\n|---|---|---|\n";
        for (const auto& r : report.records) {
            if (!r.success)
                out += "| " + r.model_name + " | " + std::to_string(r.intention_id) + " | " +
                       failure_reason_name(r.failure_reason) + " |\n";
        }
    } else {
        out += "none\n";
    }
    out += "\n## Preamble/postamble inclusion\n\n";
    out += grid_table(report, columns,
                      [](const RunRecord& r) { return r.has_preamble || r.has_postamble; });
    out += "\n## Code comments\n\n";
    out += grid_table(report, columns, [](const RunRecord& r) { return r.has_comments; });
    out += "\n## Average latency\n\n";
    out += "| Model | Avg Response Time (s) | Avg Time to First Token (ms) |\n|---|---|---|\n";
    for (const auto& agg : report.aggregates) {
        out += "| " + agg.model_name + " | " + fmt(agg.avg_response_time_s, "%.2f") + " | " +
               fmt(agg.avg_ttft_ms, "%.1f") + " |\n";
    }
    return out;
}

std::string render_csv(const BenchmarkReport& report) {
    std::string out =
        "model,intention_id,success,failure_reason,has_preamble,has_postamble,has_comments,"
        "ttft_ms,response_time_s,trace_ref\n";
    for (const auto& r : report.records) {
        out += r.model_name + "," + std::to_string(r.intention_id) + "," +
               (r.success ? "true" : "false") + "," + failure_reason_name(r.failure_reason) + "," +
               (r.has_preamble ? "true" : "false") + "," + (r.has_postamble ? "true" : "false") +
               "," + (r.has_comments ? "true" : "false") + "," + fmt(r.ttft_ms, "%.10g") + "," +
               fmt(r.response_time_s, "%.10g") + "," + r.trace_ref + "\n";
    }
    return out;
}

std::string render_plot_data(const BenchmarkReport& report) {
    std::string out = "model,intention_id,ttft_ms,response_time_s\n";
    for (const auto& r : report.records) {
        out += r.model_name + "," + std::to_string(r.intention_id) + "," + fmt(r.ttft_ms, "%.10g") +
               "," + fmt(r.response_time_s, "%.10g") + "\n";
    }
    return out;
}

}  // namespace

std::string render_report(const BenchmarkReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Markdown: return render_markdown(report);
        case ReportFormat::Csv: return render_csv(report);
        case ReportFormat::PlotData: return render_plot_data(report);
    }
    throw UnknownFormat("unhandled report format");
}

std::string records_to_json(const BenchmarkReport& report) {
    json j;
    j["fixture_mode"] = report.fixture_mode;
    json records = json::array();
    for (const auto& r : report.records) {
        json record;
        record["model"] = r.model_name;
        record["intention_id"] = r.intention_id;
        record["success"] = r.success;
        record["failure_reason"] = failure_reason_name(r.failure_reason);
        record["has_preamble"] = r.has_preamble;
        record["has_postamble"] = r.has_postamble;
        record["has_comments"] = r.has_comments;
        record["ttft_ms"] = r.ttft_ms;
        record["response_time_s"] = r.response_time_s;
        record["trace_ref"] = r.trace_ref;
        records.push_back(std::move(record));
    }
    j["records"] = std::move(records);
    return j.dump(2) + "\n";
}

BenchmarkReport records_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("records file is not valid JSON: ") + err.what());
    }
    BenchmarkReport report;
    report.fixture_mode = j.value("fixture_mode", true);
    try {
        for (const auto& record : j.at("records")) {
            RunRecord r;
            r.model_name = record.at("model").get<std::string>();
            r.intention_id = record.at("intention_id").get<int>();
            r.success = record.at("success").get<bool>();
            r.failure_reason = failure_reason_from_name(record.value("failure_reason", ""));
            r.has_preamble = record.value("has_preamble", false);
            r.has_postamble = record.value("has_postamble", false);
            r.has_comments = record.value("has_comments", false);
            r.ttft_ms = record.value("ttft_ms", 0.0);
            r.response_time_s = record.value("response_time_s", 0.0);
            r.trace_ref = record.value("trace_ref", "");
            report.records.push_back(std::move(r));
        }
    } catch (const json::exception& err) {
        throw ConfigError(std::string("bad records field: ") + err.what());
    }
    report.aggregates = aggregate_report(report.records);
    return report;
}

}  // namespace intentforge
