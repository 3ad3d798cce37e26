// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "intentforge/analyzer.hpp"
#include "intentforge/gateway.hpp"
#include "intentforge/host_env.hpp"
#include "intentforge/model_config.hpp"
#include "intentforge/workflow/interpreter.hpp"

namespace intentforge {

enum class FailureReason {
    None,
    NoCodeBlock,
    ParseRejected,
    RuntimeError,
    LimitExceeded,
    WrongFunctions,
    PredicateFailed,
};

const char* failure_reason_name(FailureReason reason);
FailureReason failure_reason_from_name(const std::string& name);

/// Positional constraint on one recorded call argument.
struct ArgPattern {
    enum class Kind { Exact, Contains, Any };
    Kind kind = Kind::Any;
    HostValue exact;
    std::vector<std::string> contains;  // all substrings must appear in a text arg

    bool matches(const HostValue& value) const;
};

/// Declarative condition over (ParsedResponse, ExecutionTrace, post-run
/// HostEnvironment). Pure and deterministic.
struct Predicate {
    enum class Kind { All, Any, Not, Called, CalledWith, NotCalled, StatusIs, OutputContains, EnvCheck };
    Kind kind = Kind::All;
    std::vector<Predicate> children;          // All / Any / Not
    std::string name;                         // Called / CalledWith / NotCalled / EnvCheck
    std::vector<ArgPattern> args;             // CalledWith
    workflow::RunStatus status = workflow::RunStatus::Completed;  // StatusIs
    std::string text;                         // OutputContains

    bool evaluate(const workflow::ExecutionTrace& trace, const HostEnvironment& env) const;
};

/// Success judgment for one intention, shipped as data so alternative
/// resolution strategies can be whitelisted explicitly. `relevant` lists the
/// catalog functions a plausible resolution touches; a completed run that
/// called host functions but none of them is classified wrong_functions
/// rather than predicate_failed.
struct SuccessCriterion {
    int intention_id = 0;
    std::string intention_text;
    Predicate predicate;
    std::vector<std::string> relevant;
};

class CriteriaSet {
public:
    static CriteriaSet load_file(const std::string& path);
    static CriteriaSet from_json_text(const std::string& text);

    const std::vector<SuccessCriterion>& ordered() const { return criteria_; }
    const SuccessCriterion* find(int intention_id) const;
    const SuccessCriterion* find_by_text(const std::string& intention_text) const;
    std::vector<Intention> intentions() const;

private:
    std::vector<SuccessCriterion> criteria_;
};

/// One (model, intention) run: outcome, response classification and timing.
struct RunRecord {
    std::string model_name;
    int intention_id = 0;
    bool success = false;
    FailureReason failure_reason = FailureReason::None;  // set iff !success
    bool has_preamble = false;
    bool has_postamble = false;
    bool has_comments = false;
    double ttft_ms = 0.0;
    double response_time_s = 0.0;
    std::string trace_ref;
};

struct ModelAggregate {
    std::string model_name;
    int success_count = 0;
    int fail_count = 0;
    int preamble_count = 0;  // runs whose response carried enveloping prose
    int comment_count = 0;
    double avg_response_time_s = 0.0;
    double avg_ttft_ms = 0.0;
};

struct BenchmarkReport {
    std::vector<RunRecord> records;
    std::vector<ModelAggregate> aggregates;
    bool fixture_mode = true;
};

/// Applies a criterion to the artifacts of one run. `parsed` empty means the
/// response had no decodable code block.
std::pair<bool, FailureReason> classify_success(const std::optional<ParsedResponse>& parsed,
                                                const workflow::ExecutionTrace& trace,
                                                const HostEnvironment& env_after,
                                                const SuccessCriterion& criterion);

struct BenchOptions {
    int repeat = 1;
    std::string trace_dir;  // when set, traces are written here as JSONL
};

/// Runs the full (model x intention) matrix: fresh environment per run,
/// pipeline build_prompt -> complete_stream -> extract_code -> parse ->
/// execute -> classify. Aborts only on configuration errors (missing
/// transcripts, bad configs), never on per-run failures.
BenchmarkReport run_matrix(const CriteriaSet& criteria, const std::vector<ModelConfig>& models,
                           const FunctionTable& table, const EnvConfig& env_config,
                           const workflow::ExecLimits& limits,
                           std::shared_ptr<const FixtureTransport> fixtures,
                           const BenchOptions& options = {});

std::vector<ModelAggregate> aggregate_report(const std::vector<RunRecord>& records);

enum class ReportFormat { Markdown, Csv, PlotData };
ReportFormat report_format_from_name(const std::string& name);  // UnknownFormat on bad input
std::string render_report(const BenchmarkReport& report, ReportFormat format);

std::string records_to_json(const BenchmarkReport& report);
BenchmarkReport records_from_json(const std::string& text);

}  // namespace intentforge
