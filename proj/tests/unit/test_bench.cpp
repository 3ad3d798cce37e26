// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "intentforge/bench.hpp"
#include "intentforge/errors.hpp"

using namespace intentforge;
using workflow::ExecutionTrace;
using workflow::RunStatus;

namespace {

const std::string kFixtureDir = std::string(INTENTFORGE_REPO_DIR) + "/fixtures";

struct Bundle {
    CriteriaSet criteria = CriteriaSet::load_file(kFixtureDir + "/paper.criteria.json");
    EnvConfig env_config = EnvConfig::from_json_file(kFixtureDir + "/paper.env.json");
    std::shared_ptr<const FixtureTransport> fixtures = std::make_shared<FixtureTransport>(
        FixtureTransport::load_file(kFixtureDir + "/paper.fixtures.json"));
    FunctionTable table;

    Bundle() {
        install_standard_functions(table);
        table.freeze();
    }

    std::vector<ModelConfig> all_models() const {
        std::vector<ModelConfig> models;
        for (const auto& name : fixtures->models()) {
            ModelConfig cfg;
            cfg.model_name = name;
            cfg.transport = TransportKind::Fixture;
            models.push_back(cfg);
        }
        return models;
    }
};

ExecutionTrace trace_with_calls(std::vector<std::string> names, RunStatus status) {
    ExecutionTrace trace;
    trace.status = status;
    trace.events.push_back({0.0, workflow::BeginEvent{1}});
    for (auto& name : names)
        trace.events.push_back({0.0, workflow::CallEvent{name, {}, HostValue::null(), ""}});
    trace.events.push_back({0.0, workflow::EndEvent{status, 1}});
    return trace;
}

}  // namespace

TEST_CASE("classify_success: the pinned classification outcomes") {
    Bundle b;
    HostEnvironment env(b.env_config);
    const SuccessCriterion* c1 = b.criteria.find(1);
    REQUIRE(c1);

    SUBCASE("completed sleep(5) satisfies intention 1") {
        ExecutionTrace trace;
        trace.status = RunStatus::Completed;
        trace.events.push_back({0.0, workflow::BeginEvent{1}});
        trace.events.push_back(
            {0.0, workflow::CallEvent{"sleep", {HostValue(5)}, HostValue::null(), ""}});
        trace.events.push_back({5000.0, workflow::EndEvent{RunStatus::Completed, 2}});
        auto [ok, reason] = classify_success(ParsedResponse{}, trace, env, *c1);
        CHECK(ok);
        CHECK(reason == FailureReason::None);
    }
    SUBCASE("no code block dominates everything") {
        auto [ok, reason] = classify_success(std::nullopt, trace_with_calls({}, RunStatus::Completed),
                                             env, *c1);
        CHECK_FALSE(ok);
        CHECK(reason == FailureReason::NoCodeBlock);
    }
    SUBCASE("defined but never invoked: predicate_failed (zero calls)") {
        auto [ok, reason] =
            classify_success(ParsedResponse{}, trace_with_calls({}, RunStatus::Completed), env, *c1);
        CHECK_FALSE(ok);
        CHECK(reason == FailureReason::PredicateFailed);
    }
    SUBCASE("a relevant call keeps the reason predicate_failed") {
        const SuccessCriterion* c2 = b.criteria.find(2);
        auto [ok, reason] = classify_success(
            ParsedResponse{}, trace_with_calls({"ask_question", "print"}, RunStatus::Completed),
            env, *c2);
        CHECK_FALSE(ok);
        CHECK(reason == FailureReason::PredicateFailed);
    }
    SUBCASE("only irrelevant calls: wrong_functions") {
        const SuccessCriterion* c9 = b.criteria.find(9);
        auto [ok, reason] = classify_success(
            ParsedResponse{}, trace_with_calls({"query_llm", "print"}, RunStatus::Completed), env,
            *c9);
        CHECK_FALSE(ok);
        CHECK(reason == FailureReason::WrongFunctions);
    }
    SUBCASE("runtime errors report as runtime_error") {
        auto [ok, reason] = classify_success(
            ParsedResponse{}, trace_with_calls({"query_llm"}, RunStatus::RuntimeError), env,
            *b.criteria.find(8));
        CHECK_FALSE(ok);
        CHECK(reason == FailureReason::RuntimeError);
    }
    SUBCASE("parse and limit states pass through") {
        auto parse = classify_success(ParsedResponse{},
                                      trace_with_calls({}, RunStatus::ParseRejected), env, *c1);
        CHECK(parse.second == FailureReason::ParseRejected);
        auto limit = classify_success(ParsedResponse{},
                                      trace_with_calls({}, RunStatus::LimitExceeded), env, *c1);
        CHECK(limit.second == FailureReason::LimitExceeded);
    }
}

TEST_CASE("run_matrix on the bundled fixtures reproduces the headline rows") {
    Bundle b;
    BenchmarkReport report = run_matrix(b.criteria, b.all_models(), b.table, b.env_config,
                                        workflow::ExecLimits{}, b.fixtures);
    CHECK(report.records.size() == 63);
    CHECK(report.fixture_mode);

    auto record = [&](const std::string& model, int id) -> const RunRecord& {
        for (const auto& r : report.records)
            if (r.model_name == model && r.intention_id == id) return r;
        static RunRecord missing;
        FAIL("missing record");
        return missing;
    };
    auto aggregate = [&](const std::string& model) -> const ModelAggregate& {
        for (const auto& a : report.aggregates)
            if (a.model_name == model) return a;
        static ModelAggregate missing;
        FAIL("missing aggregate");
        return missing;
    };

    // falcon row: 7 successes, I7 no_code_block, I8 success via the
    // alternative route, I9 wrong_functions
    CHECK(aggregate("falcon-3-10b-instruct").success_count == 7);
    CHECK(record("falcon-3-10b-instruct", 7).failure_reason == FailureReason::NoCodeBlock);
    CHECK(record("falcon-3-10b-instruct", 8).success);
    CHECK(record("falcon-3-10b-instruct", 9).failure_reason == FailureReason::WrongFunctions);
    // the two pinned predicate failures
    CHECK(record("gpt-4-turbo", 1).failure_reason == FailureReason::PredicateFailed);
    CHECK(record("qwen-2.5-14b-instruct", 2).failure_reason == FailureReason::PredicateFailed);
    // preamble and comment counts for two spot rows
    CHECK(aggregate("gpt-4o").preamble_count == 9);
    CHECK(aggregate("phi-4").comment_count == 9);
    // every failing record carries a reason; successes carry none
    for (const auto& r : report.records) {
        if (r.success)
            CHECK(r.failure_reason == FailureReason::None);
        else
            CHECK(r.failure_reason != FailureReason::None);
        CHECK(r.ttft_ms <= r.response_time_s * 1000.0);
    }
}

TEST_CASE("run_matrix edge cases") {
    Bundle b;
    SUBCASE("empty model list yields an empty report") {
        BenchmarkReport report =
            run_matrix(b.criteria, {}, b.table, b.env_config, workflow::ExecLimits{}, b.fixtures);
        CHECK(report.records.empty());
        CHECK(report.aggregates.empty());
    }
    SUBCASE("missing transcripts abort before any run") {
        ModelConfig ghost;
        ghost.model_name = "ghost-model";
        ghost.transport = TransportKind::Fixture;
        CHECK_THROWS_AS(run_matrix(b.criteria, {ghost}, b.table, b.env_config,
                                   workflow::ExecLimits{}, b.fixtures),
                        MissingTranscript);
    }
    SUBCASE("fixture-mode reports are byte-identical across runs") {
        auto models = b.all_models();
        BenchmarkReport r1 =
            run_matrix(b.criteria, models, b.table, b.env_config, workflow::ExecLimits{}, b.fixtures);
        BenchmarkReport r2 =
            run_matrix(b.criteria, models, b.table, b.env_config, workflow::ExecLimits{}, b.fixtures);
        CHECK(render_report(r1, ReportFormat::Markdown) == render_report(r2, ReportFormat::Markdown));
        CHECK(records_to_json(r1) == records_to_json(r2));
    }
    SUBCASE("environment isolation: runs do not leak state into each other") {
        // Sentinel states: the answer queue (consumed by qwen I2) and the
        // RNG stream (consumed by every I2/I4 run). With --repeat 2 each
        // round must see a fresh environment and produce identical records;
        // a shared environment would drain the queue and shift the RNG.
        BenchOptions twice;
        twice.repeat = 2;
        BenchmarkReport report = run_matrix(b.criteria, b.all_models(), b.table, b.env_config,
                                            workflow::ExecLimits{}, b.fixtures, twice);
        REQUIRE(report.records.size() == 126);
        for (std::size_t i = 0; i < 63; ++i) {
            const RunRecord& first = report.records[i % 9 + (i / 9) * 18];
            const RunRecord& second = report.records[i % 9 + (i / 9) * 18 + 9];
            CHECK(first.model_name == second.model_name);
            CHECK(first.intention_id == second.intention_id);
            CHECK(first.success == second.success);
            CHECK(first.failure_reason == second.failure_reason);
        }
        HostEnvironment fresh(b.env_config);
        CHECK(fresh.sent_emails().empty());
        CHECK(fresh.ask_question("probe") == "42");
    }
}

TEST_CASE("aggregate_report means and counts") {
    std::vector<RunRecord> records;
    for (int i = 0; i < 9; ++i) {
        RunRecord r;
        r.model_name = "m";
        r.intention_id = i + 1;
        r.success = true;
        r.response_time_s = 2.0;
        r.ttft_ms = 100.0;
        r.has_comments = i % 2 == 0;
        records.push_back(r);
    }
    auto aggregates = aggregate_report(records);
    REQUIRE(aggregates.size() == 1);
    CHECK(aggregates[0].success_count == 9);
    CHECK(aggregates[0].fail_count == 0);
    CHECK(aggregates[0].avg_response_time_s == doctest::Approx(2.0));
    CHECK(aggregates[0].avg_ttft_ms == doctest::Approx(100.0));
    CHECK(aggregates[0].comment_count == 5);
}

TEST_CASE("render_report formats") {
    Bundle b;
    BenchmarkReport report = run_matrix(b.criteria, b.all_models(), b.table, b.env_config,
                                        workflow::ExecLimits{}, b.fixtures);
    SUBCASE("markdown totals column reads 7,7,7,8,8,7,8") {
        std::string md = render_report(report, ReportFormat::Markdown);
        std::vector<int> totals;
        std::istringstream stream(md);
        std::string line;
        bool in_resolutions = false;
        while (std::getline(stream, line)) {
            if (line.rfind("## ", 0) == 0) in_resolutions = line == "## Resolutions";
            if (!in_resolutions || line.rfind("| ", 0) != 0 || line.find("Model") != std::string::npos)
                continue;
            // split the row on '|'; the success total is the second-to-last cell
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream row(line);
            while (std::getline(row, cell, '|')) cells.push_back(cell);
            REQUIRE(cells.size() >= 3);  // trailing '|' yields no empty tail token
            totals.push_back(std::stoi(cells[cells.size() - 2]));
        }
        CHECK(totals == std::vector<int>{7, 7, 7, 8, 8, 7, 8});
        CHECK(md.find("reconstruction") != std::string::npos);
    }
    SUBCASE("csv holds a header plus 63 rows") {
        std::string csv = render_report(report, ReportFormat::Csv);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 64);
        CHECK(csv.rfind("model,intention_id,success", 0) == 0);
    }
    SUBCASE("plot data holds a header plus 63 tuples") {
        std::string plot = render_report(report, ReportFormat::PlotData);
        CHECK(std::count(plot.begin(), plot.end(), '\n') == 64);
        CHECK(plot.rfind("model,intention_id,ttft_ms,response_time_s", 0) == 0);
    }
    SUBCASE("unknown formats are rejected") {
        CHECK_THROWS_AS(report_format_from_name("pdf"), UnknownFormat);
    }
    SUBCASE("records survive a JSON round trip") {
        BenchmarkReport back = records_from_json(records_to_json(report));
        REQUIRE(back.records.size() == report.records.size());
        for (std::size_t i = 0; i < back.records.size(); ++i) {
            CHECK(back.records[i].model_name == report.records[i].model_name);
            CHECK(back.records[i].success == report.records[i].success);
            CHECK(back.records[i].failure_reason == report.records[i].failure_reason);
            CHECK(back.records[i].ttft_ms == report.records[i].ttft_ms);
        }
        CHECK(render_report(back, ReportFormat::Csv) == render_report(report, ReportFormat::Csv));
    }
}

TEST_CASE("criteria files are validated") {
    CHECK_THROWS_AS(CriteriaSet::from_json_text("nope"), ConfigError);
    CHECK_THROWS_AS(CriteriaSet::from_json_text(R"({"intentions": [
        {"id": 1, "text": "t", "predicate": {"bogus_key": 1}}]})"),
                    ConfigError);
    CHECK_THROWS_AS(CriteriaSet::from_json_text(R"({"intentions": [
        {"id": 1, "text": "t", "predicate": {"env_check": "no_such_probe"}}]})"),
                    ConfigError);
    CHECK_THROWS_AS(CriteriaSet::from_json_text(R"({"intentions": [
        {"id": 1, "text": "t", "predicate": {"called": "x"}},
        {"id": 1, "text": "t2", "predicate": {"called": "x"}}]})"),
                    ConfigError);
    CriteriaSet ok = CriteriaSet::from_json_text(R"({"intentions": [
        {"id": 3, "text": "Do the thing", "relevant": ["sleep"],
         "predicate": {"any": [{"called": "sleep"}, {"not": {"status": "completed"}}]}}]})");
    CHECK(ok.find(3));
    CHECK(ok.find_by_text("do the thing") == nullptr);  // match is exact after whitespace folding
    CHECK(ok.find_by_text("  Do   the thing ") != nullptr);
}
