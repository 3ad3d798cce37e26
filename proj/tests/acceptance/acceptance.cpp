// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion prints exactly one PASS/FAIL line; the
// process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "intentforge/analyzer.hpp"
#include "intentforge/bench.hpp"
#include "intentforge/host_env.hpp"
#include "intentforge/types.hpp"
#include "intentforge/workflow/interpreter.hpp"
#include "intentforge/workflow/parser.hpp"

#include "../unit/program_gen.hpp"
#include "../unit/reference_eval.hpp"

using namespace intentforge;
using workflow::ExecLimits;
using workflow::ExecutionTrace;
using workflow::RunStatus;

namespace {

const std::string kFixtureDir = std::string(INTENTFORGE_REPO_DIR) + "/fixtures";

int g_failures = 0;

struct Criterion {
    int number;
    std::string title;
    std::vector<std::string> problems;

    void expect(bool ok, const std::string& detail) {
        if (!ok) problems.push_back(detail);
    }
    template <typename T, typename U>
    void expect_eq(const T& got, const U& want, const std::string& what) {
        if (!(got == static_cast<T>(want))) {
            std::ostringstream msg;
            msg << what << ": got " << got << ", want " << want;
            problems.push_back(msg.str());
        }
    }
    void finish() {
        if (problems.empty()) {
            std::printf("PASS  criterion %d: %s\n", number, title.c_str());
        } else {
            ++g_failures;
            std::printf("FAIL  criterion %d: %s\n", number, title.c_str());
            for (const auto& p : problems) std::printf("      - %s\n", p.c_str());
        }
    }
};

struct Setup {
    CriteriaSet criteria = CriteriaSet::load_file(kFixtureDir + "/paper.criteria.json");
    EnvConfig env_config = EnvConfig::from_json_file(kFixtureDir + "/paper.env.json");
    std::shared_ptr<const FixtureTransport> fixtures = std::make_shared<FixtureTransport>(
        FixtureTransport::load_file(kFixtureDir + "/paper.fixtures.json"));
    FunctionTable table;
    BenchmarkReport report;
    double bench_seconds = 0.0;

    Setup() {
        install_standard_functions(table);
        table.freeze();
        std::vector<ModelConfig> models;
        for (const auto& name : fixtures->models()) {
            ModelConfig cfg;
            cfg.model_name = name;
            cfg.transport = TransportKind::Fixture;
            models.push_back(cfg);
        }
        auto t0 = std::chrono::steady_clock::now();
        report = run_matrix(criteria, models, table, env_config, ExecLimits{}, fixtures);
        bench_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    const RunRecord* record(const std::string& model, int intention) const {
        for (const auto& r : report.records)
            if (r.model_name == model && r.intention_id == intention) return &r;
        return nullptr;
    }
    const ModelAggregate* aggregate(const std::string& model) const {
        for (const auto& a : report.aggregates)
            if (a.model_name == model) return &a;
        return nullptr;
    }
};

const char* kModels[] = {
    "falcon-3-10b-instruct", "phi-4",       "qwen-2.5-14b-instruct", "gpt-4o",
    "gpt-4o-mini",           "gpt-4-turbo", "gpt-4.5-preview-2025-02-27",
};

void criterion_1(const Setup& s) {
    Criterion c{1, "success grid reproduction (totals, per-cell pattern, failure reasons)", {}};

    const std::map<std::string, int> expected_totals = {
        {"falcon-3-10b-instruct", 7}, {"phi-4", 7}, {"qwen-2.5-14b-instruct", 7},
        {"gpt-4o", 8}, {"gpt-4o-mini", 8}, {"gpt-4-turbo", 7},
        {"gpt-4.5-preview-2025-02-27", 8}};
    const std::map<std::string, std::set<int>> expected_failures = {
        {"falcon-3-10b-instruct", {7, 9}}, {"phi-4", {8, 9}}, {"qwen-2.5-14b-instruct", {2, 8}},
        {"gpt-4o", {8}}, {"gpt-4o-mini", {8}}, {"gpt-4-turbo", {1, 8}},
        {"gpt-4.5-preview-2025-02-27", {8}}};

    c.expect_eq(s.report.records.size(), std::size_t{63}, "record count");
    for (const char* model : kModels) {
        const ModelAggregate* agg = s.aggregate(model);
        if (!agg) {
            c.expect(false, std::string("missing aggregate for ") + model);
            continue;
        }
        c.expect_eq(agg->success_count, expected_totals.at(model),
                    std::string(model) + " success total");
        for (int intention = 1; intention <= 9; ++intention) {
            const RunRecord* r = s.record(model, intention);
            if (!r) {
                c.expect(false, std::string("missing record ") + model);
                continue;
            }
            bool want_success = expected_failures.at(model).count(intention) == 0;
            if (r->success != want_success) {
                std::ostringstream msg;
                msg << model << " intention " << intention << ": got "
                    << (r->success ? "success" : "failure") << ", want "
                    << (want_success ? "success" : "failure");
                c.problems.push_back(msg.str());
            }
        }
    }
    auto reason = [&](const char* model, int intention) {
        const RunRecord* r = s.record(model, intention);
        return r ? r->failure_reason : FailureReason::None;
    };
    c.expect(reason("falcon-3-10b-instruct", 7) == FailureReason::NoCodeBlock,
             "falcon I7 must be no_code_block");
    c.expect(reason("gpt-4-turbo", 1) == FailureReason::PredicateFailed,
             "gpt-4-turbo I1 must be predicate_failed");
    c.expect(reason("qwen-2.5-14b-instruct", 2) == FailureReason::PredicateFailed,
             "qwen I2 must be predicate_failed");
    for (const char* model : kModels) {
        const RunRecord* r = s.record(model, 8);
        bool is_falcon = std::string(model) == "falcon-3-10b-instruct";
        c.expect(r && r->success == is_falcon,
                 std::string("intention 8 must fail for all but falcon: ") + model);
    }
    c.expect(s.bench_seconds < 10.0, "benchmark must finish in under 10 seconds");
    c.finish();
}

void criterion_2(const Setup& s) {
    Criterion c{2, "preamble/postamble counts (gpt-4o 9, gpt-4.5 9, all others 0)", {}};
    const std::map<std::string, int> expected = {
        {"falcon-3-10b-instruct", 0}, {"phi-4", 0}, {"qwen-2.5-14b-instruct", 0},
        {"gpt-4o", 9}, {"gpt-4o-mini", 0}, {"gpt-4-turbo", 0},
        {"gpt-4.5-preview-2025-02-27", 9}};
    for (const char* model : kModels) {
        const ModelAggregate* agg = s.aggregate(model);
        c.expect_eq(agg ? agg->preamble_count : -1, expected.at(model),
                    std::string(model) + " envelope count");
    }
    c.finish();
}

void criterion_3(const Setup& s) {
    Criterion c{3, "code comment counts (falcon 4, phi-4 9, qwen 3, 4o 8, mini 6, turbo 9, 4.5 9)",
                {}};
    const std::map<std::string, int> expected = {
        {"falcon-3-10b-instruct", 4}, {"phi-4", 9}, {"qwen-2.5-14b-instruct", 3},
        {"gpt-4o", 8}, {"gpt-4o-mini", 6}, {"gpt-4-turbo", 9},
        {"gpt-4.5-preview-2025-02-27", 9}};
    for (const char* model : kModels) {
        const ModelAggregate* agg = s.aggregate(model);
        c.expect_eq(agg ? agg->comment_count : -1, expected.at(model),
                    std::string(model) + " comment count");
    }
    c.finish();
}

void criterion_4(const Setup& s) {
    Criterion c{4, "latency reconstruction (per-model averages within 0.01 s / 0.1 ms)", {}};
    const std::map<std::string, std::pair<double, double>> expected = {
        {"falcon-3-10b-instruct", {6.39, 353.4}}, {"phi-4", {7.16, 398.4}},
        {"qwen-2.5-14b-instruct", {3.42, 390.6}}, {"gpt-4o", {1.75, 539.9}},
        {"gpt-4o-mini", {3.99, 498.3}},           {"gpt-4-turbo", {6.53, 883.1}},
        {"gpt-4.5-preview-2025-02-27", {7.24, 900.1}}};
    for (const char* model : kModels) {
        const ModelAggregate* agg = s.aggregate(model);
        if (!agg) {
            c.expect(false, std::string("missing aggregate for ") + model);
            continue;
        }
        auto [want_resp, want_ttft] = expected.at(model);
        if (std::abs(agg->avg_response_time_s - want_resp) > 0.01) {
            std::ostringstream msg;
            msg << model << " avg response time: got " << agg->avg_response_time_s << ", want "
                << want_resp << " +- 0.01";
            c.problems.push_back(msg.str());
        }
        if (std::abs(agg->avg_ttft_ms - want_ttft) > 0.1) {
            std::ostringstream msg;
            msg << model << " avg ttft: got " << agg->avg_ttft_ms << ", want " << want_ttft
                << " +- 0.1";
            c.problems.push_back(msg.str());
        }
    }
    std::string md = render_report(s.report, ReportFormat::Markdown);
    c.expect(md.find("reconstruction") != std::string::npos,
             "the report must label fixture timings as reconstructions");
    c.finish();
}

void criterion_5(const Setup& s) {
    Criterion c{5, "metric properties (ttft <= response time, monotone chunks, concatenation)", {}};

    // every fixture run
    for (const auto& r : s.report.records) {
        if (r.ttft_ms > r.response_time_s * 1000.0 + 1e-9) {
            c.problems.push_back("fixture run violates ttft <= response_time: " + r.trace_ref);
        }
    }
    // randomized chunkings
    std::mt19937 rng(5150);
    int runs = 0;
    for (int i = 0; i < 1100; ++i) {
        std::size_t len = 1 + rng() % 120;
        std::string reference;
        for (std::size_t k = 0; k < len; ++k)
            reference += static_cast<char>('a' + static_cast<char>(rng() % 26));
        std::vector<std::size_t> cuts{0, len};
        for (std::size_t k = 0; k < rng() % 6; ++k) cuts.push_back(1 + rng() % len);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        Transcript t;
        t.model = "m";
        t.intention_id = 1;
        double offset = 0.1 + static_cast<double>(rng() % 2000) / 10.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            t.chunks.push_back({offset, reference.substr(cuts[k], cuts[k + 1] - cuts[k])});
            offset += static_cast<double>(rng() % 300) / 10.0;
        }
        auto fixtures = std::make_shared<FixtureTransport>(std::vector<Transcript>{t});
        ModelConfig cfg;
        cfg.model_name = "m";
        cfg.transport = TransportKind::Fixture;
        Gateway gateway(cfg, fixtures);
        PromptBundle bundle;
        bundle.role_message = "r";
        bundle.user_message = "u";
        bundle.intention_id = 1;
        VirtualClock clock;
        TimedResponse resp = gateway.complete_stream(bundle, clock);

        if (resp.full_text != reference) c.problems.push_back("concatenation mismatch");
        if (!(resp.time_to_first_token_ms > 0.0 &&
              resp.time_to_first_token_ms <= resp.response_time_s * 1000.0 + 1e-9))
            c.problems.push_back("ttft bound violated");
        double prev = 0.0;
        for (const auto& event : resp.events) {
            if (event.at_ms < prev) c.problems.push_back("timestamps not monotone");
            prev = event.at_ms;
        }
        ++runs;
        if (c.problems.size() > 5) break;
    }
    c.expect(runs >= 1000, "at least 1000 randomized chunkings must run");
    c.finish();
}

void criterion_6(const Setup& s) {
    Criterion c{6, "interpreter differential suite + trace determinism", {}};

    // generated pure programs against the independent reference evaluator
    progen::ProgramGen gen(20250606);
    int compared = 0;
    for (int i = 0; i < 120 && c.problems.size() < 5; ++i) {
        std::string source = gen.next_program();
        workflow::WorkflowProgram program;
        try {
            program = workflow::parse_workflow(source);
        } catch (const std::exception& err) {
            c.problems.push_back(std::string("generated program failed to parse: ") + err.what());
            continue;
        }
        std::vector<std::string> expected = refeval::Reference{}.run(program);

        HostEnvironment env(EnvConfig{});
        ExecLimits limits;
        limits.max_steps = 2000000;
        ExecutionTrace trace = workflow::execute_workflow(program, s.table, env, limits);
        if (trace.status != RunStatus::Completed) {
            c.problems.push_back("generated program did not complete");
            continue;
        }
        std::vector<std::string> actual;
        for (const auto& te : trace.events) {
            if (const auto* o = std::get_if<workflow::OutputEvent>(&te.event))
                actual.push_back(o->text);
        }
        if (actual != expected) c.problems.push_back("output mismatch vs reference:\n" + source);
        ++compared;
    }
    c.expect(compared >= 100, "at least 100 generated programs must be compared");

    // byte-identical traces across 3 runs of every bundled fixture workflow
    int workflows = 0;
    for (const auto& model : s.fixtures->models()) {
        for (int intention = 1; intention <= 9; ++intention) {
            const Transcript& t = s.fixtures->lookup(model, intention);
            std::string full;
            for (const auto& chunk : t.chunks) full += chunk.text;
            auto parsed = extract_code(full);
            if (!parsed) continue;  // the marker-failure fixture has no workflow
            std::string first, prev;
            bool stable = true;
            for (int run = 0; run < 3; ++run) {
                HostEnvironment env(s.env_config);
                std::string serialized =
                    workflow::run_workflow_source(parsed->code, s.table, env, ExecLimits{}, intention)
                        .to_jsonl();
                if (run == 0)
                    first = serialized;
                else
                    stable = stable && serialized == prev;
                prev = serialized;
            }
            stable = stable && first == prev;
            if (!stable)
                c.problems.push_back("trace not deterministic for " + model + "/" +
                                     std::to_string(intention));
            ++workflows;
        }
    }
    c.expect(workflows >= 62, "all bundled workflows must be replayed");
    c.finish();
}

void criterion_7(const Setup&) {
    Criterion c{7, "sandbox adversarial corpus (contained, effect-free, bounded)", {}};
    const char* hostile[] = {
        "import os",
        "import subprocess",
        "from os import path",
        "import os; os.system(\"ls\")",
        "__import__(\"os\")",
        "open(\"/etc/passwd\")",
        "eval(\"1 + 1\")",
        "exec(\"print(1)\")",
        "getattr(x, \"system\")",
        "x.__class__()",
        "x.__dict__()",
        "x.system()",
        "[].append",
        "os.popen(\"id\")",
        "with open(\"f\") as f:\n    pass",
        "class Exploit:\n    pass",
        "f = lambda: 1",
        "global sneaky",
        "raise SystemExit",
        "del print",
        "assert False",
        "yield 1",
        "async def f():\n    pass",
        "x = 1\nx.bit_length()",
        "while True:\n    pass",
        "while 1:\n    x = 1",
        "def f():\n    f()\nf()",
        "def a():\n    b()\ndef b():\n    a()\na()",
        "x = range(1000000000000)",
        "for i in range(999999999999):\n    y = i",
        "s = \"a\"\nwhile True:\n    s = s + s",
        "xs = []\nwhile True:\n    xs.append(xs)",
        "x = \"a\" * 1000000000",
        "print(1 // 0)",
        "f\"{__import__('os')}\"",
        "try:\n    import os\nexcept:\n    pass",
    };

    FunctionTable counting;
    int effects = 0;
    for (const char* signature :
         {"function shell(command: String): String", "function sleep(seconds: Integer): void",
          "function print(text: String): void",
          "function send_email(email: String, subject: String, text: String, attachment_paths: "
          "Collection<String>): void"}) {
        counting.register_function(parse_signature(signature),
                                   [&](const std::vector<HostValue>&, HostEnvironment&) {
                                       ++effects;
                                       return HostValue::null();
                                   });
    }
    counting.freeze();

    int checked = 0;
    for (const char* source : hostile) {
        HostEnvironment env(EnvConfig{});
        auto t0 = std::chrono::steady_clock::now();
        ExecutionTrace trace = workflow::run_workflow_source(source, counting, env, ExecLimits{});
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool contained = trace.status == RunStatus::ParseRejected ||
                         trace.status == RunStatus::RuntimeError ||
                         trace.status == RunStatus::LimitExceeded;
        if (!contained)
            c.problems.push_back(std::string("not contained: ") + source + " -> " +
                                 workflow::run_status_name(trace.status));
        if (elapsed >= 5.0) c.problems.push_back(std::string("too slow: ") + source);
        ++checked;
    }
    c.expect(checked >= 30, "at least 30 hostile programs must run");
    c.expect_eq(effects, 0, "host effect counter");
    c.finish();
}

void criterion_8(const Setup& s) {
    Criterion c{8, "type-system round-trip (16 catalog signatures + 500 randomized types)", {}};
    int line_count = 0;
    for (const FunctionSpec* spec : s.table.specs()) {
        std::string line = render_signature(*spec);
        FunctionSpec reparsed = parse_signature(line);
        if (!(reparsed == *spec) || render_signature(reparsed) != line)
            c.problems.push_back("signature round-trip failed: " + line);
        ++line_count;
    }
    c.expect_eq(line_count, 16, "catalog signature count");

    std::mt19937 rng(88);
    std::function<SemanticType(int)> random_type = [&](int depth) -> SemanticType {
        switch (rng() % (depth > 0 ? 9 : 6)) {
            case 0: return SemanticType::string();
            case 1: return SemanticType::integer();
            case 2: return SemanticType::floating();
            case 3: return SemanticType::boolean();
            case 4: return SemanticType::null_type();
            case 5: return SemanticType::void_type();
            case 6: return SemanticType::collection(random_type(depth - 1));
            case 7: return SemanticType::dictionary(random_type(depth - 1), random_type(depth - 1));
            default: {
                std::vector<SemanticType> pool{SemanticType::string(), SemanticType::integer(),
                                               SemanticType::floating(), SemanticType::boolean(),
                                               SemanticType::null_type(),
                                               SemanticType::collection(random_type(depth - 1))};
                std::shuffle(pool.begin(), pool.end(), rng);
                pool.erase(pool.begin() + static_cast<long>(2 + rng() % 3), pool.end());
                return SemanticType::union_of(std::move(pool));
            }
        }
    };
    int round_trips = 0;
    for (int i = 0; i < 550 && c.problems.size() < 5; ++i) {
        SemanticType t = random_type(3);
        if (!(parse_type(render_type(t)) == t))
            c.problems.push_back("type round-trip failed: " + render_type(t));
        ++round_trips;
    }
    c.expect(round_trips >= 500, "at least 500 randomized types must round-trip");
    c.finish();
}

void criterion_9(const Setup&) {
    Criterion c{9, "comment detection (no false positives, no false negatives)", {}};
    std::mt19937 rng(909);
    const char* hash_strings[] = {"\"# a\"", "'b # c'", "\"http://x/#y\"", "'###'"};
    const char* plain[] = {"x = 1", "y = x * 2", "print(x)", "z = \"s\""};

    int clean = 0;
    for (int i = 0; i < 110; ++i) {
        std::string program;
        for (int line = 0; line < 5; ++line) {
            if (rng() % 2)
                program += std::string("s = ") + hash_strings[rng() % 4] + "\n";
            else
                program += std::string(plain[rng() % 4]) + "\n";
        }
        auto scan = detect_comments(program);
        if (scan.present) c.problems.push_back("false positive on:\n" + program);
        ++clean;
    }
    c.expect(clean >= 100, "at least 100 comment-free programs");

    int commented = 0;
    for (int i = 0; i < 110; ++i) {
        std::string program;
        int where = static_cast<int>(rng() % 5);
        for (int line = 0; line < 5; ++line) {
            if (line == where)
                program += rng() % 2 ? "# real comment\n"
                                     : std::string(plain[rng() % 4]) + "  # note\n";
            else
                program += std::string(plain[rng() % 4]) + "\n";
        }
        if (!detect_comments(program).present)
            c.problems.push_back("false negative on:\n" + program);
        ++commented;
    }
    c.expect(commented >= 100, "at least 100 commented programs");
    c.finish();
}

}  // namespace

int main() {
    std::printf("acceptance suite (fixture dir: %s)\n", kFixtureDir.c_str());
    Setup setup;
    criterion_1(setup);
    criterion_2(setup);
    criterion_3(setup);
    criterion_4(setup);
    criterion_5(setup);
    criterion_6(setup);
    criterion_7(setup);
    criterion_8(setup);
    criterion_9(setup);
    if (g_failures == 0) {
        std::printf("all 9 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
