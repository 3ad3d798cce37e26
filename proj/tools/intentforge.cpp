// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "intentforge/bench.hpp"
#include "intentforge/errors.hpp"
#include "intentforge/host_env.hpp"
#include "intentforge/json_conv.hpp"
#include "intentforge/prompt.hpp"
#include "intentforge/workflow/interpreter.hpp"

namespace {

using namespace intentforge;

struct CliOptions {
    std::string config_path;
    std::string fixtures_path = "fixtures/paper.fixtures.json";
    std::string env_path = "fixtures/paper.env.json";
    std::string criteria_path = "fixtures/paper.criteria.json";
    std::string endpoint_url;
    std::vector<std::string> models;
    bool live = false;
    bool allow_real_shell = false;
    bool verbose = false;
    long long seed = -1;
    double temperature = 0.0;
    std::string role = kDefaultRole;
    workflow::ExecLimits limits;
};

// Flags override config-file values; the file only fills fields the user
// did not pass.
void merge_config_file(CliOptions& opts, const CLI::App& app) {
    if (opts.config_path.empty()) return;
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config file: " + opts.config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError(std::string("config file is not valid JSON: ") + err.what());
    }
    auto unset = [&](const char* flag) { return app.count(flag) == 0; };
    if (unset("--fixtures") && j.contains("fixtures")) opts.fixtures_path = j["fixtures"];
    if (unset("--env") && j.contains("env")) opts.env_path = j["env"];
    if (unset("--criteria") && j.contains("criteria")) opts.criteria_path = j["criteria"];
    if (unset("--endpoint") && j.contains("endpoint_url")) opts.endpoint_url = j["endpoint_url"];
    if (unset("--models") && j.contains("models"))
        opts.models = j["models"].get<std::vector<std::string>>();
    if (unset("--temperature") && j.contains("temperature")) opts.temperature = j["temperature"];
    if (unset("--role") && j.contains("role")) opts.role = j["role"];
    if (j.contains("limits")) {
        const auto& l = j["limits"];
        if (unset("--max-steps") && l.contains("max_steps")) opts.limits.max_steps = l["max_steps"];
        if (unset("--max-depth") && l.contains("max_call_depth"))
            opts.limits.max_call_depth = l["max_call_depth"];
        if (unset("--max-wall-ms") && l.contains("max_wall_time_ms"))
            opts.limits.max_wall_time_ms = l["max_wall_time_ms"];
    }
}

ModelConfig make_model_config(const CliOptions& opts, const std::string& name) {
    ModelConfig cfg;
    cfg.model_name = name;
    cfg.temperature = opts.temperature;
    cfg.role = opts.role;
    if (opts.live) {
        cfg.transport = TransportKind::Live;
        cfg.endpoint_url = opts.endpoint_url;
        if (cfg.endpoint_url.empty()) throw ConfigError("--live needs --endpoint");
    } else {
        cfg.transport = TransportKind::Fixture;
        cfg.fixture_path = opts.fixtures_path;
    }
    return cfg;
}

EnvConfig load_env(const CliOptions& opts) {
    EnvConfig env = EnvConfig::from_json_file(opts.env_path);
    if (opts.seed >= 0) env.rng_seed = static_cast<std::uint64_t>(opts.seed);
    return env;
}

FunctionTable standard_table() {
    FunctionTable table;
    install_standard_functions(table);
    table.freeze();
    return table;
}

void write_or_print(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write: " + out_path);
    out << text;
}

std::string describe_event(const workflow::TraceEvent& te) {
    using namespace workflow;
    if (const auto* begin = std::get_if<BeginEvent>(&te.event))
        return "begin intention " + std::to_string(begin->intention_id);
    if (const auto* call = std::get_if<CallEvent>(&te.event)) {
        std::string line = "call " + call->name + "(";
        for (std::size_t i = 0; i < call->args.size(); ++i) {
            if (i) line += ", ";
            line += call->args[i].repr_text();
        }
        line += ")";
        line += call->error.empty() ? " -> " + call->result.repr_text() : " !! " + call->error;
        return line;
    }
    if (const auto* output = std::get_if<OutputEvent>(&te.event)) return "output " + output->text;
    if (const auto* error = std::get_if<ErrorEvent>(&te.event))
        return "error [" + error->kind + "] " + error->message;
    if (const auto* end = std::get_if<EndEvent>(&te.event))
        return std::string("end ") + run_status_name(end->status) + " (" +
               std::to_string(end->steps_used) + " steps)";
    return "?";
}

int cmd_docs() {
    std::cout << render_docs(standard_table()) << "\n";
    return 0;
}

int cmd_resolve(const CliOptions& opts, const std::string& intention_text,
                const std::string& model_name, const std::string& trace_out) {
    CriteriaSet criteria = CriteriaSet::load_file(opts.criteria_path);
    FunctionTable table = standard_table();
    EnvConfig env_config = load_env(opts);

    const SuccessCriterion* criterion = criteria.find_by_text(intention_text);
    Intention intention;
    if (criterion) {
        intention = Intention{criterion->intention_id, criterion->intention_text};
    } else if (!opts.live) {
        throw ConfigError("fixture mode only covers the bundled intentions; run `docs` to see "
                          "the catalog or pass --live for new intentions");
    } else {
        intention = Intention{0, intention_text};
    }

    std::shared_ptr<const FixtureTransport> fixtures;
    if (!opts.live)
        fixtures = std::make_shared<FixtureTransport>(FixtureTransport::load_file(opts.fixtures_path));

    std::string model = model_name;
    if (model.empty()) {
        if (fixtures && !fixtures->models().empty())
            model = fixtures->models().front();
        else
            throw ConfigError("--model is required in live mode");
    }

    ModelConfig model_cfg = make_model_config(opts, model);
    Gateway gateway(model_cfg, fixtures);

    HostEnvironment env(env_config);
    env.allow_real_shell = opts.allow_real_shell;
    env.interactive_ask = [](const std::string& question) {
        std::cout << question << "\n> " << std::flush;
        std::string answer;
        std::getline(std::cin, answer);
        return answer;
    };

    SteadyClock live_clock;
    VirtualClock replay_clock;
    Clock& stream_clock =
        opts.live ? static_cast<Clock&>(live_clock) : static_cast<Clock&>(replay_clock);
    if (opts.live) env.use_clock(&live_clock);  // real sleeps during live resolution

    std::unique_ptr<Gateway> subquery_gateway;
    if (opts.live) {
        subquery_gateway = std::make_unique<Gateway>(model_cfg, nullptr);
        env.live_query_llm = [&](const std::string& query) {
            PromptBundle sub;
            sub.role_message = "You are a helpful assistant";
            sub.user_message = query;
            sub.model_params = ModelParams{model_cfg.temperature, model_cfg.model_name};
            return subquery_gateway->complete_stream(sub, live_clock).full_text;
        };
    }

    PromptBundle bundle = build_prompt(intention, table, model_cfg);
    TimedResponse response = gateway.complete_stream(bundle, stream_clock);
    std::optional<ParsedResponse> parsed = extract_code(response.full_text);

    std::cout << "model: " << model << "\n";
    std::cout << "ttft: " << response.time_to_first_token_ms << " ms, response time: "
              << response.response_time_s << " s\n";

    workflow::ExecutionTrace trace;
    if (parsed) {
        if (opts.verbose) std::cout << "--- generated code ---\n" << parsed->code << "\n---\n";
        trace = workflow::run_workflow_source(parsed->code, table, env, opts.limits, intention.id);
        for (const auto& te : trace.events) std::cout << "  " << describe_event(te) << "\n";
    } else {
        trace.status = workflow::RunStatus::ParseRejected;
        std::cout << "no code block found in the response\n";
        if (opts.verbose) std::cout << "--- raw response ---\n" << response.full_text << "\n---\n";
    }

    if (!trace_out.empty()) {
        std::ofstream out(trace_out);
        if (!out) throw ConfigError("cannot write trace: " + trace_out);
        out << trace.to_jsonl();
    }

    if (criterion) {
        auto [success, reason] = classify_success(parsed, trace, env, *criterion);
        if (success)
            std::cout << "outcome: resolved\n";
        else
            std::cout << "outcome: failed (" << failure_reason_name(reason) << ")\n";
    } else {
        std::cout << "outcome: " << workflow::run_status_name(trace.status)
                  << " (no criterion for this intention)\n";
    }
    return 0;
}

int cmd_bench(const CliOptions& opts, const std::string& out_path, const std::string& format_name,
              const std::string& records_out, int repeat, const std::string& trace_dir) {
    CriteriaSet criteria = CriteriaSet::load_file(opts.criteria_path);
    FunctionTable table = standard_table();
    EnvConfig env_config = load_env(opts);

    std::shared_ptr<const FixtureTransport> fixtures;
    if (!opts.live)
        fixtures = std::make_shared<FixtureTransport>(FixtureTransport::load_file(opts.fixtures_path));

    std::vector<std::string> model_names = opts.models;
    if (model_names.empty()) {
        if (!fixtures) throw ConfigError("--models is required in live mode");
        model_names = fixtures->models();
    }
    std::vector<ModelConfig> models;
    for (const auto& name : model_names) models.push_back(make_model_config(opts, name));

    BenchOptions bench_opts;
    bench_opts.repeat = repeat;
    bench_opts.trace_dir = trace_dir;

    BenchmarkReport report =
        run_matrix(criteria, models, table, env_config, opts.limits, fixtures, bench_opts);

    write_or_print(render_report(report, report_format_from_name(format_name)), out_path);
    if (!records_out.empty()) write_or_print(records_to_json(report), records_out);
    return 0;
}

int cmd_report(const std::string& records_path, const std::string& format_name,
               const std::string& out_path) {
    std::ifstream in(records_path);
    if (!in) throw ConfigError("cannot open records file: " + records_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    BenchmarkReport report = records_from_json(text);
    write_or_print(render_report(report, report_format_from_name(format_name)), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"intentforge - resolve natural-language intentions through generated workflows"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    CliOptions opts;
    app.add_option("--config", opts.config_path, "JSON config file; flags override its values");
    app.add_option("--fixtures", opts.fixtures_path, "transcript fixture file");
    app.add_option("--env", opts.env_path, "environment fixture file");
    app.add_option("--criteria", opts.criteria_path, "success criteria file");
    app.add_option("--endpoint", opts.endpoint_url, "live endpoint base URL (http://host:port)");
    app.add_option("--models", opts.models, "model names")->delimiter(',');
    app.add_flag("--live", opts.live, "use a live OpenAI-compatible endpoint");
    app.add_flag("--allow-real-shell", opts.allow_real_shell,
                 "let shell() run real commands (live use only; off by default)");
    app.add_flag("-v,--verbose", opts.verbose, "print generated code");
    app.add_option("--seed", opts.seed, "override the environment RNG seed");
    app.add_option("--temperature", opts.temperature, "sampling temperature");
    app.add_option("--role", opts.role, "role message");
    app.add_option("--max-steps", opts.limits.max_steps, "interpreter step limit");
    app.add_option("--max-depth", opts.limits.max_call_depth, "interpreter call depth limit");
    app.add_option("--max-wall-ms", opts.limits.max_wall_time_ms, "interpreter wall time limit");

    std::string intention_text, model_name, trace_out;
    auto* resolve = app.add_subcommand("resolve", "resolve one intention end to end");
    resolve->add_option("intention", intention_text, "intention text")->required();
    resolve->add_option("--model", model_name, "model to use");
    resolve->add_option("--trace-out", trace_out, "write the execution trace (JSONL) here");

    std::string out_path, format_name = "markdown", records_out, trace_dir;
    int repeat = 1;
    auto* bench = app.add_subcommand("bench", "run the (model x intention) benchmark matrix");
    bench->add_option("--out", out_path, "report output file (stdout when absent)");
    bench->add_option("--format", format_name, "markdown | csv | plot-data");
    bench->add_option("--records-out", records_out, "save raw run records (JSON) here");
    bench->add_option("--repeat", repeat, "run each (model, intention) pair N times");
    bench->add_option("--trace-dir", trace_dir, "write per-run traces into this directory");

    std::string report_records, report_format = "markdown", report_out;
    auto* report = app.add_subcommand("report", "re-render saved run records");
    report->add_option("records", report_records, "records JSON from bench --records-out")->required();
    report->add_option("--format", report_format, "markdown | csv | plot-data");
    report->add_option("--out", report_out, "output file (stdout when absent)");

    auto* docs = app.add_subcommand("docs", "print the function catalog");

    CLI11_PARSE(app, argc, argv);

    try {
        merge_config_file(opts, app);
        if (docs->parsed()) return cmd_docs();
        if (resolve->parsed()) return cmd_resolve(opts, intention_text, model_name, trace_out);
        if (bench->parsed())
            return cmd_bench(opts, out_path, format_name, records_out, repeat, trace_dir);
        if (report->parsed()) return cmd_report(report_records, report_format, report_out);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
