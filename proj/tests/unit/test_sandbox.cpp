// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <chrono>
#include <vector>

#include "intentforge/host_env.hpp"
#include "intentforge/workflow/interpreter.hpp"

using namespace intentforge;
using namespace intentforge::workflow;

namespace {

// Hostile corpus: every program must end parse_rejected, runtime_error or
// limit_exceeded, with zero host side effects.
const char* kHostilePrograms[] = {
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
    "().__class__()",
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
    "print(undefined_thing)",
    "x = [1]\nprint(x[99])",
    "d = {}\nprint(d[\"missing\"])",
    "print(1 // 0)",
    "f\"{__import__('os')}\"",
    "try:\n    import os\nexcept:\n    pass",
};

}  // namespace

TEST_CASE("adversarial corpus: contained, effect-free, bounded in time") {
    // Table whose callbacks count every invocation; the corpus must never
    // reach a single one.
    FunctionTable table;
    int effects = 0;
    for (const char* signature :
         {"function shell(command: String): String", "function send_email(email: String, "
                                                     "subject: String, text: String, "
                                                     "attachment_paths: Collection<String>): void",
          "function sleep(seconds: Integer): void", "function print(text: String): void",
          "function http_get_request(url: String, headers: Dictionary<String, String>): String"}) {
        table.register_function(parse_signature(signature),
                                [&](const std::vector<HostValue>&, HostEnvironment&) {
                                    ++effects;
                                    return HostValue::null();
                                });
    }
    table.freeze();

    ExecLimits limits;  // defaults: 100k steps, depth 64, 30 s virtual wall
    int checked = 0;
    auto wall_start = std::chrono::steady_clock::now();
    for (const char* source : kHostilePrograms) {
        CAPTURE(source);
        HostEnvironment env(EnvConfig{});
        auto t0 = std::chrono::steady_clock::now();
        ExecutionTrace trace = run_workflow_source(source, table, env, limits);
        auto elapsed = std::chrono::steady_clock::now() - t0;
        CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 5000);
        bool contained = trace.status == RunStatus::ParseRejected ||
                         trace.status == RunStatus::RuntimeError ||
                         trace.status == RunStatus::LimitExceeded;
        CHECK_MESSAGE(contained, source, " -> ", run_status_name(trace.status));
        ++checked;
    }
    CHECK(checked >= 30);
    CHECK(effects == 0);
    auto total = std::chrono::steady_clock::now() - wall_start;
    CHECK(std::chrono::duration_cast<std::chrono::seconds>(total).count() < 60);
}

TEST_CASE("host effects happen only through the table: counter sanity check") {
    FunctionTable table;
    int effects = 0;
    table.register_function(parse_signature("function ping(): void"),
                            [&](const std::vector<HostValue>&, HostEnvironment&) {
                                ++effects;
                                return HostValue::null();
                            });
    table.freeze();
    HostEnvironment env(EnvConfig{});
    ExecutionTrace trace = run_workflow_source("ping()\nping()", table, env, ExecLimits{});
    CHECK(trace.status == RunStatus::Completed);
    CHECK(effects == 2);
}
