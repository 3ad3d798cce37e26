// Copyright (C) 2025 IntentForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <thread>

namespace intentforge {

/// Monotonic clock used for stream timing and workflow sleeps. Injected so
/// fixture replay runs on virtual time and tests stay deterministic.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now_ms() = 0;
    virtual void advance_ms(double ms) = 0;
};

class VirtualClock final : public Clock {
public:
    double now_ms() override { return t_ms_; }
    void advance_ms(double ms) override {
        if (ms > 0) t_ms_ += ms;
    }

private:
    double t_ms_ = 0.0;
};

/// Real wall time; advance_ms() actually sleeps.
class SteadyClock final : public Clock {
public:
    double now_ms() override {
        auto d = std::chrono::steady_clock::now().time_since_epoch();
        return std::chrono::duration<double, std::milli>(d).count();
    }
    void advance_ms(double ms) override {
        if (ms > 0) std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
    }
};

}  // namespace intentforge
