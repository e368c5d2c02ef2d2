#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>

namespace edsim {

using LimiterClock = std::chrono::steady_clock;

// Monotonic time source; ManualClock drives simulated-time tests.
class Clock {
public:
    virtual ~Clock() = default;
    virtual LimiterClock::time_point now() const = 0;
};

class SteadyClock : public Clock {
public:
    LimiterClock::time_point now() const override { return LimiterClock::now(); }
};

class ManualClock : public Clock {
public:
    LimiterClock::time_point now() const override { return now_; }
    void advance(std::chrono::milliseconds d) { now_ += d; }
    void set(LimiterClock::time_point t) { now_ = t; }

private:
    LimiterClock::time_point now_{};
};

// Per-backend request gate enforcing two ceilings: at most `requests_per_minute`
// grants inside ANY sliding 60s window (kept as a log of recent grant times,
// so the ceiling holds for every window placement, not just bucket edges),
// and at most `max_concurrent` requests in flight. Waiters are served in
// strict FIFO ticket order.
class RateLimiter {
public:
    // rpm 0 = unlimited rate; max_concurrent >= 1.
    RateLimiter(int requests_per_minute, int max_concurrent,
                std::chrono::milliseconds window = std::chrono::milliseconds(60000));

    struct Grant {
        bool granted = false;
        // When not granted: how long until the rate window frees a slot;
        // zero means blocked on concurrency only (wait for a release).
        std::chrono::milliseconds wait{0};
    };

    // Single-step probe for simulated-clock tests and the blocking path.
    // `now` must be monotonically nondecreasing across calls.
    Grant try_acquire(LimiterClock::time_point now);

    // Marks one in-flight request finished, freeing a concurrency slot.
    void release();

    // Blocks until both ceilings admit the caller, FIFO-fair. Uses the real
    // clock and condition-variable waits.
    void acquire_blocking();

    int in_flight() const;

private:
    Grant try_acquire_locked(LimiterClock::time_point now);

    const int rpm_;
    const int max_concurrent_;
    const std::chrono::milliseconds window_;

    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<LimiterClock::time_point> grant_log_;
    int in_flight_ = 0;
    std::uint64_t next_ticket_ = 0;
    std::uint64_t serving_ticket_ = 0;
};

}  // namespace edsim
