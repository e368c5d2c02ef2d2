#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "edsim/backend.hpp"

namespace edsim {

// Sleep indirection so retry/backoff behaviour is testable with a simulated
// clock.
class Sleeper {
public:
    virtual ~Sleeper() = default;
    virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

class ThreadSleeper : public Sleeper {
public:
    void sleep_for(std::chrono::milliseconds d) override;
};

class RecordingSleeper : public Sleeper {
public:
    void sleep_for(std::chrono::milliseconds d) override { slept.push_back(d); }
    std::vector<std::chrono::milliseconds> slept;
};

struct RetryOutcome {
    ChatResult result;
    int attempts = 0;
    std::vector<std::chrono::milliseconds> backoffs;  // one per sleep taken
};

// Computes the deterministic jittered backoff for attempt k (1-based count of
// failures so far): min(max, base * 2^(k-1) * (1 + u)) with u in [0,1) drawn
// from a stream seeded by (request_seed, k). Always within [base, max].
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int attempt,
                                        std::uint64_t request_seed);

// Retries retryable classifications with jittered exponential backoff,
// honoring retry_after when the provider supplied one. Non-retryable errors
// return immediately. Total attempts <= policy.max_attempts. The optional
// validate hook rejects otherwise-successful responses (e.g. empty after
// cleaning); rejections are retried like transient failures.
RetryOutcome complete_with_retry(
    ChatBackend& backend, const ChatRequest& request, const RetryPolicy& policy,
    Sleeper& sleeper,
    const std::function<std::optional<BackendError>(const ChatResponse&)>& validate = {},
    const std::function<void()>& before_attempt = {});

}  // namespace edsim
