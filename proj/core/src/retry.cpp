#include "edsim/retry.hpp"

#include <algorithm>
#include <thread>

#include "edsim/hash.hpp"

namespace edsim {

void ThreadSleeper::sleep_for(std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
}

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int attempt,
                                        std::uint64_t request_seed) {
    SplitMix64 rng(mix64(request_seed ^ (static_cast<std::uint64_t>(attempt) *
                                         0xd1342543de82ef95ull)));
    double exponential = static_cast<double>(policy.base_backoff_ms);
    for (int i = 1; i < attempt; ++i) exponential *= 2.0;
    double jittered = exponential * (1.0 + rng.next_unit());
    double clamped = std::min(jittered, static_cast<double>(policy.max_backoff_ms));
    clamped = std::max(clamped, static_cast<double>(policy.base_backoff_ms));
    return std::chrono::milliseconds(static_cast<long long>(clamped));
}

RetryOutcome complete_with_retry(
    ChatBackend& backend, const ChatRequest& request, const RetryPolicy& policy,
    Sleeper& sleeper,
    const std::function<std::optional<BackendError>(const ChatResponse&)>& validate,
    const std::function<void()>& before_attempt) {
    RetryOutcome outcome;
    int failures = 0;
    for (;;) {
        if (before_attempt) before_attempt();
        ++outcome.attempts;
        ChatResult result = backend.complete(request);

        if (is_ok(result)) {
            std::optional<BackendError> rejection;
            if (validate) rejection = validate(response_of(result));
            if (!rejection) {
                outcome.result = std::move(result);
                return outcome;
            }
            result = *rejection;
            // Validator rejections are retried like transient failures.
            if (outcome.attempts >= policy.max_attempts) {
                outcome.result = std::move(result);
                return outcome;
            }
        } else {
            const BackendError& error = error_of(result);
            if (!is_retryable(error.classification) ||
                outcome.attempts >= policy.max_attempts) {
                outcome.result = std::move(result);
                return outcome;
            }
        }

        ++failures;
        std::chrono::milliseconds delay;
        const BackendError& error = error_of(result);
        if (error.retry_after) {
            delay = *error.retry_after;
        } else {
            delay = backoff_delay(policy, failures, request.request_seed);
        }
        outcome.backoffs.push_back(delay);
        sleeper.sleep_for(delay);
    }
}

}  // namespace edsim
