#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "edsim/backend.hpp"
#include "edsim/matrix.hpp"
#include "edsim/rate_limiter.hpp"
#include "edsim/retry.hpp"
#include "edsim/types.hpp"

namespace edsim {

// Brackets each request with a rate-limiter slot. Retry backoff happens
// outside the bracket, so a waiting request never occupies concurrency.
class RateLimitedBackend : public ChatBackend {
public:
    RateLimitedBackend(std::shared_ptr<ChatBackend> inner,
                       std::shared_ptr<RateLimiter> limiter);

    ChatResult complete(const ChatRequest& request) override;
    std::string name() const override { return inner_->name(); }

private:
    std::shared_ptr<ChatBackend> inner_;
    std::shared_ptr<RateLimiter> limiter_;
};

// One shareable backend per distinct model key. HTTP providers always get a
// limiter (concurrency ceiling, plus rpm when configured); scripted mocks
// only when rpm > 0, so offline runs are unthrottled by default.
class BackendRegistry {
public:
    struct Entry {
        std::shared_ptr<ChatBackend> backend;  // call this; wrapped when limited
        std::shared_ptr<RateLimiter> limiter;  // null when unthrottled
    };

    // offline=true rejects HTTP providers outright.
    static BackendRegistry from_config(const ExperimentConfig& config, bool offline);

    const Entry& at(const std::string& model_key) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, Entry> entries_;
};

// Runs one conversation: seed exchange, mediator injection, then the
// alternating generation loop with per-turn cleaning and retries. Backend
// failure after exhausted retries yields status=failed with the generated
// prefix preserved. Pass a Sleeper to make backoff observable in tests.
Conversation run_conversation(const ExperimentCell& cell, const CommunityPrompt& prompt,
                              const ExperimentConfig& config, ChatBackend& backend,
                              int replicate_index, Sleeper* sleeper = nullptr);

struct RunSummary {
    long long planned = 0;
    long long completed = 0;
    long long failed = 0;
    long long skipped = 0;  // resumed from the manifest
};

// Invoked (serialized) after each replicate is recorded. Return false to stop
// scheduling further work; in-flight replicates still drain, and the run
// returns with whatever was recorded. Lets callers interrupt at an exact
// point and report progress.
using ProgressFn = std::function<bool(const RunSummary&, const std::string& manifest_key)>;

// Plans the full matrix, skips manifest-verified replicates, and runs the
// rest on a bounded worker pool. Records are appended strictly in replicate
// order per cell and the manifest is updated after each record, so output
// bytes are independent of parallelism and an interrupted run resumes to the
// identical result.
RunSummary run_experiment(const ExperimentConfig& config, BackendRegistry& registry,
                          ProgressFn progress = {});

}  // namespace edsim
