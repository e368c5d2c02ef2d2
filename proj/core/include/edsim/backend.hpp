#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "edsim/conversation.hpp"
#include "edsim/types.hpp"

namespace edsim {

struct ChatRequest {
    std::optional<std::string> system_text;
    std::string transcript_text;     // nonempty
    std::string next_speaker_name;   // plain persona name; label casing applied by dialects
    SamplingParams sampling;
    std::uint64_t request_seed = 0;  // forwarded to providers that accept a seed
};

struct ChatResponse {
    std::string text;
    TokenUsage usage;
    std::chrono::milliseconds provider_latency{0};
};

enum class ErrorClass {
    rate_limited,
    transient_server,
    auth,
    malformed_response,
    timeout,
    permanent,
};

std::string_view error_class_name(ErrorClass c);

struct BackendError {
    ErrorClass classification = ErrorClass::permanent;
    std::string detail;
    std::optional<std::chrono::milliseconds> retry_after;
};

using ChatResult = std::variant<ChatResponse, BackendError>;

inline bool is_ok(const ChatResult& r) { return std::holds_alternative<ChatResponse>(r); }
inline const ChatResponse& response_of(const ChatResult& r) { return std::get<ChatResponse>(r); }
inline const BackendError& error_of(const ChatResult& r) { return std::get<BackendError>(r); }

// rate_limited / transient_server / timeout may be retried; auth, permanent
// and malformed_response are returned immediately.
bool is_retryable(ErrorClass c);

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResult complete(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

// Deterministic offline backend. Replies are a pure function of the script
// and the per-seed request count: request n for seed s consumes script entry
// n % size. Entries support {turn}, {seed} and {speaker} placeholders, and
// "!fail:<class>[:<retry_after_ms>]" entries yield a BackendError. In
// procedural mode replies come from a word-bank generator keyed by
// (request_seed, transcript hash, request count), so an injected mediator
// line changes every subsequent reply, deterministically.
class ScriptedMockBackend : public ChatBackend {
public:
    ScriptedMockBackend(std::string name, MockScript script);

    ChatResult complete(const ChatRequest& request) override;
    std::string name() const override { return name_; }

    long long total_requests() const;

private:
    std::string expand(const std::string& entry, const ChatRequest& request,
                       std::uint64_t turn) const;
    std::string procedural_reply(const ChatRequest& request, std::uint64_t turn) const;

    std::string name_;
    MockScript script_;
    mutable std::mutex mutex_;
    std::map<std::uint64_t, std::uint64_t> per_seed_count_;
    long long total_requests_ = 0;
};

// Parses "!fail:<class>[:<retry_after_ms>]"; nullopt when the entry is a
// plain response.
std::optional<BackendError> parse_failure_entry(const std::string& entry);

}  // namespace edsim
