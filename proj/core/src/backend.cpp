#include "edsim/backend.hpp"

#include <array>
#include <cctype>

#include "edsim/hash.hpp"
#include "edsim/prompt.hpp"

namespace edsim {

std::string_view error_class_name(ErrorClass c) {
    switch (c) {
        case ErrorClass::rate_limited: return "rate_limited";
        case ErrorClass::transient_server: return "transient_server";
        case ErrorClass::auth: return "auth";
        case ErrorClass::malformed_response: return "malformed_response";
        case ErrorClass::timeout: return "timeout";
        case ErrorClass::permanent: return "permanent";
    }
    return "";
}

bool is_retryable(ErrorClass c) {
    return c == ErrorClass::rate_limited || c == ErrorClass::transient_server ||
           c == ErrorClass::timeout;
}

std::optional<BackendError> parse_failure_entry(const std::string& entry) {
    constexpr std::string_view prefix = "!fail:";
    if (entry.rfind(prefix, 0) != 0) return std::nullopt;

    std::string spec = entry.substr(prefix.size());
    std::string class_name = spec;
    std::optional<std::chrono::milliseconds> retry_after;
    if (std::size_t colon = spec.find(':'); colon != std::string::npos) {
        class_name = spec.substr(0, colon);
        retry_after = std::chrono::milliseconds(std::stoll(spec.substr(colon + 1)));
    }

    for (ErrorClass c : {ErrorClass::rate_limited, ErrorClass::transient_server,
                         ErrorClass::auth, ErrorClass::malformed_response,
                         ErrorClass::timeout, ErrorClass::permanent}) {
        if (error_class_name(c) == class_name) {
            return BackendError{c, "scripted failure", retry_after};
        }
    }
    return BackendError{ErrorClass::permanent, "scripted failure with unknown class '" +
                                                   class_name + "'",
                        retry_after};
}

ScriptedMockBackend::ScriptedMockBackend(std::string name, MockScript script)
    : name_(std::move(name)), script_(std::move(script)) {}

long long ScriptedMockBackend::total_requests() const {
    std::lock_guard lock(mutex_);
    return total_requests_;
}

ChatResult ScriptedMockBackend::complete(const ChatRequest& request) {
    std::uint64_t turn;
    {
        std::lock_guard lock(mutex_);
        turn = per_seed_count_[request.request_seed]++;
        ++total_requests_;
    }

    std::string text;
    if (script_.procedural || script_.responses.empty()) {
        text = procedural_reply(request, turn);
    } else {
        const std::string& entry = script_.responses[turn % script_.responses.size()];
        if (auto failure = parse_failure_entry(entry)) {
            return *failure;
        }
        text = expand(entry, request, turn);
    }

    ChatResponse response;
    response.text = text;
    response.usage.prompt_tokens =
        static_cast<long long>(request.transcript_text.size() / 4 + 1);
    response.usage.completion_tokens = static_cast<long long>(text.size() / 4 + 1);
    response.provider_latency = std::chrono::milliseconds(0);
    return response;
}

std::string ScriptedMockBackend::expand(const std::string& entry, const ChatRequest& request,
                                        std::uint64_t turn) const {
    std::string out;
    out.reserve(entry.size());
    for (std::size_t i = 0; i < entry.size();) {
        if (entry.compare(i, 6, "{turn}") == 0) {
            out += std::to_string(turn + 1);
            i += 6;
        } else if (entry.compare(i, 6, "{seed}") == 0) {
            out += to_hex16(request.request_seed);
            i += 6;
        } else if (entry.compare(i, 9, "{speaker}") == 0) {
            out += request.next_speaker_name;
            i += 9;
        } else {
            out.push_back(entry[i]);
            ++i;
        }
    }
    return out;
}

namespace {

// Word banks for the procedural generator. Positive/negative entries overlap
// with the builtin sentiment lexicon so offline scoring has signal.
constexpr std::array<std::string_view, 12> kPositiveWords{
    "good", "great", "happy", "love", "helpful", "kind",
    "healthy", "better", "hopeful", "proud", "calm", "support"};
constexpr std::array<std::string_view, 12> kNegativeWords{
    "bad", "awful", "sad", "hate", "worried", "tired",
    "unhealthy", "worse", "afraid", "angry", "hurt", "alone"};
constexpr std::array<std::string_view, 16> kNeutralWords{
    "diet", "keto", "weight", "meal", "today", "about", "really", "think",
    "people", "forum", "post", "maybe", "still", "again", "week", "talk"};

}  // namespace

std::string ScriptedMockBackend::procedural_reply(const ChatRequest& request,
                                                  std::uint64_t turn) const {
    SplitMix64 rng(mix64(request.request_seed ^ fnv1a64(request.transcript_text) ^
                         (turn * 0x9e3779b97f4a7c15ull)));
    std::size_t words = 6 + static_cast<std::size_t>(rng.next_below(7));
    std::string text;
    for (std::size_t i = 0; i < words; ++i) {
        std::string_view word;
        std::uint64_t bucket = rng.next_below(10);
        if (bucket < 3) {
            word = kPositiveWords[rng.next_below(kPositiveWords.size())];
        } else if (bucket < 6) {
            word = kNegativeWords[rng.next_below(kNegativeWords.size())];
        } else {
            word = kNeutralWords[rng.next_below(kNeutralWords.size())];
        }
        if (!text.empty()) text.push_back(' ');
        text.append(word);
    }
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    text.push_back('.');
    return text;
}

}  // namespace edsim
