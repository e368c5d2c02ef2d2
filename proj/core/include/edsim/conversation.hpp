#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edsim {

enum class SpeakerRole { seed_a, seed_b, participant_a, participant_b, mediator };

std::string_view speaker_role_slug(SpeakerRole role);
std::optional<SpeakerRole> speaker_role_from_slug(std::string_view slug);

struct Utterance {
    SpeakerRole role{};
    std::string speaker_name;
    std::string text;
    int index = 0;
    bool generated = false;  // true iff role is participant_a/participant_b
};

struct TokenUsage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
};

enum class ConversationStatus { complete, failed };

struct Conversation {
    std::string cell_key;
    int replicate_index = 0;
    std::uint64_t seed = 0;
    std::vector<Utterance> utterances;
    ConversationStatus status = ConversationStatus::complete;
    std::optional<std::string> failure_reason;
    TokenUsage usage;

    int generated_count() const {
        int n = 0;
        for (const Utterance& u : utterances) n += u.generated ? 1 : 0;
        return n;
    }
};

// One compact JSON object per conversation, the transcript JSONL record
// schema. Keys are sorted, UTF-8 kept raw; byte-stable for a given value.
std::string conversation_to_jsonl_line(const Conversation& conversation);
Conversation conversation_from_jsonl_line(std::string_view line);

}  // namespace edsim
