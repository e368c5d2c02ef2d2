#include "edsim/conversation.hpp"

#include <json.hpp>

#include "edsim/errors.hpp"

namespace edsim {

using nlohmann::json;

std::string_view speaker_role_slug(SpeakerRole role) {
    switch (role) {
        case SpeakerRole::seed_a: return "seed_a";
        case SpeakerRole::seed_b: return "seed_b";
        case SpeakerRole::participant_a: return "participant_a";
        case SpeakerRole::participant_b: return "participant_b";
        case SpeakerRole::mediator: return "mediator";
    }
    return "";
}

std::optional<SpeakerRole> speaker_role_from_slug(std::string_view slug) {
    for (SpeakerRole role : {SpeakerRole::seed_a, SpeakerRole::seed_b,
                             SpeakerRole::participant_a, SpeakerRole::participant_b,
                             SpeakerRole::mediator}) {
        if (speaker_role_slug(role) == slug) return role;
    }
    return std::nullopt;
}

std::string conversation_to_jsonl_line(const Conversation& conversation) {
    json utterances = json::array();
    for (const Utterance& u : conversation.utterances) {
        utterances.push_back(json{{"index", u.index},
                                  {"role", std::string(speaker_role_slug(u.role))},
                                  {"speaker", u.speaker_name},
                                  {"text", u.text},
                                  {"generated", u.generated}});
    }
    json doc{{"cell_key", conversation.cell_key},
             {"replicate_index", conversation.replicate_index},
             {"seed", conversation.seed},
             {"status",
              conversation.status == ConversationStatus::complete ? "complete" : "failed"},
             {"usage",
              {{"prompt_tokens", conversation.usage.prompt_tokens},
               {"completion_tokens", conversation.usage.completion_tokens}}},
             {"utterances", utterances}};
    if (conversation.failure_reason) {
        doc["failure_reason"] = *conversation.failure_reason;
    }
    return doc.dump();
}

Conversation conversation_from_jsonl_line(std::string_view line) {
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ParseError("transcript record: not a JSON object");
    }
    try {
        Conversation c;
        c.cell_key = doc.at("cell_key").get<std::string>();
        c.replicate_index = doc.at("replicate_index").get<int>();
        c.seed = doc.at("seed").get<std::uint64_t>();
        std::string status = doc.at("status").get<std::string>();
        if (status == "complete") {
            c.status = ConversationStatus::complete;
        } else if (status == "failed") {
            c.status = ConversationStatus::failed;
        } else {
            throw ParseError("transcript record: unknown status '" + status + "'");
        }
        if (doc.contains("failure_reason")) {
            c.failure_reason = doc.at("failure_reason").get<std::string>();
        }
        c.usage.prompt_tokens = doc.at("usage").at("prompt_tokens").get<long long>();
        c.usage.completion_tokens = doc.at("usage").at("completion_tokens").get<long long>();
        for (const json& u : doc.at("utterances")) {
            Utterance utterance;
            utterance.index = u.at("index").get<int>();
            auto role = speaker_role_from_slug(u.at("role").get<std::string>());
            if (!role) throw ParseError("transcript record: unknown speaker role");
            utterance.role = *role;
            utterance.speaker_name = u.at("speaker").get<std::string>();
            utterance.text = u.at("text").get<std::string>();
            utterance.generated = u.at("generated").get<bool>();
            c.utterances.push_back(std::move(utterance));
        }
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("transcript record: ") + e.what());
    }
}

}  // namespace edsim
