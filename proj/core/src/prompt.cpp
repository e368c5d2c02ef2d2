#include "edsim/prompt.hpp"

#include <algorithm>
#include <cctype>

#include "edsim/config.hpp"
#include "edsim/errors.hpp"

namespace edsim {

std::string speaker_label(std::string_view name) {
    std::string label(name);
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return label;
}

std::string render_utterance_line(const Utterance& utterance) {
    return speaker_label(utterance.speaker_name) + ": " + utterance.text;
}

std::string assemble_prompt(const CommunityPrompt& prompt, PlatformId platform) {
    validate_prompt(prompt);
    std::string text = "The following is a transcript of an argument on " +
                       prompt.topic_description + " between " + prompt.persona_a +
                       " and " + prompt.persona_b + " on " +
                       std::string(platform_display_name(platform)) + ".";
    for (const SeedLine& line : prompt.seed_utterances) {
        text.push_back('\n');
        text.append(speaker_label(line.speaker));
        text.append(": ");
        text.append(line.text);
    }
    return text;
}

std::vector<Utterance> seed_utterances(const CommunityPrompt& prompt) {
    std::vector<Utterance> utterances;
    for (std::size_t i = 0; i < prompt.seed_utterances.size(); ++i) {
        Utterance u;
        u.role = (i % 2 == 0) ? SpeakerRole::seed_a : SpeakerRole::seed_b;
        u.speaker_name = prompt.seed_utterances[i].speaker;
        u.text = prompt.seed_utterances[i].text;
        u.index = static_cast<int>(i);
        u.generated = false;
        utterances.push_back(std::move(u));
    }
    return utterances;
}

void inject_intervention(Conversation& conversation, InterventionKind kind) {
    if (kind == InterventionKind::none) return;
    for (const Utterance& u : conversation.utterances) {
        if (u.generated) {
            throw DialogueError("intervention must be injected before any generated turn");
        }
        if (u.role == SpeakerRole::mediator) {
            throw DialogueError("mediator speaks at most once per conversation");
        }
    }
    Utterance u;
    u.role = SpeakerRole::mediator;
    u.speaker_name = "MEDIATOR";
    u.text = std::string(intervention_text(kind));
    u.index = static_cast<int>(conversation.utterances.size());
    u.generated = false;
    conversation.utterances.push_back(std::move(u));
}

std::string render_transcript(const CommunityPrompt& prompt, PlatformId platform,
                              const std::vector<Utterance>& utterances) {
    std::string text = "The following is a transcript of an argument on " +
                       prompt.topic_description + " between " + prompt.persona_a +
                       " and " + prompt.persona_b + " on " +
                       std::string(platform_display_name(platform)) + ".";
    for (const Utterance& u : utterances) {
        text.push_back('\n');
        text.append(render_utterance_line(u));
    }
    return text;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::string clean_response(std::string_view raw, std::string_view speaker_name) {
    std::string_view text = trim(raw);

    // Models often echo the "NAME:" prefix they were asked to continue.
    if (text.size() > speaker_name.size() &&
        iequals(text.substr(0, speaker_name.size()), speaker_name)) {
        std::string_view rest = text.substr(speaker_name.size());
        std::size_t i = 0;
        while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
        if (i < rest.size() && rest[i] == ':') {
            text = rest.substr(i + 1);
        }
    }

    std::size_t newline = text.find_first_of("\r\n");
    if (newline != std::string_view::npos) {
        text = text.substr(0, newline);
    }
    return std::string(trim(text));
}

}  // namespace edsim
