#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "edsim/conversation.hpp"
#include "edsim/types.hpp"

namespace edsim {

// Uppercased speaker label, "JANE: text" line form used throughout transcripts.
std::string speaker_label(std::string_view name);
std::string render_utterance_line(const Utterance& utterance);

// The transcript-style opening: one framing sentence
//   "The following is a transcript of an argument on {topic} between
//    {persona_a} and {persona_b} on {platform display name}."
// followed by the seed utterances, one "NAME: text" line each.
std::string assemble_prompt(const CommunityPrompt& prompt, PlatformId platform);

// Scripted opening as utterances (roles seed_a/seed_b, dense indices).
std::vector<Utterance> seed_utterances(const CommunityPrompt& prompt);

// Appends the mediator utterance immediately after the seed exchange; no-op
// for `none`. Throws DialogueError once generation has begun or if a mediator
// is already present.
void inject_intervention(Conversation& conversation, InterventionKind kind);

// Framing sentence plus every utterance line, the generation context sent to
// backends each turn.
std::string render_transcript(const CommunityPrompt& prompt, PlatformId platform,
                              const std::vector<Utterance>& utterances);

// Cleaning rule for raw model output: trim whitespace, strip a leading
// "NAME:" echo of the requested speaker (case-insensitive), truncate at the
// first line break, trim again. May return empty, which callers treat as a
// failed attempt.
std::string clean_response(std::string_view raw, std::string_view speaker_name);

}  // namespace edsim
