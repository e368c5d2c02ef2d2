#include "edsim/types.hpp"

namespace edsim {

std::string_view platform_slug(PlatformId id) {
    switch (id) {
        case PlatformId::twitter: return "twitter";
        case PlatformId::reddit: return "reddit";
        case PlatformId::ed_forum: return "ed_forum";
    }
    return "";
}

std::string_view platform_display_name(PlatformId id) {
    switch (id) {
        case PlatformId::twitter: return "Twitter";
        case PlatformId::reddit: return "Reddit";
        case PlatformId::ed_forum: return "ED Forum";
    }
    return "";
}

std::optional<PlatformId> platform_from_slug(std::string_view slug) {
    for (PlatformId id : kAllPlatforms) {
        if (platform_slug(id) == slug) return id;
    }
    return std::nullopt;
}

std::string_view intervention_slug(InterventionKind kind) {
    switch (kind) {
        case InterventionKind::none: return "none";
        case InterventionKind::support: return "support";
        case InterventionKind::reset_insight: return "reset_insight";
        case InterventionKind::health_advice: return "health_advice";
        case InterventionKind::modeling_civility: return "modeling_civility";
        case InterventionKind::rules_civility: return "rules_civility";
        case InterventionKind::informing_banned: return "informing_banned";
    }
    return "";
}

std::string_view intervention_display_name(InterventionKind kind) {
    switch (kind) {
        case InterventionKind::none: return "none";
        case InterventionKind::support: return "support";
        case InterventionKind::reset_insight: return "reset insight";
        case InterventionKind::health_advice: return "health advice";
        case InterventionKind::modeling_civility: return "modeling civility";
        case InterventionKind::rules_civility: return "rules civility";
        case InterventionKind::informing_banned: return "informing banned";
    }
    return "";
}

std::optional<InterventionKind> intervention_from_slug(std::string_view slug) {
    for (InterventionKind kind : kAllInterventions) {
        if (intervention_slug(kind) == slug) return kind;
    }
    return std::nullopt;
}

// Mediator texts are byte-exact constants. `modeling_civility` intentionally
// contains a U+2019 apostrophe (\xe2\x80\x99); `reset_insight` uses ASCII.
std::string_view intervention_text(InterventionKind kind) {
    switch (kind) {
        case InterventionKind::none:
            return "";
        case InterventionKind::support:
            return "I might not understand, but if you need someone to talk to "
                   "I will listen and help as much as I can.";
        case InterventionKind::reset_insight:
            return "Let's take a step back. How do these comments provide "
                   "additional insight about the topic?";
        case InterventionKind::health_advice:
            return "If you are concerned about a potentially serious medical "
                   "issue, please contact your local health-line, doctor, or go "
                   "to the nearest emergency room or urgent care.";
        case InterventionKind::modeling_civility:
            return "Discussion is most productive when the language is civil. "
                   "Let\xe2\x80\x99s keep it respectful. Thanks for your assistance.";
        case InterventionKind::rules_civility:
            return "Hey, I need to cut in. We need everyone to follow the rules "
                   "for this discussion for this space to work. Please review "
                   "the rules if you are unfamiliar and then follow them.";
        case InterventionKind::informing_banned:
            return "Note violations of community guidelines will lead to bans.";
    }
    return "";
}

std::string_view provider_slug(ProviderKind kind) {
    switch (kind) {
        case ProviderKind::openai_compatible: return "openai_compatible";
        case ProviderKind::anthropic_compatible: return "anthropic_compatible";
        case ProviderKind::scripted_mock: return "scripted_mock";
    }
    return "";
}

std::optional<ProviderKind> provider_from_slug(std::string_view slug) {
    if (slug == "openai_compatible") return ProviderKind::openai_compatible;
    if (slug == "anthropic_compatible") return ProviderKind::anthropic_compatible;
    if (slug == "scripted_mock") return ProviderKind::scripted_mock;
    return std::nullopt;
}

}  // namespace edsim
