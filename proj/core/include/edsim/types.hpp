#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edsim {

// ---------------------------------------------------------------------------
// Platforms

enum class PlatformId { twitter, reddit, ed_forum };

constexpr std::array<PlatformId, 3> kAllPlatforms{
    PlatformId::twitter, PlatformId::reddit, PlatformId::ed_forum};

std::string_view platform_slug(PlatformId id);
std::string_view platform_display_name(PlatformId id);
std::optional<PlatformId> platform_from_slug(std::string_view slug);

// ---------------------------------------------------------------------------
// Community prompts

struct SeedLine {
    std::string speaker;
    std::string text;
};

// One discussion cluster on one platform: the topic framing, the two
// personas, and the scripted opening exchange.
struct CommunityPrompt {
    PlatformId platform{};
    std::string community_id;
    std::string display_name;  // short table label; defaults to community_id
    std::string topic_description;
    std::string persona_a = "Jane";
    std::string persona_b = "John";
    std::vector<SeedLine> seed_utterances;  // alternates a, b, a, ... length >= 2
};

// ---------------------------------------------------------------------------
// Intervention strategies
//
// Declaration order is the canonical least-to-most-intensive order and is
// the default ordering everywhere (reports, tie-breaks).

enum class InterventionKind {
    none,
    support,
    reset_insight,
    health_advice,
    modeling_civility,
    rules_civility,
    informing_banned,
};

constexpr std::array<InterventionKind, 7> kAllInterventions{
    InterventionKind::none,
    InterventionKind::support,
    InterventionKind::reset_insight,
    InterventionKind::health_advice,
    InterventionKind::modeling_civility,
    InterventionKind::rules_civility,
    InterventionKind::informing_banned,
};

std::string_view intervention_slug(InterventionKind kind);
std::string_view intervention_display_name(InterventionKind kind);
std::optional<InterventionKind> intervention_from_slug(std::string_view slug);

// Canonical mediator utterance for the strategy; empty for `none`.
// These strings are fixed verbatim and guarded by golden tests.
std::string_view intervention_text(InterventionKind kind);

// ---------------------------------------------------------------------------
// Models and backends

enum class ProviderKind { openai_compatible, anthropic_compatible, scripted_mock };

std::string_view provider_slug(ProviderKind kind);
std::optional<ProviderKind> provider_from_slug(std::string_view slug);

struct SamplingParams {
    double temperature = 0.7;
    double top_p = 1.0;
    int max_tokens_per_turn = 128;
};

// Scripted-mock behaviour. `responses` entries are consumed one per request
// (cycling); entries of the form "!fail:<class>[:<retry_after_ms>]" produce
// a backend error instead of text. With `procedural` set, replies come from
// a deterministic word-bank generator keyed by (request seed, transcript).
struct MockScript {
    std::vector<std::string> responses;
    bool procedural = false;
};

struct ModelSpec {
    ProviderKind provider = ProviderKind::scripted_mock;
    std::string model_id;
    std::string version_tag;  // defaults to model_id when provider has no versions
    SamplingParams sampling;

    std::string base_url;      // http providers
    std::string api_key_env;   // name of the credential env var, never the secret
    std::string system_prompt; // optional system message; empty = none
    int request_timeout_ms = 60000;

    MockScript mock;  // scripted_mock only

    // Per-backend ceilings; rpm 0 = unlimited.
    int requests_per_minute = 0;
    int max_concurrent = 4;

    // "model_id@version_tag", the model coordinate inside cell keys.
    std::string key() const { return model_id + "@" + version_tag; }
};

// ---------------------------------------------------------------------------
// Experiment configuration

struct RetryPolicy {
    int max_attempts = 3;
    int base_backoff_ms = 500;
    int max_backoff_ms = 8000;
};

struct ExperimentConfig {
    std::vector<PlatformId> platforms;
    std::vector<CommunityPrompt> prompts;
    std::vector<InterventionKind> interventions;
    std::vector<ModelSpec> models;
    int conversations_per_cell = 100;
    int turns_per_conversation = 10;
    std::uint64_t master_seed = 0;
    std::filesystem::path output_dir;
    int parallelism = 0;  // 0 = backends * 4
    RetryPolicy retry;
};

// One (platform, community, intervention, model) point of the expanded matrix.
struct ExperimentCell {
    PlatformId platform{};
    std::string community_id;
    InterventionKind intervention = InterventionKind::none;
    std::size_t model_index = 0;  // into ExperimentConfig::models
    std::string model_key;
    std::string cell_key;
};

}  // namespace edsim
