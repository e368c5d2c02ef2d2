#include "edsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "edsim/errors.hpp"

namespace edsim {

using nlohmann::json;

namespace {

json parse_json_text(std::string_view text, const std::string& what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw ParseError(what + ": not valid JSON");
    }
    return doc;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ParseError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
    const json* v = find(obj, key);
    if (!v) throw ParseError(where + ": missing key '" + std::string(key) + "'");
    if (!v->is_string()) throw ParseError(where + ": key '" + std::string(key) + "' must be a string");
    return v->get<std::string>();
}

std::string get_string_or(const json& obj, const char* key, const std::string& fallback,
                          const std::string& where) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_string()) throw ParseError(where + ": key '" + std::string(key) + "' must be a string");
    return v->get<std::string>();
}

long long get_int_or(const json& obj, const char* key, long long fallback,
                     const std::string& where) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
        throw ParseError(where + ": key '" + std::string(key) + "' must be an integer");
    }
    return v->get<long long>();
}

double get_double_or(const json& obj, const char* key, double fallback,
                     const std::string& where) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) {
        throw ParseError(where + ": key '" + std::string(key) + "' must be a number");
    }
    return v->get<double>();
}

bool is_slug(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-')) {
            return false;
        }
    }
    return true;
}

bool is_model_token(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-' || c == ':')) {
            return false;
        }
    }
    return true;
}

CommunityPrompt parse_prompt(const json& p, const std::string& where) {
    if (!p.is_object()) throw ParseError(where + ": prompt entries must be objects");
    require_keys(p,
                 {"platform", "community_id", "display_name", "topic_description",
                  "persona_a", "persona_b", "seed_utterances"},
                 where);

    CommunityPrompt prompt;
    std::string platform = get_string(p, "platform", where);
    auto pid = platform_from_slug(platform);
    if (!pid) throw ValidationError(where + ": unknown platform '" + platform + "'");
    prompt.platform = *pid;
    prompt.community_id = get_string(p, "community_id", where);
    prompt.display_name = get_string_or(p, "display_name", prompt.community_id, where);
    prompt.topic_description = get_string(p, "topic_description", where);
    prompt.persona_a = get_string_or(p, "persona_a", "Jane", where);
    prompt.persona_b = get_string_or(p, "persona_b", "John", where);

    const json* seeds = find(p, "seed_utterances");
    if (!seeds || !seeds->is_array()) {
        throw ParseError(where + ": missing or non-array key 'seed_utterances'");
    }
    for (const json& line : *seeds) {
        if (!line.is_array() || line.size() != 2 || !line[0].is_string() || !line[1].is_string()) {
            throw ParseError(where + ": seed_utterances entries must be [speaker, text] pairs");
        }
        prompt.seed_utterances.push_back({line[0].get<std::string>(), line[1].get<std::string>()});
    }
    return prompt;
}

json prompt_to_json(const CommunityPrompt& p) {
    json seeds = json::array();
    for (const SeedLine& line : p.seed_utterances) {
        seeds.push_back(json::array({line.speaker, line.text}));
    }
    return json{{"platform", std::string(platform_slug(p.platform))},
                {"community_id", p.community_id},
                {"display_name", p.display_name},
                {"topic_description", p.topic_description},
                {"persona_a", p.persona_a},
                {"persona_b", p.persona_b},
                {"seed_utterances", seeds}};
}

ModelSpec parse_model(const json& m, const std::string& where) {
    if (!m.is_object()) throw ParseError(where + ": model entries must be objects");
    require_keys(m,
                 {"provider", "model_id", "version_tag", "sampling", "base_url",
                  "api_key_env", "system_prompt", "request_timeout_ms", "mock",
                  "requests_per_minute", "max_concurrent"},
                 where);

    ModelSpec spec;
    std::string provider = get_string(m, "provider", where);
    auto kind = provider_from_slug(provider);
    if (!kind) throw ValidationError(where + ": unknown provider '" + provider + "'");
    spec.provider = *kind;
    spec.model_id = get_string(m, "model_id", where);
    spec.version_tag = get_string_or(m, "version_tag", spec.model_id, where);

    if (const json* sampling = find(m, "sampling")) {
        if (!sampling->is_object()) throw ParseError(where + ": 'sampling' must be an object");
        require_keys(*sampling, {"temperature", "top_p", "max_tokens_per_turn"},
                     where + ".sampling");
        spec.sampling.temperature =
            get_double_or(*sampling, "temperature", spec.sampling.temperature, where);
        spec.sampling.top_p = get_double_or(*sampling, "top_p", spec.sampling.top_p, where);
        spec.sampling.max_tokens_per_turn = static_cast<int>(get_int_or(
            *sampling, "max_tokens_per_turn", spec.sampling.max_tokens_per_turn, where));
    }

    spec.base_url = get_string_or(m, "base_url", "", where);
    spec.api_key_env = get_string_or(m, "api_key_env", "", where);
    spec.system_prompt = get_string_or(m, "system_prompt", "", where);
    spec.request_timeout_ms =
        static_cast<int>(get_int_or(m, "request_timeout_ms", spec.request_timeout_ms, where));

    if (const json* mock = find(m, "mock")) {
        if (!mock->is_object()) throw ParseError(where + ": 'mock' must be an object");
        require_keys(*mock, {"responses", "procedural"}, where + ".mock");
        if (const json* responses = find(*mock, "responses")) {
            if (!responses->is_array()) {
                throw ParseError(where + ": 'mock.responses' must be an array");
            }
            for (const json& r : *responses) {
                if (!r.is_string()) throw ParseError(where + ": mock responses must be strings");
                spec.mock.responses.push_back(r.get<std::string>());
            }
        }
        if (const json* procedural = find(*mock, "procedural")) {
            if (!procedural->is_boolean()) {
                throw ParseError(where + ": 'mock.procedural' must be a boolean");
            }
            spec.mock.procedural = procedural->get<bool>();
        }
    }

    spec.requests_per_minute =
        static_cast<int>(get_int_or(m, "requests_per_minute", 0, where));
    spec.max_concurrent = static_cast<int>(get_int_or(m, "max_concurrent", 4, where));
    return spec;
}

json model_to_json(const ModelSpec& m) {
    json mock{{"responses", m.mock.responses}, {"procedural", m.mock.procedural}};
    return json{{"provider", std::string(provider_slug(m.provider))},
                {"model_id", m.model_id},
                {"version_tag", m.version_tag},
                {"sampling",
                 {{"temperature", m.sampling.temperature},
                  {"top_p", m.sampling.top_p},
                  {"max_tokens_per_turn", m.sampling.max_tokens_per_turn}}},
                {"base_url", m.base_url},
                {"api_key_env", m.api_key_env},
                {"system_prompt", m.system_prompt},
                {"request_timeout_ms", m.request_timeout_ms},
                {"mock", mock},
                {"requests_per_minute", m.requests_per_minute},
                {"max_concurrent", m.max_concurrent}};
}

}  // namespace

void validate_prompt(const CommunityPrompt& prompt) {
    const std::string where = "prompt '" + prompt.community_id + "'";
    if (!is_slug(prompt.community_id)) {
        throw ValidationError(where + ": community_id must be a nonempty slug "
                                      "(lowercase letters, digits, '_', '-')");
    }
    if (prompt.topic_description.empty()) {
        throw ValidationError(where + ": topic_description must be nonempty");
    }
    if (prompt.persona_a.empty() || prompt.persona_b.empty()) {
        throw ValidationError(where + ": persona names must be nonempty");
    }
    if (prompt.seed_utterances.size() < 2) {
        throw ValidationError(where + ": at least 2 seed utterances required");
    }
    for (std::size_t i = 0; i < prompt.seed_utterances.size(); ++i) {
        const std::string& expected =
            (i % 2 == 0) ? prompt.persona_a : prompt.persona_b;
        const SeedLine& line = prompt.seed_utterances[i];
        if (line.speaker != expected) {
            throw ValidationError(where + ": seed utterances must alternate " +
                                  prompt.persona_a + "/" + prompt.persona_b +
                                  " starting with " + prompt.persona_a);
        }
        if (line.text.empty()) {
            throw ValidationError(where + ": seed utterance texts must be nonempty");
        }
    }
}

std::vector<CommunityPrompt> load_catalog_file(const std::filesystem::path& path) {
    json doc = parse_json_text(read_file(path), "catalog " + path.string());
    const std::string where = "catalog " + path.string();
    if (!doc.is_object()) throw ParseError(where + ": top level must be an object");
    require_keys(doc, {"platform", "catalog_version", "communities"}, where);

    std::string platform = get_string(doc, "platform", where);
    auto pid = platform_from_slug(platform);
    if (!pid) throw ValidationError(where + ": unknown platform '" + platform + "'");

    const json* communities = find(doc, "communities");
    if (!communities || !communities->is_array()) {
        throw ParseError(where + ": missing or non-array key 'communities'");
    }

    std::vector<CommunityPrompt> prompts;
    std::unordered_set<std::string> seen;
    for (const json& c : *communities) {
        CommunityPrompt prompt = parse_prompt(c, where);
        if (prompt.platform != *pid) {
            throw ValidationError(where + ": community '" + prompt.community_id +
                                  "' declares a different platform than the catalog");
        }
        validate_prompt(prompt);
        if (!seen.insert(prompt.community_id).second) {
            throw ValidationError(where + ": duplicate community_id '" +
                                  prompt.community_id + "'");
        }
        prompts.push_back(std::move(prompt));
    }
    if (prompts.size() != 7) {
        throw ValidationError(where + ": canonical catalogs carry exactly 7 communities, got " +
                              std::to_string(prompts.size()));
    }
    return prompts;
}

void validate_config(const ExperimentConfig& config) {
    if (config.platforms.empty()) throw ValidationError("config: 'platforms' must be nonempty");
    {
        std::set<PlatformId> seen;
        for (PlatformId p : config.platforms) {
            if (!seen.insert(p).second) {
                throw ValidationError("config: duplicate platform '" +
                                      std::string(platform_slug(p)) + "'");
            }
        }
    }

    if (config.prompts.empty()) throw ValidationError("config: no prompts configured");
    {
        std::set<std::pair<PlatformId, std::string>> seen;
        for (const CommunityPrompt& prompt : config.prompts) {
            validate_prompt(prompt);
            if (std::find(config.platforms.begin(), config.platforms.end(), prompt.platform) ==
                config.platforms.end()) {
                throw ValidationError("config: prompt '" + prompt.community_id +
                                      "' references platform '" +
                                      std::string(platform_slug(prompt.platform)) +
                                      "' which is not in 'platforms'");
            }
            if (!seen.insert({prompt.platform, prompt.community_id}).second) {
                throw ValidationError("config: duplicate community_id '" + prompt.community_id +
                                      "' on platform '" +
                                      std::string(platform_slug(prompt.platform)) + "'");
            }
        }
    }

    if (config.interventions.empty()) {
        throw ValidationError("config: 'interventions' must be nonempty");
    }
    {
        std::set<InterventionKind> seen;
        for (InterventionKind kind : config.interventions) {
            if (!seen.insert(kind).second) {
                throw ValidationError("config: duplicate intervention '" +
                                      std::string(intervention_slug(kind)) + "'");
            }
        }
        if (!seen.count(InterventionKind::none)) {
            throw ValidationError(
                "config: interventions must include 'none' (the unmediated baseline "
                "required for diff statistics)");
        }
    }

    if (config.models.empty()) throw ValidationError("config: 'models' must be nonempty");
    {
        std::set<std::string> keys;
        for (const ModelSpec& model : config.models) {
            const std::string where = "model '" + model.model_id + "'";
            if (!is_model_token(model.model_id)) {
                throw ValidationError(where + ": model_id must be nonempty and use "
                                              "[A-Za-z0-9._:-] only");
            }
            if (!is_model_token(model.version_tag) ||
                model.version_tag.find('@') != std::string::npos) {
                throw ValidationError(where + ": version_tag must be nonempty, use "
                                              "[A-Za-z0-9._:-], and contain no '@'");
            }
            if (model.sampling.temperature < 0) {
                throw ValidationError(where + ": sampling.temperature must be >= 0");
            }
            if (!(model.sampling.top_p > 0 && model.sampling.top_p <= 1.0)) {
                throw ValidationError(where + ": sampling.top_p must be in (0, 1]");
            }
            if (model.sampling.max_tokens_per_turn < 1) {
                throw ValidationError(where + ": sampling.max_tokens_per_turn must be >= 1");
            }
            if (model.provider != ProviderKind::scripted_mock && model.base_url.empty()) {
                throw ValidationError(where + ": http providers require 'base_url'");
            }
            if (model.requests_per_minute < 0 || model.max_concurrent < 1) {
                throw ValidationError(where + ": invalid rate ceilings");
            }
            if (!keys.insert(model.key()).second) {
                throw ValidationError("config: duplicate model key '" + model.key() + "'");
            }
        }
    }

    if (config.conversations_per_cell < 1) {
        throw ValidationError("config: conversations_per_cell must be >= 1");
    }
    if (config.turns_per_conversation < 1) {
        throw ValidationError("config: turns_per_conversation must be >= 1");
    }
    if (config.retry.max_attempts < 1) {
        throw ValidationError("config: retry.max_attempts must be >= 1");
    }
    if (config.retry.base_backoff_ms < 1 ||
        config.retry.max_backoff_ms < config.retry.base_backoff_ms) {
        throw ValidationError("config: retry backoff bounds require 1 <= base <= max");
    }
    if (config.parallelism < 0) throw ValidationError("config: parallelism must be >= 0");
}

ExperimentConfig parse_config(std::string_view json_text,
                              const std::filesystem::path& base_dir) {
    json doc = parse_json_text(json_text, "config");
    if (!doc.is_object()) throw ParseError("config: top level must be an object");
    require_keys(doc,
                 {"platforms", "prompts", "catalogs", "community_filter", "interventions",
                  "models", "conversations_per_cell", "turns_per_conversation",
                  "master_seed", "output_dir", "parallelism", "retry"},
                 "config");

    ExperimentConfig config;

    const json* platforms = find(doc, "platforms");
    if (!platforms || !platforms->is_array()) {
        throw ParseError("config: missing or non-array key 'platforms'");
    }
    for (const json& p : *platforms) {
        if (!p.is_string()) throw ParseError("config: 'platforms' entries must be strings");
        auto pid = platform_from_slug(p.get<std::string>());
        if (!pid) {
            throw ValidationError("config: unknown platform '" + p.get<std::string>() + "'");
        }
        config.platforms.push_back(*pid);
    }

    if (const json* catalogs = find(doc, "catalogs")) {
        if (!catalogs->is_array()) throw ParseError("config: 'catalogs' must be an array");
        for (const json& c : *catalogs) {
            if (!c.is_string()) throw ParseError("config: 'catalogs' entries must be strings");
            std::filesystem::path path(c.get<std::string>());
            if (path.is_relative()) path = base_dir / path;
            for (CommunityPrompt& prompt : load_catalog_file(path)) {
                config.prompts.push_back(std::move(prompt));
            }
        }
    }
    if (const json* prompts = find(doc, "prompts")) {
        if (!prompts->is_array()) throw ParseError("config: 'prompts' must be an array");
        for (const json& p : *prompts) {
            config.prompts.push_back(parse_prompt(p, "config.prompts"));
        }
    }
    if (const json* filter = find(doc, "community_filter")) {
        if (!filter->is_array()) throw ParseError("config: 'community_filter' must be an array");
        std::set<std::string> keep;
        for (const json& f : *filter) {
            if (!f.is_string()) {
                throw ParseError("config: 'community_filter' entries must be strings");
            }
            keep.insert(f.get<std::string>());
        }
        std::vector<CommunityPrompt> filtered;
        for (CommunityPrompt& prompt : config.prompts) {
            if (keep.count(prompt.community_id)) filtered.push_back(std::move(prompt));
        }
        config.prompts = std::move(filtered);
    }

    const json* interventions = find(doc, "interventions");
    if (!interventions || !interventions->is_array()) {
        throw ParseError("config: missing or non-array key 'interventions'");
    }
    for (const json& i : *interventions) {
        if (!i.is_string()) throw ParseError("config: 'interventions' entries must be strings");
        auto kind = intervention_from_slug(i.get<std::string>());
        if (!kind) {
            throw ValidationError("config: unknown intervention kind '" +
                                  i.get<std::string>() + "'");
        }
        config.interventions.push_back(*kind);
    }

    const json* models = find(doc, "models");
    if (!models || !models->is_array()) {
        throw ParseError("config: missing or non-array key 'models'");
    }
    for (const json& m : *models) {
        config.models.push_back(parse_model(m, "config.models"));
    }

    config.conversations_per_cell =
        static_cast<int>(get_int_or(doc, "conversations_per_cell", 100, "config"));
    config.turns_per_conversation =
        static_cast<int>(get_int_or(doc, "turns_per_conversation", 10, "config"));

    if (const json* seed = find(doc, "master_seed")) {
        if (!seed->is_number_unsigned() && !seed->is_number_integer()) {
            throw ParseError("config: 'master_seed' must be an unsigned integer");
        }
        config.master_seed = seed->get<std::uint64_t>();
    }

    config.output_dir = get_string_or(doc, "output_dir", "runs/out", "config");
    config.parallelism = static_cast<int>(get_int_or(doc, "parallelism", 0, "config"));

    if (const json* retry = find(doc, "retry")) {
        if (!retry->is_object()) throw ParseError("config: 'retry' must be an object");
        require_keys(*retry, {"max_attempts", "base_backoff_ms", "max_backoff_ms"},
                     "config.retry");
        config.retry.max_attempts = static_cast<int>(
            get_int_or(*retry, "max_attempts", config.retry.max_attempts, "config.retry"));
        config.retry.base_backoff_ms = static_cast<int>(get_int_or(
            *retry, "base_backoff_ms", config.retry.base_backoff_ms, "config.retry"));
        config.retry.max_backoff_ms = static_cast<int>(get_int_or(
            *retry, "max_backoff_ms", config.retry.max_backoff_ms, "config.retry"));
    }

    validate_config(config);
    return config;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    return parse_config(read_file(path), path.parent_path());
}

std::string config_to_canonical_json(const ExperimentConfig& config) {
    json platforms = json::array();
    for (PlatformId p : config.platforms) platforms.push_back(std::string(platform_slug(p)));
    json prompts = json::array();
    for (const CommunityPrompt& p : config.prompts) prompts.push_back(prompt_to_json(p));
    json interventions = json::array();
    for (InterventionKind k : config.interventions) {
        interventions.push_back(std::string(intervention_slug(k)));
    }
    json models = json::array();
    for (const ModelSpec& m : config.models) models.push_back(model_to_json(m));

    json doc{{"platforms", platforms},
             {"prompts", prompts},
             {"interventions", interventions},
             {"models", models},
             {"conversations_per_cell", config.conversations_per_cell},
             {"turns_per_conversation", config.turns_per_conversation},
             {"master_seed", config.master_seed},
             {"output_dir", config.output_dir.string()},
             {"parallelism", config.parallelism},
             {"retry",
              {{"max_attempts", config.retry.max_attempts},
               {"base_backoff_ms", config.retry.base_backoff_ms},
               {"max_backoff_ms", config.retry.max_backoff_ms}}}};
    return doc.dump(2);
}

ExperimentConfig config_from_canonical_json(std::string_view json_text) {
    json doc = parse_json_text(json_text, "config echo");
    const std::string where = "config echo";

    ExperimentConfig config;
    for (const json& p : doc.at("platforms")) {
        config.platforms.push_back(*platform_from_slug(p.get<std::string>()));
    }
    for (const json& p : doc.at("prompts")) {
        config.prompts.push_back(parse_prompt(p, where));
    }
    for (const json& i : doc.at("interventions")) {
        config.interventions.push_back(*intervention_from_slug(i.get<std::string>()));
    }
    for (const json& m : doc.at("models")) {
        config.models.push_back(parse_model(m, where));
    }
    config.conversations_per_cell = doc.at("conversations_per_cell").get<int>();
    config.turns_per_conversation = doc.at("turns_per_conversation").get<int>();
    config.master_seed = doc.at("master_seed").get<std::uint64_t>();
    config.output_dir = doc.at("output_dir").get<std::string>();
    config.parallelism = doc.at("parallelism").get<int>();
    config.retry.max_attempts = doc.at("retry").at("max_attempts").get<int>();
    config.retry.base_backoff_ms = doc.at("retry").at("base_backoff_ms").get<int>();
    config.retry.max_backoff_ms = doc.at("retry").at("max_backoff_ms").get<int>();
    validate_config(config);
    return config;
}

}  // namespace edsim
