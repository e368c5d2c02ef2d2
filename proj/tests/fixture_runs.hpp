#pragma once

// Builders for the three canned score-store runs under tests/fixtures/.
// Each writes a minimal run directory (run.json + scores/lexicon.jsonl)
// whose report output is known in advance.

#include <filesystem>
#include <string>
#include <vector>

#include "edsim/config.hpp"
#include "edsim/manifest.hpp"
#include "edsim/types.hpp"
#include "helpers.hpp"

namespace edsim::test {

inline ModelSpec fixture_model(const std::string& id) {
    ModelSpec model;
    model.provider = ProviderKind::scripted_mock;
    model.model_id = id;
    model.version_tag = "v1";
    model.mock.procedural = true;
    return model;
}

inline std::vector<CommunityPrompt> catalog_subset(const std::string& catalog,
                                                   const std::vector<std::string>& ids) {
    const auto all =
        load_catalog_file(source_dir() / "data" / "catalogs" / (catalog + ".json"));
    std::vector<CommunityPrompt> subset;
    for (const std::string& id : ids) {
        for (const CommunityPrompt& prompt : all) {
            if (prompt.community_id == id) subset.push_back(prompt);
        }
    }
    return subset;
}

// which = 1: one twitter community, four models (model comparison).
// which = 2: three platforms x two communities, one model (platform comparison).
// which = 3: all seven twitter communities, one model (community comparison).
inline ExperimentConfig make_fixture_run(int which, const std::filesystem::path& run_dir) {
    ExperimentConfig config;
    config.interventions.assign(kAllInterventions.begin(), kAllInterventions.end());
    config.conversations_per_cell = 5;
    config.turns_per_conversation = 10;
    config.master_seed = 1;
    config.output_dir = run_dir;
    config.parallelism = 1;

    switch (which) {
        case 1:
            config.platforms = {PlatformId::twitter};
            config.prompts = catalog_subset("twitter", {"keto_recipes"});
            config.models = {fixture_model("Mistral"), fixture_model("LLaMA3"),
                             fixture_model("Claude-3-Haiku"),
                             fixture_model("GPT3.5-turbo")};
            break;
        case 2: {
            config.platforms = {PlatformId::twitter, PlatformId::reddit,
                                PlatformId::ed_forum};
            config.prompts = catalog_subset("twitter", {"keto_recipes", "ed_twitter"});
            for (const CommunityPrompt& prompt :
                 catalog_subset("reddit", {"comments", "eat_x_cal"})) {
                config.prompts.push_back(prompt);
            }
            for (const CommunityPrompt& prompt :
                 catalog_subset("ed_forum", {"ed_exp", "transition"})) {
                config.prompts.push_back(prompt);
            }
            config.models = {fixture_model("Mistral")};
            break;
        }
        case 3:
            config.platforms = {PlatformId::twitter};
            config.prompts = catalog_subset(
                "twitter", {"keto_recipes", "ed_twitter", "keto_transition", "losing_x_kg",
                            "losing_x_lb", "ed_related", "weighing_x_lb"});
            config.models = {fixture_model("Mistral")};
            break;
    }

    std::filesystem::create_directories(run_dir / "scores");
    atomic_write_file(run_dir / "run.json", config_to_canonical_json(config) + "\n");
    const auto scores = source_dir() / "tests" / "fixtures" /
                        ("table" + std::to_string(which) + "_scores.jsonl");
    std::filesystem::copy_file(scores, run_dir / "scores" / "lexicon.jsonl",
                               std::filesystem::copy_options::overwrite_existing);
    return config;
}

// One expected row of report.csv for a fixture run.
struct ExpectedEffectRow {
    std::string group;
    double med_s_none;
    double mean_diff;
    double max_diff;
    std::string max_intervention;
    double min_diff;
    std::string min_intervention;
};

inline const std::vector<ExpectedEffectRow>& expected_rows(int which) {
    static const std::vector<ExpectedEffectRow> table1 = {
        {"Mistral@v1", 0.613, 0.093, 0.173, "support", -0.054, "reset insight"},
        {"LLaMA3@v1", -0.399, 0.111, 0.271, "modeling civility", 0.052,
         "informing banned"},
        {"Claude-3-Haiku@v1", 0.999, -0.067, 0.000, "modeling civility", -0.382,
         "reset insight"},
        {"GPT3.5-turbo@v1", 0.437, 0.014, 0.137, "modeling civility", -0.092,
         "reset insight"},
    };
    static const std::vector<ExpectedEffectRow> table2 = {
        {"Twitter, keto recipes", 0.613, 0.093, 0.173, "support", -0.054,
         "reset insight"},
        {"Twitter, EDTwitter", 0.613, 0.121, 0.164, "modeling civility", -0.022,
         "health advice"},
        {"Reddit, comments", 0.510, 0.141, 0.281, "modeling civility", -0.069,
         "support"},
        {"Reddit, eat X cal", 0.608, -0.109, 0.049, "support", -0.485,
         "reset insight"},
        {"ED Forum, ED exp", 0.803, -0.0615, -0.031, "reset insight", -0.092,
         "health advice"},
        {"ED Forum, transition", 0.434, 0.151, 0.320, "informing banned", 0.073,
         "reset insight"},
    };
    static const std::vector<ExpectedEffectRow> table3 = {
        {"keto recipes", 0.613, 0.093, 0.173, "support", -0.054, "reset insight"},
        {"EDTwitter", 0.613, 0.121, 0.164, "modeling civility", -0.022, "health advice"},
        {"Keto transition", 0.400, 0.182, 0.350, "support", -0.078, "reset insight"},
        {"Losing X kg", 0.623, 0.053, 0.170, "modeling civility", -0.291,
         "reset insight"},
        {"Losing X lb", 0.628, 0.048, 0.164, "rules civility", -0.299, "reset insight"},
        {"ED-related", 0.598, 0.037, 0.178, "modeling civility", -0.228,
         "reset insight"},
        {"Weighing X lb", 0.611, -0.050, 0.137, "modeling civility", -0.292,
         "reset insight"},
    };
    switch (which) {
        case 1: return table1;
        case 2: return table2;
        default: return table3;
    }
}

// Splits one CSV line, honoring double-quoted fields.
inline std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace edsim::test
