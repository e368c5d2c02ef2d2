#include <doctest.h>

#include <cinttypes>
#include <cstdio>
#include <set>

#include "edsim/config.hpp"
#include "edsim/errors.hpp"
#include "edsim/hash.hpp"
#include "edsim/matrix.hpp"
#include "edsim/types.hpp"
#include "helpers.hpp"

using namespace edsim;

namespace {

// Independent re-derivations of the documented seed formula, written from
// the constants rather than shared code.
std::uint64_t oracle_fnv(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : s) {
        h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    }
    return h;
}

std::uint64_t oracle_mix(std::uint64_t x) {
    x += 11400714819323198485ull;  // 0x9e3779b97f4a7c15
    x = (x ^ (x >> 30)) * 13787848793156543929ull;
    x = (x ^ (x >> 27)) * 10723151780598845931ull;
    return x ^ (x >> 31);
}

std::string oracle_hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::uint64_t oracle_cell_seed(std::uint64_t master, const std::string& key, int rep) {
    return oracle_mix(oracle_fnv(oracle_hex16(master) + ":" + key + ":" + std::to_string(rep)));
}

ExperimentConfig tiny_config(int platforms, int prompts_per_platform, int interventions,
                             int models) {
    ExperimentConfig config;
    const PlatformId ids[] = {PlatformId::twitter, PlatformId::reddit, PlatformId::ed_forum};
    for (int p = 0; p < platforms; ++p) {
        config.platforms.push_back(ids[p]);
        for (int c = 0; c < prompts_per_platform; ++c) {
            CommunityPrompt prompt;
            prompt.platform = ids[p];
            prompt.community_id = "c" + std::to_string(c);
            prompt.display_name = prompt.community_id;
            prompt.topic_description = "topic " + std::to_string(c);
            prompt.seed_utterances = {{"Jane", "a"}, {"John", "b"}};
            config.prompts.push_back(prompt);
        }
    }
    for (int i = 0; i < interventions; ++i) config.interventions.push_back(kAllInterventions[i]);
    for (int m = 0; m < models; ++m) {
        ModelSpec model;
        model.model_id = "m" + std::to_string(m);
        model.version_tag = "v1";
        config.models.push_back(model);
    }
    config.conversations_per_cell = 2;
    config.turns_per_conversation = 2;
    return config;
}

}  // namespace

TEST_CASE("canonical intervention texts are byte-exact") {
    CHECK(intervention_text(InterventionKind::none) == "");
    CHECK(intervention_text(InterventionKind::support) ==
          "I might not understand, but if you need someone to talk to I will listen and "
          "help as much as I can.");
    CHECK(intervention_text(InterventionKind::reset_insight) ==
          "Let's take a step back. How do these comments provide additional insight about "
          "the topic?");
    CHECK(intervention_text(InterventionKind::health_advice) ==
          "If you are concerned about a potentially serious medical issue, please contact "
          "your local health-line, doctor, or go to the nearest emergency room or urgent "
          "care.");
    CHECK(intervention_text(InterventionKind::modeling_civility) ==
          "Discussion is most productive when the language is civil. Let\xe2\x80\x99s keep "
          "it respectful. Thanks for your assistance.");
    CHECK(intervention_text(InterventionKind::rules_civility) ==
          "Hey, I need to cut in. We need everyone to follow the rules for this discussion "
          "for this space to work. Please review the rules if you are unfamiliar and then "
          "follow them.");
    CHECK(intervention_text(InterventionKind::informing_banned) ==
          "Note violations of community guidelines will lead to bans.");
}

TEST_CASE("intervention order runs least to most intensive") {
    REQUIRE(kAllInterventions.size() == 7);
    CHECK(kAllInterventions[0] == InterventionKind::none);
    CHECK(kAllInterventions[1] == InterventionKind::support);
    CHECK(kAllInterventions[2] == InterventionKind::reset_insight);
    CHECK(kAllInterventions[3] == InterventionKind::health_advice);
    CHECK(kAllInterventions[4] == InterventionKind::modeling_civility);
    CHECK(kAllInterventions[5] == InterventionKind::rules_civility);
    CHECK(kAllInterventions[6] == InterventionKind::informing_banned);
}

TEST_CASE("slugs round-trip for every enumeration") {
    for (InterventionKind kind : kAllInterventions) {
        CHECK(intervention_from_slug(intervention_slug(kind)) == kind);
    }
    for (PlatformId platform : kAllPlatforms) {
        CHECK(platform_from_slug(platform_slug(platform)) == platform);
    }
    CHECK(!intervention_from_slug("warnings").has_value());
    CHECK(!platform_from_slug("myspace").has_value());
    CHECK(platform_display_name(PlatformId::twitter) == "Twitter");
    CHECK(platform_display_name(PlatformId::reddit) == "Reddit");
    CHECK(platform_display_name(PlatformId::ed_forum) == "ED Forum");
}

TEST_CASE("cell keys join and parse") {
    const std::string key = build_cell_key(PlatformId::twitter, "keto_recipes",
                                           InterventionKind::support,
                                           "gpt-3.5-turbo-0125@0125");
    CHECK(key == "twitter/keto_recipes/support/gpt-3.5-turbo-0125@0125");

    CellCoords coords = parse_cell_key(key);
    CHECK(coords.platform == PlatformId::twitter);
    CHECK(coords.community_id == "keto_recipes");
    CHECK(coords.intervention == InterventionKind::support);
    CHECK(coords.model_id == "gpt-3.5-turbo-0125");
    CHECK(coords.version_tag == "0125");
    CHECK(coords.model_key() == "gpt-3.5-turbo-0125@0125");

    CHECK_THROWS_AS(parse_cell_key("twitter/c/support"), ValidationError);
    CHECK_THROWS_AS(parse_cell_key("mars/c/support/m@v"), ValidationError);
    CHECK_THROWS_AS(parse_cell_key("twitter/c/shush/m@v"), ValidationError);
    CHECK_THROWS_AS(parse_cell_key("twitter/c/support/no_version"), ValidationError);
    CHECK_THROWS_AS(parse_cell_key(""), ValidationError);
}

TEST_CASE("every expanded cell key round-trips") {
    ExperimentConfig config = tiny_config(3, 2, 4, 2);
    for (const ExperimentCell& cell : expand_matrix(config)) {
        CellCoords coords = parse_cell_key(cell.cell_key);
        CHECK(coords.platform == cell.platform);
        CHECK(coords.community_id == cell.community_id);
        CHECK(coords.intervention == cell.intervention);
        CHECK(coords.model_key() == cell.model_key);
    }
}

TEST_CASE("hash primitives match known vectors") {
    // Published FNV-1a 64 test vectors.
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(to_hex16(0) == "0000000000000000");
    CHECK(to_hex16(0xdeadbeefull) == "00000000deadbeef");
    CHECK(to_hex16(~0ull) == "ffffffffffffffff");
}

TEST_CASE("cell_seed is pure and matches the documented derivation") {
    const std::string key = "twitter/keto_recipes/support/m@v1";
    CHECK(cell_seed(7, key, 0) == cell_seed(7, key, 0));
    CHECK(cell_seed(7, key, 0) != cell_seed(7, key, 1));
    CHECK(cell_seed(7, key, 0) != cell_seed(8, key, 0));
    CHECK(cell_seed(7, key, 0) != cell_seed(7, "twitter/keto_recipes/none/m@v1", 0));

    for (std::uint64_t master : {0ull, 1ull, 7041776ull, ~0ull}) {
        for (int rep : {0, 1, 99}) {
            CHECK(cell_seed(master, key, rep) == oracle_cell_seed(master, key, rep));
        }
    }
}

TEST_CASE("replicate seeds rarely collide") {
    std::set<std::uint64_t> seeds;
    ExperimentConfig config = tiny_config(3, 2, 4, 2);
    for (const ExperimentCell& cell : expand_matrix(config)) {
        for (int rep = 0; rep < 50; ++rep) {
            seeds.insert(cell_seed(123, cell.cell_key, rep));
        }
    }
    CHECK(seeds.size() == 3u * 2 * 4 * 2 * 50);
}

TEST_CASE("matrix expansion covers the declared cross product in order") {
    ExperimentConfig config = tiny_config(2, 2, 3, 2);
    std::vector<ExperimentCell> cells = expand_matrix(config);
    REQUIRE(cells.size() == 24);

    // Brute-force enumeration oracle in declared order.
    std::vector<std::string> expected;
    for (PlatformId platform : config.platforms) {
        for (const CommunityPrompt& prompt : config.prompts) {
            if (prompt.platform != platform) continue;
            for (InterventionKind kind : config.interventions) {
                for (const ModelSpec& model : config.models) {
                    expected.push_back(build_cell_key(platform, prompt.community_id, kind,
                                                      model.key()));
                }
            }
        }
    }
    REQUIRE(expected.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].cell_key == expected[i]);

    std::vector<ExperimentCell> again = expand_matrix(config);
    REQUIRE(again.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(again[i].cell_key == cells[i].cell_key);
    }
}

TEST_CASE("one cell in |interventions| is the unmediated baseline") {
    ExperimentConfig config = tiny_config(2, 3, 4, 2);
    std::vector<ExperimentCell> cells = expand_matrix(config);
    std::size_t baselines = 0;
    for (const ExperimentCell& cell : cells) {
        baselines += cell.intervention == InterventionKind::none ? 1 : 0;
    }
    CHECK(baselines == cells.size() / config.interventions.size());
}

TEST_CASE("full-scale config expands to the planned matrix") {
    ExperimentConfig config =
        load_config_file(edsim::test::source_dir() / "configs" / "full.json");
    std::vector<ExperimentCell> cells = expand_matrix(config);
    CHECK(cells.size() == 1029);
    CHECK(config.conversations_per_cell == 100);
    CHECK(cells.size() * config.conversations_per_cell == 102900);
    CHECK(config.turns_per_conversation == 10);
}

TEST_CASE("defaults apply when counts are omitted") {
    const std::string doc = R"({
      "platforms": ["twitter"],
      "prompts": [{
        "platform": "twitter", "community_id": "c1", "topic_description": "t",
        "seed_utterances": [["Jane", "a"], ["John", "b"]]
      }],
      "interventions": ["none", "support"],
      "models": [{"provider": "scripted_mock", "model_id": "m"}]
    })";
    ExperimentConfig config = parse_config(doc, ".");
    CHECK(config.conversations_per_cell == 100);
    CHECK(config.turns_per_conversation == 10);
    CHECK(config.prompts.at(0).persona_a == "Jane");
    CHECK(config.prompts.at(0).persona_b == "John");
    CHECK(config.models.at(0).version_tag == "m");  // defaults to model_id
    CHECK(config.models.at(0).sampling.temperature == doctest::Approx(0.7));
    CHECK(config.models.at(0).sampling.top_p == doctest::Approx(1.0));
    CHECK(config.models.at(0).sampling.max_tokens_per_turn == 128);
    CHECK(config.models.at(0).request_timeout_ms == 60000);
}

TEST_CASE("config validation rejects semantic violations") {
    const std::string base = R"({
      "platforms": ["twitter"],
      "prompts": [
        {"platform": "twitter", "community_id": "c1", "topic_description": "t",
         "seed_utterances": [["Jane", "a"], ["John", "b"]]}PROMPTS
      ],
      "interventions": [INTERVENTIONS],
      "models": [{"provider": "scripted_mock", "model_id": "m"}]
    })";
    auto render = [&](const std::string& prompts, const std::string& interventions) {
        std::string doc = base;
        doc.replace(doc.find("PROMPTS"), 7, prompts);
        doc.replace(doc.find("INTERVENTIONS"), 13, interventions);
        return doc;
    };

    CHECK_NOTHROW(parse_config(render("", "\"none\", \"support\""), "."));
    // baseline `none` is mandatory
    CHECK_THROWS_AS(parse_config(render("", "\"support\""), "."), ValidationError);
    // duplicate community on one platform
    CHECK_THROWS_AS(parse_config(render(
        ",{\"platform\": \"twitter\", \"community_id\": \"c1\", \"topic_description\": \"t\","
        " \"seed_utterances\": [[\"Jane\", \"a\"], [\"John\", \"b\"]]}",
        "\"none\""), "."), ValidationError);
    // unknown intervention kind
    CHECK_THROWS_AS(parse_config(render("", "\"none\", \"warnings\""), "."),
                    ValidationError);
}

TEST_CASE("structural problems are parse errors") {
    CHECK_THROWS_AS(parse_config("{not json", "."), ParseError);
    CHECK_THROWS_AS(parse_config("[]", "."), ParseError);
    CHECK_THROWS_AS(parse_config(R"({"platformz": []})", "."), ParseError);
    const std::string missing_models = R"({
      "platforms": ["twitter"],
      "prompts": [{"platform": "twitter", "community_id": "c", "topic_description": "t",
                   "seed_utterances": [["Jane", "a"], ["John", "b"]]}],
      "interventions": ["none"]
    })";
    CHECK_THROWS_AS(parse_config(missing_models, "."), ParseError);
}

TEST_CASE("seed exchanges must alternate persona_a first") {
    CommunityPrompt prompt;
    prompt.platform = PlatformId::twitter;
    prompt.community_id = "c";
    prompt.topic_description = "t";
    prompt.seed_utterances = {{"John", "a"}, {"Jane", "b"}};
    CHECK_THROWS_AS(validate_prompt(prompt), ValidationError);

    prompt.seed_utterances = {{"Jane", "a"}};
    CHECK_THROWS_AS(validate_prompt(prompt), ValidationError);

    prompt.seed_utterances = {{"Jane", "a"}, {"John", "b"}, {"Jane", "c"}};
    CHECK_NOTHROW(validate_prompt(prompt));
}

TEST_CASE("shipped catalogs carry seven communities per platform") {
    const auto dir = edsim::test::source_dir() / "data" / "catalogs";
    for (const char* name : {"twitter.json", "reddit.json", "ed_forum.json"}) {
        std::vector<CommunityPrompt> prompts = load_catalog_file(dir / name);
        REQUIRE(prompts.size() == 7);
        std::set<std::string> ids;
        for (const CommunityPrompt& prompt : prompts) {
            CHECK_NOTHROW(validate_prompt(prompt));
            ids.insert(prompt.community_id);
        }
        CHECK(ids.size() == 7);
    }
}

TEST_CASE("canonical config echo round-trips byte-for-byte") {
    ExperimentConfig config =
        load_config_file(edsim::test::source_dir() / "configs" / "smoke.json");
    const std::string echo = config_to_canonical_json(config);
    ExperimentConfig reparsed = config_from_canonical_json(echo);
    CHECK(config_to_canonical_json(reparsed) == echo);
    CHECK(reparsed.master_seed == config.master_seed);
    CHECK(reparsed.prompts.size() == config.prompts.size());
}
