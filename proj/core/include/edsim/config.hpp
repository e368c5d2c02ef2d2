#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edsim/types.hpp"

namespace edsim {

// Parses one JSON config document. `base_dir` anchors relative catalog paths.
// Defaults applied when keys are omitted: conversations_per_cell=100,
// turns_per_conversation=10. Throws ParseError for structural problems and
// ValidationError for semantic ones (see validate_config).
ExperimentConfig parse_config(std::string_view json_text,
                              const std::filesystem::path& base_dir);

// Reads and parses a config file; relative catalog paths resolve against the
// file's directory.
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Loads one platform catalog data file (the canonical seven communities for
// a platform). Enforces the catalog invariants: exactly 7 communities,
// unique ids, well-formed seed exchanges.
std::vector<CommunityPrompt> load_catalog_file(const std::filesystem::path& path);

// Semantic checks on an assembled config: baseline `none` present, prompt
// platforms covered, unique ids and model keys, sampling ranges, positive
// counts. Throws ValidationError naming the violation.
void validate_config(const ExperimentConfig& config);

void validate_prompt(const CommunityPrompt& prompt);

// Canonical JSON echo of a config (sorted keys, stable formatting). Written
// into run.json so later stages can rebuild the matrix without the original
// file, and compared on resume to refuse mismatched configs.
std::string config_to_canonical_json(const ExperimentConfig& config);
ExperimentConfig config_from_canonical_json(std::string_view json_text);

}  // namespace edsim
