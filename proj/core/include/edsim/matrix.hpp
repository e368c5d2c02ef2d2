#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edsim/types.hpp"

namespace edsim {

// "platform/community/intervention/model_id@version_tag"
std::string build_cell_key(PlatformId platform, std::string_view community_id,
                           InterventionKind intervention, std::string_view model_key);

struct CellCoords {
    PlatformId platform{};
    std::string community_id;
    InterventionKind intervention = InterventionKind::none;
    std::string model_id;
    std::string version_tag;

    std::string model_key() const { return model_id + "@" + version_tag; }
};

// Inverse of build_cell_key; throws ValidationError on malformed keys.
CellCoords parse_cell_key(std::string_view cell_key);

// Full cross product restricted to prompt.platform == cell.platform, in
// declared order: platform, then that platform's prompts, then interventions,
// then models. Pure function of the config.
std::vector<ExperimentCell> expand_matrix(const ExperimentConfig& config);

// Hierarchical seed derivation (master -> cell -> replicate):
//   mix64(fnv1a64("<hex16(master_seed)>:<cell_key>:<replicate_index>"))
// where mix64 is the SplitMix64 finalizer and fnv1a64 is 64-bit FNV-1a.
// Pure and platform-stable, so partial re-runs reproduce exactly.
std::uint64_t cell_seed(std::uint64_t master_seed, std::string_view cell_key,
                        int replicate_index);

}  // namespace edsim
