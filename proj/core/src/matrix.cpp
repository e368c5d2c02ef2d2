#include "edsim/matrix.hpp"

#include "edsim/errors.hpp"
#include "edsim/hash.hpp"

namespace edsim {

std::string build_cell_key(PlatformId platform, std::string_view community_id,
                           InterventionKind intervention, std::string_view model_key) {
    std::string key;
    key.reserve(community_id.size() + model_key.size() + 32);
    key.append(platform_slug(platform));
    key.push_back('/');
    key.append(community_id);
    key.push_back('/');
    key.append(intervention_slug(intervention));
    key.push_back('/');
    key.append(model_key);
    return key;
}

CellCoords parse_cell_key(std::string_view cell_key) {
    auto fail = [&] {
        throw ValidationError("malformed cell key: " + std::string(cell_key));
    };

    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= cell_key.size(); ++i) {
        if (i == cell_key.size() || cell_key[i] == '/') {
            parts.push_back(cell_key.substr(start, i - start));
            start = i + 1;
        }
    }
    if (parts.size() != 4) fail();

    CellCoords coords;
    auto platform = platform_from_slug(parts[0]);
    if (!platform) fail();
    coords.platform = *platform;

    if (parts[1].empty()) fail();
    coords.community_id = std::string(parts[1]);

    auto intervention = intervention_from_slug(parts[2]);
    if (!intervention) fail();
    coords.intervention = *intervention;

    // version_tag never contains '@', so the last '@' is the separator.
    std::string_view model_key = parts[3];
    std::size_t at = model_key.rfind('@');
    if (at == std::string_view::npos || at == 0 || at + 1 == model_key.size()) fail();
    coords.model_id = std::string(model_key.substr(0, at));
    coords.version_tag = std::string(model_key.substr(at + 1));
    return coords;
}

std::vector<ExperimentCell> expand_matrix(const ExperimentConfig& config) {
    std::vector<ExperimentCell> cells;
    for (PlatformId platform : config.platforms) {
        for (const CommunityPrompt& prompt : config.prompts) {
            if (prompt.platform != platform) continue;
            for (InterventionKind intervention : config.interventions) {
                for (std::size_t m = 0; m < config.models.size(); ++m) {
                    ExperimentCell cell;
                    cell.platform = platform;
                    cell.community_id = prompt.community_id;
                    cell.intervention = intervention;
                    cell.model_index = m;
                    cell.model_key = config.models[m].key();
                    cell.cell_key = build_cell_key(platform, prompt.community_id,
                                                   intervention, cell.model_key);
                    cells.push_back(std::move(cell));
                }
            }
        }
    }
    return cells;
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::string_view cell_key,
                        int replicate_index) {
    std::string input = to_hex16(master_seed);
    input.push_back(':');
    input.append(cell_key);
    input.push_back(':');
    input.append(std::to_string(replicate_index));
    return mix64(fnv1a64(input));
}

}  // namespace edsim
