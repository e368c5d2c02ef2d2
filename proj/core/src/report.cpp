#include "edsim/report.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "edsim/config.hpp"
#include "edsim/errors.hpp"
#include "edsim/manifest.hpp"
#include "edsim/matrix.hpp"
#include "edsim/score_store.hpp"
#include "edsim/stats.hpp"
#include "edsim/svg.hpp"

namespace edsim {

namespace fs = std::filesystem;

std::string_view report_cut_slug(ReportCut cut) {
    switch (cut) {
        case ReportCut::cross_model: return "cross_model";
        case ReportCut::cross_platform: return "cross_platform";
        case ReportCut::cross_community: return "cross_community";
    }
    return "";
}

std::optional<ReportCut> report_cut_from_slug(std::string_view slug) {
    for (ReportCut cut : {ReportCut::cross_model, ReportCut::cross_platform,
                          ReportCut::cross_community}) {
        if (report_cut_slug(cut) == slug) return cut;
    }
    return std::nullopt;
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string filename_slug(const std::string& label) {
    std::string out;
    out.reserve(label.size());
    for (char c : label) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
        out.push_back(keep ? c : '_');
    }
    return out;
}

// One comparison unit: a (platform, community, model) triple plus its label
// in the cut's table.
struct GroupSpec {
    std::string label;
    PlatformId platform{};
    std::string community_id;
    std::string model_key;
};

const CommunityPrompt* find_prompt(const ExperimentConfig& config, PlatformId platform,
                                   const std::string& community_id) {
    for (const CommunityPrompt& prompt : config.prompts) {
        if (prompt.platform == platform && prompt.community_id == community_id) {
            return &prompt;
        }
    }
    return nullptr;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

ReportBundle build_report(const fs::path& run_dir, ReportCut cut,
                          const ReportFilters& filters, const std::string& scorer_id) {
    const fs::path run_json = run_dir / "run.json";
    if (!fs::exists(run_json)) {
        throw IoError("not a run directory (missing run.json): " + run_dir.string());
    }
    const ExperimentConfig config = config_from_canonical_json(read_text_file(run_json));
    const std::vector<ConversationScore> store =
        read_score_store(score_store_path(run_dir, scorer_id));

    std::map<std::string, std::vector<ConversationScore>> by_cell;
    for (const ConversationScore& score : store) {
        by_cell[score.cell_key].push_back(score);
    }

    // Resolve pins; every unset pin falls back to the first declared value.
    if (config.platforms.empty() || config.prompts.empty() || config.models.empty()) {
        throw ReportError("run configuration declares no platforms, prompts, or models");
    }
    const PlatformId pinned_platform = filters.platform.value_or(config.platforms.front());
    std::string pinned_community;
    if (filters.community_id) {
        pinned_community = *filters.community_id;
    } else {
        const CommunityPrompt* first = nullptr;
        for (const CommunityPrompt& prompt : config.prompts) {
            if (prompt.platform == pinned_platform) {
                first = &prompt;
                break;
            }
        }
        if (first == nullptr) {
            throw ReportError(std::string("no communities declared for platform ") +
                              std::string(platform_slug(pinned_platform)));
        }
        pinned_community = first->community_id;
    }
    const std::string pinned_model =
        filters.model_key ? *filters.model_key : config.models.front().key();

    std::vector<GroupSpec> groups;
    switch (cut) {
        case ReportCut::cross_model:
            if (find_prompt(config, pinned_platform, pinned_community) == nullptr) {
                throw ReportError("unknown community '" + pinned_community +
                                  "' for platform " +
                                  std::string(platform_slug(pinned_platform)));
            }
            for (const ModelSpec& model : config.models) {
                groups.push_back(GroupSpec{model.key(), pinned_platform,
                                           pinned_community, model.key()});
            }
            break;
        case ReportCut::cross_platform:
            for (PlatformId platform : config.platforms) {
                for (const CommunityPrompt& prompt : config.prompts) {
                    if (prompt.platform != platform) continue;
                    groups.push_back(GroupSpec{
                        std::string(platform_display_name(platform)) + ", " +
                            prompt.display_name,
                        platform, prompt.community_id, pinned_model});
                }
            }
            break;
        case ReportCut::cross_community:
            for (const CommunityPrompt& prompt : config.prompts) {
                if (prompt.platform != pinned_platform) continue;
                groups.push_back(GroupSpec{prompt.display_name, pinned_platform,
                                           prompt.community_id, pinned_model});
            }
            break;
    }
    if (groups.empty()) throw ReportError("report cut selects no groups");

    const fs::path out_dir = run_dir / "reports" / std::string(report_cut_slug(cut));
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create report directory: " + out_dir.string());

    ReportBundle bundle;
    bundle.directory = out_dir;

    std::string report_csv =
        "group,med_s_none,mean_diff,max_diff,max_intervention,min_diff,min_intervention\n";
    std::string cells_csv =
        "group,intervention,cell_key,n,median,q1,q3,whisker_low,whisker_high,outliers\n";
    std::string table =
        "| group | Med(s_none) | mean diff | max diff | min diff |\n"
        "| --- | --- | --- | --- | --- |\n";

    for (const GroupSpec& group : groups) {
        std::optional<CellSummary> baseline;
        std::vector<CellSummary> mediated;
        std::vector<BoxGlyph> glyphs;

        for (InterventionKind kind : config.interventions) {
            const std::string cell_key = build_cell_key(group.platform,
                                                        group.community_id, kind,
                                                        group.model_key);
            auto it = by_cell.find(cell_key);
            if (it == by_cell.end() || it->second.empty()) {
                throw ReportError("no scores for cell " + cell_key);
            }
            CellSummary summary = cell_summary(it->second);
            bundle.conversations_scored += summary.n;

            std::string outliers;
            for (double outlier : summary.outliers) {
                if (!outliers.empty()) outliers += ';';
                outliers += format_number(outlier);
            }
            cells_csv += csv_escape(group.label) + ',' +
                         std::string(intervention_display_name(kind)) + ',' +
                         csv_escape(cell_key) + ',' + std::to_string(summary.n) + ',' +
                         format_number(summary.median) + ',' +
                         format_number(summary.q1) + ',' + format_number(summary.q3) +
                         ',' + format_number(summary.whisker_low) + ',' +
                         format_number(summary.whisker_high) + ',' + outliers + '\n';

            glyphs.push_back(BoxGlyph{std::string(intervention_display_name(kind)),
                                      summary,
                                      std::string(intervention_color(kind))});
            if (kind == InterventionKind::none) {
                baseline = std::move(summary);
            } else {
                mediated.push_back(std::move(summary));
            }
        }
        if (!baseline) {
            throw ReportError("no scores for cell " +
                              build_cell_key(group.platform, group.community_id,
                                             InterventionKind::none, group.model_key));
        }

        std::vector<InterventionEffect> effects;
        effects.reserve(mediated.size());
        for (const CellSummary& summary : mediated) {
            effects.push_back(intervention_effect(summary, *baseline));
        }
        const EffectSummary summary = effect_summary(effects, *baseline);

        const std::string max_label(intervention_display_name(summary.max_intervention));
        const std::string min_label(intervention_display_name(summary.min_intervention));
        report_csv += csv_escape(group.label) + ',' + format_number(summary.med_s_none) +
                      ',' + format_number(summary.mean_diff) + ',' +
                      format_number(summary.max_diff) + ',' + max_label + ',' +
                      format_number(summary.min_diff) + ',' + min_label + '\n';
        table += "| " + group.label + " | " + format_number(summary.med_s_none) +
                 " | " + format_number(summary.mean_diff) + " | " +
                 format_number(summary.max_diff) + " (" + max_label + ") | " +
                 format_number(summary.min_diff) + " (" + min_label + ") |\n";

        atomic_write_file(out_dir / ("boxplot_" + filename_slug(group.label) + ".svg"),
                          render_box_plot(group.label, glyphs));
        ++bundle.group_count;
    }

    // Failed replicates never reach the score store; count them for the
    // summary so exclusions are visible.
    const fs::path manifest_path = run_dir / "manifest.json";
    if (fs::exists(manifest_path)) {
        const Manifest manifest = Manifest::load(manifest_path);
        for (const auto& [key, entry] : manifest.entries()) {
            if (entry.status == ReplicateStatus::failed) ++bundle.conversations_excluded;
        }
    }

    std::string summary_md;
    summary_md += "# Intervention effects: ";
    summary_md += report_cut_slug(cut);
    summary_md += "\n\n";
    summary_md += "- scorer: " + scorer_id + "\n";
    switch (cut) {
        case ReportCut::cross_model:
            summary_md += "- platform: " +
                          std::string(platform_display_name(pinned_platform)) +
                          "\n- community: " + pinned_community + "\n";
            break;
        case ReportCut::cross_platform:
            summary_md += "- model: " + pinned_model + "\n";
            break;
        case ReportCut::cross_community:
            summary_md += "- platform: " +
                          std::string(platform_display_name(pinned_platform)) +
                          "\n- model: " + pinned_model + "\n";
            break;
    }
    summary_md += "- conversations scored: " +
                  std::to_string(bundle.conversations_scored) + "\n";
    summary_md += "- failed conversations excluded: " +
                  std::to_string(bundle.conversations_excluded) + "\n\n";
    summary_md += table;

    atomic_write_file(out_dir / "report.csv", report_csv);
    atomic_write_file(out_dir / "cells.csv", cells_csv);
    atomic_write_file(out_dir / "summary.md", summary_md);

    bundle.table_text = table;
    return bundle;
}

}  // namespace edsim
