#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "edsim/types.hpp"

namespace edsim {

// The three analysis cuts: compare models (platform+community pinned),
// compare platform/community pairs (model pinned), or compare one platform's
// communities (platform+model pinned).
enum class ReportCut { cross_model, cross_platform, cross_community };

std::string_view report_cut_slug(ReportCut cut);
std::optional<ReportCut> report_cut_from_slug(std::string_view slug);

// Pins for the controlled variables; unset pins default to the first
// declared value in the run configuration.
struct ReportFilters {
    std::optional<PlatformId> platform;
    std::optional<std::string> community_id;
    std::optional<std::string> model_key;
};

struct ReportBundle {
    std::filesystem::path directory;
    int group_count = 0;
    long long conversations_scored = 0;
    long long conversations_excluded = 0;  // recorded-but-failed, left out
    std::string table_text;                // the summary table, CLI echoes it
};

// Reads {run_dir}/run.json and the score store for scorer_id, computes the
// cut's effect summaries, and writes report.csv, cells.csv, one
// boxplot_{group}.svg per group, and summary.md under
// {run_dir}/reports/{cut}/. Pure function of the inputs: identical stores
// yield byte-identical bundles. Throws ReportError when a required cell has
// no scores (named in the message).
ReportBundle build_report(const std::filesystem::path& run_dir, ReportCut cut,
                          const ReportFilters& filters,
                          const std::string& scorer_id = "lexicon");

}  // namespace edsim
