#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "edsim/report.hpp"

namespace edsim::cli {

// Exit-code contract shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitRunFailures = 3;
inline constexpr int kExitScoring = 4;

// Parses and validates a config, prints "<cells> cells / <conversations>
// conversations planned" on success.
int cmd_validate(const std::filesystem::path& config_path, std::ostream& out,
                 std::ostream& err);

struct RunOptions {
    bool offline = false;
    int parallelism = 0;  // 0 = take the config's value
    bool resume = false;  // informational; runs always reuse a matching manifest
    std::optional<std::filesystem::path> output_dir;
};

int cmd_run(const std::filesystem::path& config_path, const RunOptions& options,
            std::ostream& out, std::ostream& err);

struct ScoreOptions {
    std::string scorer = "lexicon";  // "lexicon" or "remote:<base url>"
};

int cmd_score(const std::filesystem::path& run_dir, const ScoreOptions& options,
              std::ostream& out, std::ostream& err);

struct ReportOptions {
    ReportCut cut = ReportCut::cross_model;
    ReportFilters filters;
    std::string scorer_id = "lexicon";
};

int cmd_report(const std::filesystem::path& run_dir, const ReportOptions& options,
               std::ostream& out, std::ostream& err);

}  // namespace edsim::cli
