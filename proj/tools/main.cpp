#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "edsim/types.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dyadic-conversation experiment runner"};
    app.require_subcommand(1);

    int rc = 0;

    std::string validate_config;
    auto* validate = app.add_subcommand(
        "validate", "Check a config and print the planned matrix size");
    validate->add_option("config", validate_config, "experiment config JSON file")
        ->required();
    validate->callback([&] {
        rc = edsim::cli::cmd_validate(validate_config, std::cout, std::cerr);
    });

    std::string run_config;
    edsim::cli::RunOptions run_options;
    std::string run_output_dir;
    auto* run = app.add_subcommand("run", "Generate the configured conversations");
    run->add_option("config", run_config, "experiment config JSON file")->required();
    run->add_flag("--offline", run_options.offline,
                  "forbid HTTP backends; scripted mocks only");
    run->add_option("--parallelism", run_options.parallelism,
                    "worker count (default: backends x 4)");
    run->add_flag("--resume", run_options.resume,
                  "continue a previous run in the same output directory");
    run->add_option("--output-dir", run_output_dir,
                    "override the config's output directory");
    run->callback([&] {
        if (!run_output_dir.empty()) run_options.output_dir = run_output_dir;
        rc = edsim::cli::cmd_run(run_config, run_options, std::cout, std::cerr);
    });

    std::string score_run_dir;
    edsim::cli::ScoreOptions score_options;
    auto* score = app.add_subcommand("score", "Score a run's complete conversations");
    score->add_option("run_dir", score_run_dir, "run output directory")->required();
    score->add_option("--scorer", score_options.scorer,
                      "\"lexicon\" or \"remote:<base url>\"");
    score->callback([&] {
        rc = edsim::cli::cmd_score(score_run_dir, score_options, std::cout, std::cerr);
    });

    std::string report_run_dir;
    std::string report_cut = "cross_model";
    std::string report_platform;
    std::string report_community;
    std::string report_model;
    edsim::cli::ReportOptions report_options;
    auto* report = app.add_subcommand("report", "Build effect tables and box plots");
    report->add_option("run_dir", report_run_dir, "run output directory")->required();
    report->add_option("--cut", report_cut,
                       "cross_model | cross_platform | cross_community");
    report->add_option("--platform", report_platform, "pin a platform (slug)");
    report->add_option("--community", report_community, "pin a community id");
    report->add_option("--model", report_model, "pin a model key (model_id@version)");
    report->add_option("--scorer", report_options.scorer_id,
                       "score store to read (default: lexicon)");
    report->callback([&] {
        auto cut = edsim::report_cut_from_slug(report_cut);
        if (!cut) {
            std::cerr << "unknown cut '" << report_cut << "'\n";
            rc = edsim::cli::kExitValidation;
            return;
        }
        report_options.cut = *cut;
        if (!report_platform.empty()) {
            auto platform = edsim::platform_from_slug(report_platform);
            if (!platform) {
                std::cerr << "unknown platform '" << report_platform << "'\n";
                rc = edsim::cli::kExitValidation;
                return;
            }
            report_options.filters.platform = *platform;
        }
        if (!report_community.empty()) {
            report_options.filters.community_id = report_community;
        }
        if (!report_model.empty()) report_options.filters.model_key = report_model;
        rc = edsim::cli::cmd_report(report_run_dir, report_options, std::cout,
                                    std::cerr);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : edsim::cli::kExitParse;
    }
    return rc;
}
