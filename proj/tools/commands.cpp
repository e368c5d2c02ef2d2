#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "edsim/config.hpp"
#include "edsim/engine.hpp"
#include "edsim/errors.hpp"
#include "edsim/manifest.hpp"
#include "edsim/matrix.hpp"
#include "edsim/remote_scorer.hpp"
#include "edsim/score_store.hpp"

namespace edsim::cli {

namespace fs = std::filesystem;

int cmd_validate(const fs::path& config_path, std::ostream& out, std::ostream& err) {
    try {
        const ExperimentConfig config = load_config_file(config_path);
        const std::vector<ExperimentCell> cells = expand_matrix(config);
        const long long conversations =
            static_cast<long long>(cells.size()) * config.conversations_per_cell;
        out << cells.size() << " cells / " << conversations
            << " conversations planned\n";
        return kExitOk;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ValidationError& e) {
        err << "invalid config: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

int cmd_run(const fs::path& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
    ExperimentConfig config;
    try {
        config = load_config_file(config_path);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        err << "invalid config: " << e.what() << '\n';
        return kExitValidation;
    }
    if (options.parallelism > 0) config.parallelism = options.parallelism;
    if (options.output_dir) config.output_dir = *options.output_dir;

    try {
        if (!options.offline) {
            for (const ModelSpec& model : config.models) {
                if (model.provider == ProviderKind::scripted_mock ||
                    model.api_key_env.empty()) {
                    continue;
                }
                const char* key = std::getenv(model.api_key_env.c_str());
                if (key == nullptr || *key == '\0') {
                    err << "missing credential: environment variable "
                        << model.api_key_env << " is not set (model " << model.key()
                        << ")\n";
                    return kExitValidation;
                }
            }
        }
        BackendRegistry registry = BackendRegistry::from_config(config, options.offline);

        long long last_printed = -1;
        auto progress = [&](const RunSummary& s, const std::string&) {
            const long long recorded = s.completed + s.failed;
            if (recorded % 20 == 0 && recorded != last_printed) {
                err << "progress: " << recorded << " recorded, " << s.failed
                    << " failed, " << s.skipped << " skipped of " << s.planned << '\n';
                last_printed = recorded;
            }
            return true;
        };

        const RunSummary summary = run_experiment(config, registry, progress);
        err << summary.completed + summary.failed << " executed, " << summary.completed
            << " completed, " << summary.failed << " failed, " << summary.skipped
            << " skipped (planned " << summary.planned << ")\n";
        out.flush();

        if (summary.failed > 0) {
            err << "failed replicates:\n";
            const Manifest manifest = Manifest::load(config.output_dir / "manifest.json");
            int shown = 0;
            for (const auto& [key, entry] : manifest.entries()) {
                if (entry.status != ReplicateStatus::failed) continue;
                if (shown < 50) err << "  " << key << '\n';
                ++shown;
            }
            if (shown > 50) err << "  ... and " << shown - 50 << " more\n";
            return kExitRunFailures;
        }
        return kExitOk;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        err << "run failed: " << e.what() << '\n';
        return kExitValidation;
    }
}

int cmd_score(const fs::path& run_dir, const ScoreOptions& options, std::ostream& out,
              std::ostream& err) {
    try {
        const fs::path run_json = run_dir / "run.json";
        if (!fs::exists(run_json)) {
            err << "not a run directory (missing run.json): " << run_dir.string() << '\n';
            return kExitValidation;
        }
        std::ifstream in(run_json, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        const ExperimentConfig config = config_from_canonical_json(buffer.str());

        std::unique_ptr<Scorer> scorer;
        if (options.scorer == "lexicon") {
            scorer = std::make_unique<LexiconScorer>();
        } else if (options.scorer.rfind("remote:", 0) == 0) {
            auto remote = std::make_unique<RemoteScorer>(options.scorer.substr(7));
            if (!remote->health_check()) {
                err << "scorer service is not healthy: " << options.scorer.substr(7)
                    << '\n';
                return kExitScoring;
            }
            scorer = std::move(remote);
        } else {
            err << "unknown scorer '" << options.scorer
                << "' (expected \"lexicon\" or \"remote:<base url>\")\n";
            return kExitValidation;
        }

        const fs::path cache_path =
            run_dir / "scores" / (scorer->id() + ".cache.jsonl");
        ScoreCache cache = ScoreCache::load(cache_path);
        CachedScorer cached(*scorer, cache);

        std::vector<ConversationScore> store;
        long long skipped = 0;
        for (const ExperimentCell& cell : expand_matrix(config)) {
            const fs::path file = run_dir / "transcripts" / (cell.cell_key + ".jsonl");
            std::ifstream cell_in(file, std::ios::binary);
            if (!cell_in) {
                err << cell.cell_key << ": no transcripts\n";
                continue;
            }
            long long scored = 0;
            long long total = 0;
            std::string line;
            while (std::getline(cell_in, line)) {
                if (line.empty()) continue;
                ++total;
                const Conversation conversation = conversation_from_jsonl_line(line);
                if (conversation.status != ConversationStatus::complete) {
                    ++skipped;
                    err << "skipping " << conversation.cell_key << " #"
                        << conversation.replicate_index << ": "
                        << conversation.failure_reason.value_or("failed") << '\n';
                    continue;
                }
                store.push_back(score_conversation(conversation, cached));
                ++scored;
            }
            err << cell.cell_key << ": " << scored << "/" << total << " scored\n";
        }

        write_score_store(score_store_path(run_dir, scorer->id()), store);
        cache.save(cache_path);
        out << store.size() << " conversations scored, " << skipped
            << " skipped (cache misses: " << cached.misses() << ")\n";
        return kExitOk;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ScorerError& e) {
        err << "scoring failed: " << e.what() << '\n';
        return kExitScoring;
    } catch (const std::exception& e) {
        err << "scoring failed: " << e.what() << '\n';
        return kExitScoring;
    }
}

int cmd_report(const fs::path& run_dir, const ReportOptions& options, std::ostream& out,
               std::ostream& err) {
    try {
        const ReportBundle bundle =
            build_report(run_dir, options.cut, options.filters, options.scorer_id);
        out << bundle.table_text;
        err << "report bundle (" << bundle.group_count << " groups, "
            << bundle.conversations_scored << " conversations, "
            << bundle.conversations_excluded << " excluded) written to "
            << bundle.directory.string() << '\n';
        return kExitOk;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        err << "report failed: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace edsim::cli
