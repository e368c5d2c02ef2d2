#include "edsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "edsim/config.hpp"
#include "edsim/errors.hpp"
#include "edsim/hash.hpp"
#include "edsim/http_backend.hpp"
#include "edsim/manifest.hpp"
#include "edsim/prompt.hpp"

namespace edsim {

namespace fs = std::filesystem;

RateLimitedBackend::RateLimitedBackend(std::shared_ptr<ChatBackend> inner,
                                       std::shared_ptr<RateLimiter> limiter)
    : inner_(std::move(inner)), limiter_(std::move(limiter)) {}

ChatResult RateLimitedBackend::complete(const ChatRequest& request) {
    limiter_->acquire_blocking();
    ChatResult result = inner_->complete(request);
    limiter_->release();
    return result;
}

BackendRegistry BackendRegistry::from_config(const ExperimentConfig& config, bool offline) {
    BackendRegistry registry;
    for (const ModelSpec& model : config.models) {
        const std::string key = model.key();
        if (registry.entries_.count(key) != 0) continue;

        Entry entry;
        std::shared_ptr<ChatBackend> raw;
        if (model.provider == ProviderKind::scripted_mock) {
            raw = std::make_shared<ScriptedMockBackend>(key, model.mock);
            if (model.requests_per_minute > 0) {
                entry.limiter = std::make_shared<RateLimiter>(
                    model.requests_per_minute, std::max(1, model.max_concurrent));
            }
        } else {
            if (offline) {
                throw ValidationError("offline mode forbids HTTP backend: " + key);
            }
            raw = std::make_shared<HttpChatBackend>(key, model);
            entry.limiter = std::make_shared<RateLimiter>(
                model.requests_per_minute, std::max(1, model.max_concurrent));
        }
        entry.backend = entry.limiter
                            ? std::make_shared<RateLimitedBackend>(raw, entry.limiter)
                            : raw;
        registry.entries_.emplace(key, std::move(entry));
    }
    return registry;
}

const BackendRegistry::Entry& BackendRegistry::at(const std::string& model_key) const {
    auto it = entries_.find(model_key);
    if (it == entries_.end()) {
        throw ValidationError("no backend registered for model: " + model_key);
    }
    return it->second;
}

namespace {

std::string failure_text(const BackendError& error) {
    std::string text(error_class_name(error.classification));
    if (!error.detail.empty()) text += ": " + error.detail;
    return text;
}

}  // namespace

Conversation run_conversation(const ExperimentCell& cell, const CommunityPrompt& prompt,
                              const ExperimentConfig& config, ChatBackend& backend,
                              int replicate_index, Sleeper* sleeper) {
    static ThreadSleeper default_sleeper;
    Sleeper& sleep = sleeper != nullptr ? *sleeper : default_sleeper;

    Conversation conversation;
    conversation.cell_key = cell.cell_key;
    conversation.replicate_index = replicate_index;
    conversation.seed = cell_seed(config.master_seed, cell.cell_key, replicate_index);
    conversation.utterances = seed_utterances(prompt);
    inject_intervention(conversation, cell.intervention);

    const ModelSpec& model = config.models.at(cell.model_index);
    std::optional<std::string> system_text;
    if (!model.system_prompt.empty()) system_text = model.system_prompt;

    for (int turn = 0; turn < config.turns_per_conversation; ++turn) {
        const bool first_speaker = turn % 2 == 0;
        const std::string& speaker = first_speaker ? prompt.persona_a : prompt.persona_b;

        ChatRequest request;
        request.system_text = system_text;
        request.transcript_text =
            render_transcript(prompt, cell.platform, conversation.utterances);
        request.next_speaker_name = speaker;
        request.sampling = model.sampling;
        request.request_seed = conversation.seed;

        auto validate = [&](const ChatResponse& response) -> std::optional<BackendError> {
            if (clean_response(response.text, speaker).empty()) {
                return BackendError{ErrorClass::malformed_response,
                                    "empty response after cleaning", std::nullopt};
            }
            return std::nullopt;
        };

        RetryOutcome outcome =
            complete_with_retry(backend, request, config.retry, sleep, validate);
        if (!is_ok(outcome.result)) {
            conversation.status = ConversationStatus::failed;
            conversation.failure_reason = failure_text(error_of(outcome.result));
            break;
        }

        const ChatResponse& response = response_of(outcome.result);
        conversation.usage.prompt_tokens += response.usage.prompt_tokens;
        conversation.usage.completion_tokens += response.usage.completion_tokens;

        Utterance utterance;
        utterance.role =
            first_speaker ? SpeakerRole::participant_a : SpeakerRole::participant_b;
        utterance.speaker_name = speaker;
        utterance.text = clean_response(response.text, speaker);
        utterance.index = static_cast<int>(conversation.utterances.size());
        utterance.generated = true;
        conversation.utterances.push_back(std::move(utterance));
    }
    return conversation;
}

namespace {

struct PendingRecord {
    std::string line;
    ReplicateStatus status = ReplicateStatus::complete;
};

struct CellState {
    fs::path file;
    int next_to_write = 0;                  // writer cursor == verified prefix length
    std::map<int, PendingRecord> pending;   // completed out of order, awaiting turn
};

struct Task {
    std::size_t cell_index = 0;
    int replicate = 0;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, BackendRegistry& registry,
                          ProgressFn progress) {
    const fs::path out_dir = config.output_dir;
    const fs::path transcripts_dir = out_dir / "transcripts";
    std::error_code ec;
    fs::create_directories(transcripts_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + transcripts_dir.string());
    }

    // Configuration echo; also refuses to resume into a directory produced by
    // a different configuration.
    const fs::path run_json = out_dir / "run.json";
    const std::string canonical = config_to_canonical_json(config) + "\n";
    if (fs::exists(run_json)) {
        if (read_file(run_json) != canonical) {
            throw ValidationError("output directory holds a different run configuration: " +
                                  run_json.string());
        }
    } else {
        atomic_write_file(run_json, canonical);
    }

    const std::vector<ExperimentCell> cells = expand_matrix(config);
    const int replicates = config.conversations_per_cell;

    std::vector<const CommunityPrompt*> prompts(cells.size(), nullptr);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (const CommunityPrompt& p : config.prompts) {
            if (p.platform == cells[i].platform && p.community_id == cells[i].community_id) {
                prompts[i] = &p;
                break;
            }
        }
        if (prompts[i] == nullptr) {
            throw ValidationError("no prompt for cell " + cells[i].cell_key);
        }
    }

    const fs::path manifest_path = out_dir / "manifest.json";
    Manifest stored = Manifest::load(manifest_path);
    Manifest manifest;  // rebuilt from entries that verify against the files

    RunSummary summary;
    summary.planned = static_cast<long long>(cells.size()) * replicates;

    // Resume pass: keep, per cell, the longest file prefix whose lines match
    // the stored digests; everything past it is rewritten away and re-run.
    std::vector<CellState> states(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CellState& state = states[i];
        state.file = transcripts_dir / (cells[i].cell_key + ".jsonl");
        fs::create_directories(state.file.parent_path(), ec);
        if (ec) throw IoError("cannot create cell directory: " + state.file.string());

        if (!fs::exists(state.file)) continue;
        std::vector<std::string> lines;
        {
            std::ifstream in(state.file, std::ios::binary);
            std::string line;
            while (std::getline(in, line)) lines.push_back(line);
        }
        std::size_t verified = 0;
        std::string kept;
        for (; verified < lines.size() && static_cast<int>(verified) < replicates;
             ++verified) {
            const std::string key =
                Manifest::key(cells[i].cell_key, static_cast<int>(verified));
            const ManifestEntry* entry = stored.find(key);
            if (entry == nullptr || entry->content_digest != to_hex16(fnv1a64(lines[verified]))) {
                break;
            }
            manifest.put(key, *entry);
            kept += lines[verified];
            kept += '\n';
        }
        if (verified < lines.size()) {
            atomic_write_file(state.file, kept);
        }
        state.next_to_write = static_cast<int>(verified);
        summary.skipped += static_cast<long long>(verified);
    }
    manifest.save(manifest_path);

    std::vector<Task> tasks;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (int r = states[i].next_to_write; r < replicates; ++r) {
            tasks.push_back(Task{i, r});
        }
    }

    std::mutex writer_mutex;
    std::atomic<bool> stop{false};

    // Single serialized writer: a record is appended only when it extends the
    // contiguous prefix for its cell, so files and manifest always describe a
    // resumable state no matter the completion order.
    auto record = [&](std::size_t cell_index, int replicate, const Conversation& conv) {
        std::lock_guard lock(writer_mutex);
        CellState& state = states[cell_index];
        PendingRecord pending;
        pending.line = conversation_to_jsonl_line(conv);
        pending.status = conv.status == ConversationStatus::complete
                             ? ReplicateStatus::complete
                             : ReplicateStatus::failed;
        state.pending.emplace(replicate, std::move(pending));

        for (;;) {
            auto it = state.pending.find(state.next_to_write);
            if (it == state.pending.end()) break;
            {
                std::ofstream out(state.file, std::ios::binary | std::ios::app);
                if (!out) throw IoError("cannot append to " + state.file.string());
                out << it->second.line << '\n';
            }
            const std::string key =
                Manifest::key(cells[cell_index].cell_key, state.next_to_write);
            manifest.put(key, ManifestEntry{it->second.status,
                                            to_hex16(fnv1a64(it->second.line))});
            manifest.save(manifest_path);
            if (it->second.status == ReplicateStatus::complete) {
                ++summary.completed;
            } else {
                ++summary.failed;
            }
            ++state.next_to_write;
            state.pending.erase(it);
            if (progress && !progress(summary, key)) stop.store(true);
        }
    };

    std::atomic<std::size_t> next_task_index{0};
    auto worker = [&]() {
        for (;;) {
            if (stop.load()) return;
            const std::size_t index = next_task_index.fetch_add(1);
            if (index >= tasks.size()) return;
            const Task& task = tasks[index];
            const ExperimentCell& cell = cells[task.cell_index];
            Conversation conv;
            try {
                ChatBackend& backend = *registry.at(cell.model_key).backend;
                conv = run_conversation(cell, *prompts[task.cell_index], config, backend,
                                        task.replicate);
            } catch (const std::exception& e) {
                conv.cell_key = cell.cell_key;
                conv.replicate_index = task.replicate;
                conv.seed = cell_seed(config.master_seed, cell.cell_key, task.replicate);
                conv.utterances = seed_utterances(*prompts[task.cell_index]);
                conv.status = ConversationStatus::failed;
                conv.failure_reason = std::string("internal error: ") + e.what();
            }
            record(task.cell_index, task.replicate, conv);
        }
    };

    int parallelism = config.parallelism > 0
                          ? config.parallelism
                          : std::max<int>(1, static_cast<int>(registry.size()) * 4);
    if (tasks.size() < static_cast<std::size_t>(parallelism)) {
        parallelism = std::max<int>(1, static_cast<int>(tasks.size()));
    }

    if (parallelism <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(parallelism));
        for (int i = 0; i < parallelism; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return summary;
}

}  // namespace edsim
