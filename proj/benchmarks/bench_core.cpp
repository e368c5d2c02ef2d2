// Hot paths of an experiment run: seed derivation per replicate, matrix
// expansion per run, lexicon scoring per utterance, box statistics per cell,
// and the JSONL record round-trip per conversation.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "edsim/backend.hpp"
#include "edsim/config.hpp"
#include "edsim/conversation.hpp"
#include "edsim/matrix.hpp"
#include "edsim/scoring.hpp"
#include "edsim/stats.hpp"

namespace {

using namespace edsim;

const std::string kCellKey = "twitter/keto_recipes/support/Mistral@v1";

void bench_cell_seed(benchmark::State& state) {
    int replicate = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cell_seed(0x00000000006b6a30ull, kCellKey, replicate++));
    }
}
BENCHMARK(bench_cell_seed);

void bench_expand_matrix(benchmark::State& state) {
    const ExperimentConfig config =
        load_config_file(std::string(EDSIM_SOURCE_DIR) + "/configs/full.json");
    for (auto _ : state) {
        benchmark::DoNotOptimize(expand_matrix(config));
    }
}
BENCHMARK(bench_expand_matrix);

std::vector<std::string> sample_texts(std::size_t count) {
    const Lexicon& lexicon = builtin_lexicon();
    std::vector<std::string> pool(lexicon.positive.begin(), lexicon.positive.end());
    pool.insert(pool.end(), lexicon.negative.begin(), lexicon.negative.end());
    pool.insert(pool.end(), {"keto", "today", "again", "meal", "really", "plan"});
    std::mt19937_64 rng(7);
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < count; ++i) {
        std::string text;
        for (int w = 0; w < 9; ++w) {
            if (w) text += ' ';
            text += pool[rng() % pool.size()];
        }
        texts.push_back(std::move(text));
    }
    return texts;
}

void bench_lexicon_batch(benchmark::State& state) {
    LexiconScorer scorer;
    const auto texts = sample_texts(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(scorer.score_batch(texts));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_lexicon_batch)->Arg(10)->Arg(100)->Arg(1000);

std::vector<ConversationScore> sample_scores(std::size_t count) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::vector<ConversationScore> scores(count);
    int replicate = 0;
    for (ConversationScore& s : scores) {
        s.cell_key = kCellKey;
        s.replicate_index = replicate++;
        s.sentiment_mean = value(rng);
        s.scored_utterance_count = 10;
    }
    return scores;
}

void bench_cell_summary(benchmark::State& state) {
    const auto scores = sample_scores(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cell_summary(scores));
    }
}
BENCHMARK(bench_cell_summary)->Arg(100)->Arg(10000);

Conversation sample_conversation() {
    Conversation conversation;
    conversation.cell_key = kCellKey;
    conversation.replicate_index = 3;
    conversation.seed = 0x0123456789abcdefull;
    conversation.usage = {420, 137};
    const auto texts = sample_texts(12);
    int index = 0;
    for (const std::string& text : texts) {
        Utterance u;
        u.role = index < 2 ? SpeakerRole::seed_a
                           : (index % 2 ? SpeakerRole::participant_b
                                        : SpeakerRole::participant_a);
        u.speaker_name = index % 2 ? "John" : "Jane";
        u.text = text;
        u.index = index++;
        u.generated = index > 2;
        conversation.utterances.push_back(std::move(u));
    }
    return conversation;
}

void bench_jsonl_round_trip(benchmark::State& state) {
    const Conversation conversation = sample_conversation();
    for (auto _ : state) {
        const std::string line = conversation_to_jsonl_line(conversation);
        benchmark::DoNotOptimize(conversation_from_jsonl_line(line));
    }
}
BENCHMARK(bench_jsonl_round_trip);

void bench_procedural_reply(benchmark::State& state) {
    MockScript script;
    script.procedural = true;
    ScriptedMockBackend backend("bench", script);
    ChatRequest request;
    request.transcript_text = "JANE: I plan every meal for the week.\nJOHN:";
    request.next_speaker_name = "John";
    request.request_seed = 99;
    for (auto _ : state) {
        benchmark::DoNotOptimize(backend.complete(request));
    }
}
BENCHMARK(bench_procedural_reply);

}  // namespace

BENCHMARK_MAIN();
