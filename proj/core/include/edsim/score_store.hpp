#pragma once

#include <filesystem>
#include <mutex>
#include <vector>

#include "edsim/scoring.hpp"

namespace edsim {

std::string score_to_jsonl_line(const ConversationScore& score);
ConversationScore score_from_jsonl_line(std::string_view line);  // ParseError on bad input

// {run_dir}/scores/{scorer_id}.jsonl
std::filesystem::path score_store_path(const std::filesystem::path& run_dir,
                                       const std::string& scorer_id);

// Atomic replace; one record per line, caller-supplied order.
void write_score_store(const std::filesystem::path& path,
                       const std::vector<ConversationScore>& scores);
std::vector<ConversationScore> read_score_store(const std::filesystem::path& path);

// Per-text score cache, one file per scorer id, so re-scoring an unchanged
// corpus never re-invokes the scorer. Entries keyed by text digest.
class ScoreCache {
public:
    static std::string text_digest(std::string_view text);

    static ScoreCache load(const std::filesystem::path& file);  // missing -> empty
    void save(const std::filesystem::path& file) const;         // atomic, key-sorted

    const ScoreVector* find(const std::string& digest) const;
    void put(const std::string& digest, ScoreVector score);
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, ScoreVector> entries_;
};

// Scorer wrapper that serves hits from the cache and forwards only misses to
// the inner scorer (order restored afterwards). Safe for concurrent batches.
class CachedScorer : public Scorer {
public:
    CachedScorer(Scorer& inner, ScoreCache& cache) : inner_(inner), cache_(cache) {}

    std::vector<ScoreVector> score_batch(const std::vector<std::string>& texts) override;
    std::string id() const override { return inner_.id(); }

    long long misses() const { return misses_; }

private:
    Scorer& inner_;
    ScoreCache& cache_;
    std::mutex mutex_;
    long long misses_ = 0;
};

}  // namespace edsim
