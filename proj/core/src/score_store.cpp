#include "edsim/score_store.hpp"

#include <fstream>

#include "edsim/errors.hpp"
#include "edsim/hash.hpp"
#include "edsim/manifest.hpp"
#include "json.hpp"

namespace edsim {

using nlohmann::json;

namespace {

json counts_to_json(const std::map<std::string, long long>& counts) {
    json out = json::object();
    for (const auto& [label, count] : counts) out[label] = count;
    return out;
}

std::map<std::string, long long> counts_from_json(const json& doc) {
    std::map<std::string, long long> counts;
    for (const auto& [label, count] : doc.items()) {
        counts[label] = count.get<long long>();
    }
    return counts;
}

json score_vector_to_json(const ScoreVector& score) {
    json doc{{"sentiment", score.sentiment},
             {"empathy_intent", score.empathy_intent},
             {"empathy_emotion", score.empathy_emotion},
             {"emotion", score.emotion}};
    if (score.toxicity) doc["toxicity"] = *score.toxicity;
    if (!score.extras.empty()) {
        json extras = json::object();
        for (const auto& [label, value] : score.extras) extras[label] = value;
        doc["extras"] = std::move(extras);
    }
    return doc;
}

ScoreVector score_vector_from_json(const json& doc) {
    ScoreVector score;
    score.sentiment = doc.at("sentiment").get<double>();
    score.empathy_intent = doc.at("empathy_intent").get<std::string>();
    score.empathy_emotion = doc.at("empathy_emotion").get<std::string>();
    score.emotion = doc.at("emotion").get<std::string>();
    if (doc.contains("toxicity")) score.toxicity = doc.at("toxicity").get<double>();
    if (doc.contains("extras")) {
        for (const auto& [label, value] : doc.at("extras").items()) {
            score.extras[label] = value.get<double>();
        }
    }
    return score;
}

}  // namespace

std::string score_to_jsonl_line(const ConversationScore& score) {
    json doc{{"cell_key", score.cell_key},
             {"replicate_index", score.replicate_index},
             {"sentiment_mean", score.sentiment_mean},
             {"scored_utterance_count", score.scored_utterance_count},
             {"intent_counts", counts_to_json(score.intent_counts)},
             {"empathy_emotion_counts", counts_to_json(score.empathy_emotion_counts)},
             {"emotion_counts", counts_to_json(score.emotion_counts)}};
    return doc.dump();
}

ConversationScore score_from_jsonl_line(std::string_view line) {
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ParseError("score record: not a JSON object");
    }
    try {
        ConversationScore score;
        score.cell_key = doc.at("cell_key").get<std::string>();
        score.replicate_index = doc.at("replicate_index").get<int>();
        score.sentiment_mean = doc.at("sentiment_mean").get<double>();
        score.scored_utterance_count = doc.at("scored_utterance_count").get<long long>();
        score.intent_counts = counts_from_json(doc.at("intent_counts"));
        score.empathy_emotion_counts = counts_from_json(doc.at("empathy_emotion_counts"));
        score.emotion_counts = counts_from_json(doc.at("emotion_counts"));
        return score;
    } catch (const json::exception& e) {
        throw ParseError(std::string("score record: ") + e.what());
    }
}

std::filesystem::path score_store_path(const std::filesystem::path& run_dir,
                                       const std::string& scorer_id) {
    return run_dir / "scores" / (scorer_id + ".jsonl");
}

void write_score_store(const std::filesystem::path& path,
                       const std::vector<ConversationScore>& scores) {
    std::string contents;
    for (const ConversationScore& score : scores) {
        contents += score_to_jsonl_line(score);
        contents += '\n';
    }
    std::filesystem::create_directories(path.parent_path());
    atomic_write_file(path, contents);
}

std::vector<ConversationScore> read_score_store(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open score store: " + path.string());
    std::vector<ConversationScore> scores;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        scores.push_back(score_from_jsonl_line(line));
    }
    return scores;
}

std::string ScoreCache::text_digest(std::string_view text) {
    return to_hex16(fnv1a64(text));
}

ScoreCache ScoreCache::load(const std::filesystem::path& file) {
    ScoreCache cache;
    std::ifstream in(file, std::ios::binary);
    if (!in) return cache;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("digest")) {
            throw ParseError("score cache: malformed line in " + file.string());
        }
        cache.entries_[doc.at("digest").get<std::string>()] =
            score_vector_from_json(doc.at("score"));
    }
    return cache;
}

void ScoreCache::save(const std::filesystem::path& file) const {
    std::string contents;
    for (const auto& [digest, score] : entries_) {
        json doc{{"digest", digest}, {"score", score_vector_to_json(score)}};
        contents += doc.dump();
        contents += '\n';
    }
    std::filesystem::create_directories(file.parent_path());
    atomic_write_file(file, contents);
}

const ScoreVector* ScoreCache::find(const std::string& digest) const {
    auto it = entries_.find(digest);
    return it == entries_.end() ? nullptr : &it->second;
}

void ScoreCache::put(const std::string& digest, ScoreVector score) {
    entries_[digest] = std::move(score);
}

std::vector<ScoreVector> CachedScorer::score_batch(const std::vector<std::string>& texts) {
    std::vector<ScoreVector> scores(texts.size());
    std::vector<std::size_t> miss_indices;
    std::vector<std::string> miss_texts;
    {
        std::lock_guard lock(mutex_);
        for (std::size_t i = 0; i < texts.size(); ++i) {
            if (const ScoreVector* hit = cache_.find(ScoreCache::text_digest(texts[i]))) {
                scores[i] = *hit;
            } else {
                miss_indices.push_back(i);
                miss_texts.push_back(texts[i]);
            }
        }
    }
    if (miss_texts.empty()) return scores;

    const std::vector<ScoreVector> fresh = inner_.score_batch(miss_texts);
    if (fresh.size() != miss_texts.size()) {
        throw ScorerError("scorer returned " + std::to_string(fresh.size()) +
                          " results for " + std::to_string(miss_texts.size()) + " texts");
    }
    std::lock_guard lock(mutex_);
    misses_ += static_cast<long long>(fresh.size());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        scores[miss_indices[i]] = fresh[i];
        cache_.put(ScoreCache::text_digest(miss_texts[i]), fresh[i]);
    }
    return scores;
}

}  // namespace edsim
