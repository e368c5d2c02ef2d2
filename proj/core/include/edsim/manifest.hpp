#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace edsim {

enum class ReplicateStatus { complete, failed };

std::string_view replicate_status_slug(ReplicateStatus status);

struct ManifestEntry {
    ReplicateStatus status = ReplicateStatus::complete;
    std::string content_digest;  // hex digest of the record's JSONL line
};

// Progress ledger keyed "{cell_key}#{replicate_index}". A replicate present
// here has already been recorded (complete or failed) and is skipped on
// resume after its stored digest is verified against the transcript file.
class Manifest {
public:
    static std::string key(const std::string& cell_key, int replicate_index);

    // Missing file -> empty manifest; malformed file -> ParseError.
    static Manifest load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;  // atomic replace

    const ManifestEntry* find(const std::string& key) const;
    void put(const std::string& key, ManifestEntry entry);

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, ManifestEntry>& entries() const { return entries_; }

private:
    std::map<std::string, ManifestEntry> entries_;
};

// Writes contents to a sibling temp file, then renames over path, so readers
// never observe a half-written file.
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace edsim
