#include "edsim/manifest.hpp"

#include <fstream>
#include <sstream>

#include "edsim/errors.hpp"
#include "json.hpp"

namespace edsim {

using nlohmann::json;

std::string_view replicate_status_slug(ReplicateStatus status) {
    return status == ReplicateStatus::complete ? "complete" : "failed";
}

std::string Manifest::key(const std::string& cell_key, int replicate_index) {
    return cell_key + "#" + std::to_string(replicate_index);
}

Manifest Manifest::load(const std::filesystem::path& file) {
    Manifest manifest;
    std::ifstream in(file);
    if (!in) return manifest;

    std::ostringstream buffer;
    buffer << in.rdbuf();
    json doc = json::parse(buffer.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ParseError("manifest: not a JSON object: " + file.string());
    }
    for (const auto& [key, value] : doc.items()) {
        ManifestEntry entry;
        const std::string status = value.value("status", std::string());
        if (status == "complete") {
            entry.status = ReplicateStatus::complete;
        } else if (status == "failed") {
            entry.status = ReplicateStatus::failed;
        } else {
            throw ParseError("manifest: unknown status '" + status + "' for " + key);
        }
        entry.content_digest = value.value("content_digest", std::string());
        manifest.entries_.emplace(key, std::move(entry));
    }
    return manifest;
}

void Manifest::save(const std::filesystem::path& file) const {
    json doc = json::object();
    for (const auto& [key, entry] : entries_) {
        doc[key] = {{"status", std::string(replicate_status_slug(entry.status))},
                    {"content_digest", entry.content_digest}};
    }
    atomic_write_file(file, doc.dump(2) + "\n");
}

const ManifestEntry* Manifest::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void Manifest::put(const std::string& key, ManifestEntry entry) {
    entries_[key] = std::move(entry);
}

void atomic_write_file(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path temp = path.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for write: " + temp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("write failed: " + temp.string());
    }
    std::filesystem::rename(temp, path);
}

}  // namespace edsim
