#include "ecstore/catalogue.hpp"

#include "ecstore/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace ecstore {

namespace {

using nlohmann::json;

constexpr int kCatalogueFormatVersion = 1;

unsigned parse_meta_uint(const CatalogueEntry& entry, const char* key) {
    const auto it = entry.metadata.find(key);
    if (it == entry.metadata.end())
        throw Error(Errc::corruption,
                    "catalogue: entry '" + entry.logical_path + "' is missing metadata key " + key);
    try {
        const unsigned long v = std::stoul(it->second);
        return static_cast<unsigned>(v);
    } catch (const std::exception&) {
        throw Error(Errc::corruption, "catalogue: entry '" + entry.logical_path +
                                          "' has non-numeric metadata " + key + "='" + it->second + "'");
    }
}

std::uint64_t parse_meta_u64(const CatalogueEntry& entry, const char* key) {
    const auto it = entry.metadata.find(key);
    if (it == entry.metadata.end())
        throw Error(Errc::corruption,
                    "catalogue: entry '" + entry.logical_path + "' is missing metadata key " + key);
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw Error(Errc::corruption, "catalogue: entry '" + entry.logical_path +
                                          "' has non-numeric metadata " + key + "='" + it->second + "'");
    }
}

} // namespace

void FileManifest::validate() const {
    normalize_logical_path(logical_path);
    params.validate();
    if (chunk_locations.size() > params.m)
        throw Error(Errc::invalid_params, "manifest: more chunk locations than total chunks");
    std::set<unsigned> indices;
    for (const auto& loc : chunk_locations) {
        if (loc.chunk_index >= params.m)
            throw Error(Errc::invalid_params, "manifest: chunk index out of range");
        if (!indices.insert(loc.chunk_index).second)
            throw Error(Errc::invalid_params, "manifest: duplicate chunk index");
        if (loc.endpoint_id.empty() || loc.remote_name.empty())
            throw Error(Errc::invalid_params, "manifest: chunk location missing endpoint or object name");
    }
    if ((original_size + pad_length) % params.k != 0)
        throw Error(Errc::invalid_params, "manifest: size plus padding must be a multiple of k");
}

std::string normalize_logical_path(std::string_view path) {
    if (path.empty() || path[0] != '/')
        throw Error(Errc::invalid_params, "logical path must start with '/': '" + std::string(path) + "'");
    std::string out;
    out.reserve(path.size());
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        if (i == path.size()) break;
        std::size_t j = i;
        while (j < path.size() && path[j] != '/') ++j;
        const std::string_view segment = path.substr(i, j - i);
        if (segment == "." || segment == "..")
            throw Error(Errc::invalid_params, "logical path must not contain dot segments");
        out += '/';
        out.append(segment);
        i = j;
    }
    if (out.empty()) throw Error(Errc::invalid_params, "logical path must name a file, not the root");
    return out;
}

std::string logical_basename(std::string_view path) {
    const std::size_t slash = path.rfind('/');
    return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

Catalogue::Catalogue(std::filesystem::path path) : path_(std::move(path)) { load(); }

void Catalogue::load() {
    std::unique_lock lock(mutex_);
    entries_.clear();
    std::ifstream in(path_);
    if (!in.is_open()) return; // empty catalogue until first commit

    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(Errc::corruption, "catalogue: cannot parse " + path_.string() + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != "ecstore-catalogue")
        throw Error(Errc::corruption, "catalogue: " + path_.string() + " is not a catalogue file");
    if (doc.value("version", 0) != kCatalogueFormatVersion)
        throw Error(Errc::corruption, "catalogue: unsupported catalogue version in " + path_.string());

    for (const auto& e : doc.at("entries")) {
        CatalogueEntry entry;
        entry.logical_path = e.at("path").get<std::string>();
        const std::string kind = e.at("kind").get<std::string>();
        if (kind == "directory") {
            entry.kind = EntryKind::directory;
        } else if (kind == "chunk") {
            entry.kind = EntryKind::chunk_record;
            entry.endpoint_id = e.at("endpoint").get<std::string>();
            entry.remote_name = e.at("object").get<std::string>();
        } else {
            throw Error(Errc::corruption, "catalogue: unknown entry kind '" + kind + "'");
        }
        if (e.contains("metadata"))
            for (const auto& [key, value] : e.at("metadata").items())
                entry.metadata[key] = value.get<std::string>();
        if (!entries_.emplace(entry.logical_path, std::move(entry)).second)
            throw Error(Errc::corruption, "catalogue: duplicate entry path in " + path_.string());
    }
}

void Catalogue::save_locked() const {
    json doc;
    doc["format"] = "ecstore-catalogue";
    doc["version"] = kCatalogueFormatVersion;
    json entries = json::array();
    for (const auto& [path, entry] : entries_) {
        json e;
        e["path"] = path;
        e["kind"] = entry.kind == EntryKind::directory ? "directory" : "chunk";
        if (entry.kind == EntryKind::chunk_record) {
            e["endpoint"] = entry.endpoint_id;
            e["object"] = entry.remote_name;
        }
        e["metadata"] = entry.metadata;
        entries.push_back(std::move(e));
    }
    doc["entries"] = std::move(entries);

    // Commit protocol: write the whole document to a temp file, then rename
    // over the catalogue. A crash mid-write leaves the previous state intact.
    const std::filesystem::path tmp = path_.string() + ".tmp";
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out.is_open())
            throw Error(Errc::io, "catalogue: cannot write " + tmp.string());
        out << doc.dump(2) << '\n';
        if (!out.good()) throw Error(Errc::io, "catalogue: write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) throw Error(Errc::io, "catalogue: commit rename failed: " + ec.message());
}

CatalogueEntry Catalogue::register_file(const FileManifest& manifest) {
    manifest.validate();
    const std::string path = normalize_logical_path(manifest.logical_path);

    std::unique_lock lock(mutex_);
    if (entries_.count(path))
        throw Error(Errc::already_exists, "catalogue: '" + path + "' is already registered");
    // A registered file owns its directory subtree; reject nesting in either
    // direction.
    for (std::size_t slash = path.rfind('/'); slash > 0; slash = path.rfind('/', slash - 1)) {
        const auto ancestor = entries_.find(path.substr(0, slash));
        if (ancestor != entries_.end() && ancestor->second.kind == EntryKind::directory)
            throw Error(Errc::already_exists,
                        "catalogue: '" + path + "' is inside registered file '" + ancestor->first + "'");
    }
    const std::string subtree = path + "/";
    for (auto below = entries_.upper_bound(subtree); below != entries_.end(); ++below) {
        if (below->first.compare(0, subtree.size(), subtree) != 0) break;
        if (below->second.kind == EntryKind::directory)
            throw Error(Errc::already_exists,
                        "catalogue: '" + path + "' would contain registered file '" + below->first + "'");
    }

    CatalogueEntry dir;
    dir.logical_path = path;
    dir.kind = EntryKind::directory;
    dir.metadata[kMetaSplit] = std::to_string(manifest.params.k);
    dir.metadata[kMetaTotal] = std::to_string(manifest.params.m);
    dir.metadata[kMetaVersion] = std::to_string(static_cast<unsigned>(kChunkFormatVersion));
    dir.metadata[kMetaSize] = std::to_string(manifest.original_size);
    dir.metadata[kMetaPad] = std::to_string(manifest.pad_length);

    const std::string base = logical_basename(path);
    std::map<std::string, CatalogueEntry> children;
    for (const auto& loc : manifest.chunk_locations) {
        ChunkHeader header;
        header.k = static_cast<std::uint8_t>(manifest.params.k);
        header.m = static_cast<std::uint8_t>(manifest.params.m);
        header.chunk_index = static_cast<std::uint8_t>(loc.chunk_index);
        header.pad_length = manifest.pad_length;

        CatalogueEntry record;
        record.logical_path = path + "/" + chunk_filename(base, header);
        record.kind = EntryKind::chunk_record;
        record.endpoint_id = loc.endpoint_id;
        record.remote_name = loc.remote_name;
        record.metadata[kMetaIndex] = std::to_string(loc.chunk_index);
        children.emplace(record.logical_path, std::move(record));
    }

    entries_.emplace(path, dir);
    for (auto& [child_path, record] : children) entries_.emplace(child_path, std::move(record));
    try {
        save_locked();
    } catch (...) {
        // Roll back the in-memory insert so state matches disk.
        entries_.erase(path);
        for (const auto& [child_path, record] : children) entries_.erase(child_path);
        throw;
    }
    return entries_.at(path);
}

FileManifest Catalogue::manifest_from_entries_locked(const std::string& logical_path) const {
    const auto it = entries_.find(logical_path);
    if (it == entries_.end() || it->second.kind != EntryKind::directory)
        throw Error(Errc::not_found, "catalogue: '" + logical_path + "' is not registered");
    const CatalogueEntry& dir = it->second;

    FileManifest manifest;
    manifest.logical_path = logical_path;
    manifest.params.k = parse_meta_uint(dir, kMetaSplit);
    manifest.params.m = parse_meta_uint(dir, kMetaTotal);
    manifest.original_size = parse_meta_u64(dir, kMetaSize);
    manifest.pad_length = parse_meta_uint(dir, kMetaPad);
    try {
        manifest.params.validate();
    } catch (const Error& e) {
        throw Error(Errc::corruption, "catalogue: '" + logical_path + "': " + e.what());
    }

    // Children live in the half-open key range ["<dir>/", "<dir>/\x7f...").
    const std::string prefix = logical_path + "/";
    std::set<unsigned> indices;
    for (auto child = entries_.upper_bound(prefix); child != entries_.end(); ++child) {
        if (child->first.compare(0, prefix.size(), prefix) != 0) break;
        const CatalogueEntry& record = child->second;
        if (record.kind != EntryKind::chunk_record)
            throw Error(Errc::corruption, "catalogue: unexpected nested directory '" + child->first + "'");

        ParsedChunkName parsed;
        try {
            parsed = parse_chunk_filename(child->first.substr(prefix.size()));
        } catch (const Error& e) {
            throw Error(Errc::corruption,
                        "catalogue: chunk record '" + child->first + "' has a malformed name: " + e.what());
        }
        // Directory metadata is authoritative; the filename must agree.
        if (parsed.total != manifest.params.m)
            throw Error(Errc::corruption, "catalogue: chunk record '" + child->first + "' names m=" +
                                              std::to_string(parsed.total) + " but " + kMetaTotal + "=\"" +
                                              std::to_string(manifest.params.m) + "\"");
        if (parsed.chunk_index >= manifest.params.m)
            throw Error(Errc::corruption,
                        "catalogue: chunk record '" + child->first + "' has index out of range");
        if (const auto meta = record.metadata.find(kMetaIndex); meta != record.metadata.end())
            if (meta->second != std::to_string(parsed.chunk_index))
                throw Error(Errc::corruption, "catalogue: chunk record '" + child->first +
                                                  "' metadata index disagrees with its name");
        if (!indices.insert(parsed.chunk_index).second)
            throw Error(Errc::corruption,
                        "catalogue: duplicate chunk index under '" + logical_path + "'");
        manifest.chunk_locations.push_back({parsed.chunk_index, record.endpoint_id, record.remote_name});
    }

    std::sort(manifest.chunk_locations.begin(), manifest.chunk_locations.end(),
              [](const ChunkLocation& a, const ChunkLocation& b) { return a.chunk_index < b.chunk_index; });
    try {
        manifest.validate();
    } catch (const Error& e) {
        throw Error(Errc::corruption, "catalogue: '" + logical_path + "': " + e.what());
    }
    return manifest;
}

FileManifest Catalogue::lookup(const std::string& logical_path) const {
    const std::string path = normalize_logical_path(logical_path);
    std::shared_lock lock(mutex_);
    return manifest_from_entries_locked(path);
}

std::vector<std::string> Catalogue::list_files(const std::string& prefix) const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [path, entry] : entries_)
        if (entry.kind == EntryKind::directory && path.compare(0, prefix.size(), prefix) == 0)
            out.push_back(path);
    return out;
}

FileManifest Catalogue::unregister(const std::string& logical_path) {
    const std::string path = normalize_logical_path(logical_path);
    std::unique_lock lock(mutex_);
    FileManifest manifest = manifest_from_entries_locked(path);

    const std::string prefix = path + "/";
    auto it = entries_.find(path);
    std::map<std::string, CatalogueEntry> removed;
    removed.emplace(it->first, std::move(it->second));
    entries_.erase(it);
    for (auto child = entries_.upper_bound(prefix); child != entries_.end();) {
        if (child->first.compare(0, prefix.size(), prefix) != 0) break;
        removed.emplace(child->first, std::move(child->second));
        child = entries_.erase(child);
    }
    try {
        save_locked();
    } catch (...) {
        for (auto& [p, entry] : removed) entries_.emplace(p, std::move(entry));
        throw;
    }
    return manifest;
}

bool Catalogue::contains(const std::string& logical_path) const {
    const std::string path = normalize_logical_path(logical_path);
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(path);
    return it != entries_.end() && it->second.kind == EntryKind::directory;
}

std::vector<CatalogueEntry> Catalogue::entries() const {
    std::shared_lock lock(mutex_);
    std::vector<CatalogueEntry> out;
    out.reserve(entries_.size());
    for (const auto& [path, entry] : entries_) out.push_back(entry);
    return out;
}

} // namespace ecstore
