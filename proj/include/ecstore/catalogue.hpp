#pragma once

#include "ecstore/codec.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace ecstore {

/// Metadata keys carried by directory entries. All erasure-coding keys use
/// the EC_ prefix to keep the tag namespace collision-free.
inline constexpr const char* kMetaSplit = "EC_SPLIT";
inline constexpr const char* kMetaTotal = "EC_TOTAL";
inline constexpr const char* kMetaVersion = "EC_VERSION";
inline constexpr const char* kMetaSize = "EC_SIZE";
inline constexpr const char* kMetaPad = "EC_PAD";
inline constexpr const char* kMetaIndex = "EC_INDEX";

enum class EntryKind { directory, chunk_record };

struct CatalogueEntry {
    std::string logical_path;
    EntryKind kind = EntryKind::directory;
    std::map<std::string, std::string> metadata;
    // chunk records only:
    std::string endpoint_id;
    std::string remote_name;

    bool operator==(const CatalogueEntry&) const = default;
};

struct ChunkLocation {
    unsigned chunk_index = 0;
    std::string endpoint_id;
    std::string remote_name;

    bool operator==(const ChunkLocation&) const = default;
};

struct FileManifest {
    std::string logical_path;
    CodingParams params;
    std::uint64_t original_size = 0;
    std::uint32_t pad_length = 0;
    std::vector<ChunkLocation> chunk_locations; // distinct indices, at most m

    void validate() const; // throws Errc::invalid_params
    bool operator==(const FileManifest&) const = default;
};

/// Logical namespace for stored files: one directory entry per file plus one
/// chunk record per placed chunk, persisted as a single JSON document.
/// Mutations are serialized through one writer; readers may run concurrently.
class Catalogue {
public:
    /// Loads the catalogue at `path` if it exists, otherwise starts empty.
    explicit Catalogue(std::filesystem::path path);

    CatalogueEntry register_file(const FileManifest& manifest);
    FileManifest lookup(const std::string& logical_path) const;
    std::vector<std::string> list_files(const std::string& prefix) const;
    FileManifest unregister(const std::string& logical_path);

    bool contains(const std::string& logical_path) const;
    /// All entries, ordered by path. Mainly for inspection and tests.
    std::vector<CatalogueEntry> entries() const;

    const std::filesystem::path& path() const { return path_; }

private:
    void load();
    void save_locked() const;
    FileManifest manifest_from_entries_locked(const std::string& logical_path) const;

    std::filesystem::path path_;
    std::map<std::string, CatalogueEntry> entries_;
    mutable std::shared_mutex mutex_;
};

/// Validates and normalizes a logical path: '/'-separated, absolute, no
/// empty or dot segments. Throws Errc::invalid_params.
std::string normalize_logical_path(std::string_view path);

/// Final segment of a logical path.
std::string logical_basename(std::string_view path);

} // namespace ecstore
