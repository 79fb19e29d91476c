#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace crackweak {

enum class Split { train, test };

struct ManifestEntry {
    std::string image_id;
    std::filesystem::path image_path;
    std::filesystem::path annotation_path;
    Split split = Split::train;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::vector<ManifestEntry> train_entries() const;
    std::vector<ManifestEntry> test_entries() const;
};

/// Loads a dataset laid out as root/images/*.png + root/annotations/*.png with
/// shared stems. Entries are sorted by image id. Ids listed in the optional
/// split file (one per line) become the test split; everything else is train.
/// Missing annotations, duplicate stems, unreadable split files and split ids
/// without a matching image are all distinct errors; image and annotation
/// dimensions are checked per entry.
DatasetManifest load_manifest(const std::filesystem::path& root,
                              const std::optional<std::filesystem::path>& split_file = {});

/// Loads an explicit JSON manifest:
///   {"entries": [{"image_id": ..., "image": ..., "annotation": ..., "split": "train"|"test"}]}
/// Relative paths resolve against the manifest's directory. The optional split
/// file overrides the per-entry splits.
DatasetManifest load_manifest_json(const std::filesystem::path& manifest_path,
                                   const std::optional<std::filesystem::path>& split_file = {});

/// Reads a split file: one test image id per line, blank lines ignored.
std::vector<std::string> read_split_file(const std::filesystem::path& path);

}  // namespace crackweak
