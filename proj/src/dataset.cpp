#include "crackweak/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "crackweak/errors.hpp"
#include "crackweak/png_io.hpp"

namespace fs = std::filesystem;

namespace crackweak {

namespace {

void check_entry_dims(const ManifestEntry& entry) {
    const auto [iw, ih] = read_png_dims(entry.image_path);
    const auto [aw, ah] = read_png_dims(entry.annotation_path);
    if (iw != aw || ih != ah) {
        throw StructuralError(entry.image_id + ": image is " + std::to_string(iw) + "x" +
                              std::to_string(ih) + " but annotation is " + std::to_string(aw) +
                              "x" + std::to_string(ah));
    }
}

void apply_split(std::vector<ManifestEntry>& entries, const fs::path& split_file) {
    const std::vector<std::string> test_ids = read_split_file(split_file);
    std::unordered_set<std::string> known;
    for (const auto& e : entries) known.insert(e.image_id);
    for (const auto& id : test_ids) {
        if (!known.count(id)) {
            throw InputError("split file names unknown image id '" + id + "'");
        }
    }
    const std::unordered_set<std::string> test_set(test_ids.begin(), test_ids.end());
    for (auto& e : entries) {
        e.split = test_set.count(e.image_id) ? Split::test : Split::train;
    }
}

}  // namespace

std::vector<ManifestEntry> DatasetManifest::train_entries() const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries) {
        if (e.split == Split::train) out.push_back(e);
    }
    return out;
}

std::vector<ManifestEntry> DatasetManifest::test_entries() const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries) {
        if (e.split == Split::test) out.push_back(e);
    }
    return out;
}

std::vector<std::string> read_split_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FileMissingError("cannot read split file " + path.string());
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        if (start > 0) line.erase(0, start);
        if (!line.empty()) ids.push_back(line);
    }
    return ids;
}

DatasetManifest load_manifest(const fs::path& root, const std::optional<fs::path>& split_file) {
    const fs::path image_dir = root / "images";
    const fs::path annotation_dir = root / "annotations";
    if (!fs::is_directory(image_dir)) {
        throw FileMissingError("missing image directory " + image_dir.string());
    }
    if (!fs::is_directory(annotation_dir)) {
        throw FileMissingError("missing annotation directory " + annotation_dir.string());
    }

    // Directory iteration order is unspecified; collect then sort by stem.
    std::set<fs::path> image_files;
    for (const auto& de : fs::directory_iterator(image_dir)) {
        if (de.is_regular_file() && de.path().extension() == ".png") {
            image_files.insert(de.path());
        }
    }
    if (image_files.empty()) {
        throw InputError("no .png images under " + image_dir.string());
    }

    DatasetManifest manifest;
    std::unordered_set<std::string> seen;
    for (const auto& image_path : image_files) {
        const std::string id = image_path.stem().string();
        if (!seen.insert(id).second) {
            throw InputError("duplicate image stem '" + id + "'");
        }
        const fs::path annotation_path = annotation_dir / (id + ".png");
        if (!fs::is_regular_file(annotation_path)) {
            throw FileMissingError("missing annotation for image '" + id + "' (expected " +
                                   annotation_path.string() + ")");
        }
        ManifestEntry entry{id, image_path, annotation_path, Split::train};
        check_entry_dims(entry);
        manifest.entries.push_back(std::move(entry));
    }

    if (split_file) apply_split(manifest.entries, *split_file);
    return manifest;
}

DatasetManifest load_manifest_json(const fs::path& manifest_path,
                                   const std::optional<fs::path>& split_file) {
    std::ifstream in(manifest_path);
    if (!in) throw FileMissingError("cannot read manifest " + manifest_path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FileFormatError("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        throw FileFormatError("manifest must be an object with an 'entries' array");
    }

    const fs::path base = manifest_path.parent_path();
    const auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    DatasetManifest manifest;
    std::unordered_set<std::string> seen;
    for (const auto& item : doc["entries"]) {
        ManifestEntry entry;
        try {
            entry.image_id = item.at("image_id").get<std::string>();
            entry.image_path = resolve(item.at("image").get<std::string>());
            entry.annotation_path = resolve(item.at("annotation").get<std::string>());
            const std::string split = item.value("split", "train");
            if (split == "train") {
                entry.split = Split::train;
            } else if (split == "test") {
                entry.split = Split::test;
            } else {
                throw FileFormatError("entry '" + entry.image_id + "' has unknown split '" +
                                      split + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw FileFormatError("malformed manifest entry: " + std::string(e.what()));
        }
        if (!seen.insert(entry.image_id).second) {
            throw InputError("duplicate image id '" + entry.image_id + "'");
        }
        if (!fs::is_regular_file(entry.image_path)) {
            throw FileMissingError("missing image file " + entry.image_path.string());
        }
        if (!fs::is_regular_file(entry.annotation_path)) {
            throw FileMissingError("missing annotation file " + entry.annotation_path.string());
        }
        check_entry_dims(entry);
        manifest.entries.push_back(std::move(entry));
    }
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.image_id < b.image_id; });

    if (split_file) apply_split(manifest.entries, *split_file);
    return manifest;
}

}  // namespace crackweak
