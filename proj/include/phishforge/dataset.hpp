#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phishforge::dataset {

enum class Label { Legitimate, Phishing };

std::string_view to_string(Label label);
Label label_from_string(std::string_view name);

struct DatasetEntry {
    Label label = Label::Legitimate;
    std::string page_path;  // relative to the corpus root
    std::string source_url;
    std::optional<std::uint64_t> seed;  // phishing only
    std::vector<std::string> features;  // phishing only

    bool operator==(const DatasetEntry&) const = default;
};

struct DatasetManifest {
    std::string created_at;  // RFC 3339, UTC
    std::string tool_version;
    std::uint64_t global_seed = 0;
    std::vector<DatasetEntry> entries;

    bool operator==(const DatasetManifest&) const = default;
};

struct BuildOptions {
    std::uint64_t k = 1;
    std::uint64_t global_seed = 0;
    std::string exfil_url;  // empty -> generator default
    std::optional<std::vector<std::string>> feature_allowlist;
};

// Each source is a snapshot directory or an http(s) URL. A source yields a
// legit/phish entry pair or, on failure, nothing (skipped and logged to
// stderr). Throws AllSourcesFailed when no source survives.
DatasetManifest build_dataset(const std::vector<std::string>& sources, const BuildOptions& opts,
                              const std::filesystem::path& out);

void write_manifest(const DatasetManifest& m, const std::filesystem::path& file);
DatasetManifest read_manifest(const std::filesystem::path& file);

struct DiversityReport {
    std::map<std::string, std::size_t> usage;  // feature id -> count
    std::size_t distinct_combinations = 0;     // over sorted id sets
};

DiversityReport diversity_report(const DatasetManifest& m);

}  // namespace phishforge::dataset
