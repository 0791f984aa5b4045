#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phishforge/features.hpp"
#include "phishforge/rng.hpp"
#include "phishforge/snapshot.hpp"

namespace phishforge::generator {

struct GenerationConfig {
    std::uint64_t k = 1;
    std::uint64_t seed = 0;
    std::string exfil_url{features::kDefaultExfilUrl};
    std::optional<std::vector<std::string>> feature_allowlist;
};

struct GeneratedPage {
    std::string html;
    std::vector<features::FeatureApplication> applied;  // application order
    std::string source_url;
    std::uint64_t seed = 0;
    std::uint64_t shortfall = 0;
    std::map<std::string, std::string> asset_files;  // relative path -> bytes

    bool operator==(const GeneratedPage&) const = default;
};

// Partial Fisher-Yates prefix of length min(k, n); distinct, seeded.
std::vector<std::string> sample_features(std::vector<std::string> applicable_ids,
                                         std::uint64_t k, SplitMix64& rng);

// Throws NoApplicableFeatures when nothing in the (filtered) registry
// applies to the page.
GeneratedPage generate_phish(const snapshot::WebpageSnapshot& s, const GenerationConfig& config);

// Re-parses page.html and re-checks every recorded application against it.
// Empty result means the page is self-consistent.
std::vector<std::string> verify_generated(const GeneratedPage& page);

void save_generated(const GeneratedPage& page, const std::filesystem::path& dir);
GeneratedPage load_generated(const std::filesystem::path& dir);

}  // namespace phishforge::generator
