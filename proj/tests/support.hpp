#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phishforge/snapshot.hpp"

namespace support {

// Scratch directory under the system temp root, removed on scope exit.
class TempDir {
  public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(std::string_view sub) const {
        return path_ / sub;
    }

  private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view bytes);

inline constexpr std::string_view kFixtureUrl = "https://acme-bank.example/login";
inline constexpr std::string_view kFaviconUrl = "https://acme-bank.example/favicon.png";
inline constexpr std::string_view kLogoUrl = "https://acme-bank.example/img/brand.png";

// Login page in the shape the generator targets: a credential form, four
// anchors outside the replacement set, a favicon link and a logo image.
// Every registry feature is applicable to it.
std::string fixture_html();

// In-memory snapshot of fixture_html() with both image assets attached
// (favicon: uniform-gray 2x2 PNG, logo: four-color 2x2 PNG).
phishforge::snapshot::WebpageSnapshot make_fixture_snapshot();

// Snapshot wrapping the given html, no assets.
phishforge::snapshot::WebpageSnapshot make_bare_snapshot(std::string html);

// Writes n copies of the fixture snapshot under dir/src-<i>; returns the
// directory paths as dataset source strings.
std::vector<std::string> save_fixture_sources(const std::filesystem::path& dir, std::size_t n);

}  // namespace support
