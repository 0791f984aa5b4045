#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "phishforge/version.hpp"

namespace phishforge::snapshot {

enum class AssetKind { Favicon, Image, Stylesheet, Script, Other };

std::string_view to_string(AssetKind kind);
AssetKind asset_kind_from_string(std::string_view name);

struct AssetRecord {
    std::string original_url;
    // "assets/<hash>.<ext>"; absent when the download failed.
    std::optional<std::string> local_path;
    AssetKind kind = AssetKind::Other;
    std::string content_type;

    bool operator==(const AssetRecord&) const = default;
};

struct FetchConfig {
    std::chrono::seconds timeout{30};
    int redirect_limit = 5;
    std::string user_agent{kDefaultUserAgent};
    std::size_t max_assets = 200;
    std::size_t max_asset_bytes = 5 * 1024 * 1024;
    int concurrency = 8;
};

struct WebpageSnapshot {
    std::string source_url;
    std::string final_url;
    int status = 0;
    std::string fetched_at;  // RFC 3339, UTC
    std::string html;        // UTF-8 after transcode
    std::map<std::string, AssetRecord> assets;       // keyed by original_url
    std::map<std::string, std::string> asset_bytes;  // keyed by local_path

    const AssetRecord* asset_for(std::string_view original_url) const;
    const std::string* bytes_for(const AssetRecord& rec) const;

    bool operator==(const WebpageSnapshot&) const = default;
};

WebpageSnapshot fetch_snapshot(const std::string& url, const FetchConfig& config = {});
std::filesystem::path save_snapshot(const WebpageSnapshot& s, const std::filesystem::path& dir);
WebpageSnapshot load_snapshot(const std::filesystem::path& dir);

std::string sha256_hex(std::string_view bytes);
// "<first 16 hash hex chars>.<sanitized extension>"
std::string asset_filename(std::string_view bytes, std::string_view original_url);

}  // namespace phishforge::snapshot
