#include "phishforge/snapshot.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <ctime>
#include <fstream>
#include <set>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "phishforge/dom.hpp"
#include "phishforge/encoding.hpp"
#include "phishforge/errors.hpp"
#include "phishforge/url.hpp"

namespace phishforge::snapshot {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(AssetKind kind) {
    switch (kind) {
        case AssetKind::Favicon: return "favicon";
        case AssetKind::Image: return "image";
        case AssetKind::Stylesheet: return "stylesheet";
        case AssetKind::Script: return "script";
        case AssetKind::Other: return "other";
    }
    return "other";
}

AssetKind asset_kind_from_string(std::string_view name) {
    if (name == "favicon") return AssetKind::Favicon;
    if (name == "image") return AssetKind::Image;
    if (name == "stylesheet") return AssetKind::Stylesheet;
    if (name == "script") return AssetKind::Script;
    if (name == "other") return AssetKind::Other;
    throw CorruptManifest("unknown asset kind: " + std::string(name));
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string asset_filename(std::string_view bytes, std::string_view original_url) {
    std::string ext = "bin";
    url::Url u = url::parse_reference(original_url);
    auto slash = u.path.find_last_of('/');
    std::string last = slash == std::string::npos ? u.path : u.path.substr(slash + 1);
    if (auto dot = last.find_last_of('.'); dot != std::string::npos && dot + 1 < last.size()) {
        std::string candidate = last.substr(dot + 1);
        bool clean = candidate.size() <= 8 &&
                     std::all_of(candidate.begin(), candidate.end(), [](unsigned char c) {
                         return std::isalnum(c) != 0;
                     });
        if (clean) {
            std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            ext = candidate;
        }
    }
    return sha256_hex(bytes).substr(0, 16) + "." + ext;
}

const AssetRecord* WebpageSnapshot::asset_for(std::string_view original_url) const {
    auto it = assets.find(std::string(original_url));
    return it == assets.end() ? nullptr : &it->second;
}

const std::string* WebpageSnapshot::bytes_for(const AssetRecord& rec) const {
    if (!rec.local_path) return nullptr;
    auto it = asset_bytes.find(*rec.local_path);
    return it == asset_bytes.end() ? nullptr : &it->second;
}

namespace {

std::string rfc3339_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string media_type(const std::string& content_type) {
    auto semi = content_type.find(';');
    std::string out = semi == std::string::npos ? content_type : content_type.substr(0, semi);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    std::size_t i = 0;
    while (i < out.size() && out[i] == ' ') ++i;
    return out.substr(i);
}

struct HttpResponse {
    int status = 0;
    std::string body;
    std::string content_type;
};

bool is_redirect(int status) {
    return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

// One GET with manual redirect handling; final URL written back.
HttpResponse http_get(url::Url& at, const FetchConfig& config, std::size_t max_body) {
    int hops = 0;
    for (;;) {
        httplib::Client client(at.origin());
        client.set_follow_location(false);
        client.set_connection_timeout(config.timeout);
        client.set_read_timeout(config.timeout);
        client.set_write_timeout(config.timeout);

        httplib::Headers headers = {{"User-Agent", config.user_agent}, {"Accept", "*/*"}};
        auto res = client.Get(at.path_with_query(), headers);
        if (!res) {
            throw NetworkError("GET " + at.serialize() + ": " + httplib::to_string(res.error()));
        }
        if (is_redirect(res->status)) {
            auto location = res->get_header_value("Location");
            if (location.empty()) {
                throw NetworkError("redirect without Location from " + at.serialize());
            }
            if (++hops > config.redirect_limit) {
                throw RedirectLoop("redirect limit " + std::to_string(config.redirect_limit) +
                                   " exceeded at " + at.serialize());
            }
            url::Url next = url::resolve(at, location);
            if (!next.is_http()) {
                throw NetworkError("redirect to non-http target: " + next.serialize());
            }
            at = next;
            continue;
        }
        if (max_body > 0 && res->body.size() > max_body) {
            throw NetworkError("body exceeds size cap: " + at.serialize());
        }
        return {res->status, res->body, res->get_header_value("Content-Type")};
    }
}

struct DiscoveredAsset {
    std::string original_url;  // absolute
    AssetKind kind;
};

std::vector<DiscoveredAsset> discover_assets(dom::DocumentTree& tree, const url::Url& base,
                                             std::size_t max_assets) {
    std::vector<DiscoveredAsset> out;
    std::set<std::string> seen;
    bool favicon_declared = false;

    auto add = [&](std::string_view ref, AssetKind kind) {
        if (ref.empty() || out.size() >= max_assets) return;
        url::Url resolved = url::resolve(base, ref);
        if (!resolved.is_http()) return;
        resolved.has_fragment = false;
        resolved.fragment.clear();
        std::string abs = resolved.serialize();
        if (seen.insert(abs).second) out.push_back({abs, kind});
    };

    for (dom::Node* link : tree.select_all(dom::NodeSelector::by_tag("link"))) {
        const std::string* rel = link->attribute("rel");
        const std::string* href = link->attribute("href");
        if (!rel || !href) continue;
        dom::NodeSelector icon_sel = dom::NodeSelector::by_tag("link").with_attr_contains(
            "rel", "icon");
        if (icon_sel.matches(*link)) {
            favicon_declared = true;
            add(*href, AssetKind::Favicon);
            continue;
        }
        dom::NodeSelector css_sel = dom::NodeSelector::by_tag("link").with_attr_contains(
            "rel", "stylesheet");
        if (css_sel.matches(*link)) add(*href, AssetKind::Stylesheet);
    }
    for (dom::Node* img : tree.select_all(dom::NodeSelector::by_tag("img"))) {
        if (const std::string* src = img->attribute("src")) add(*src, AssetKind::Image);
    }
    if (!favicon_declared) add("/favicon.ico", AssetKind::Favicon);
    return out;
}

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

// "assets/<name>" with no separators or dot-segments in <name>.
bool safe_local_path(const std::string& p) {
    if (!p.starts_with("assets/")) return false;
    std::string name = p.substr(7);
    if (name.empty() || name == "." || name == "..") return false;
    return name.find('/') == std::string::npos && name.find('\\') == std::string::npos;
}

}  // namespace

WebpageSnapshot fetch_snapshot(const std::string& url_string, const FetchConfig& config) {
    url::Url at = url::parse_http_url(url_string);

    WebpageSnapshot snap;
    snap.source_url = at.serialize();

    HttpResponse page = http_get(at, config, 0);
    snap.final_url = at.serialize();
    snap.status = page.status;
    snap.fetched_at = rfc3339_now();

    std::string type = media_type(page.content_type);
    if (!type.empty() && type.find("html") == std::string::npos) {
        throw NonHtmlResponse(snap.final_url + " returned " + type);
    }
    if (page.status / 100 == 2 && page.body.empty()) {
        throw NetworkError("empty HTML body from " + snap.final_url);
    }

    std::string charset = encoding::sniff_charset(page.body, page.content_type);
    snap.html = encoding::to_utf8(page.body, charset);

    dom::DocumentTree tree = dom::DocumentTree::parse(snap.html);
    std::vector<DiscoveredAsset> found = discover_assets(tree, at, config.max_assets);

    struct Download {
        AssetRecord record;
        std::string bytes;
        bool ok = false;
    };
    std::vector<Download> results(found.size());
    std::atomic<std::size_t> cursor{0};

    auto worker = [&] {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= found.size()) return;
            Download& slot = results[i];
            slot.record.original_url = found[i].original_url;
            slot.record.kind = found[i].kind;
            try {
                url::Url target = url::parse_http_url(found[i].original_url);
                HttpResponse res = http_get(target, config, config.max_asset_bytes);
                if (res.status / 100 != 2) continue;
                slot.record.content_type = media_type(res.content_type);
                slot.bytes = std::move(res.body);
                slot.ok = true;
            } catch (const Error&) {
                // failed downloads keep their record, minus a local path
            }
        }
    };

    std::size_t nthreads = std::min<std::size_t>(
        found.size(), static_cast<std::size_t>(std::max(1, config.concurrency)));
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < nthreads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    for (Download& d : results) {
        if (d.record.original_url.empty()) continue;
        if (d.ok) {
            std::string name = asset_filename(d.bytes, d.record.original_url);
            d.record.local_path = "assets/" + name;
            snap.asset_bytes[*d.record.local_path] = std::move(d.bytes);
        }
        snap.assets.emplace(d.record.original_url, std::move(d.record));
    }
    return snap;
}

std::filesystem::path save_snapshot(const WebpageSnapshot& s, const std::filesystem::path& dir) {
    std::error_code ec;
    if (fs::exists(dir) && !fs::is_directory(dir)) {
        throw IoError("not a directory: " + dir.string());
    }
    if (fs::exists(dir) && !fs::is_empty(dir, ec)) {
        throw IoError("output directory not empty: " + dir.string());
    }
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    json manifest;
    manifest["source_url"] = s.source_url;
    manifest["final_url"] = s.final_url;
    manifest["status"] = s.status;
    manifest["fetched_at"] = s.fetched_at;
    json assets = json::array();
    for (const auto& [original_url, rec] : s.assets) {
        json item;
        item["original_url"] = rec.original_url;
        item["local_path"] = rec.local_path ? json(*rec.local_path) : json(nullptr);
        item["kind"] = std::string(to_string(rec.kind));
        item["content_type"] = rec.content_type;
        assets.push_back(std::move(item));
    }
    manifest["assets"] = std::move(assets);

    write_file(dir / "snapshot.json", manifest.dump(2) + "\n");
    write_file(dir / "page.html", s.html);

    if (!s.asset_bytes.empty()) {
        fs::create_directories(dir / "assets", ec);
        if (ec) throw IoError("cannot create assets dir: " + ec.message());
        for (const auto& [local_path, bytes] : s.asset_bytes) {
            if (!safe_local_path(local_path)) {
                throw IoError("unsafe asset path: " + local_path);
            }
            write_file(dir / local_path, bytes);
        }
    }
    return dir;
}

WebpageSnapshot load_snapshot(const std::filesystem::path& dir) {
    if (!fs::exists(dir / "snapshot.json")) {
        throw MissingManifest("no snapshot.json in " + dir.string());
    }
    json manifest;
    try {
        manifest = json::parse(read_file(dir / "snapshot.json"));
    } catch (const json::exception& e) {
        throw CorruptManifest(dir.string() + ": " + e.what());
    }

    WebpageSnapshot snap;
    try {
        snap.source_url = manifest.at("source_url").get<std::string>();
        snap.final_url = manifest.at("final_url").get<std::string>();
        snap.status = manifest.at("status").get<int>();
        snap.fetched_at = manifest.at("fetched_at").get<std::string>();
        for (const auto& item : manifest.at("assets")) {
            AssetRecord rec;
            rec.original_url = item.at("original_url").get<std::string>();
            if (!item.at("local_path").is_null()) {
                rec.local_path = item.at("local_path").get<std::string>();
            }
            rec.kind = asset_kind_from_string(item.at("kind").get<std::string>());
            rec.content_type = item.at("content_type").get<std::string>();
            snap.assets.emplace(rec.original_url, std::move(rec));
        }
    } catch (const json::exception& e) {
        throw CorruptManifest(dir.string() + ": " + e.what());
    }

    if (!fs::exists(dir / "page.html")) {
        throw MissingHtml("no page.html in " + dir.string());
    }
    snap.html = read_file(dir / "page.html");

    for (const auto& [original_url, rec] : snap.assets) {
        if (!rec.local_path) continue;
        if (!safe_local_path(*rec.local_path)) {
            throw CorruptManifest("unsafe local_path: " + *rec.local_path);
        }
        fs::path file = dir / *rec.local_path;
        if (!fs::exists(file)) {
            throw CorruptManifest("manifest references absent file: " + *rec.local_path);
        }
        snap.asset_bytes[*rec.local_path] = read_file(file);
    }
    return snap;
}

}  // namespace phishforge::snapshot
