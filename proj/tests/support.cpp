#include "support.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "fixture_png.hpp"

namespace fs = std::filesystem;
using phishforge::snapshot::AssetKind;
using phishforge::snapshot::AssetRecord;
using phishforge::snapshot::WebpageSnapshot;

namespace support {

TempDir::TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "phishforge-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& p, std::string_view bytes) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::string fixture_html() {
    return R"(<!doctype html>
<html>
<head>
<meta charset="utf-8">
<title>Acme Bank - Sign in</title>
<link rel="shortcut icon" href="https://acme-bank.example/favicon.png">
<link rel="stylesheet" href="/css/site.css">
</head>
<body>
<header><img src="/img/brand.png" alt="Acme Bank" class="site-logo"></header>
<nav><a href="/">Home</a> <a href="/accounts">Accounts</a> <a href="/support">Support</a> <a href="https://acme-bank.example/security">Security</a></nav>
<main>
<form action="/session" method="post" id="login">
<input type="text" name="user">
<input type="password" name="pass">
<button type="submit">Sign in</button>
</form>
</main>
</body>
</html>
)";
}

WebpageSnapshot make_fixture_snapshot() {
    WebpageSnapshot s;
    s.source_url = kFixtureUrl;
    s.final_url = kFixtureUrl;
    s.status = 200;
    s.fetched_at = "2025-01-15T12:00:00Z";
    s.html = fixture_html();

    auto attach = [&](std::string_view original, std::string_view bytes, AssetKind kind) {
        AssetRecord rec;
        rec.original_url = original;
        rec.local_path =
            "assets/" + phishforge::snapshot::asset_filename(bytes, original);
        rec.kind = kind;
        rec.content_type = "image/png";
        s.asset_bytes[*rec.local_path] = std::string(bytes);
        s.assets[rec.original_url] = std::move(rec);
    };
    attach(kFaviconUrl, fixtures::gray2x2_png(), AssetKind::Favicon);
    attach(kLogoUrl, fixtures::test2x2_png(), AssetKind::Image);
    return s;
}

WebpageSnapshot make_bare_snapshot(std::string html) {
    WebpageSnapshot s;
    s.source_url = kFixtureUrl;
    s.final_url = kFixtureUrl;
    s.status = 200;
    s.fetched_at = "2025-01-15T12:00:00Z";
    s.html = std::move(html);
    return s;
}

std::vector<std::string> save_fixture_sources(const fs::path& dir, std::size_t n) {
    WebpageSnapshot snap = make_fixture_snapshot();
    std::vector<std::string> sources;
    sources.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        fs::path d = dir / ("src-" + std::to_string(i));
        phishforge::snapshot::save_snapshot(snap, d);
        sources.push_back(d.string());
    }
    return sources;
}

}  // namespace support
