#include "phishforge/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>

#include "json.hpp"
#include "phishforge/errors.hpp"
#include "phishforge/generator.hpp"
#include "phishforge/rng.hpp"
#include "phishforge/snapshot.hpp"
#include "phishforge/version.hpp"

namespace phishforge::dataset {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Label label) {
    return label == Label::Legitimate ? "legitimate" : "phishing";
}

Label label_from_string(std::string_view name) {
    if (name == "legitimate") return Label::Legitimate;
    if (name == "phishing") return Label::Phishing;
    throw CorruptManifest("unknown label: " + std::string(name));
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

std::string index_prefix(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04zu", index);
    return buf;
}

snapshot::WebpageSnapshot load_source(const std::string& source) {
    if (fs::exists(source) && fs::is_directory(source)) {
        return snapshot::load_snapshot(source);
    }
    return snapshot::fetch_snapshot(source);
}

}  // namespace

DatasetManifest build_dataset(const std::vector<std::string>& sources, const BuildOptions& opts,
                              const std::filesystem::path& out) {
    if (sources.empty()) throw AllSourcesFailed("no sources given");

    std::error_code ec;
    if (fs::exists(out) && !fs::is_directory(out)) {
        throw IoError("not a directory: " + out.string());
    }
    if (fs::exists(out) && !fs::is_empty(out, ec)) {
        throw IoError("output directory not empty: " + out.string());
    }
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());

    // Seeds are positional: skipping a failed source must not shift the
    // randomness of the ones after it.
    SplitMix64 stream(opts.global_seed);
    std::vector<std::uint64_t> seeds(sources.size());
    for (auto& seed : seeds) seed = stream.next();

    DatasetManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.global_seed = opts.global_seed;

    for (std::size_t i = 0; i < sources.size(); ++i) {
        std::string prefix = index_prefix(i + 1);
        fs::path legit_dir = out / (prefix + "-legit");
        fs::path phish_dir = out / (prefix + "-phish");
        try {
            snapshot::WebpageSnapshot snap = load_source(sources[i]);

            generator::GenerationConfig config;
            config.k = opts.k;
            config.seed = seeds[i];
            if (!opts.exfil_url.empty()) config.exfil_url = opts.exfil_url;
            config.feature_allowlist = opts.feature_allowlist;
            generator::GeneratedPage page = generator::generate_phish(snap, config);

            auto violations = generator::verify_generated(page);
            if (!violations.empty()) {
                throw Error("generated page failed self-verification: " + violations.front());
            }

            snapshot::save_snapshot(snap, legit_dir);
            generator::save_generated(page, phish_dir);

            DatasetEntry legit;
            legit.label = Label::Legitimate;
            legit.page_path = prefix + "-legit/page.html";
            legit.source_url = snap.source_url;

            DatasetEntry phish;
            phish.label = Label::Phishing;
            phish.page_path = prefix + "-phish/phish.html";
            phish.source_url = snap.source_url;
            phish.seed = seeds[i];
            for (const auto& app : page.applied) phish.features.push_back(app.feature_id);

            manifest.entries.push_back(std::move(legit));
            manifest.entries.push_back(std::move(phish));
        } catch (const Error& e) {
            fs::remove_all(legit_dir, ec);
            fs::remove_all(phish_dir, ec);
            std::cerr << "skipping source " << sources[i] << ": " << e.what() << "\n";
        }
    }

    if (manifest.entries.empty()) {
        throw AllSourcesFailed("every source failed; no corpus written");
    }
    manifest.created_at = rfc3339_now();
    write_manifest(manifest, out / "manifest.json");
    return manifest;
}

void write_manifest(const DatasetManifest& m, const std::filesystem::path& file) {
    json doc;
    doc["created_at"] = m.created_at;
    doc["tool_version"] = m.tool_version;
    doc["global_seed"] = m.global_seed;
    json entries = json::array();
    for (const DatasetEntry& e : m.entries) {
        json item;
        item["label"] = std::string(to_string(e.label));
        item["page_path"] = e.page_path;
        item["source_url"] = e.source_url;
        item["features"] = e.features;
        if (e.seed) item["seed"] = *e.seed;
        entries.push_back(std::move(item));
    }
    doc["entries"] = std::move(entries);

    std::ofstream stream(file, std::ios::binary);
    if (!stream) throw IoError("cannot open for writing: " + file.string());
    stream << doc.dump(2) << "\n";
    if (!stream) throw IoError("write failed: " + file.string());
}

DatasetManifest read_manifest(const std::filesystem::path& file) {
    if (!fs::exists(file)) throw MissingManifest("no manifest at " + file.string());
    std::ifstream stream(file, std::ios::binary);
    if (!stream) throw IoError("cannot open for reading: " + file.string());
    std::string bytes((std::istreambuf_iterator<char>(stream)),
                      std::istreambuf_iterator<char>());

    DatasetManifest m;
    try {
        json doc = json::parse(bytes);
        m.created_at = doc.at("created_at").get<std::string>();
        m.tool_version = doc.at("tool_version").get<std::string>();
        m.global_seed = doc.at("global_seed").get<std::uint64_t>();
        std::set<std::string> paths;
        for (const auto& item : doc.at("entries")) {
            DatasetEntry e;
            e.label = label_from_string(item.at("label").get<std::string>());
            e.page_path = item.at("page_path").get<std::string>();
            e.source_url = item.at("source_url").get<std::string>();
            e.features = item.at("features").get<std::vector<std::string>>();
            if (item.contains("seed")) e.seed = item.at("seed").get<std::uint64_t>();
            if (e.label == Label::Legitimate && (!e.features.empty() || e.seed)) {
                throw CorruptManifest("legitimate entry carries phishing fields: " +
                                      e.page_path);
            }
            if (!paths.insert(e.page_path).second) {
                throw CorruptManifest("duplicate page_path: " + e.page_path);
            }
            m.entries.push_back(std::move(e));
        }
    } catch (const json::exception& ex) {
        throw CorruptManifest(file.string() + ": " + ex.what());
    }
    return m;
}

DiversityReport diversity_report(const DatasetManifest& m) {
    DiversityReport report;
    std::set<std::vector<std::string>> combos;
    for (const DatasetEntry& e : m.entries) {
        if (e.label != Label::Phishing) continue;
        std::vector<std::string> combo = e.features;
        std::sort(combo.begin(), combo.end());
        for (const std::string& id : e.features) ++report.usage[id];
        combos.insert(std::move(combo));
    }
    report.distinct_combinations = combos.size();
    return report;
}

}  // namespace phishforge::dataset
