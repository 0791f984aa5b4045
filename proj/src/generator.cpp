#include "phishforge/generator.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

#include "json.hpp"
#include "phishforge/dom.hpp"
#include "phishforge/errors.hpp"

namespace phishforge::generator {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> sample_features(std::vector<std::string> applicable_ids,
                                         std::uint64_t k, SplitMix64& rng) {
    std::size_t n = applicable_ids.size();
    std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(k, n));
    for (std::size_t i = 0; i < take; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_bounded(n - i));
        std::swap(applicable_ids[i], applicable_ids[j]);
    }
    applicable_ids.resize(take);
    return applicable_ids;
}

GeneratedPage generate_phish(const snapshot::WebpageSnapshot& s, const GenerationConfig& config) {
    if (config.k < 1) throw Error("k must be at least 1");

    std::vector<const features::PhishFeature*> considered;
    if (config.feature_allowlist) {
        std::set<std::string_view> allowed;
        for (const std::string& id : *config.feature_allowlist) {
            if (!features::find_feature(id)) throw UnknownFeature("unknown feature id: " + id);
            allowed.insert(id);
        }
        for (const features::PhishFeature* f : features::registry()) {
            if (allowed.contains(f->id())) considered.push_back(f);
        }
    } else {
        auto all = features::registry();
        considered.assign(all.begin(), all.end());
    }

    dom::DocumentTree tree = dom::DocumentTree::parse(s.html);
    std::vector<std::string> applicable_ids;
    for (const features::PhishFeature* f : considered) {
        if (f->applicable(tree, s)) applicable_ids.emplace_back(f->id());
    }
    if (applicable_ids.empty()) {
        throw NoApplicableFeatures("no feature applies to " + s.source_url);
    }

    SplitMix64 rng(config.seed);
    std::vector<std::string> sampled = sample_features(applicable_ids, config.k, rng);

    GeneratedPage page;
    page.source_url = s.source_url;
    page.seed = config.seed;

    features::AssetSink sink;
    for (const std::string& id : sampled) {
        features::FeatureContext ctx{tree, s, rng, sink, config.exfil_url};
        page.applied.push_back(features::find_feature(id)->apply(ctx));
    }

    page.html = tree.serialize();
    page.shortfall = config.k - page.applied.size();
    page.asset_files = sink.files();
    return page;
}

// ---------------------------------------------------------------------------
// Verification: every check below reads only the serialized page and the
// application records, so a tampered artifact is caught without rerunning
// the generator.

namespace {

using Violations = std::vector<std::string>;

void note(Violations& v, const features::FeatureApplication& app, const std::string& msg) {
    v.push_back(app.feature_id + ": " + msg);
}

const std::string* detail(const features::FeatureApplication& app, const std::string& key) {
    auto it = app.details.find(key);
    return it == app.details.end() ? nullptr : &it->second;
}

void verify_form_action(dom::DocumentTree& tree, const features::FeatureApplication& app,
                        Violations& out) {
    auto forms = tree.select_all(dom::NodeSelector::by_tag("form"));
    if (forms.size() != app.nodes_touched) {
        note(out, app,
             "expected " + std::to_string(app.nodes_touched) + " forms, page has " +
                 std::to_string(forms.size()));
        return;
    }
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const std::string* expected = detail(app, "form." + std::to_string(i) + ".new");
        const std::string* action = forms[i]->attribute("action");
        if (!expected) {
            note(out, app, "missing record for form " + std::to_string(i));
        } else if (!action || *action != *expected) {
            note(out, app,
                 "form " + std::to_string(i) + " action is \"" + (action ? *action : "") +
                     "\", recorded \"" + *expected + "\"");
        }
    }
}

void verify_anchors(dom::DocumentTree& tree, const features::FeatureApplication& app,
                    Violations& out) {
    auto anchors = tree.select_all(dom::NodeSelector::by_tag("a"));
    std::map<std::string, std::size_t> counts;
    std::size_t with_href = 0;
    bool intact = true;
    for (dom::Node* a : anchors) {
        const std::string* href = a->attribute("href");
        if (!href) continue;
        ++with_href;
        bool known = std::find(features::kAnchorReplacements.begin(),
                               features::kAnchorReplacements.end(),
                               *href) != features::kAnchorReplacements.end();
        if (!known) {
            note(out, app, "anchor href \"" + *href + "\" is outside the replacement set");
            intact = false;
            continue;
        }
        ++counts[*href];
    }
    if (!intact) return;
    for (std::string_view value : features::kAnchorReplacements) {
        std::string key = "final." + std::string(value);
        const std::string* recorded = detail(app, key);
        std::size_t actual = counts[std::string(value)];
        if (!recorded || *recorded != std::to_string(actual)) {
            note(out, app,
                 "count for \"" + std::string(value) + "\" is " + std::to_string(actual) +
                     ", recorded " + (recorded ? *recorded : "(missing)"));
        }
    }
    auto count_of = [&](const char* key) -> std::optional<std::size_t> {
        const std::string* value = detail(app, key);
        if (!value || value->empty()) return std::nullopt;
        char* end = nullptr;
        auto parsed = std::strtoull(value->c_str(), &end, 10);
        if (*end != '\0') return std::nullopt;
        return static_cast<std::size_t>(parsed);
    };
    auto rewritten = count_of("rewritten");
    auto preexisting = count_of("preexisting");
    if (!rewritten || !preexisting || *rewritten + *preexisting != with_href) {
        note(out, app, "anchor totals do not add up");
    }
}

void verify_icon_href(dom::DocumentTree& tree, const features::FeatureApplication& app,
                      Violations& out) {
    const std::string* expected = detail(app, "new");
    if (!expected) {
        note(out, app, "record lacks a new href");
        return;
    }
    auto links = tree.select_all(
        dom::NodeSelector::by_tag("link").with_attr_contains("rel", "icon"));
    bool hit = std::any_of(links.begin(), links.end(), [&](dom::Node* link) {
        const std::string* href = link->attribute("href");
        return href && *href == *expected;
    });
    if (!hit) note(out, app, "no icon link points at " + *expected);
}

void verify_logo_src(dom::DocumentTree& tree, const features::FeatureApplication& app,
                     Violations& out) {
    const std::string* expected = detail(app, "new");
    if (!expected) {
        note(out, app, "record lacks a new src");
        return;
    }
    auto imgs = tree.select_all(dom::NodeSelector::by_tag("img"));
    bool hit = std::any_of(imgs.begin(), imgs.end(), [&](dom::Node* img) {
        const std::string* src = img->attribute("src");
        return src && *src == *expected;
    });
    if (!hit) note(out, app, "no img points at " + *expected);
}

void verify_style_rule(dom::DocumentTree& tree, const features::FeatureApplication& app,
                       const std::string& needle, Violations& out) {
    auto styles = tree.select_all(dom::NodeSelector::by_tag("style"));
    bool hit = std::any_of(styles.begin(), styles.end(), [&](dom::Node* style) {
        return style->text_content().find(needle) != std::string::npos;
    });
    if (!hit) note(out, app, "no style rule contains \"" + needle + "\"");
}

}  // namespace

std::vector<std::string> verify_generated(const GeneratedPage& page) {
    Violations out;
    dom::DocumentTree tree = dom::DocumentTree::parse(page.html);

    for (const features::FeatureApplication& app : page.applied) {
        if (app.nodes_touched < 1) {
            note(out, app, "nodes_touched is zero");
            continue;
        }
        if (app.feature_id == "form-action-rewrite") {
            verify_form_action(tree, app, out);
        } else if (app.feature_id == "anchor-neutralize") {
            verify_anchors(tree, app, out);
        } else if (app.feature_id == "favicon-variant") {
            verify_icon_href(tree, app, out);
        } else if (app.feature_id == "logo-substitute") {
            verify_logo_src(tree, app, out);
        } else if (app.feature_id == "font-stylize") {
            const std::string* font = detail(app, "font");
            verify_style_rule(tree, app,
                              "font-family: " + (font ? *font : "") + " !important", out);
        } else if (app.feature_id == "opacity-adjust") {
            const std::string* value = detail(app, "opacity");
            verify_style_rule(tree, app, "opacity: " + (value ? *value : "") + ";", out);
        } else {
            note(out, app, "unknown feature id");
        }
    }
    return out;
}

namespace {

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw IoError("cannot open for writing: " + path.string());
    stream.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!stream) throw IoError("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw IoError("cannot open for reading: " + path.string());
    return {std::istreambuf_iterator<char>(stream), std::istreambuf_iterator<char>()};
}

}  // namespace

void save_generated(const GeneratedPage& page, const std::filesystem::path& dir) {
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
    manifest["source_url"] = page.source_url;
    manifest["seed"] = page.seed;
    manifest["shortfall"] = page.shortfall;
    json applied = json::array();
    for (const features::FeatureApplication& app : page.applied) {
        json item;
        item["feature_id"] = app.feature_id;
        item["details"] = app.details;
        item["nodes_touched"] = app.nodes_touched;
        applied.push_back(std::move(item));
    }
    manifest["applied"] = std::move(applied);

    write_file(dir / "phish.html", page.html);
    write_file(dir / "application.json", manifest.dump(2) + "\n");
    if (!page.asset_files.empty()) {
        fs::create_directories(dir / "assets", ec);
        if (ec) throw IoError("cannot create assets dir: " + ec.message());
        for (const auto& [rel, bytes] : page.asset_files) {
            if (!rel.starts_with("assets/") || rel.find("..") != std::string::npos) {
                throw IoError("unsafe asset path: " + rel);
            }
            write_file(dir / rel, bytes);
        }
    }
}

GeneratedPage load_generated(const std::filesystem::path& dir) {
    if (!fs::exists(dir / "application.json")) {
        throw MissingManifest("no application.json in " + dir.string());
    }
    if (!fs::exists(dir / "phish.html")) {
        throw MissingHtml("no phish.html in " + dir.string());
    }

    GeneratedPage page;
    try {
        json manifest = json::parse(read_file(dir / "application.json"));
        page.source_url = manifest.at("source_url").get<std::string>();
        page.seed = manifest.at("seed").get<std::uint64_t>();
        page.shortfall = manifest.at("shortfall").get<std::uint64_t>();
        for (const auto& item : manifest.at("applied")) {
            features::FeatureApplication app;
            app.feature_id = item.at("feature_id").get<std::string>();
            app.details = item.at("details").get<std::map<std::string, std::string>>();
            app.nodes_touched = item.at("nodes_touched").get<std::size_t>();
            page.applied.push_back(std::move(app));
        }
    } catch (const json::exception& e) {
        throw CorruptManifest(dir.string() + ": " + e.what());
    }

    page.html = read_file(dir / "phish.html");
    if (fs::exists(dir / "assets")) {
        for (const auto& entry : fs::directory_iterator(dir / "assets")) {
            if (!entry.is_regular_file()) continue;
            page.asset_files["assets/" + entry.path().filename().string()] =
                read_file(entry.path());
        }
    }
    return page;
}

}  // namespace phishforge::generator
