#include "phishforge/features.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "phishforge/errors.hpp"
#include "phishforge/image.hpp"
#include "phishforge/pool.hpp"
#include "phishforge/url.hpp"

namespace phishforge::features {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

bool in_replacement_set(std::string_view href) {
    return std::find(kAnchorReplacements.begin(), kAnchorReplacements.end(), href) !=
           kAnchorReplacements.end();
}

// Looks up the downloaded bytes behind a reference found in the page.
const std::string* downloaded_bytes(const snapshot::WebpageSnapshot& s, std::string_view ref) {
    url::Url base = url::parse_reference(s.final_url.empty() ? s.source_url : s.final_url);
    url::Url abs = url::resolve(base, ref);
    abs.has_fragment = false;
    abs.fragment.clear();
    const snapshot::AssetRecord* rec = s.asset_for(abs.serialize());
    return rec ? s.bytes_for(*rec) : nullptr;
}

std::optional<image::PixelImage> try_decode(const std::string* bytes) {
    if (!bytes) return std::nullopt;
    try {
        return image::decode_png(*bytes);
    } catch (const ImageDecodeError&) {
        return std::nullopt;
    }
}

dom::NodeSelector icon_link_selector() {
    return dom::NodeSelector::by_tag("link").with_attr_contains("rel", "icon");
}

struct LogoHit {
    const dom::Node* node;
    std::string rule;
    image::PixelImage img;
    std::string old_src;
};

bool has_ancestor(const dom::Node& node, std::string_view tag) {
    for (const dom::Node* p = node.parent; p; p = p->parent) {
        if (p->kind == dom::NodeKind::Element && p->tag == tag) return true;
    }
    return false;
}

std::string src_filename(std::string_view src) {
    url::Url u = url::parse_reference(src);
    auto slash = u.path.find_last_of('/');
    return slash == std::string::npos ? u.path : u.path.substr(slash + 1);
}

// Candidates: imgs carrying a "logo" marker, then first imgs under
// header/nav. Decode failures fall through to the next candidate.
std::optional<LogoHit> find_logo(const dom::DocumentTree& t,
                                 const snapshot::WebpageSnapshot& s) {
    auto imgs = t.select_all(dom::NodeSelector::by_tag("img"));

    struct Candidate {
        const dom::Node* node;
        std::string rule;
    };
    std::vector<Candidate> candidates;
    for (const dom::Node* img : imgs) {
        const std::string* src = img->attribute("src");
        if (!src || src->empty()) continue;
        if (contains_ci(src_filename(*src), "logo")) {
            candidates.push_back({img, "token:src"});
        } else if (img->attribute("id") && contains_ci(*img->attribute("id"), "logo")) {
            candidates.push_back({img, "token:id"});
        } else if (img->attribute("class") && contains_ci(*img->attribute("class"), "logo")) {
            candidates.push_back({img, "token:class"});
        } else if (img->attribute("alt") && contains_ci(*img->attribute("alt"), "logo")) {
            candidates.push_back({img, "token:alt"});
        }
    }
    for (const dom::Node* img : imgs) {
        const std::string* src = img->attribute("src");
        if (!src || src->empty()) continue;
        bool taken = std::any_of(candidates.begin(), candidates.end(),
                                 [&](const Candidate& c) { return c.node == img; });
        if (taken) continue;
        if (has_ancestor(*img, "header")) {
            candidates.push_back({img, "container:header"});
        } else if (has_ancestor(*img, "nav")) {
            candidates.push_back({img, "container:nav"});
        }
    }

    for (const Candidate& c : candidates) {
        const std::string& src = *c.node->attribute("src");
        if (auto img = try_decode(downloaded_bytes(s, src))) {
            return LogoHit{c.node, c.rule, std::move(*img), src};
        }
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(FeatureCategory category) {
    return category == FeatureCategory::Content ? "content" : "visual";
}

std::string AssetSink::add(std::string_view bytes, std::string_view ext) {
    std::string path =
        "assets/" + snapshot::sha256_hex(bytes).substr(0, 16) + "." + std::string(ext);
    files_[path] = std::string(bytes);
    return path;
}

FeatureApplication form_action_rewrite(dom::DocumentTree& t, SplitMix64&,
                                       std::string_view exfil_url) {
    auto forms = t.select_all(dom::NodeSelector::by_tag("form"));
    if (forms.empty()) throw NotApplicable("no form elements");

    FeatureApplication app;
    app.feature_id = "form-action-rewrite";
    std::size_t i = 0;
    for (dom::Node* form : forms) {
        const std::string* old = form->attribute("action");
        std::string key = "form." + std::to_string(i);
        app.details[key + ".old"] = old ? *old : "(none)";
        app.details[key + ".new"] = std::string(exfil_url);
        form->set_attribute("action", exfil_url);
        ++i;
    }
    app.nodes_touched = forms.size();
    return app;
}

FeatureApplication anchor_neutralize(dom::DocumentTree& t, SplitMix64& rng) {
    auto anchors = t.select_all(dom::NodeSelector::by_tag("a"));
    std::vector<dom::Node*> qualifying;
    std::size_t preexisting = 0;
    for (dom::Node* a : anchors) {
        const std::string* href = a->attribute("href");
        if (!href) continue;
        if (in_replacement_set(*href)) {
            ++preexisting;
        } else {
            qualifying.push_back(a);
        }
    }
    if (qualifying.empty()) throw NotApplicable("no anchors with a rewritable href");

    FeatureApplication app;
    app.feature_id = "anchor-neutralize";
    std::map<std::string, std::size_t> final_counts;
    for (std::string_view value : kAnchorReplacements) final_counts[std::string(value)] = 0;

    for (dom::Node* a : qualifying) {
        auto idx = rng.next_bounded(kAnchorReplacements.size());
        a->set_attribute("href", kAnchorReplacements[idx]);
    }
    for (dom::Node* a : anchors) {
        const std::string* href = a->attribute("href");
        if (href && in_replacement_set(*href)) ++final_counts[*href];
    }
    for (const auto& [value, count] : final_counts) {
        app.details["final." + value] = std::to_string(count);
    }
    app.details["preexisting"] = std::to_string(preexisting);
    app.details["rewritten"] = std::to_string(qualifying.size());
    app.nodes_touched = qualifying.size();
    return app;
}

FeatureApplication favicon_variant(dom::DocumentTree& t, const snapshot::WebpageSnapshot& s,
                                   SplitMix64& rng, AssetSink& sink) {
    dom::Node* link = t.select_first(icon_link_selector());
    const std::string* href = link ? link->attribute("href") : nullptr;
    std::optional<image::PixelImage> icon =
        href ? try_decode(downloaded_bytes(s, *href)) : std::nullopt;

    auto pool = pool::favicons();
    if (!icon && pool.empty()) throw NotApplicable("no decodable favicon and empty pool");

    FeatureApplication app;
    app.feature_id = "favicon-variant";
    app.details["old"] = href ? *href : "(none)";

    std::string variant = "alternate";
    if (icon) {
        switch (rng.next_bounded(3)) {
            case 0: variant = "lighter"; break;
            case 1: variant = "darker"; break;
            default: variant = "alternate"; break;
        }
    }

    std::string new_href;
    if (variant == "alternate") {
        const pool::PoolIcon& choice = pool[rng.next_bounded(pool.size())];
        std::string bytes(reinterpret_cast<const char*>(choice.bytes.data()),
                          choice.bytes.size());
        new_href = sink.add(bytes, "png");
        app.details["pool"] = std::string(choice.name);
    } else {
        image::PixelImage out =
            variant == "lighter" ? image::lighten(*icon) : image::darken(*icon);
        new_href = sink.add(image::encode_png(out), "png");
    }

    if (!link) {
        dom::Node& created = t.head().append_element("link");
        created.set_attribute("rel", "icon");
        link = &created;
    }
    link->set_attribute("href", new_href);

    app.details["variant"] = variant;
    app.details["new"] = new_href;
    app.nodes_touched = 1;
    return app;
}

FeatureApplication logo_substitute(dom::DocumentTree& t, const snapshot::WebpageSnapshot& s,
                                   SplitMix64& rng, AssetSink& sink) {
    std::optional<LogoHit> hit = find_logo(t, s);
    if (!hit) throw NotApplicable("no decodable logo candidate");

    std::string variant;
    image::PixelImage out;
    switch (rng.next_bounded(3)) {
        case 0:
            variant = "lighter";
            out = image::lighten(hit->img);
            break;
        case 1:
            variant = "darker";
            out = image::darken(hit->img);
            break;
        default:
            variant = "grayscale";
            out = image::grayscale(hit->img);
            break;
    }
    std::string new_src = sink.add(image::encode_png(out), "png");
    const_cast<dom::Node*>(hit->node)->set_attribute("src", new_src);

    FeatureApplication app;
    app.feature_id = "logo-substitute";
    app.details["rule"] = hit->rule;
    app.details["variant"] = variant;
    app.details["old"] = hit->old_src;
    app.details["new"] = new_src;
    app.nodes_touched = 1;
    return app;
}

FeatureApplication font_stylize(dom::DocumentTree& t, SplitMix64& rng) {
    std::string_view font = kFontChoices[rng.next_bounded(kFontChoices.size())];
    std::string css = "body, input, button { font-family: " + std::string(font) +
                      " !important; }";
    t.inject_style(css);

    FeatureApplication app;
    app.feature_id = "font-stylize";
    app.details["font"] = std::string(font);
    app.nodes_touched = 1;
    return app;
}

FeatureApplication opacity_adjust(dom::DocumentTree& t, SplitMix64& rng) {
    std::string_view value = kOpacityChoices[rng.next_bounded(kOpacityChoices.size())];
    std::string css = "body { opacity: " + std::string(value) + "; }";
    t.inject_style(css);

    FeatureApplication app;
    app.feature_id = "opacity-adjust";
    app.details["opacity"] = std::string(value);
    app.nodes_touched = 1;
    return app;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

class FormActionRewrite final : public PhishFeature {
  public:
    std::string_view id() const override { return "form-action-rewrite"; }
    FeatureCategory category() const override { return FeatureCategory::Content; }
    bool applicable(const dom::DocumentTree& t,
                    const snapshot::WebpageSnapshot&) const override {
        return !t.select_all(dom::NodeSelector::by_tag("form")).empty();
    }
    FeatureApplication apply(FeatureContext& ctx) const override {
        return form_action_rewrite(ctx.tree, ctx.rng, ctx.exfil_url);
    }
};

class AnchorNeutralize final : public PhishFeature {
  public:
    std::string_view id() const override { return "anchor-neutralize"; }
    FeatureCategory category() const override { return FeatureCategory::Content; }
    bool applicable(const dom::DocumentTree& t,
                    const snapshot::WebpageSnapshot&) const override {
        for (const dom::Node* a : t.select_all(dom::NodeSelector::by_tag("a"))) {
            const std::string* href = a->attribute("href");
            if (href && !in_replacement_set(*href)) return true;
        }
        return false;
    }
    FeatureApplication apply(FeatureContext& ctx) const override {
        return anchor_neutralize(ctx.tree, ctx.rng);
    }
};

class FaviconVariant final : public PhishFeature {
  public:
    std::string_view id() const override { return "favicon-variant"; }
    FeatureCategory category() const override { return FeatureCategory::Visual; }
    bool applicable(const dom::DocumentTree& t,
                    const snapshot::WebpageSnapshot& s) const override {
        if (!pool::favicons().empty()) return true;
        const dom::Node* link = t.select_first(icon_link_selector());
        const std::string* href = link ? link->attribute("href") : nullptr;
        return href && try_decode(downloaded_bytes(s, *href)).has_value();
    }
    FeatureApplication apply(FeatureContext& ctx) const override {
        return favicon_variant(ctx.tree, ctx.snap, ctx.rng, ctx.sink);
    }
};

class LogoSubstitute final : public PhishFeature {
  public:
    std::string_view id() const override { return "logo-substitute"; }
    FeatureCategory category() const override { return FeatureCategory::Visual; }
    bool applicable(const dom::DocumentTree& t,
                    const snapshot::WebpageSnapshot& s) const override {
        return find_logo(t, s).has_value();
    }
    FeatureApplication apply(FeatureContext& ctx) const override {
        return logo_substitute(ctx.tree, ctx.snap, ctx.rng, ctx.sink);
    }
};

class FontStylize final : public PhishFeature {
  public:
    std::string_view id() const override { return "font-stylize"; }
    FeatureCategory category() const override { return FeatureCategory::Visual; }
    bool applicable(const dom::DocumentTree&, const snapshot::WebpageSnapshot&) const override {
        return true;
    }
    FeatureApplication apply(FeatureContext& ctx) const override {
        return font_stylize(ctx.tree, ctx.rng);
    }
};

class OpacityAdjust final : public PhishFeature {
  public:
    std::string_view id() const override { return "opacity-adjust"; }
    FeatureCategory category() const override { return FeatureCategory::Visual; }
    bool applicable(const dom::DocumentTree&, const snapshot::WebpageSnapshot&) const override {
        return true;
    }
    FeatureApplication apply(FeatureContext& ctx) const override {
        return opacity_adjust(ctx.tree, ctx.rng);
    }
};

const FormActionRewrite kFormActionRewrite;
const AnchorNeutralize kAnchorNeutralize;
const FaviconVariant kFaviconVariant;
const LogoSubstitute kLogoSubstitute;
const FontStylize kFontStylize;
const OpacityAdjust kOpacityAdjust;

constexpr const PhishFeature* kRegistry[] = {
    &kFormActionRewrite, &kAnchorNeutralize, &kFaviconVariant,
    &kLogoSubstitute,    &kFontStylize,      &kOpacityAdjust,
};

}  // namespace

std::span<const PhishFeature* const> registry() {
    return kRegistry;
}

const PhishFeature* find_feature(std::string_view id) {
    for (const PhishFeature* f : kRegistry) {
        if (f->id() == id) return f;
    }
    return nullptr;
}

}  // namespace phishforge::features
