#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "phishforge/dom.hpp"
#include "phishforge/rng.hpp"
#include "phishforge/snapshot.hpp"

namespace phishforge::features {

enum class FeatureCategory { Content, Visual };

std::string_view to_string(FeatureCategory category);

struct FeatureApplication {
    std::string feature_id;
    std::map<std::string, std::string> details;
    std::size_t nodes_touched = 0;

    bool operator==(const FeatureApplication&) const = default;
};

// Collects transformed asset bytes during apply; the caller decides where
// they land on disk. Names are content-hashed so reruns are byte-stable.
class AssetSink {
  public:
    // Returns the relative path ("assets/<hash>.<ext>") to reference.
    std::string add(std::string_view bytes, std::string_view ext);
    const std::map<std::string, std::string>& files() const { return files_; }

  private:
    std::map<std::string, std::string> files_;  // relative path -> bytes
};

inline constexpr std::string_view kDefaultExfilUrl = "https://collector.invalid/submit";

inline constexpr std::array<std::string_view, 4> kAnchorReplacements = {
    "#", "#content", "javascript:void(0)", "https://collector.invalid/landing"};

inline constexpr std::array<std::string_view, 4> kFontChoices = {
    "cursive", "fantasy", "monospace", "serif"};

inline constexpr std::array<std::string_view, 3> kOpacityChoices = {"0.65", "0.75", "0.85"};

// The six transforms. Each throws NotApplicable when its precondition
// fails and otherwise returns an auditable application record.
FeatureApplication form_action_rewrite(dom::DocumentTree& t, SplitMix64& rng,
                                       std::string_view exfil_url);
FeatureApplication anchor_neutralize(dom::DocumentTree& t, SplitMix64& rng);
FeatureApplication favicon_variant(dom::DocumentTree& t, const snapshot::WebpageSnapshot& s,
                                   SplitMix64& rng, AssetSink& sink);
FeatureApplication logo_substitute(dom::DocumentTree& t, const snapshot::WebpageSnapshot& s,
                                   SplitMix64& rng, AssetSink& sink);
FeatureApplication font_stylize(dom::DocumentTree& t, SplitMix64& rng);
FeatureApplication opacity_adjust(dom::DocumentTree& t, SplitMix64& rng);

struct FeatureContext {
    dom::DocumentTree& tree;
    const snapshot::WebpageSnapshot& snap;
    SplitMix64& rng;
    AssetSink& sink;
    std::string_view exfil_url = kDefaultExfilUrl;
};

class PhishFeature {
  public:
    virtual ~PhishFeature() = default;
    virtual std::string_view id() const = 0;
    virtual FeatureCategory category() const = 0;
    virtual bool applicable(const dom::DocumentTree& t,
                            const snapshot::WebpageSnapshot& s) const = 0;
    virtual FeatureApplication apply(FeatureContext& ctx) const = 0;
};

// Fixed canonical order; seeded sampling indexes into this.
std::span<const PhishFeature* const> registry();
const PhishFeature* find_feature(std::string_view id);

}  // namespace phishforge::features
