#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishforge/dataset.hpp"

namespace phishforge::detector {

// Exact fraction, always normalized with den > 0. Large enough for
// heuristic scores (denominators are page-anchor counts times weight
// denominators).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    static Rational from_decimal(std::string_view text);  // "0.4", "1", ".75"

    Rational operator+(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    std::strong_ordering operator<=>(const Rational& o) const;
    bool operator==(const Rational& o) const = default;

    double to_double() const;
    std::string to_string() const;  // "num/den" lowest terms
};

struct HeuristicVector {
    Rational h_anchor_void;          // fraction of href-bearing anchors
    bool h_form_foreign = false;
    bool h_favicon_foreign = false;
    bool h_opacity_low = false;
};

struct Weights {
    Rational anchor_void;
    Rational form_foreign;
    Rational favicon_foreign;
    Rational opacity_low;

    static Weights defaults();  // 0.4, 0.3, 0.2, 0.1
    // "a,b,c,d" decimals; throws InvalidWeights unless non-negative and
    // summing to exactly 1.
    static Weights parse(std::string_view csv);
};

inline const Rational kDefaultThreshold{3, 10};

enum class Verdict { Phishing, Legitimate };

std::string_view to_string(Verdict verdict);

struct ScoreResult {
    Rational score;
    Verdict verdict = Verdict::Legitimate;
};

HeuristicVector extract_heuristics(std::string_view page_html, const std::string& page_url);
ScoreResult score(const HeuristicVector& v, const Weights& w, const Rational& threshold);

struct ConfusionMatrix {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

struct PageScore {
    std::string path;
    dataset::Label label = dataset::Label::Legitimate;
    Rational score;
    Verdict verdict = Verdict::Legitimate;
};

struct DetectionReport {
    Weights weights;
    Rational threshold;
    std::vector<PageScore> per_page;
    ConfusionMatrix matrix;
    // 0/0 ratios stay unset.
    std::optional<Rational> accuracy, precision, recall, f1;
};

DetectionReport evaluate_dataset(const dataset::DatasetManifest& m,
                                 const std::filesystem::path& corpus_root, const Weights& w,
                                 const Rational& threshold);

void write_report(const DetectionReport& r, const std::filesystem::path& file);

}  // namespace phishforge::detector
