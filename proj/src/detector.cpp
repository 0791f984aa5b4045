#include "phishforge/detector.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <utility>

#include "json.hpp"
#include "phishforge/dom.hpp"
#include "phishforge/errors.hpp"
#include "phishforge/url.hpp"

namespace phishforge::detector {

namespace fs = std::filesystem;
using nlohmann::json;

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::from_decimal(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw InvalidWeights("empty decimal value");
    std::size_t dot = s.find('.');
    std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = dot == std::string::npos ? 0 : s.size() - dot - 1;
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; })) {
        throw InvalidWeights("not a decimal value: " + s);
    }
    if (digits.size() > 15) throw InvalidWeights("decimal too precise: " + s);
    long long num = std::strtoll(digits.c_str(), nullptr, 10);
    long long den = 1;
    for (std::size_t i = 0; i < frac; ++i) den *= 10;
    return {num, den};
}

Rational Rational::operator+(const Rational& o) const {
    return {num * o.den + o.num * den, den * o.den};
}

Rational Rational::operator*(const Rational& o) const {
    return {num * o.num, den * o.den};
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    return num * o.den <=> o.num * den;
}

double Rational::to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

Weights Weights::defaults() {
    Weights w;
    w.anchor_void = {2, 5};
    w.form_foreign = {3, 10};
    w.favicon_foreign = {1, 5};
    w.opacity_low = {1, 10};
    return w;
}

Weights Weights::parse(std::string_view csv) {
    std::vector<Rational> parts;
    std::size_t start = 0;
    while (start <= csv.size()) {
        auto comma = csv.find(',', start);
        auto piece = csv.substr(start, comma - start);
        parts.push_back(Rational::from_decimal(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 4) {
        throw InvalidWeights("expected 4 comma-separated weights");
    }
    Rational sum{0, 1};
    for (const Rational& p : parts) {
        if (p < Rational{0, 1}) throw InvalidWeights("weights must be non-negative");
        sum = sum + p;
    }
    if (sum != Rational{1, 1}) {
        throw InvalidWeights("weights must sum to 1, got " + sum.to_string());
    }
    Weights w;
    w.anchor_void = parts[0];
    w.form_foreign = parts[1];
    w.favicon_foreign = parts[2];
    w.opacity_low = parts[3];
    return w;
}

std::string_view to_string(Verdict verdict) {
    return verdict == Verdict::Phishing ? "phishing" : "legitimate";
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool in_void_set(const std::string& href) {
    std::string h = lower(trim(href));
    return h == "#" || h == "#content" || h == "javascript:void(0)";
}

// Absolute http(s) references with a different host are foreign; relative
// ones and other schemes are not.
bool foreign_host(const std::string& ref, const std::string& page_host) {
    auto host = url::http_host(trim(ref));
    return host && *host != page_host;
}

// Minimal flat-CSS scan: selector list '{' declarations '}'.
bool body_opacity_below_one(const std::string& css) {
    std::size_t pos = 0;
    while (pos < css.size()) {
        auto open = css.find('{', pos);
        if (open == std::string::npos) return false;
        auto close = css.find('}', open);
        if (close == std::string::npos) return false;

        bool body_rule = false;
        std::string prelude = css.substr(pos, open - pos);
        std::size_t s = 0;
        while (s <= prelude.size()) {
            auto comma = prelude.find(',', s);
            if (lower(trim(prelude.substr(s, comma - s))) == "body") body_rule = true;
            if (comma == std::string::npos) break;
            s = comma + 1;
        }

        if (body_rule) {
            std::string block = css.substr(open + 1, close - open - 1);
            std::size_t d = 0;
            while (d <= block.size()) {
                auto semi = block.find(';', d);
                std::string decl = block.substr(d, semi == std::string::npos
                                                       ? std::string::npos
                                                       : semi - d);
                auto colon = decl.find(':');
                if (colon != std::string::npos &&
                    lower(trim(decl.substr(0, colon))) == "opacity") {
                    std::string value = trim(decl.substr(colon + 1));
                    char* end = nullptr;
                    double v = std::strtod(value.c_str(), &end);
                    if (end != value.c_str() && v < 1.0) return true;
                }
                if (semi == std::string::npos) break;
                d = semi + 1;
            }
        }
        pos = close + 1;
    }
    return false;
}

std::string read_file(const fs::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw IoError("cannot open for reading: " + path.string());
    return {std::istreambuf_iterator<char>(stream), std::istreambuf_iterator<char>()};
}

void require_unit_sum(const Weights& w) {
    Rational sum = w.anchor_void + w.form_foreign + w.favicon_foreign + w.opacity_low;
    if (sum != Rational{1, 1}) {
        throw InvalidWeights("weights must sum to 1, got " + sum.to_string());
    }
}

}  // namespace

HeuristicVector extract_heuristics(std::string_view page_html, const std::string& page_url) {
    dom::DocumentTree tree = dom::DocumentTree::parse(page_html);
    std::string page_host = url::http_host(page_url).value_or("");

    HeuristicVector v;

    long long suspicious = 0, with_href = 0;
    for (const dom::Node* a : std::as_const(tree).select_all(dom::NodeSelector::by_tag("a"))) {
        const std::string* href = a->attribute("href");
        if (!href) continue;
        ++with_href;
        if (in_void_set(*href) || foreign_host(*href, page_host)) ++suspicious;
    }
    v.h_anchor_void = with_href == 0 ? Rational{0, 1} : Rational{suspicious, with_href};

    for (const dom::Node* form :
         std::as_const(tree).select_all(dom::NodeSelector::by_tag("form"))) {
        const std::string* action = form->attribute("action");
        if (!action) continue;  // a form that posts to itself is unremarkable
        if (trim(*action).empty() || foreign_host(*action, page_host)) {
            v.h_form_foreign = true;
            break;
        }
    }

    auto icon_sel = dom::NodeSelector::by_tag("link").with_attr_contains("rel", "icon");
    for (const dom::Node* link : std::as_const(tree).select_all(icon_sel)) {
        const std::string* href = link->attribute("href");
        if (href && foreign_host(*href, page_host)) {
            v.h_favicon_foreign = true;
            break;
        }
    }

    for (const dom::Node* style :
         std::as_const(tree).select_all(dom::NodeSelector::by_tag("style"))) {
        if (body_opacity_below_one(style->text_content())) {
            v.h_opacity_low = true;
            break;
        }
    }
    return v;
}

ScoreResult score(const HeuristicVector& v, const Weights& w, const Rational& threshold) {
    require_unit_sum(w);
    Rational one{1, 1};
    Rational zero{0, 1};
    Rational total = w.anchor_void * v.h_anchor_void +
                     w.form_foreign * (v.h_form_foreign ? one : zero) +
                     w.favicon_foreign * (v.h_favicon_foreign ? one : zero) +
                     w.opacity_low * (v.h_opacity_low ? one : zero);
    ScoreResult result;
    result.score = total;
    result.verdict = total >= threshold ? Verdict::Phishing : Verdict::Legitimate;
    return result;
}

DetectionReport evaluate_dataset(const dataset::DatasetManifest& m,
                                 const std::filesystem::path& corpus_root, const Weights& w,
                                 const Rational& threshold) {
    if (m.entries.empty()) throw MissingPage("manifest lists no pages");
    require_unit_sum(w);

    DetectionReport report;
    report.weights = w;
    report.threshold = threshold;

    for (const dataset::DatasetEntry& entry : m.entries) {
        fs::path file = corpus_root / entry.page_path;
        if (!fs::exists(file)) throw MissingPage("missing page file: " + file.string());

        HeuristicVector v = extract_heuristics(read_file(file), entry.source_url);
        ScoreResult s = score(v, w, threshold);
        report.per_page.push_back({entry.page_path, entry.label, s.score, s.verdict});

        bool is_phish = entry.label == dataset::Label::Phishing;
        bool flagged = s.verdict == Verdict::Phishing;
        if (is_phish && flagged) ++report.matrix.tp;
        if (is_phish && !flagged) ++report.matrix.fn;
        if (!is_phish && flagged) ++report.matrix.fp;
        if (!is_phish && !flagged) ++report.matrix.tn;
    }

    const ConfusionMatrix& cm = report.matrix;
    auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<Rational> {
        if (den == 0) return std::nullopt;
        return Rational{static_cast<long long>(num), static_cast<long long>(den)};
    };
    report.accuracy = ratio(cm.tp + cm.tn, cm.total());
    report.precision = ratio(cm.tp, cm.tp + cm.fp);
    report.recall = ratio(cm.tp, cm.tp + cm.fn);
    report.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
    return report;
}

void write_report(const DetectionReport& r, const std::filesystem::path& file) {
    json doc;
    doc["params"]["weights"] = {r.weights.anchor_void.to_double(),
                                r.weights.form_foreign.to_double(),
                                r.weights.favicon_foreign.to_double(),
                                r.weights.opacity_low.to_double()};
    doc["params"]["threshold"] = r.threshold.to_double();

    json pages = json::array();
    for (const PageScore& p : r.per_page) {
        json item;
        item["path"] = p.path;
        item["label"] = std::string(dataset::to_string(p.label));
        item["score"] = p.score.to_double();
        item["verdict"] = std::string(to_string(p.verdict));
        pages.push_back(std::move(item));
    }
    doc["per_page"] = std::move(pages);

    doc["matrix"] = {{"tp", r.matrix.tp}, {"fp", r.matrix.fp},
                     {"tn", r.matrix.tn}, {"fn", r.matrix.fn}};
    auto metric = [](const std::optional<Rational>& m) {
        return m ? json(m->to_double()) : json(nullptr);
    };
    doc["metrics"] = {{"accuracy", metric(r.accuracy)},
                      {"precision", metric(r.precision)},
                      {"recall", metric(r.recall)},
                      {"f1", metric(r.f1)}};

    std::ofstream stream(file, std::ios::binary);
    if (!stream) throw IoError("cannot open for writing: " + file.string());
    stream << doc.dump(2) << "\n";
    if (!stream) throw IoError("write failed: " + file.string());
}

}  // namespace phishforge::detector
