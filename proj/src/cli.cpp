#include "phishforge/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "phishforge/dataset.hpp"
#include "phishforge/detector.hpp"
#include "phishforge/errors.hpp"
#include "phishforge/generator.hpp"
#include "phishforge/snapshot.hpp"
#include "phishforge/version.hpp"

namespace phishforge::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNetwork = 2;
constexpr int kGeneration = 3;
constexpr int kViolations = 4;

std::vector<std::string> split_ids(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        auto comma = csv.find(',', start);
        std::string piece = csv.substr(start, comma - start);
        if (!piece.empty()) out.push_back(std::move(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<std::string> read_source_lines(const fs::path& file) {
    std::ifstream stream(file);
    if (!stream) throw IoError("cannot read sources file: " + file.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t");
        std::string trimmed = line.substr(a, b - a + 1);
        if (trimmed.starts_with('#')) continue;
        out.push_back(std::move(trimmed));
    }
    return out;
}

struct FetchArgs {
    std::string url;
    std::string out;
    unsigned timeout_secs = 30;
    int redirects = 5;
    std::string user_agent{kDefaultUserAgent};
};

struct GenerateArgs {
    std::string snapshot_dir;
    std::uint64_t k = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string exfil_url;
    std::string features_csv;
};

struct DatasetArgs {
    std::string sources_file;
    std::uint64_t k = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string exfil_url;
    std::string features_csv;
};

struct EvaluateArgs {
    std::string dataset_dir;
    std::string weights_csv;
    std::string threshold;
    std::string report_file;
};

struct VerifyArgs {
    std::string page;
};

int do_fetch(const FetchArgs& a) {
    snapshot::FetchConfig config;
    config.timeout = std::chrono::seconds(a.timeout_secs);
    config.redirect_limit = a.redirects;
    config.user_agent = a.user_agent;

    snapshot::WebpageSnapshot snap = snapshot::fetch_snapshot(a.url, config);
    snapshot::save_snapshot(snap, a.out);
    std::cerr << "fetched " << snap.final_url << " (status " << snap.status << ", "
              << snap.assets.size() << " assets) into " << a.out << "\n";
    return kOk;
}

int do_generate(const GenerateArgs& a) {
    snapshot::WebpageSnapshot snap = snapshot::load_snapshot(a.snapshot_dir);

    generator::GenerationConfig config;
    config.k = a.k;
    config.seed = a.seed;
    if (!a.exfil_url.empty()) config.exfil_url = a.exfil_url;
    if (!a.features_csv.empty()) config.feature_allowlist = split_ids(a.features_csv);

    generator::GeneratedPage page = generator::generate_phish(snap, config);
    generator::save_generated(page, a.out);
    std::cerr << "applied " << page.applied.size() << " features (shortfall "
              << page.shortfall << ") into " << a.out << "\n";
    return kOk;
}

int do_dataset(const DatasetArgs& a) {
    std::vector<std::string> sources = read_source_lines(a.sources_file);

    dataset::BuildOptions opts;
    opts.k = a.k;
    opts.global_seed = a.seed;
    opts.exfil_url = a.exfil_url;
    if (!a.features_csv.empty()) opts.feature_allowlist = split_ids(a.features_csv);

    dataset::DatasetManifest manifest = dataset::build_dataset(sources, opts, a.out);
    std::cerr << "corpus with " << manifest.entries.size() << " entries at " << a.out << "\n";
    return kOk;
}

int do_evaluate(const EvaluateArgs& a) {
    dataset::DatasetManifest manifest =
        dataset::read_manifest(fs::path(a.dataset_dir) / "manifest.json");

    detector::Weights weights =
        a.weights_csv.empty() ? detector::Weights::defaults()
                              : detector::Weights::parse(a.weights_csv);
    detector::Rational threshold = a.threshold.empty()
                                       ? detector::kDefaultThreshold
                                       : detector::Rational::from_decimal(a.threshold);

    detector::DetectionReport report =
        detector::evaluate_dataset(manifest, a.dataset_dir, weights, threshold);
    detector::write_report(report, a.report_file);

    std::cerr << "tp=" << report.matrix.tp << " fp=" << report.matrix.fp
              << " tn=" << report.matrix.tn << " fn=" << report.matrix.fn;
    if (report.accuracy) std::cerr << " accuracy=" << report.accuracy->to_double();
    std::cerr << "\n";
    return kOk;
}

int do_verify(const VerifyArgs& a) {
    fs::path page(a.page);
    if (page.filename() == "phish.html") page = page.parent_path();

    generator::GeneratedPage loaded = generator::load_generated(page);
    std::vector<std::string> violations = generator::verify_generated(loaded);
    for (const std::string& v : violations) std::cout << v << "\n";
    if (!violations.empty()) {
        std::cerr << violations.size() << " violation(s) in " << a.page << "\n";
        return kViolations;
    }
    std::cerr << "page is self-consistent\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"deterministic phishing-webpage corpus toolchain", "phishforge"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    FetchArgs fetch_args;
    auto* fetch = app.add_subcommand("fetch", "archive a live page into a snapshot directory");
    fetch->add_option("url", fetch_args.url, "absolute http(s) URL")->required();
    fetch->add_option("--out", fetch_args.out, "snapshot output directory")->required();
    fetch->add_option("--timeout-secs", fetch_args.timeout_secs, "per-request timeout");
    fetch->add_option("--redirects", fetch_args.redirects, "redirect limit")
        ->check(CLI::NonNegativeNumber);
    fetch->add_option("--user-agent", fetch_args.user_agent, "User-Agent header");

    GenerateArgs gen_args;
    auto* generate =
        app.add_subcommand("generate", "derive a phishing page from a snapshot");
    generate->add_option("--snapshot", gen_args.snapshot_dir, "snapshot directory")
        ->required();
    generate->add_option("--k", gen_args.k, "number of features to embed")
        ->required()
        ->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen_args.seed, "PRNG seed")->required();
    generate->add_option("--out", gen_args.out, "output directory")->required();
    generate->add_option("--exfil-url", gen_args.exfil_url, "form exfiltration sink URL");
    generate->add_option("--features", gen_args.features_csv,
                         "comma-separated feature id allowlist");

    DatasetArgs ds_args;
    auto* ds = app.add_subcommand("dataset", "build a balanced labeled corpus");
    ds->add_option("--sources", ds_args.sources_file, "file with one URL/dir per line")
        ->required();
    ds->add_option("--k", ds_args.k, "features per phishing page")
        ->required()
        ->check(CLI::PositiveNumber);
    ds->add_option("--seed", ds_args.seed, "global seed")->required();
    ds->add_option("--out", ds_args.out, "corpus output directory")->required();
    ds->add_option("--exfil-url", ds_args.exfil_url, "form exfiltration sink URL");
    ds->add_option("--features", ds_args.features_csv,
                   "comma-separated feature id allowlist");

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "score a corpus with the heuristic detector");
    evaluate->add_option("--dataset", eval_args.dataset_dir, "corpus directory")->required();
    evaluate->add_option("--weights", eval_args.weights_csv, "four comma-separated weights");
    evaluate->add_option("--threshold", eval_args.threshold, "phishing verdict threshold");
    evaluate->add_option("--report", eval_args.report_file, "report JSON output path")
        ->required();

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "audit a generated page against its records");
    verify->add_option("--page", verify_args.page,
                       "generated output directory (or its phish.html)")
        ->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (fetch->parsed()) return do_fetch(fetch_args);
        if (generate->parsed()) return do_generate(gen_args);
        if (ds->parsed()) return do_dataset(ds_args);
        if (evaluate->parsed()) return do_evaluate(eval_args);
        if (verify->parsed()) return do_verify(verify_args);
    } catch (const InvalidUrl& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidWeights& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnknownFeature& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NetworkError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNetwork;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGeneration;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGeneration;
    }
    return kUsage;
}

}  // namespace phishforge::cli
