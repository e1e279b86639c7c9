#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "meteraug/annotation.hpp"
#include "meteraug/evaluation.hpp"
#include "meteraug/peaks.hpp"
#include "meteraug/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 fatal error, 2 completed with skips.
constexpr int kExitPartial = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
}

void print_log(const std::vector<std::string>& log) {
    for (const std::string& line : log) {
        std::cerr << line << '\n';
    }
}

std::string meter_label(const meteraug::TrackRecord& record) {
    return record.inferred_meter ? meteraug::to_string(*record.inferred_meter)
                                 : std::string("unknown");
}

int cmd_scan(const std::string& root) {
    meteraug::ScanResult scanned = meteraug::scan_corpus(root);
    print_log(scanned.log);
    for (const meteraug::TrackRecord& record : scanned.records) {
        std::cout << record.track_id << '\t'
                  << (record.inferred_meter ? meteraug::to_string(*record.inferred_meter) : "-")
                  << '\t' << std::fixed << std::setprecision(3) << record.duration_s << '\t'
                  << record.audio_path << '\n';
    }
    return scanned.log.empty() ? 0 : kExitPartial;
}

int cmd_stats(const std::string& root) {
    meteraug::ScanResult scanned = meteraug::scan_corpus(root);
    print_log(scanned.log);
    std::cout << meteraug::format_stats(meteraug::corpus_stats(scanned.records));
    return scanned.log.empty() ? 0 : kExitPartial;
}

int cmd_manifest(const std::string& root, double fraction, std::uint64_t seed,
                 const std::string& out_dir, std::string aug_root, double val_fraction) {
    meteraug::ScanResult scanned = meteraug::scan_corpus(root);
    print_log(scanned.log);

    if (aug_root.empty()) {
        aug_root = (fs::path(out_dir) / "augmented").string();
    }
    meteraug::ManifestSet set =
        meteraug::make_manifests(scanned.records, fraction, seed, aug_root, val_fraction);

    fs::create_directories(out_dir);
    std::vector<const meteraug::Manifest*> manifests = {&set.baseline, &set.augf, &set.test};
    if (set.validation) {
        manifests.push_back(&*set.validation);
    }
    for (const meteraug::Manifest* manifest : manifests) {
        std::string path = (fs::path(out_dir) / (manifest->name + ".manifest")).string();
        meteraug::write_manifest(*manifest, path);
        std::cout << path << '\t' << manifest->records.size() << " tracks\n";
    }
    return scanned.log.empty() ? 0 : kExitPartial;
}

int cmd_augment(const std::string& manifest_path, const std::string& out_dir,
                const std::vector<int>& targets, int jobs, bool keep_trailing) {
    meteraug::Manifest manifest = meteraug::read_manifest(manifest_path);
    meteraug::AugmentOptions options;
    options.targets = targets;
    options.jobs = jobs;
    options.remove_trailing = !keep_trailing;

    meteraug::AugmentRunResult result = meteraug::run_augment(manifest, out_dir, options);
    print_log(result.log);
    for (const meteraug::TrackRecord& record : result.augmented) {
        std::cout << record.audio_path << '\n';
    }
    return result.failures == 0 ? 0 : kExitPartial;
}

// Replaces (or supplies) the "fps=" header so raw one-float-per-line model
// dumps work with an explicit --fps.
std::string with_frame_rate(std::string text, int fps) {
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t eol = text.find('\n', start);
        std::size_t len = (eol == std::string::npos ? text.size() : eol) - start;
        std::string_view line(text.data() + start, len);
        while (!line.empty() &&
               (line.front() == ' ' || line.front() == '\t' || line.front() == '\r')) {
            line.remove_prefix(1);
        }
        if (!line.empty()) {
            if (line.starts_with("fps=")) {
                text.erase(start, eol == std::string::npos ? text.size() - start : len + 1);
            }
            break;
        }
        if (eol == std::string::npos) {
            break;
        }
        start = eol + 1;
    }
    return "fps=" + std::to_string(fps) + "\n" + text;
}

int cmd_peaks(const std::string& path, int fps, const meteraug::PeakPickParams& params) {
    std::string text = read_file(path);
    if (fps > 0) {
        text = with_frame_rate(std::move(text), fps);
    }
    meteraug::LoadedActivations loaded = meteraug::parse_activations(text);
    for (const meteraug::Diagnostic& diagnostic : loaded.diagnostics) {
        std::cerr << meteraug::format_diagnostic(diagnostic, path) << '\n';
    }

    std::vector<std::size_t> peaks = meteraug::adaptive_threshold_peaks(loaded.curve, params);
    std::cout << std::fixed << std::setprecision(6);
    for (double t : meteraug::frames_to_seconds(peaks, loaded.curve.frame_rate)) {
        std::cout << t << '\n';
    }
    return 0;
}

int cmd_evaluate(const std::string& manifest_path, const std::string& estimates_root,
                 const std::string& level, double tolerance, double skip_intro,
                 const std::string& compare_csv, const std::string& out_csv) {
    meteraug::Manifest references = meteraug::read_manifest(manifest_path);
    meteraug::EvaluateOptions options;
    options.level =
        level == "downbeat" ? meteraug::EventLevel::downbeat : meteraug::EventLevel::beat;
    options.tolerances.f_window_s = tolerance;
    options.skip_intro_s = skip_intro;

    meteraug::EvaluateRunResult result =
        meteraug::run_evaluate(estimates_root, references, options);
    print_log(result.log);
    if (!out_csv.empty()) {
        write_file(out_csv, meteraug::reports_to_csv(result.report.per_track));
    }
    std::cout << meteraug::format_aggregate_table(result.report);

    if (!compare_csv.empty()) {
        std::map<std::string, std::string> meters;
        for (const meteraug::TrackRecord& record : references.records) {
            meters[record.track_id] = meter_label(record);
        }
        meteraug::AggregateReport baseline =
            meteraug::aggregate(meteraug::reports_from_csv(read_file(compare_csv)), meters);
        std::cout << '\n'
                  << meteraug::format_delta_table(
                         meteraug::compare_aggregates(result.report, baseline));
    }
    return result.missing == 0 ? 0 : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beat-removal meter augmentation toolkit"};
    app.require_subcommand(1);

    std::string scan_root;
    CLI::App* scan = app.add_subcommand("scan", "List annotated tracks under a corpus root");
    scan->add_option("root", scan_root, "corpus directory")->required();

    std::string stats_root;
    CLI::App* stats = app.add_subcommand("stats", "Per-meter track counts and hours");
    stats->add_option("root", stats_root, "corpus directory")->required();

    std::string manifest_root;
    std::string manifest_out = ".";
    std::string manifest_aug_root;
    double manifest_fraction = 0.8;
    double manifest_val_fraction = 0.0;
    std::uint64_t manifest_seed = 0;
    CLI::App* manifest =
        app.add_subcommand("manifest", "Build Baseline/AugF/test split manifests");
    manifest->add_option("root", manifest_root, "corpus directory")->required();
    manifest->add_option("--fraction", manifest_fraction,
                         "fraction of 4/4 tracks assigned to Baseline");
    manifest->add_option("--seed", manifest_seed, "shuffle seed recorded in the manifests")
        ->required();
    manifest->add_option("--out", manifest_out, "directory for the manifest files");
    manifest->add_option("--aug-root", manifest_aug_root,
                         "directory AugF expects augmented files in (default <out>/augmented)");
    manifest->add_option("--val-fraction", manifest_val_fraction,
                         "carve this fraction of Baseline into a validation manifest");

    std::string augment_manifest;
    std::string augment_out;
    std::vector<int> augment_targets = {2, 3};
    int augment_jobs = 0;
    bool augment_keep_trailing = false;
    CLI::App* augment =
        app.add_subcommand("augment", "Remix manifest tracks into the target meters");
    augment->add_option("manifest", augment_manifest, "manifest of 4/4 source tracks")
        ->required();
    augment->add_option("--out", augment_out, "output directory")->required();
    augment->add_option("--targets", augment_targets, "target meter numerators")
        ->delimiter(',');
    augment->add_option("--jobs", augment_jobs, "worker threads (0 = auto)");
    augment->add_flag("--keep-trailing", augment_keep_trailing,
                      "keep audio after the last beat of a removed bar position");

    std::string peaks_path;
    int peaks_fps = 0;
    meteraug::PeakPickParams peak_params;
    CLI::App* peaks = app.add_subcommand("peaks", "Pick peaks from an activation file");
    peaks->add_option("activations", peaks_path, "activation file (fps= header + one value per line)")
        ->required();
    peaks->add_option("--fps", peaks_fps, "frame rate override for headerless files");
    peaks->add_option("--delta", peak_params.offset, "offset above the moving median");
    peaks->add_option("--median-window", peak_params.median_half_window,
                      "median half-window in frames");
    peaks->add_option("--local-window", peak_params.local_max_half_window,
                      "strict-maximum half-window in frames");
    peaks->add_option("--min-sep", peak_params.min_separation,
                      "minimum frames between accepted peaks");

    std::string evaluate_manifest;
    std::string evaluate_estimates;
    std::string evaluate_level = "beat";
    std::string evaluate_compare;
    std::string evaluate_out;
    double evaluate_tolerance = 0.07;
    double evaluate_skip_intro = 0.0;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Score estimate files against manifest annotations");
    evaluate->add_option("manifest", evaluate_manifest, "reference manifest")->required();
    evaluate->add_option("estimates", evaluate_estimates,
                         "directory of <track_id>.beats / .downbeats estimates")
        ->required();
    evaluate->add_option("--level", evaluate_level, "event level")
        ->check(CLI::IsMember({"beat", "downbeat"}));
    evaluate->add_option("--tolerance", evaluate_tolerance, "F-measure window in seconds");
    evaluate->add_option("--compare", evaluate_compare,
                         "per-track CSV of a previous run; prints per-meter deltas");
    evaluate->add_option("--skip-intro", evaluate_skip_intro,
                         "drop events earlier than this many seconds from both sides");
    evaluate->add_option("--out", evaluate_out, "write the per-track CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*scan) {
            return cmd_scan(scan_root);
        }
        if (*stats) {
            return cmd_stats(stats_root);
        }
        if (*manifest) {
            return cmd_manifest(manifest_root, manifest_fraction, manifest_seed, manifest_out,
                                manifest_aug_root, manifest_val_fraction);
        }
        if (*augment) {
            return cmd_augment(augment_manifest, augment_out, augment_targets, augment_jobs,
                               augment_keep_trailing);
        }
        if (*peaks) {
            return cmd_peaks(peaks_path, peaks_fps, peak_params);
        }
        if (*evaluate) {
            return cmd_evaluate(evaluate_manifest, evaluate_estimates, evaluate_level,
                                evaluate_tolerance, evaluate_skip_intro, evaluate_compare,
                                evaluate_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
