#include "meteraug/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include "meteraug/audio.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace meteraug {

namespace {

// Unbiased draw in [0, bound) via rejection sampling. Paired with a
// hand-rolled Fisher-Yates below because std::shuffle and
// std::uniform_int_distribution are implementation-defined, and manifests
// must be byte-identical across platforms for one seed.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = i;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(draw_below(rng, i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::string meter_label(const std::optional<TimeSignature>& meter) {
    return meter ? to_string(*meter) : std::string("unknown");
}

std::string track_id_for(const fs::path& audio_path, const fs::path& root) {
    fs::path relative = audio_path.lexically_relative(root);
    if (relative.empty() || *relative.begin() == "..") {
        relative = audio_path.filename();
    }
    relative.replace_extension();
    std::string id = relative.generic_string();
    std::replace(id.begin(), id.end(), '/', '_');
    return id;
}

std::string origin_label(const TrackRecord& record) {
    if (record.is_original()) {
        return "original";
    }
    return "augmented(" + to_string(*record.augmented_target) + ")";
}

// Estimate files: one event time per line; extra columns are ignored so
// annotation-formatted files also work. Empty files are valid (no events).
EventSequence parse_event_times(std::string_view text) {
    std::vector<double> times;
    std::size_t line_number = 0;
    for (std::string_view raw_line : detail::split_lines(text)) {
        ++line_number;
        std::string_view line = detail::trim(raw_line);
        if (line.empty() || line.starts_with("#")) {
            continue;
        }
        double value = 0.0;
        if (!detail::parse_double(detail::split_tokens(line)[0], value)) {
            throw std::runtime_error("line " + std::to_string(line_number) +
                                     ": malformed event time");
        }
        times.push_back(value);
    }
    std::sort(times.begin(), times.end());
    return EventSequence::from(std::move(times));
}

EventSequence drop_intro(const EventSequence& events, double skip_intro_s) {
    if (skip_intro_s <= 0.0) {
        return events;
    }
    std::vector<double> kept;
    kept.reserve(events.times.size());
    for (double t : events.times) {
        if (t >= skip_intro_s) {
            kept.push_back(t);
        }
    }
    return EventSequence::from(std::move(kept));
}

unsigned worker_count(int requested, std::size_t work_items) {
    unsigned jobs = requested > 0 ? static_cast<unsigned>(requested)
                                  : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
    return static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(work_items, 1)));
}

}  // namespace

std::string augmented_track_id(const std::string& track_id, int target_numerator) {
    return track_id + ".aug" + std::to_string(target_numerator) + "4";
}

ScanResult scan_corpus(const std::string& root) {
    fs::path root_path(root);
    if (!fs::is_directory(root_path)) {
        throw std::runtime_error("scan root is not a directory: " + root);
    }

    std::vector<fs::path> audio_files;
    for (const fs::directory_entry& entry : fs::recursive_directory_iterator(root_path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wav") {
            audio_files.push_back(entry.path());
        }
    }
    std::sort(audio_files.begin(), audio_files.end());

    ScanResult result;
    for (const fs::path& audio : audio_files) {
        std::string id = track_id_for(audio, root_path);
        fs::path annotation_path = audio;
        annotation_path.replace_extension(".beats");
        if (!fs::exists(annotation_path)) {
            result.log.push_back(
                format_diagnostic({Severity::error, "annotation missing"}, id));
            continue;
        }

        TrackRecord record;
        record.track_id = id;
        record.audio_path = audio.string();
        record.annotation_path = annotation_path.string();
        try {
            record.duration_s = wav_info(record.audio_path).duration_s();
        } catch (const std::exception& e) {
            result.log.push_back(format_diagnostic({Severity::error, e.what()}, id));
            continue;
        }

        BeatAnnotation annotation;
        try {
            annotation = load_beat_file(record.annotation_path);
        } catch (const std::exception& e) {
            result.log.push_back(format_diagnostic({Severity::error, e.what()}, id));
            continue;
        }
        if (annotation.has_positions()) {
            try {
                record.inferred_meter = infer_meter(annotation.positions);
            } catch (const std::exception& e) {
                result.log.push_back(format_diagnostic({Severity::warning, e.what()}, id));
            }
        }
        result.records.push_back(std::move(record));
    }

    std::sort(result.records.begin(), result.records.end(),
              [](const TrackRecord& a, const TrackRecord& b) { return a.track_id < b.track_id; });
    return result;
}

std::vector<MeterStatsRow> corpus_stats(const std::vector<TrackRecord>& records) {
    std::map<std::string, MeterStatsRow> rows;
    MeterStatsRow total{"total", 0, 0.0};
    for (const TrackRecord& record : records) {
        std::string label = meter_label(record.inferred_meter);
        MeterStatsRow& row = rows[label];
        row.meter = label;
        row.tracks += 1;
        row.hours += record.duration_s / 3600.0;
        total.tracks += 1;
        total.hours += record.duration_s / 3600.0;
    }

    std::vector<MeterStatsRow> result;
    result.reserve(rows.size() + 1);
    for (auto& [label, row] : rows) {
        result.push_back(std::move(row));
    }
    result.push_back(total);
    return result;
}

std::string format_stats(const std::vector<MeterStatsRow>& rows) {
    std::string out;
    for (const MeterStatsRow& row : rows) {
        out += row.meter + ": " + std::to_string(row.tracks) + " track" +
               (row.tracks == 1 ? "" : "s") + ", " + detail::format_fixed(row.hours, 4) + " h\n";
    }
    return out;
}

ManifestSet make_manifests(const std::vector<TrackRecord>& records, double train_fraction,
                           std::uint64_t seed, const std::string& augmented_root,
                           double val_fraction) {
    if (!(train_fraction > 0.0) || train_fraction > 1.0) {
        throw std::invalid_argument("train fraction must be in (0, 1]");
    }
    if (val_fraction < 0.0 || val_fraction >= 1.0) {
        throw std::invalid_argument("validation fraction must be in [0, 1)");
    }

    std::vector<TrackRecord> common_time;
    std::vector<TrackRecord> odd_meters;
    for (const TrackRecord& record : records) {
        if (!record.is_original() || !record.inferred_meter) {
            continue;
        }
        int numerator = record.inferred_meter->numerator;
        if (numerator == 4) {
            common_time.push_back(record);
        } else if (numerator == 2 || numerator == 3) {
            odd_meters.push_back(record);
        }
    }
    if (common_time.empty()) {
        throw std::runtime_error("no 4/4 tracks to split");
    }

    std::size_t take =
        static_cast<std::size_t>(std::llround(train_fraction * common_time.size()));
    if (take < 1) {
        throw std::runtime_error("train fraction leaves the Baseline split empty");
    }
    if (take >= common_time.size()) {
        throw std::runtime_error(
            "train fraction leaves no 4/4 tracks for the test split");
    }

    std::vector<std::size_t> perm = seeded_permutation(common_time.size(), seed);

    ManifestSet set;
    set.baseline.name = "Baseline";
    set.baseline.split_seed = seed;
    for (std::size_t k = 0; k < take; ++k) {
        set.baseline.records.push_back(common_time[perm[k]]);
    }

    set.test.name = "test";
    set.test.split_seed = seed;
    for (const TrackRecord& record : odd_meters) {
        set.test.records.push_back(record);
    }
    for (std::size_t k = take; k < common_time.size(); ++k) {
        set.test.records.push_back(common_time[perm[k]]);
    }

    set.augf.name = "AugF";
    set.augf.split_seed = seed;
    set.augf.records = set.baseline.records;
    fs::path aug_root(augmented_root);
    for (int target : {2, 3}) {
        for (const TrackRecord& source : set.baseline.records) {
            TrackRecord augmented;
            augmented.track_id = augmented_track_id(source.track_id, target);
            augmented.audio_path = (aug_root / (augmented.track_id + ".wav")).string();
            augmented.annotation_path = (aug_root / (augmented.track_id + ".beats")).string();
            augmented.inferred_meter = TimeSignature(target);
            augmented.augmented_target = TimeSignature(target);
            set.augf.records.push_back(std::move(augmented));
        }
    }

    if (val_fraction > 0.0) {
        std::size_t val_take = static_cast<std::size_t>(std::llround(val_fraction * take));
        if (val_take < 1 || val_take >= take) {
            throw std::runtime_error("validation fraction must carve a proper subset of Baseline");
        }
        Manifest val;
        val.name = "val";
        val.split_seed = seed;
        val.records.assign(set.baseline.records.end() - static_cast<long>(val_take),
                           set.baseline.records.end());
        set.validation = std::move(val);
    }
    return set;
}

std::string serialize_manifest(const Manifest& manifest) {
    std::string out = "# manifest " + manifest.name + "\n# seed " +
                      std::to_string(manifest.split_seed) + "\n";
    for (const TrackRecord& record : manifest.records) {
        out += record.track_id;
        out += '\t';
        out += record.audio_path;
        out += '\t';
        out += record.annotation_path;
        out += '\t';
        out += record.inferred_meter ? to_string(*record.inferred_meter) : "-";
        out += '\t';
        out += origin_label(record);
        out += '\n';
    }
    return out;
}

Manifest parse_manifest(std::string_view text) {
    Manifest manifest;
    std::size_t line_number = 0;
    for (std::string_view raw_line : detail::split_lines(text)) {
        ++line_number;
        std::string_view line = raw_line;
        if (detail::trim(line).empty()) {
            continue;
        }
        if (detail::trim(line).starts_with("#")) {
            std::vector<std::string_view> tokens = detail::split_tokens(detail::trim(line));
            if (tokens.size() >= 3 && tokens[1] == "manifest") {
                manifest.name = std::string(tokens[2]);
            } else if (tokens.size() >= 3 && tokens[1] == "seed") {
                long long seed = 0;
                if (detail::parse_int(tokens[2], seed)) {
                    manifest.split_seed = static_cast<std::uint64_t>(seed);
                }
            }
            continue;
        }

        std::vector<std::string_view> fields;
        std::size_t pos = 0;
        while (true) {
            std::size_t tab = line.find('\t', pos);
            if (tab == std::string_view::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, tab - pos));
            pos = tab + 1;
        }
        if (fields.size() != 5) {
            throw std::runtime_error("manifest line " + std::to_string(line_number) +
                                     ": expected 5 tab-separated fields");
        }

        TrackRecord record;
        record.track_id = std::string(detail::trim(fields[0]));
        record.audio_path = std::string(fields[1]);
        record.annotation_path = std::string(fields[2]);
        std::string_view meter = detail::trim(fields[3]);
        if (meter != "-") {
            record.inferred_meter = parse_time_signature(meter);
        }
        std::string_view origin = detail::trim(fields[4]);
        if (origin.starts_with("augmented(") && origin.ends_with(")")) {
            record.augmented_target =
                parse_time_signature(origin.substr(10, origin.size() - 11));
        } else if (origin != "original") {
            throw std::runtime_error("manifest line " + std::to_string(line_number) +
                                     ": unknown origin " + std::string(origin));
        }
        manifest.records.push_back(std::move(record));
    }
    return manifest;
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    detail::write_text_file(path, serialize_manifest(manifest));
}

Manifest read_manifest(const std::string& path) {
    try {
        return parse_manifest(detail::read_text_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string serialize_intervals(const std::vector<TimeInterval>& intervals) {
    std::string out;
    for (const TimeInterval& interval : intervals) {
        out += detail::format_fixed(interval.start, 6);
        out += ' ';
        out += detail::format_fixed(interval.end, 6);
        out += '\n';
    }
    return out;
}

std::vector<TimeInterval> parse_intervals(std::string_view text) {
    std::vector<TimeInterval> intervals;
    std::size_t line_number = 0;
    for (std::string_view raw_line : detail::split_lines(text)) {
        ++line_number;
        std::string_view line = detail::trim(raw_line);
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> tokens = detail::split_tokens(line);
        TimeInterval interval;
        if (tokens.size() != 2 || !detail::parse_double(tokens[0], interval.start) ||
            !detail::parse_double(tokens[1], interval.end) || interval.start >= interval.end) {
            throw std::runtime_error("interval line " + std::to_string(line_number) +
                                     ": expected \"start end\" with start < end");
        }
        intervals.push_back(interval);
    }
    return intervals;
}

AugmentRunResult run_augment(const Manifest& manifest, const std::string& output_root,
                             const AugmentOptions& options) {
    std::vector<AugmentationSpec> specs;
    for (int target : options.targets) {
        specs.push_back(AugmentationSpec::to_meter(target));
    }
    fs::create_directories(output_root);
    fs::path out_root(output_root);

    struct Slot {
        std::vector<TrackRecord> records;
        std::vector<std::string> log;
        std::size_t failures = 0;
    };
    std::vector<Slot> slots(manifest.records.size());

    auto process_track = [&](std::size_t index) {
        const TrackRecord& record = manifest.records[index];
        Slot& slot = slots[index];

        if (!record.is_original()) {
            slot.log.push_back(format_diagnostic(
                {Severity::warning, "not an original track; skipped"}, record.track_id));
            slot.failures += 1;
            return;
        }

        BeatAnnotation annotation;
        AudioBuffer audio;
        try {
            annotation = load_beat_file(record.annotation_path);
            for (const Diagnostic& diagnostic : validate(annotation)) {
                throw std::runtime_error(diagnostic.message + "; track skipped");
            }
            audio = read_wav(record.audio_path);
        } catch (const std::exception& e) {
            slot.log.push_back(format_diagnostic({Severity::error, e.what()}, record.track_id));
            slot.failures += 1;
            return;
        }

        for (const AugmentationSpec& spec : specs) {
            std::string aug_id = augmented_track_id(record.track_id, spec.target_numerator);
            try {
                AugmentedResult augmented = augment_track(annotation, spec, audio.duration_s(),
                                                          options.remove_trailing);

                std::vector<SampleInterval> sample_intervals;
                sample_intervals.reserve(augmented.kept_intervals.size());
                for (const TimeInterval& interval : augmented.kept_intervals) {
                    sample_intervals.push_back(
                        seconds_to_interval(interval, audio.sample_rate, audio.size()));
                }
                AudioBuffer remixed =
                    remix(audio, sample_intervals, options.snap_to_zero_crossings);

                TrackRecord out;
                out.track_id = aug_id;
                out.audio_path = (out_root / (aug_id + ".wav")).string();
                out.annotation_path = (out_root / (aug_id + ".beats")).string();
                out.inferred_meter = TimeSignature(spec.target_numerator);
                out.augmented_target = TimeSignature(spec.target_numerator);
                out.duration_s = remixed.duration_s();

                write_wav(remixed, out.audio_path, options.wav_format);
                BeatAnnotation corrected;
                corrected.track_id = aug_id;
                corrected.beats = std::move(augmented.corrected_beats);
                corrected.positions = std::move(augmented.corrected_positions);
                save_beat_file(corrected, out.annotation_path);
                detail::write_text_file((out_root / (aug_id + ".intervals")).string(),
                                        serialize_intervals(augmented.kept_intervals));

                slot.records.push_back(std::move(out));
            } catch (const std::exception& e) {
                slot.log.push_back(format_diagnostic({Severity::error, e.what()}, aug_id));
                slot.failures += 1;
            }
        }
    };

    // Track-level parallelism; every worker writes only its own slot and its
    // own output files, and results are merged in manifest order afterwards.
    unsigned jobs = worker_count(options.jobs, manifest.records.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < manifest.records.size(); ++i) {
            process_track(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < manifest.records.size();
                     i = next.fetch_add(1)) {
                    process_track(i);
                }
            });
        }
        for (std::thread& worker : workers) {
            worker.join();
        }
    }

    AugmentRunResult result;
    for (Slot& slot : slots) {
        std::move(slot.records.begin(), slot.records.end(), std::back_inserter(result.augmented));
        std::move(slot.log.begin(), slot.log.end(), std::back_inserter(result.log));
        result.failures += slot.failures;
    }
    return result;
}

EvaluateRunResult run_evaluate(const std::string& estimates_root, const Manifest& references,
                               const EvaluateOptions& options) {
    if (references.records.empty()) {
        throw std::runtime_error("manifest has no tracks to evaluate");
    }
    EvaluateRunResult result;
    fs::path est_root(estimates_root);
    const std::string extension =
        options.level == EventLevel::downbeat ? ".downbeats" : ".beats";

    std::vector<EvaluationReport> reports;
    std::map<std::string, std::string> meter_by_track;
    for (const TrackRecord& record : references.records) {
        meter_by_track[record.track_id] = meter_label(record.inferred_meter);

        EventSequence reference;
        EventSequence estimate;
        std::vector<Diagnostic> extra;
        try {
            BeatAnnotation annotation = load_beat_file(record.annotation_path);
            if (options.level == EventLevel::downbeat) {
                if (!annotation.has_positions()) {
                    throw std::runtime_error(
                        "annotation has no positions; downbeats unavailable");
                }
                std::vector<double> downbeats;
                for (std::size_t i = 0; i < annotation.beats.size(); ++i) {
                    if (annotation.positions[i] == 1) {
                        downbeats.push_back(annotation.beats[i]);
                    }
                }
                reference = EventSequence::from(std::move(downbeats));
            } else {
                reference = EventSequence::from(annotation.beats);
            }
        } catch (const std::exception& e) {
            extra.push_back({Severity::error, std::string("reference unavailable: ") + e.what()});
        }

        fs::path estimate_path = est_root / (record.track_id + extension);
        if (extra.empty()) {
            if (!fs::exists(estimate_path)) {
                extra.push_back({Severity::error, "estimate file missing"});
                result.missing += 1;
            } else {
                try {
                    estimate = parse_event_times(detail::read_text_file(estimate_path.string()));
                } catch (const std::exception& e) {
                    extra.push_back(
                        {Severity::error, std::string("estimate unreadable: ") + e.what()});
                    result.missing += 1;
                }
            }
        }

        EvaluationReport report;
        if (extra.empty()) {
            report = evaluate_track(drop_intro(estimate, options.skip_intro_s),
                                    drop_intro(reference, options.skip_intro_s),
                                    record.track_id, options.level, options.tolerances);
        } else {
            // Scores stay all-zero; the diagnostics say why.
            report.track_id = record.track_id;
            report.level = options.level;
            report.tolerances = options.tolerances;
        }
        for (const Diagnostic& diagnostic : extra) {
            report.diagnostics.push_back(diagnostic);
        }
        for (const Diagnostic& diagnostic : report.diagnostics) {
            result.log.push_back(format_diagnostic(diagnostic, record.track_id));
        }
        reports.push_back(std::move(report));
    }

    result.report = aggregate(std::move(reports), meter_by_track);
    return result;
}

}  // namespace meteraug
