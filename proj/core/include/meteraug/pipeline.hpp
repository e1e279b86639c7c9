#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meteraug/annotation.hpp"
#include "meteraug/augmentation.hpp"
#include "meteraug/evaluation.hpp"
#include "meteraug/wav.hpp"

namespace meteraug {

struct TrackRecord {
    std::string track_id;
    std::string audio_path;
    std::string annotation_path;
    std::optional<TimeSignature> inferred_meter;
    double duration_s = 0.0;
    // Set for records produced by augmentation; empty for originals.
    std::optional<TimeSignature> augmented_target;

    bool is_original() const { return !augmented_target.has_value(); }
};

struct Manifest {
    std::string name;
    std::uint64_t split_seed = 0;
    std::vector<TrackRecord> records;
};

// "<id>.aug24" / "<id>.aug34" naming shared by manifests and output files.
std::string augmented_track_id(const std::string& track_id, int target_numerator);

struct ScanResult {
    std::vector<TrackRecord> records;
    // One "<severity> <track_id> <message>" line per skipped file.
    std::vector<std::string> log;
};

// Walks root recursively for .wav files with a sibling .beats annotation.
// Unparseable annotations and unreadable audio are logged and skipped.
// Records come back sorted by track_id.
ScanResult scan_corpus(const std::string& root);

struct MeterStatsRow {
    std::string meter;
    std::size_t tracks = 0;
    double hours = 0.0;
};

// Per-meter counts and hours, e.g. "4/4: 2 tracks, 0.0167 h", plus a total.
std::vector<MeterStatsRow> corpus_stats(const std::vector<TrackRecord>& records);
std::string format_stats(const std::vector<MeterStatsRow>& rows);

struct ManifestSet {
    Manifest baseline;
    Manifest augf;
    Manifest test;
    std::optional<Manifest> validation;
};

// Shuffles the 4/4 originals with a seed-pinned permutation. Baseline is the
// train_fraction head; test is every 2/4 and 3/4 original plus the remaining
// 4/4; AugF is Baseline plus planned 2/4 and 3/4 augmentation records rooted
// at augmented_root. val_fraction > 0 additionally emits the tail of Baseline
// as a validation subset. Fractions that leave Baseline or test empty are
// errors.
ManifestSet make_manifests(const std::vector<TrackRecord>& records, double train_fraction,
                           std::uint64_t seed, const std::string& augmented_root,
                           double val_fraction = 0.0);

std::string serialize_manifest(const Manifest& manifest);
Manifest parse_manifest(std::string_view text);
void write_manifest(const Manifest& manifest, const std::string& path);
Manifest read_manifest(const std::string& path);

// "start end" six-decimal pairs, one kept interval per line.
std::string serialize_intervals(const std::vector<TimeInterval>& intervals);
std::vector<TimeInterval> parse_intervals(std::string_view text);

struct AugmentOptions {
    std::vector<int> targets = {2, 3};
    bool remove_trailing = true;
    bool snap_to_zero_crossings = true;
    WavFormat wav_format = WavFormat::float32;
    // 0 = pick from hardware concurrency.
    int jobs = 0;
};

struct AugmentRunResult {
    std::vector<TrackRecord> augmented;
    std::vector<std::string> log;
    std::size_t failures = 0;
};

// Remixes every original manifest track into every target meter, writing
// "<id>.aug<N>4.wav", ".beats", and ".intervals" under output_root. Tracks
// that fail validation are logged and skipped; reruns overwrite with
// identical bytes. Tracks are processed by a bounded worker pool; results
// and logs keep manifest order.
AugmentRunResult run_augment(const Manifest& manifest, const std::string& output_root,
                             const AugmentOptions& options = {});

struct EvaluateOptions {
    EventLevel level = EventLevel::beat;
    EvaluationTolerances tolerances;
    // Events earlier than this are dropped from both sides before scoring.
    double skip_intro_s = 0.0;
};

struct EvaluateRunResult {
    AggregateReport report;
    std::vector<std::string> log;
    std::size_t missing = 0;
};

// Scores "<track_id>.beats" (or ".downbeats") files under estimates_root
// against the manifest's annotations. A missing or unreadable estimate
// yields an all-zero report plus a diagnostic rather than aborting the run.
EvaluateRunResult run_evaluate(const std::string& estimates_root, const Manifest& references,
                               const EvaluateOptions& options = {});

}  // namespace meteraug
