#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "meteraug/annotation.hpp"
#include "meteraug/audio.hpp"
#include "meteraug/pipeline.hpp"
#include "meteraug/wav.hpp"
#include "test_util.hpp"

using namespace meteraug;
namespace fs = std::filesystem;

namespace {

AudioBuffer silence(std::size_t samples, int sample_rate) {
    AudioBuffer buffer;
    buffer.samples.assign(samples, 0.0f);
    buffer.sample_rate = sample_rate;
    return buffer;
}

// Constant-tempo 3/4 annotation from full bars.
BeatAnnotation make_34(int bars, double bpm, double start_s = 0.0) {
    BeatAnnotation annotation;
    double period = 60.0 / bpm;
    for (int bar = 0; bar < bars; ++bar) {
        for (int pos = 1; pos <= 3; ++pos) {
            annotation.beats.push_back(start_s + (bar * 3 + pos - 1) * period);
            annotation.positions.push_back(pos);
        }
    }
    return annotation;
}

TrackRecord original_record(std::string id, const BeatAnnotation& annotation, int numerator) {
    TrackRecord record;
    record.track_id = std::move(id);
    record.inferred_meter = TimeSignature(numerator);
    record.duration_s = annotation.beats.back() + 0.5;
    return record;
}

// Writes a click-track wav plus its annotation and returns the manifest row.
TrackRecord write_click_track(const testutil::ScopedTempDir& dir, const std::string& id,
                              const BeatAnnotation& annotation, double duration_s,
                              int sample_rate = 8000) {
    TrackRecord record;
    record.track_id = id;
    record.audio_path = dir.file(id + ".wav");
    record.annotation_path = dir.file(id + ".beats");
    record.inferred_meter = TimeSignature(4);
    record.duration_s = duration_s;
    AudioBuffer audio = synthesize_click_track(annotation.beats, annotation.positions,
                                               sample_rate, duration_s);
    write_wav(audio, record.audio_path);
    save_beat_file(annotation, record.annotation_path);
    return record;
}

bool same_record(const TrackRecord& a, const TrackRecord& b) {
    return a.track_id == b.track_id && a.audio_path == b.audio_path &&
           a.annotation_path == b.annotation_path && a.inferred_meter == b.inferred_meter &&
           a.duration_s == b.duration_s && a.augmented_target == b.augmented_target;
}

bool any_contains(const std::vector<std::string>& log, const std::string& needle) {
    for (const std::string& line : log) {
        if (line.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("augmented track ids append the target meter") {
    CHECK(augmented_track_id("song", 2) == "song.aug24");
    CHECK(augmented_track_id("disk1/song", 3) == "disk1/song.aug34");
}

TEST_CASE("scan pairs audio with annotations and logs the rest") {
    testutil::ScopedTempDir dir;
    fs::create_directory(dir.path() / "sub");

    write_wav(silence(16000, 8000), dir.file("a.wav"));
    testutil::write_file(dir.file("a.beats"), serialize_beat_file(testutil::make_44(2, 120)));

    write_wav(silence(8000, 8000), (dir.path() / "sub" / "b.wav").string());
    testutil::write_file((dir.path() / "sub" / "b.beats").string(),
                         serialize_beat_file(make_34(2, 120)));

    testutil::write_file(dir.file("c.wav"), "not even a wav");

    write_wav(silence(4000, 8000), dir.file("d.wav"));
    testutil::write_file(dir.file("d.beats"), "zero point five\n");

    write_wav(silence(4000, 8000), dir.file("e.wav"));
    testutil::write_file(dir.file("e.beats"), "0.0 1\n0.5 1\n1.0 1\n");

    testutil::write_file(dir.file("f.wav"), "RIFFgarbage");
    testutil::write_file(dir.file("f.beats"), serialize_beat_file(testutil::make_44(1, 120)));

    write_wav(silence(4000, 8000), dir.file("g.wav"));
    testutil::write_file(dir.file("g.beats"), "0.0\n0.5\n1.0\n");

    ScanResult scan = scan_corpus(dir.path().string());

    REQUIRE(scan.records.size() == 4);
    CHECK(scan.records[0].track_id == "a");
    CHECK(scan.records[1].track_id == "e");
    CHECK(scan.records[2].track_id == "g");
    CHECK(scan.records[3].track_id == "sub_b");

    CHECK(scan.records[0].inferred_meter == TimeSignature(4));
    CHECK(scan.records[0].duration_s == 2.0);
    CHECK(scan.records[0].audio_path == dir.file("a.wav"));
    CHECK(scan.records[0].annotation_path == dir.file("a.beats"));
    CHECK(scan.records[0].is_original());

    // Unusable positions and beat-only files survive the scan meterless.
    CHECK_FALSE(scan.records[1].inferred_meter.has_value());
    CHECK_FALSE(scan.records[2].inferred_meter.has_value());
    CHECK(scan.records[3].inferred_meter == TimeSignature(3));

    REQUIRE(scan.log.size() == 4);
    CHECK(any_contains(scan.log, "c annotation missing"));
    CHECK(any_contains(scan.log, "error d "));
    CHECK(any_contains(scan.log, "warning e "));
    CHECK(any_contains(scan.log, "error f "));
}

TEST_CASE("scan of an empty directory finds nothing") {
    testutil::ScopedTempDir dir;
    ScanResult scan = scan_corpus(dir.path().string());
    CHECK(scan.records.empty());
    CHECK(scan.log.empty());
}

TEST_CASE("scan refuses a root that is not a directory") {
    testutil::ScopedTempDir dir;
    CHECK_THROWS_AS(scan_corpus(dir.file("missing")), std::runtime_error);
}

TEST_CASE("stats group tracks by meter with a total row") {
    std::vector<TrackRecord> records(3);
    records[0].inferred_meter = TimeSignature(4);
    records[0].duration_s = 30.0;
    records[1].inferred_meter = TimeSignature(4);
    records[1].duration_s = 30.0;
    records[2].duration_s = 3600.0;

    std::vector<MeterStatsRow> rows = corpus_stats(records);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].meter == "4/4");
    CHECK(rows[0].tracks == 2);
    CHECK(rows[1].meter == "unknown");
    CHECK(rows[2].meter == "total");
    CHECK(rows[2].tracks == 3);

    CHECK(format_stats(rows) ==
          "4/4: 2 tracks, 0.0167 h\n"
          "unknown: 1 track, 1.0000 h\n"
          "total: 3 tracks, 1.0167 h\n");
}

TEST_CASE("manifests split 4/4 tracks and plan the augmented copies") {
    std::vector<TrackRecord> records;
    for (int k = 0; k < 10; ++k) {
        records.push_back(original_record("t0" + std::to_string(k), testutil::make_44(2, 120), 4));
    }
    records.push_back(original_record("w0", make_34(2, 120), 3));
    records.push_back(original_record("w1", make_34(2, 120), 3));

    ManifestSet set = make_manifests(records, 0.8, 17, "/aug");

    CHECK(set.baseline.name == "Baseline");
    CHECK(set.baseline.split_seed == 17);
    REQUIRE(set.baseline.records.size() == 8);
    CHECK(set.test.name == "test");
    REQUIRE(set.test.records.size() == 4);
    CHECK(set.augf.name == "AugF");
    REQUIRE(set.augf.records.size() == 24);
    CHECK_FALSE(set.validation.has_value());

    // The odd-meter originals lead the test split, then the held-out 4/4.
    CHECK(set.test.records[0].track_id == "w0");
    CHECK(set.test.records[1].track_id == "w1");
    CHECK(set.test.records[2].inferred_meter == TimeSignature(4));

    // Baseline and the 4/4 tail of test partition the ten 4/4 tracks.
    std::vector<std::string> seen;
    for (const TrackRecord& r : set.baseline.records) {
        seen.push_back(r.track_id);
    }
    seen.push_back(set.test.records[2].track_id);
    seen.push_back(set.test.records[3].track_id);
    std::sort(seen.begin(), seen.end());
    for (int k = 0; k < 10; ++k) {
        CHECK(seen[k] == "t0" + std::to_string(k));
    }

    // AugF is Baseline plus one planned copy per source and target.
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(same_record(set.augf.records[k], set.baseline.records[k]));
        const TrackRecord& two = set.augf.records[8 + k];
        const TrackRecord& three = set.augf.records[16 + k];
        CHECK(two.track_id == set.baseline.records[k].track_id + ".aug24");
        CHECK(two.inferred_meter == TimeSignature(2));
        CHECK(two.augmented_target == TimeSignature(2));
        CHECK(two.audio_path == "/aug/" + two.track_id + ".wav");
        CHECK(two.annotation_path == "/aug/" + two.track_id + ".beats");
        CHECK(three.track_id == set.baseline.records[k].track_id + ".aug34");
        CHECK(three.augmented_target == TimeSignature(3));
    }
}

TEST_CASE("the split is pinned to the seed") {
    std::vector<TrackRecord> records;
    for (int k = 0; k < 10; ++k) {
        records.push_back(original_record("t0" + std::to_string(k), testutil::make_44(2, 120), 4));
    }

    ManifestSet first = make_manifests(records, 0.8, 99, "/aug");
    ManifestSet second = make_manifests(records, 0.8, 99, "/aug");
    CHECK(serialize_manifest(first.baseline) == serialize_manifest(second.baseline));
    CHECK(serialize_manifest(first.augf) == serialize_manifest(second.augf));
    CHECK(serialize_manifest(first.test) == serialize_manifest(second.test));

    ManifestSet other = make_manifests(records, 0.8, 100, "/aug");
    CHECK(serialize_manifest(first.baseline) != serialize_manifest(other.baseline));
}

TEST_CASE("splits reject fractions that empty a side") {
    std::vector<TrackRecord> records;
    for (int k = 0; k < 10; ++k) {
        records.push_back(original_record("t0" + std::to_string(k), testutil::make_44(2, 120), 4));
    }

    CHECK_THROWS_AS(make_manifests(records, 0.0, 1, "/aug"), std::invalid_argument);
    CHECK_THROWS_AS(make_manifests(records, 1.2, 1, "/aug"), std::invalid_argument);
    CHECK_THROWS_AS(make_manifests(records, 1.0, 1, "/aug"), std::runtime_error);
    CHECK_THROWS_AS(make_manifests(records, 0.01, 1, "/aug"), std::runtime_error);

    std::vector<TrackRecord> only_odd{original_record("w0", make_34(2, 120), 3)};
    CHECK_THROWS_AS(make_manifests(only_odd, 0.8, 1, "/aug"), std::runtime_error);
}

TEST_CASE("a validation fraction carves the tail of Baseline") {
    std::vector<TrackRecord> records;
    for (int k = 0; k < 10; ++k) {
        records.push_back(original_record("t0" + std::to_string(k), testutil::make_44(2, 120), 4));
    }

    ManifestSet set = make_manifests(records, 0.8, 17, "/aug", 0.25);
    REQUIRE(set.validation.has_value());
    CHECK(set.validation->name == "val");
    REQUIRE(set.validation->records.size() == 2);
    CHECK(same_record(set.validation->records[0], set.baseline.records[6]));
    CHECK(same_record(set.validation->records[1], set.baseline.records[7]));

    CHECK_THROWS_AS(make_manifests(records, 0.8, 17, "/aug", 0.01), std::runtime_error);
    CHECK_THROWS_AS(make_manifests(records, 0.8, 17, "/aug", 0.99), std::runtime_error);
    CHECK_THROWS_AS(make_manifests(records, 0.8, 17, "/aug", -0.1), std::invalid_argument);
}

TEST_CASE("non-original and meterless records stay out of the splits") {
    std::vector<TrackRecord> records;
    for (int k = 0; k < 4; ++k) {
        records.push_back(original_record("t" + std::to_string(k), testutil::make_44(2, 120), 4));
    }
    // The ghost has no base track among the originals, so a planned AugF
    // record can never legitimately carry this id.
    TrackRecord copy = original_record("ghost.aug24", testutil::make_44(2, 120), 2);
    copy.augmented_target = TimeSignature(2);
    records.push_back(copy);
    TrackRecord meterless = original_record("m0", testutil::make_44(2, 120), 4);
    meterless.inferred_meter.reset();
    records.push_back(meterless);

    ManifestSet set = make_manifests(records, 0.75, 5, "/aug");
    CHECK(set.baseline.records.size() == 3);
    CHECK(set.test.records.size() == 1);
    for (const Manifest* manifest : {&set.baseline, &set.augf, &set.test}) {
        for (const TrackRecord& record : manifest->records) {
            CHECK(record.track_id != "ghost.aug24");
            CHECK(record.track_id != "m0");
        }
    }
}

TEST_CASE("manifests survive a serialize and parse round trip") {
    Manifest manifest;
    manifest.name = "AugF";
    manifest.split_seed = 4242;

    TrackRecord plain;
    plain.track_id = "t1";
    plain.audio_path = "/corpus/t1.wav";
    plain.annotation_path = "/corpus/t1.beats";
    plain.inferred_meter = TimeSignature(4);
    manifest.records.push_back(plain);

    TrackRecord meterless;
    meterless.track_id = "t2";
    meterless.audio_path = "/corpus/t2.wav";
    meterless.annotation_path = "/corpus/t2.beats";
    manifest.records.push_back(meterless);

    TrackRecord augmented;
    augmented.track_id = "t1.aug34";
    augmented.audio_path = "/aug/t1.aug34.wav";
    augmented.annotation_path = "/aug/t1.aug34.beats";
    augmented.inferred_meter = TimeSignature(3);
    augmented.augmented_target = TimeSignature(3);
    manifest.records.push_back(augmented);

    Manifest parsed = parse_manifest(serialize_manifest(manifest));
    CHECK(parsed.name == "AugF");
    CHECK(parsed.split_seed == 4242);
    REQUIRE(parsed.records.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CAPTURE(k);
        TrackRecord expected = manifest.records[k];
        expected.duration_s = parsed.records[k].duration_s;
        CHECK(same_record(parsed.records[k], expected));
    }
    CHECK(parsed.records[1].is_original());
    CHECK_FALSE(parsed.records[2].is_original());
}

TEST_CASE("malformed manifest rows are rejected with their line number") {
    CHECK_THROWS_WITH_AS(parse_manifest("t1\t/a.wav\t/a.beats\t4/4\n"),
                         doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_manifest("t1\t/a.wav\t/a.beats\t4/4\tremixed\n"),
                         doctest::Contains("unknown origin"), std::runtime_error);
    CHECK_THROWS_AS(parse_manifest("t1\t/a.wav\t/a.beats\t5/8\toriginal\n"), std::exception);
}

TEST_CASE("manifest files round trip through disk") {
    testutil::ScopedTempDir dir;
    Manifest manifest;
    manifest.name = "Baseline";
    manifest.split_seed = 7;
    TrackRecord record;
    record.track_id = "t1";
    record.audio_path = "/corpus/t1.wav";
    record.annotation_path = "/corpus/t1.beats";
    record.inferred_meter = TimeSignature(4);
    manifest.records.push_back(record);

    std::string path = dir.file("Baseline.manifest");
    write_manifest(manifest, path);
    Manifest loaded = read_manifest(path);
    CHECK(loaded.name == "Baseline");
    CHECK(loaded.split_seed == 7);
    REQUIRE(loaded.records.size() == 1);
    CHECK(loaded.records[0].track_id == "t1");

    CHECK_THROWS_WITH_AS(read_manifest(dir.file("absent.manifest")),
                         doctest::Contains("absent.manifest"), std::runtime_error);
}

TEST_CASE("kept intervals round trip as text") {
    std::vector<TimeInterval> intervals{{0.0, 1.5}, {2.25, 3.0}};
    std::string text = serialize_intervals(intervals);
    CHECK(text == "0.000000 1.500000\n2.250000 3.000000\n");

    std::vector<TimeInterval> parsed = parse_intervals(text);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0] == TimeInterval{0.0, 1.5});
    CHECK(parsed[1] == TimeInterval{2.25, 3.0});

    CHECK(parse_intervals("\n  \n").empty());
    CHECK_THROWS_AS(parse_intervals("3.0 2.0\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_intervals("1.0\n"), std::runtime_error);
}

TEST_CASE("augment writes a remixed wav, annotation, and interval file per target") {
    testutil::ScopedTempDir corpus;
    Manifest manifest;
    manifest.name = "Baseline";
    manifest.records.push_back(
        write_click_track(corpus, "t1", testutil::make_44(2, 120), 4.0));
    manifest.records.push_back(
        write_click_track(corpus, "t2", testutil::make_44(3, 100, 0.3), 7.5));

    testutil::ScopedTempDir out;
    AugmentRunResult run = run_augment(manifest, out.path().string());

    CHECK(run.failures == 0);
    CHECK(run.log.empty());
    REQUIRE(run.augmented.size() == 4);
    CHECK(run.augmented[0].track_id == "t1.aug24");
    CHECK(run.augmented[1].track_id == "t1.aug34");
    CHECK(run.augmented[2].track_id == "t2.aug24");
    CHECK(run.augmented[3].track_id == "t2.aug34");

    for (const TrackRecord& record : run.augmented) {
        CAPTURE(record.track_id);
        REQUIRE(fs::exists(record.audio_path));
        REQUIRE(fs::exists(record.annotation_path));
        REQUIRE(fs::exists(out.file(record.track_id + ".intervals")));

        // The corrected annotation must read back in the target meter.
        BeatAnnotation corrected = load_beat_file(record.annotation_path);
        CHECK(infer_meter(corrected.positions) == *record.augmented_target);
        CHECK(corrected.track_id == record.annotation_path);

        CHECK(read_wav(record.audio_path).duration_s() == record.duration_s);
        CHECK_FALSE(parse_intervals(testutil::read_file(
                                        out.file(record.track_id + ".intervals")))
                        .empty());
        CHECK(record.duration_s < 7.5);
    }
}

TEST_CASE("augment reruns and parallel runs write identical bytes") {
    testutil::ScopedTempDir corpus;
    Manifest manifest;
    manifest.name = "Baseline";
    manifest.records.push_back(
        write_click_track(corpus, "t1", testutil::make_44(2, 120), 4.0));
    manifest.records.push_back(
        write_click_track(corpus, "t2", testutil::make_44(3, 100, 0.3), 7.5));

    testutil::ScopedTempDir serial_out;
    AugmentOptions serial;
    serial.jobs = 1;
    run_augment(manifest, serial_out.path().string(), serial);

    std::string wav_bytes = testutil::read_file(serial_out.file("t1.aug34.wav"));
    std::string beat_bytes = testutil::read_file(serial_out.file("t1.aug34.beats"));

    AugmentRunResult rerun = run_augment(manifest, serial_out.path().string(), serial);
    CHECK(rerun.failures == 0);
    CHECK(testutil::read_file(serial_out.file("t1.aug34.wav")) == wav_bytes);
    CHECK(testutil::read_file(serial_out.file("t1.aug34.beats")) == beat_bytes);

    testutil::ScopedTempDir parallel_out;
    AugmentOptions parallel;
    parallel.jobs = 2;
    AugmentRunResult threaded = run_augment(manifest, parallel_out.path().string(), parallel);
    REQUIRE(threaded.augmented.size() == 4);
    CHECK(threaded.augmented[0].track_id == "t1.aug24");
    for (const char* name : {"t1.aug24", "t1.aug34", "t2.aug24", "t2.aug34"}) {
        CAPTURE(name);
        CHECK(testutil::read_file(parallel_out.file(std::string(name) + ".wav")) ==
              testutil::read_file(serial_out.file(std::string(name) + ".wav")));
    }
}

TEST_CASE("augment skips tracks that fail validation or are not 4/4") {
    testutil::ScopedTempDir corpus;
    Manifest manifest;

    // Positions walk 1..4 then 1..3 twice, so validation flags a meter change.
    BeatAnnotation drifting = testutil::make_44(1, 120);
    BeatAnnotation waltz_tail = make_34(2, 120, 2.0);
    drifting.beats.insert(drifting.beats.end(), waltz_tail.beats.begin(), waltz_tail.beats.end());
    drifting.positions.insert(drifting.positions.end(), waltz_tail.positions.begin(),
                              waltz_tail.positions.end());
    manifest.records.push_back(write_click_track(corpus, "drift", drifting, 5.0));

    manifest.records.push_back(write_click_track(corpus, "waltz", make_34(3, 120), 5.0));

    TrackRecord copy;
    copy.track_id = "t1.aug24";
    copy.augmented_target = TimeSignature(2);
    manifest.records.push_back(copy);

    testutil::ScopedTempDir out;
    AugmentRunResult run = run_augment(manifest, out.path().string());

    CHECK(run.augmented.empty());
    // One failure for the invalid annotation, one per target for the 3/4
    // source, one for the already-augmented row.
    CHECK(run.failures == 4);
    CHECK(any_contains(run.log, "track skipped"));
    CHECK(any_contains(run.log, "not in 4/4"));
    CHECK(any_contains(run.log, "not an original track"));
}

TEST_CASE("augment rejects unknown target meters up front") {
    Manifest manifest;
    AugmentOptions options;
    options.targets = {5};
    testutil::ScopedTempDir out;
    CHECK_THROWS_AS(run_augment(manifest, out.path().string(), options),
                    std::invalid_argument);
}

TEST_CASE("evaluate scores estimate files against manifest annotations") {
    testutil::ScopedTempDir corpus;
    BeatAnnotation first = testutil::make_44(2, 120);
    BeatAnnotation second = testutil::make_44(2, 120, 0.25);
    save_beat_file(first, corpus.file("t1.beats"));
    save_beat_file(second, corpus.file("t2.beats"));

    Manifest manifest;
    for (const char* id : {"t1", "t2"}) {
        TrackRecord record;
        record.track_id = id;
        record.annotation_path = corpus.file(std::string(id) + ".beats");
        record.inferred_meter = TimeSignature(4);
        manifest.records.push_back(record);
    }

    testutil::ScopedTempDir estimates;
    testutil::write_file(estimates.file("t1.beats"), serialize_beat_file(first));
    testutil::write_file(estimates.file("t2.beats"), serialize_beat_file(second));

    EvaluateRunResult run = run_evaluate(estimates.path().string(), manifest);
    CHECK(run.missing == 0);
    CHECK(run.log.empty());
    REQUIRE(run.report.per_track.size() == 2);
    CHECK(run.report.overall.track_count == 2);
    CHECK(run.report.overall.f_measure == 1.0);
    CHECK(run.report.overall.cmlt == 1.0);
    CHECK(run.report.overall.amlc == 1.0);
    CHECK(run.report.by_meter.at("4/4").track_count == 2);
}

TEST_CASE("missing and unreadable estimates score zero and are counted") {
    testutil::ScopedTempDir corpus;
    BeatAnnotation annotation = testutil::make_44(2, 120);
    save_beat_file(annotation, corpus.file("t1.beats"));
    save_beat_file(annotation, corpus.file("t2.beats"));

    Manifest manifest;
    for (const char* id : {"t1", "t2"}) {
        TrackRecord record;
        record.track_id = id;
        record.annotation_path = corpus.file(std::string(id) + ".beats");
        record.inferred_meter = TimeSignature(4);
        manifest.records.push_back(record);
    }

    testutil::ScopedTempDir estimates;
    testutil::write_file(estimates.file("t1.beats"), serialize_beat_file(annotation));

    EvaluateRunResult run = run_evaluate(estimates.path().string(), manifest);
    CHECK(run.missing == 1);
    CHECK(any_contains(run.log, "estimate file missing"));
    REQUIRE(run.report.per_track.size() == 2);
    CHECK(run.report.per_track[1].f_measure == 0.0);
    CHECK(run.report.per_track[1].cmlt == 0.0);
    CHECK(run.report.overall.f_measure == 0.5);

    testutil::write_file(estimates.file("t2.beats"), "banana\n");
    EvaluateRunResult unreadable = run_evaluate(estimates.path().string(), manifest);
    CHECK(unreadable.missing == 1);
    CHECK(any_contains(unreadable.log, "estimate unreadable"));
}

TEST_CASE("downbeat evaluation reads downbeat estimates and needs positions") {
    testutil::ScopedTempDir corpus;
    save_beat_file(testutil::make_44(2, 120), corpus.file("t1.beats"));
    testutil::write_file(corpus.file("bare.beats"), "0.0\n0.5\n1.0\n");

    Manifest manifest;
    for (const char* id : {"t1", "bare"}) {
        TrackRecord record;
        record.track_id = id;
        record.annotation_path = corpus.file(std::string(id) + ".beats");
        record.inferred_meter = TimeSignature(4);
        manifest.records.push_back(record);
    }

    testutil::ScopedTempDir estimates;
    testutil::write_file(estimates.file("t1.downbeats"), "0.000000\n2.000000\n");
    testutil::write_file(estimates.file("bare.downbeats"), "0.000000\n2.000000\n");

    EvaluateOptions options;
    options.level = EventLevel::downbeat;
    EvaluateRunResult run = run_evaluate(estimates.path().string(), manifest, options);

    CHECK(run.missing == 0);
    CHECK(any_contains(run.log, "downbeats unavailable"));
    REQUIRE(run.report.per_track.size() == 2);
    CHECK(run.report.per_track[0].f_measure == 1.0);
    CHECK(run.report.per_track[0].level == EventLevel::downbeat);
    CHECK(run.report.per_track[1].f_measure == 0.0);
}

TEST_CASE("the intro skip drops early events from both sides") {
    testutil::ScopedTempDir corpus;
    BeatAnnotation annotation = testutil::make_44(2, 120);
    save_beat_file(annotation, corpus.file("t1.beats"));

    Manifest manifest;
    TrackRecord record;
    record.track_id = "t1";
    record.annotation_path = corpus.file("t1.beats");
    record.inferred_meter = TimeSignature(4);
    manifest.records.push_back(record);

    // The estimate starts one second in; without the skip, recall suffers.
    testutil::ScopedTempDir estimates;
    std::string late;
    for (double beat : annotation.beats) {
        if (beat >= 1.0) {
            late += std::to_string(beat) + "\n";
        }
    }
    testutil::write_file(estimates.file("t1.beats"), late);

    EvaluateRunResult plain = run_evaluate(estimates.path().string(), manifest);
    CHECK(plain.report.overall.f_measure < 1.0);

    EvaluateOptions options;
    options.skip_intro_s = 1.0;
    EvaluateRunResult skipped = run_evaluate(estimates.path().string(), manifest, options);
    CHECK(skipped.report.overall.f_measure == 1.0);
    CHECK(skipped.report.overall.cmlt == 1.0);
}

TEST_CASE("evaluate refuses an empty manifest") {
    testutil::ScopedTempDir estimates;
    CHECK_THROWS_AS(run_evaluate(estimates.path().string(), Manifest{}), std::runtime_error);
}

}  // TEST_SUITE
