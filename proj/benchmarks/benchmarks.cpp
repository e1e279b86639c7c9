#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "meteraug/annotation.hpp"
#include "meteraug/audio.hpp"
#include "meteraug/augmentation.hpp"
#include "meteraug/evaluation.hpp"
#include "meteraug/peaks.hpp"

using namespace meteraug;

namespace {

// A four-minute 4/4 track at 120 BPM, the typical workload shape.
BeatAnnotation four_minutes_of_44() {
    BeatAnnotation annotation;
    for (int k = 0; k < 480; ++k) {
        annotation.beats.push_back(k * 0.5);
        annotation.positions.push_back(k % 4 + 1);
    }
    return annotation;
}

EventSequence jittered(double start, double period, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-0.02, 0.02);
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        times.push_back(start + k * period + noise(rng));
    }
    return EventSequence::from(std::move(times));
}

}  // namespace

static void BM_AugmentTrack(benchmark::State& state) {
    BeatAnnotation annotation = four_minutes_of_44();
    AugmentationSpec spec = AugmentationSpec::to_meter(static_cast<int>(state.range(0)));
    double duration = annotation.beats.back() + 0.4;
    for (auto _ : state) {
        AugmentedResult result = augment_track(annotation, spec, duration);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_AugmentTrack)->Arg(2)->Arg(3);

static void BM_Remix(benchmark::State& state) {
    BeatAnnotation annotation = four_minutes_of_44();
    const int sample_rate = 22050;
    double duration = annotation.beats.back() + 0.4;
    AudioBuffer audio =
        synthesize_click_track(annotation.beats, annotation.positions, sample_rate, duration);

    AugmentedResult augmented =
        augment_track(annotation, AugmentationSpec::to_meter(3), duration);
    std::vector<SampleInterval> intervals;
    for (const TimeInterval& interval : augmented.kept_intervals) {
        intervals.push_back(seconds_to_interval(interval, sample_rate, audio.size()));
    }

    bool snap = state.range(0) != 0;
    for (auto _ : state) {
        AudioBuffer out = remix(audio, intervals, snap);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_Remix)->Arg(0)->Arg(1);

static void BM_NearestZeroCrossing(benchmark::State& state) {
    AudioBuffer buffer;
    buffer.sample_rate = 22050;
    buffer.samples.resize(22050 * 30);
    for (std::size_t i = 0; i < buffer.samples.size(); ++i) {
        buffer.samples[i] =
            0.8f * std::sin(static_cast<float>(i) * 2.0f * 3.14159265f * 100.0f / 22050.0f);
    }
    std::size_t probe = 0;
    for (auto _ : state) {
        probe = (probe + 7919) % buffer.size();
        benchmark::DoNotOptimize(nearest_zero_crossing(buffer, probe));
    }
}
BENCHMARK(BM_NearestZeroCrossing);

static void BM_AdaptiveThresholdPeaks(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    ActivationCurve curve;
    curve.frame_rate = 100.0;
    curve.values.resize(24000);
    for (double& v : curve.values) {
        v = value(rng);
    }
    for (auto _ : state) {
        std::vector<std::size_t> peaks = adaptive_threshold_peaks(curve);
        benchmark::DoNotOptimize(peaks);
    }
}
BENCHMARK(BM_AdaptiveThresholdPeaks);

static void BM_FMeasure(benchmark::State& state) {
    EventSequence est = jittered(0.5, 0.5, 480, 1);
    EventSequence ref = jittered(0.5, 0.5, 480, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(f_measure(est, ref, 0.07));
    }
}
BENCHMARK(BM_FMeasure);

static void BM_Continuity(benchmark::State& state) {
    EventSequence est = jittered(0.5, 0.5, 480, 1);
    EventSequence ref = jittered(0.5, 0.5, 480, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(continuity(est, ref));
    }
}
BENCHMARK(BM_Continuity);

BENCHMARK_MAIN();
