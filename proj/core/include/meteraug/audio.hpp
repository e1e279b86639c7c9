#pragma once

#include <cstddef>
#include <vector>

#include "meteraug/augmentation.hpp"

namespace meteraug {

// Mono audio, samples nominally in [-1, 1].
struct AudioBuffer {
    std::vector<float> samples;
    int sample_rate = 0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

// Half-open sample interval with start < end <= buffer length.
struct SampleInterval {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start; }
    bool operator==(const SampleInterval&) const = default;
};

// Position of the sign change nearest to index, where a change happens at the
// first sample of the new sign and zero counts as non-negative. Ties go to
// the earlier crossing; if the buffer has no crossing, index comes back
// unchanged. index may be anywhere in [0, size].
std::size_t nearest_zero_crossing(const AudioBuffer& buffer, std::size_t index);

// Seconds -> samples with round-half-away-from-zero endpoints, clamped to
// buffer_length. Throws if the clamped interval is degenerate.
SampleInterval seconds_to_interval(double start_s, double end_s, int sample_rate,
                                   std::size_t buffer_length);
SampleInterval seconds_to_interval(const TimeInterval& interval, int sample_rate,
                                   std::size_t buffer_length);

// Concatenates the given slices in order. With snap_to_zero_crossings, each
// boundary independently moves to its nearest crossing first (no crossfade);
// slices that become empty are skipped. Intervals must be ordered and
// non-overlapping on input.
AudioBuffer remix(const AudioBuffer& buffer, const std::vector<SampleInterval>& intervals,
                  bool snap_to_zero_crossings);

struct ClickTrackParams {
    double beat_hz = 1000.0;
    double downbeat_hz = 2000.0;
    double click_s = 0.015;
    double decay_s = 0.004;
    float amplitude = 0.85f;
};

// Silence with a short decaying click at every beat; beats on position 1 use
// the (higher) downbeat frequency. Each click opens on its loudest sample and
// is preceded by silence, so onsets are sharp and land on a zero crossing.
// positions may be empty; beats must lie inside [0, duration_s).
AudioBuffer synthesize_click_track(const std::vector<double>& beats,
                                   const std::vector<int>& positions, int sample_rate,
                                   double duration_s, const ClickTrackParams& params = {});

}  // namespace meteraug
