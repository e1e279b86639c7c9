#include "meteraug/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace meteraug {

namespace {

// Zero counts as non-negative, so silence is all one sign and a crossing is
// the first sample where the sign actually flips.
inline bool non_negative(float sample) {
    return sample >= 0.0f;
}

inline bool is_crossing(const std::vector<float>& samples, std::size_t i) {
    return non_negative(samples[i - 1]) != non_negative(samples[i]);
}

}  // namespace

std::size_t nearest_zero_crossing(const AudioBuffer& buffer, std::size_t index) {
    const std::vector<float>& samples = buffer.samples;
    if (index > samples.size()) {
        throw std::out_of_range("zero crossing index out of range");
    }
    if (samples.size() < 2) {
        return index;
    }
    const std::size_t last = samples.size() - 1;
    const std::size_t max_distance = std::max(index, last);
    for (std::size_t d = 0; d <= max_distance; ++d) {
        // The earlier candidate wins distance ties.
        if (index >= d) {
            std::size_t left = index - d;
            if (left >= 1 && left <= last && is_crossing(samples, left)) {
                return left;
            }
        }
        std::size_t right = index + d;
        if (d > 0 && right <= last && right >= 1 && is_crossing(samples, right)) {
            return right;
        }
    }
    return index;
}

SampleInterval seconds_to_interval(double start_s, double end_s, int sample_rate,
                                   std::size_t buffer_length) {
    if (sample_rate <= 0) {
        throw std::invalid_argument("sample rate must be positive");
    }
    if (!std::isfinite(start_s) || !std::isfinite(end_s)) {
        throw std::invalid_argument("non-finite interval bounds");
    }
    auto to_sample = [&](double seconds) {
        long long rounded = std::llround(seconds * sample_rate);
        rounded = std::clamp<long long>(rounded, 0, static_cast<long long>(buffer_length));
        return static_cast<std::size_t>(rounded);
    };
    SampleInterval interval{to_sample(start_s), to_sample(end_s)};
    if (interval.start >= interval.end) {
        throw std::runtime_error("degenerate sample interval after clamping: [" +
                                 std::to_string(start_s) + ", " + std::to_string(end_s) + ")");
    }
    return interval;
}

SampleInterval seconds_to_interval(const TimeInterval& interval, int sample_rate,
                                   std::size_t buffer_length) {
    return seconds_to_interval(interval.start, interval.end, sample_rate, buffer_length);
}

AudioBuffer remix(const AudioBuffer& buffer, const std::vector<SampleInterval>& intervals,
                  bool snap_to_zero_crossings) {
    std::size_t total = 0;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const SampleInterval& interval = intervals[k];
        if (interval.start >= interval.end || interval.end > buffer.samples.size()) {
            throw std::invalid_argument("remix interval out of range");
        }
        if (k > 0 && interval.start < intervals[k - 1].end) {
            throw std::invalid_argument("remix intervals overlap or are unordered");
        }
        total += interval.length();
    }

    AudioBuffer out;
    out.sample_rate = buffer.sample_rate;
    out.samples.reserve(total);
    for (const SampleInterval& interval : intervals) {
        std::size_t start = interval.start;
        std::size_t end = interval.end;
        if (snap_to_zero_crossings) {
            start = nearest_zero_crossing(buffer, start);
            end = nearest_zero_crossing(buffer, end);
            if (start >= end) {
                continue;  // snapped shut
            }
        }
        out.samples.insert(out.samples.end(), buffer.samples.begin() + static_cast<long>(start),
                           buffer.samples.begin() + static_cast<long>(end));
    }
    return out;
}

AudioBuffer synthesize_click_track(const std::vector<double>& beats,
                                   const std::vector<int>& positions, int sample_rate,
                                   double duration_s, const ClickTrackParams& params) {
    if (sample_rate <= 0) {
        throw std::invalid_argument("sample rate must be positive");
    }
    if (duration_s < 0.0 || !std::isfinite(duration_s)) {
        throw std::invalid_argument("duration must be finite and non-negative");
    }
    if (!positions.empty() && positions.size() != beats.size()) {
        throw std::invalid_argument("positions/beats length mismatch");
    }

    AudioBuffer buffer;
    buffer.sample_rate = sample_rate;
    buffer.samples.assign(static_cast<std::size_t>(std::llround(duration_s * sample_rate)), 0.0f);

    const long long n = static_cast<long long>(buffer.samples.size());
    const long long click_len = std::max<long long>(1, std::llround(params.click_s * sample_rate));
    const double decay_samples = std::max(1.0, params.decay_s * sample_rate);

    for (std::size_t b = 0; b < beats.size(); ++b) {
        double t = beats[b];
        if (t < 0.0 || t >= duration_s) {
            throw std::invalid_argument("beat outside track duration");
        }
        double hz = (!positions.empty() && positions[b] == 1) ? params.downbeat_hz : params.beat_hz;
        long long onset = std::llround(t * sample_rate);
        // The click opens on its loudest sample and opens negative, so the
        // silence-to-click edge is both the energy peak and a zero crossing.
        for (long long k = 0; k < click_len && onset + k < n; ++k) {
            double phase = 2.0 * std::numbers::pi * hz * static_cast<double>(k) / sample_rate;
            double envelope = std::exp(-static_cast<double>(k) / decay_samples);
            double value = -params.amplitude * std::cos(phase) * envelope;
            float& slot = buffer.samples[static_cast<std::size_t>(onset + k)];
            slot = std::clamp(slot + static_cast<float>(value), -1.0f, 1.0f);
        }
    }
    return buffer;
}

}  // namespace meteraug
