#include "meteraug/augmentation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace meteraug {

namespace {

bool contains(const std::vector<int>& kept_positions, int position) {
    return std::find(kept_positions.begin(), kept_positions.end(), position) !=
           kept_positions.end();
}

// Shared gate for the augmentation ops: positions present and plausible for a
// 4/4 source, meter actually inferred as 4/4, and enough kept beats to form
// an annotation.
std::vector<std::size_t> checked_kept_indices(const BeatAnnotation& annotation,
                                              const std::vector<int>& kept_positions) {
    if (!annotation.has_positions()) {
        throw std::runtime_error("beat-only annotation cannot be augmented");
    }
    if (annotation.positions.size() != annotation.beats.size()) {
        throw std::runtime_error("positions/beats length mismatch");
    }
    for (int position : annotation.positions) {
        if (position < 1) {
            throw std::runtime_error("position below 1");
        }
        if (position > 4) {
            throw std::runtime_error("position above 4 in a nominally 4/4 track");
        }
    }
    TimeSignature meter = infer_meter(annotation.positions);
    if (meter.numerator != 4) {
        throw std::runtime_error("annotation is not in 4/4 (inferred " + to_string(meter) + ")");
    }
    std::vector<std::size_t> kept = select_kept_indices(annotation.positions, kept_positions);
    if (kept.size() < 2) {
        throw std::runtime_error("fewer than two kept beats");
    }
    return kept;
}

}  // namespace

AugmentationSpec AugmentationSpec::to_meter(int target_numerator) {
    AugmentationSpec spec;
    spec.target_numerator = target_numerator;
    spec.kept_positions();  // validates
    return spec;
}

std::vector<int> AugmentationSpec::kept_positions() const {
    if (source_numerator != 4) {
        throw std::invalid_argument("only 4/4 sources are supported");
    }
    if (target_numerator < 2 || target_numerator >= source_numerator) {
        throw std::invalid_argument("target numerator must be 2 or 3 for a 4/4 source");
    }
    std::vector<int> kept(static_cast<std::size_t>(target_numerator));
    for (int p = 1; p <= target_numerator; ++p) {
        kept[static_cast<std::size_t>(p - 1)] = p;
    }
    return kept;
}

std::vector<std::size_t> select_kept_indices(const std::vector<int>& positions,
                                             const std::vector<int>& kept_positions) {
    std::vector<std::size_t> kept;
    kept.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (contains(kept_positions, positions[i])) {
            kept.push_back(i);
        }
    }
    return kept;
}

std::vector<std::size_t> select_kept_indices(const std::vector<int>& positions,
                                             const AugmentationSpec& spec) {
    return select_kept_indices(positions, spec.kept_positions());
}

BeatAnnotation corrected_annotations(const BeatAnnotation& annotation,
                                     const std::vector<int>& kept_positions) {
    std::vector<std::size_t> kept = checked_kept_indices(annotation, kept_positions);
    IbiSequence ibis = inter_beat_intervals(annotation);

    BeatAnnotation corrected;
    corrected.track_id = annotation.track_id;
    corrected.beats.resize(kept.size());
    corrected.positions.resize(kept.size());

    // The first kept beat anchors at its original timestamp; anchoring at
    // beats[0] would be wrong for pickup bars. Later kept beats advance by
    // the interval that preceded them in the original annotation.
    corrected.beats[0] = annotation.beats[kept[0]];
    corrected.positions[0] = annotation.positions[kept[0]];
    for (std::size_t j = 1; j < kept.size(); ++j) {
        corrected.beats[j] = corrected.beats[j - 1] + ibis.values[kept[j]];
        corrected.positions[j] = annotation.positions[kept[j]];
    }
    return corrected;
}

BeatAnnotation corrected_annotations(const BeatAnnotation& annotation,
                                     const AugmentationSpec& spec) {
    return corrected_annotations(annotation, spec.kept_positions());
}

std::vector<TimeInterval> kept_audio_intervals(const BeatAnnotation& annotation,
                                               const std::vector<int>& kept_positions,
                                               double track_duration, bool remove_trailing) {
    std::vector<std::size_t> kept = checked_kept_indices(annotation, kept_positions);
    if (track_duration < annotation.beats.back()) {
        throw std::runtime_error("track duration is shorter than the last beat");
    }

    const std::size_t first_kept = kept.front();
    const std::size_t n = annotation.beats.size();

    // Removal only applies at or after the first kept beat, so pickup audio
    // ahead of it survives untouched. Each dropped beat removes its own
    // interval [beat, next beat); the final beat's interval runs to track
    // end unless trailing removal is disabled.
    std::vector<TimeInterval> removed;
    for (std::size_t i = first_kept; i < n; ++i) {
        if (contains(kept_positions, annotation.positions[i])) {
            continue;
        }
        if (i + 1 == n && !remove_trailing) {
            continue;
        }
        double start = annotation.beats[i];
        double end = i + 1 < n ? annotation.beats[i + 1] : track_duration;
        if (end > start) {
            removed.push_back({start, end});
        }
    }

    std::vector<TimeInterval> result;
    double cursor = 0.0;
    for (const TimeInterval& gap : removed) {
        if (gap.start > cursor) {
            result.push_back({cursor, gap.start});
        }
        cursor = std::max(cursor, gap.end);
    }
    if (cursor < track_duration) {
        result.push_back({cursor, track_duration});
    }
    return result;
}

std::vector<TimeInterval> kept_audio_intervals(const BeatAnnotation& annotation,
                                               const AugmentationSpec& spec,
                                               double track_duration, bool remove_trailing) {
    return kept_audio_intervals(annotation, spec.kept_positions(), track_duration,
                                remove_trailing);
}

AugmentedResult augment_track(const BeatAnnotation& annotation, const AugmentationSpec& spec,
                              double track_duration, bool remove_trailing) {
    std::vector<int> kept_positions = spec.kept_positions();

    AugmentedResult result;
    BeatAnnotation corrected = corrected_annotations(annotation, kept_positions);
    result.corrected_beats = std::move(corrected.beats);
    result.corrected_positions = std::move(corrected.positions);
    result.kept_intervals =
        kept_audio_intervals(annotation, kept_positions, track_duration, remove_trailing);

    double kept_total = 0.0;
    for (const TimeInterval& interval : result.kept_intervals) {
        kept_total += interval.length();
    }
    result.removed_duration = track_duration - kept_total;
    return result;
}

}  // namespace meteraug
