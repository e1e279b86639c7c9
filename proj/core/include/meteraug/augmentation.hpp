#pragma once

#include <cstddef>
#include <vector>

#include "meteraug/annotation.hpp"

namespace meteraug {

// Half-open interval of retained audio, in seconds on the original timeline.
struct TimeInterval {
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
    bool operator==(const TimeInterval&) const = default;
};

// A 4/4 -> target_numerator/4 reduction. The kept positions are always the
// prefix {1, ..., target_numerator}; beats on later positions are dropped.
struct AugmentationSpec {
    int source_numerator = 4;
    int target_numerator = 0;

    // Validates target_numerator (2 or 3 for a 4/4 source).
    static AugmentationSpec to_meter(int target_numerator);

    std::vector<int> kept_positions() const;
};

struct AugmentedResult {
    std::vector<double> corrected_beats;
    std::vector<int> corrected_positions;
    std::vector<TimeInterval> kept_intervals;
    double removed_duration = 0.0;
};

// Indices of beats whose position is in kept_positions, in original order.
std::vector<std::size_t> select_kept_indices(const std::vector<int>& positions,
                                             const std::vector<int>& kept_positions);
std::vector<std::size_t> select_kept_indices(const std::vector<int>& positions,
                                             const AugmentationSpec& spec);

// Corrected annotation for the remix: the first kept beat keeps its original
// timestamp (pickup bars make beats[0] the wrong anchor), and every later
// kept beat advances by the inter-beat interval that preceded it in the
// original. Requires a 4/4 annotation with positions and at least two kept
// beats. The kept-set overload exists so callers can run the identity set
// {1,2,3,4}, which AugmentationSpec itself rejects.
BeatAnnotation corrected_annotations(const BeatAnnotation& annotation,
                                     const std::vector<int>& kept_positions);
BeatAnnotation corrected_annotations(const BeatAnnotation& annotation,
                                     const AugmentationSpec& spec);

// Complement of the removed audio within [0, track_duration). Removal starts
// at each dropped beat at or after the first kept beat and runs to the next
// beat (or to track end for the last beat, unless remove_trailing is off).
// Audio before the first kept beat is retained in full. Adjacent intervals
// are merged; every interval is non-degenerate.
std::vector<TimeInterval> kept_audio_intervals(const BeatAnnotation& annotation,
                                               const std::vector<int>& kept_positions,
                                               double track_duration,
                                               bool remove_trailing = true);
std::vector<TimeInterval> kept_audio_intervals(const BeatAnnotation& annotation,
                                               const AugmentationSpec& spec,
                                               double track_duration,
                                               bool remove_trailing = true);

// Bundles corrected annotations and kept intervals for one track.
// removed_duration is track_duration minus the summed kept lengths.
AugmentedResult augment_track(const BeatAnnotation& annotation,
                              const AugmentationSpec& spec,
                              double track_duration,
                              bool remove_trailing = true);

}  // namespace meteraug
