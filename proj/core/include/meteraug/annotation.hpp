#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace meteraug {

enum class Severity { warning, error };

std::string to_string(Severity severity);

// One finding from a non-throwing validation pass. Serialized for logs as
// "<severity> <track_id> <message>".
struct Diagnostic {
    Severity severity = Severity::warning;
    std::string message;
};

std::string format_diagnostic(const Diagnostic& diagnostic, const std::string& track_id);

// Beat timestamps (seconds, strictly increasing) with optional per-beat bar
// positions (1 = downbeat). positions is either empty (beat-only annotation)
// or the same length as beats.
struct BeatAnnotation {
    std::vector<double> beats;
    std::vector<int> positions;
    std::string track_id;

    bool has_positions() const { return !positions.empty(); }
    std::size_t size() const { return beats.size(); }
};

// Inter-beat intervals, same length as the annotation it came from.
// values[0] is 0 by convention; values[k] = beats[k] - beats[k-1].
struct IbiSequence {
    std::vector<double> values;
};

struct TimeSignature {
    int numerator = 4;
    int denominator = 4;

    TimeSignature() = default;
    explicit TimeSignature(int numerator_value);

    bool operator==(const TimeSignature&) const = default;
};

std::string to_string(const TimeSignature& signature);
TimeSignature parse_time_signature(std::string_view text);

// Parses "<timestamp> <position>" lines (position column optional, but
// consistent across the file). Lines are sorted by timestamp before the
// strictly-increasing check, so out-of-order files are accepted and
// duplicate timestamps are not.
BeatAnnotation parse_beat_file(std::string_view text, std::string track_id = {});

// Fixed six-decimal timestamps, one beat per line. Refuses empty annotations.
std::string serialize_beat_file(const BeatAnnotation& annotation);

BeatAnnotation load_beat_file(const std::string& path);
void save_beat_file(const BeatAnnotation& annotation, const std::string& path);

IbiSequence inter_beat_intervals(const BeatAnnotation& annotation);

// Bar length inferred from the positions immediately preceding each negative
// first-difference (the bar transitions). Ties go to the larger numerator;
// the denominator is always 4. Repeated positions (difference 0) are not
// transitions; validate() reports them.
TimeSignature infer_meter(const std::vector<int>& positions);

// Non-throwing checks: missing positions, duplicate timestamps, position
// discontinuities (step is neither +1 nor a drop to 1), and internal meter
// changes (more than one distinct transition position).
std::vector<Diagnostic> validate(const BeatAnnotation& annotation);

}  // namespace meteraug
