#include "meteraug/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "text_util.hpp"

namespace meteraug {

namespace {

std::string line_error(std::size_t line_number, const std::string& what) {
    return "line " + std::to_string(line_number) + ": " + what;
}

// Transition positions are the positions immediately preceding a negative
// first-difference; repeated positions (difference 0) do not count.
std::map<int, std::size_t> transition_counts(const std::vector<int>& positions) {
    std::map<int, std::size_t> counts;
    for (std::size_t k = 0; k + 1 < positions.size(); ++k) {
        if (positions[k + 1] < positions[k]) {
            ++counts[positions[k]];
        }
    }
    return counts;
}

}  // namespace

std::string to_string(Severity severity) {
    return severity == Severity::error ? "error" : "warning";
}

std::string format_diagnostic(const Diagnostic& diagnostic, const std::string& track_id) {
    return to_string(diagnostic.severity) + " " + (track_id.empty() ? "-" : track_id) + " " +
           diagnostic.message;
}

TimeSignature::TimeSignature(int numerator_value) : numerator(numerator_value) {
    if (numerator < 1 || numerator > 12) {
        throw std::invalid_argument("time signature numerator out of range: " +
                                    std::to_string(numerator));
    }
}

std::string to_string(const TimeSignature& signature) {
    return std::to_string(signature.numerator) + "/" + std::to_string(signature.denominator);
}

TimeSignature parse_time_signature(std::string_view text) {
    std::size_t slash = text.find('/');
    long long numerator = 0;
    long long denominator = 0;
    if (slash == std::string_view::npos ||
        !detail::parse_int(detail::trim(text.substr(0, slash)), numerator) ||
        !detail::parse_int(detail::trim(text.substr(slash + 1)), denominator)) {
        throw std::runtime_error("malformed time signature: " + std::string(text));
    }
    if (denominator != 4) {
        throw std::runtime_error("unsupported time signature denominator: " + std::string(text));
    }
    return TimeSignature(static_cast<int>(numerator));
}

BeatAnnotation parse_beat_file(std::string_view text, std::string track_id) {
    BeatAnnotation annotation;
    annotation.track_id = std::move(track_id);

    struct Row {
        double beat;
        int position;
    };
    std::vector<Row> rows;
    bool with_positions = false;

    std::size_t line_number = 0;
    for (std::string_view raw_line : detail::split_lines(text)) {
        ++line_number;
        std::string_view line = detail::trim(raw_line);
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> tokens = detail::split_tokens(line);
        if (tokens.size() > 2) {
            throw std::runtime_error(line_error(line_number, "expected at most two columns"));
        }
        double beat = 0.0;
        if (!detail::parse_double(tokens[0], beat)) {
            throw std::runtime_error(line_error(line_number, "malformed timestamp"));
        }
        if (beat < 0.0) {
            throw std::runtime_error(line_error(line_number, "negative timestamp"));
        }
        if (rows.empty()) {
            with_positions = tokens.size() == 2;
        } else if (with_positions != (tokens.size() == 2)) {
            throw std::runtime_error(line_error(line_number, "inconsistent column count"));
        }
        int position = 0;
        if (with_positions) {
            // Positions are conceptually integers, but files in the wild
            // write "1.0"; accept that while rejecting true fractions.
            double value = 0.0;
            if (!detail::parse_double(tokens[1], value) ||
                std::fabs(value - std::round(value)) > 1e-9 || std::round(value) < 1.0) {
                throw std::runtime_error(line_error(line_number, "malformed position"));
            }
            position = static_cast<int>(std::llround(value));
        }
        rows.push_back({beat, position});
    }

    if (rows.empty()) {
        throw std::runtime_error("empty annotation");
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.beat < b.beat; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].beat <= rows[i - 1].beat) {
            throw std::runtime_error("non-increasing timestamps at " +
                                     detail::format_fixed(rows[i].beat, 6));
        }
    }

    annotation.beats.reserve(rows.size());
    for (const Row& row : rows) {
        annotation.beats.push_back(row.beat);
    }
    if (with_positions) {
        annotation.positions.reserve(rows.size());
        for (const Row& row : rows) {
            annotation.positions.push_back(row.position);
        }
    }
    return annotation;
}

std::string serialize_beat_file(const BeatAnnotation& annotation) {
    if (annotation.beats.empty()) {
        throw std::runtime_error("refusing to serialize an empty annotation");
    }
    if (annotation.has_positions() && annotation.positions.size() != annotation.beats.size()) {
        throw std::runtime_error("positions/beats length mismatch");
    }
    std::string out;
    out.reserve(annotation.beats.size() * 12);
    for (std::size_t i = 0; i < annotation.beats.size(); ++i) {
        out += detail::format_fixed(annotation.beats[i], 6);
        if (annotation.has_positions()) {
            out += ' ';
            out += std::to_string(annotation.positions[i]);
        }
        out += '\n';
    }
    return out;
}

BeatAnnotation load_beat_file(const std::string& path) {
    try {
        return parse_beat_file(detail::read_text_file(path), path);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_beat_file(const BeatAnnotation& annotation, const std::string& path) {
    detail::write_text_file(path, serialize_beat_file(annotation));
}

IbiSequence inter_beat_intervals(const BeatAnnotation& annotation) {
    if (annotation.beats.size() < 2) {
        throw std::runtime_error("need at least two beats for inter-beat intervals");
    }
    IbiSequence ibis;
    ibis.values.resize(annotation.beats.size(), 0.0);
    for (std::size_t i = 1; i < annotation.beats.size(); ++i) {
        ibis.values[i] = annotation.beats[i] - annotation.beats[i - 1];
    }
    return ibis;
}

TimeSignature infer_meter(const std::vector<int>& positions) {
    if (positions.empty()) {
        throw std::runtime_error("cannot infer meter from empty positions");
    }
    std::map<int, std::size_t> counts = transition_counts(positions);
    if (counts.empty()) {
        throw std::runtime_error("no bar transitions found");
    }
    int numerator = 0;
    std::size_t best = 0;
    // std::map iterates in ascending position order, so >= breaks count ties
    // toward the larger numerator.
    for (const auto& [position, count] : counts) {
        if (count >= best) {
            best = count;
            numerator = position;
        }
    }
    return TimeSignature(numerator);
}

std::vector<Diagnostic> validate(const BeatAnnotation& annotation) {
    std::vector<Diagnostic> diagnostics;

    for (std::size_t i = 1; i < annotation.beats.size(); ++i) {
        if (annotation.beats[i] <= annotation.beats[i - 1]) {
            diagnostics.push_back(
                {Severity::error, "duplicate or non-increasing timestamp at index " +
                                      std::to_string(i)});
        }
    }

    if (!annotation.has_positions()) {
        diagnostics.push_back({Severity::warning, "positions missing (beat-only annotation)"});
        return diagnostics;
    }
    if (annotation.positions.size() != annotation.beats.size()) {
        diagnostics.push_back({Severity::error, "positions/beats length mismatch"});
        return diagnostics;
    }

    for (std::size_t k = 0; k < annotation.positions.size(); ++k) {
        if (annotation.positions[k] < 1) {
            diagnostics.push_back(
                {Severity::error, "position below 1 at index " + std::to_string(k)});
        }
    }
    for (std::size_t k = 1; k < annotation.positions.size(); ++k) {
        int prev = annotation.positions[k - 1];
        int cur = annotation.positions[k];
        bool step = cur == prev + 1;
        bool bar_reset = cur == 1 && prev > 1;
        if (!step && !bar_reset) {
            diagnostics.push_back({Severity::error,
                                   "position discontinuity at index " + std::to_string(k) + ": " +
                                       std::to_string(prev) + " -> " + std::to_string(cur)});
        }
    }

    std::map<int, std::size_t> counts = transition_counts(annotation.positions);
    if (counts.size() > 1) {
        std::string observed;
        for (const auto& [position, count] : counts) {
            if (!observed.empty()) {
                observed += ", ";
            }
            observed += std::to_string(position);
        }
        diagnostics.push_back(
            {Severity::warning, "internal meter change (transition positions " + observed + ")"});
    }

    return diagnostics;
}

}  // namespace meteraug
