#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "meteraug/annotation.hpp"

namespace meteraug {

// Strictly increasing, non-negative event times in seconds.
struct EventSequence {
    std::vector<double> times;

    // Validates ordering and sign.
    static EventSequence from(std::vector<double> times);

    std::size_t size() const { return times.size(); }
};

struct FMeasureResult {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    std::size_t matches = 0;
};

// Greedy one-to-one matching in time order within +/- tolerance_s; each
// reference event matches at most one estimate. Empty-side conventions:
// precision/recall are 0 when their denominator is 0, and F is 0 when
// precision + recall is 0.
FMeasureResult f_measure(const EventSequence& estimate, const EventSequence& reference,
                         double tolerance_s = 0.07);

// The reference itself plus its offbeat (midpoints, with one extrapolated
// trailing event so the length is preserved), double tempo (midpoint
// interleave), and half-tempo even/odd subsequences. Requires >= 2 events.
std::vector<std::pair<std::string, EventSequence>> metrical_variants(
    const EventSequence& reference);

struct ContinuityResult {
    double cmlc = 0.0;
    double cmlt = 0.0;
    double amlc = 0.0;
    double amlt = 0.0;
};

// Continuity-based scores. An estimate is correct when it is within
// phase_tolerance of the nearest annotation and its inter-beat interval is
// within period_tolerance of the local annotation interval, both measured
// relative to that interval; first events fall back to their following
// interval. The c scores take the longest run of correct estimates, the t
// scores the total, both over max(|estimate|, |variant|). The aml pair is
// the max over all metrical variants. Fewer than two events on either side
// scores zero.
ContinuityResult continuity(const EventSequence& estimate, const EventSequence& reference,
                            double phase_tolerance = 0.175, double period_tolerance = 0.175);

enum class EventLevel { beat, downbeat };

std::string to_string(EventLevel level);

struct EvaluationTolerances {
    double f_window_s = 0.07;
    double phase = 0.175;
    double period = 0.175;
};

struct EvaluationReport {
    std::string track_id;
    EventLevel level = EventLevel::beat;
    double f_measure = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double cmlc = 0.0;
    double cmlt = 0.0;
    double amlc = 0.0;
    double amlt = 0.0;
    EvaluationTolerances tolerances;
    std::vector<Diagnostic> diagnostics;
};

EvaluationReport evaluate_track(const EventSequence& estimate, const EventSequence& reference,
                                std::string track_id, EventLevel level = EventLevel::beat,
                                const EvaluationTolerances& tolerances = {});

struct MetricMeans {
    std::size_t track_count = 0;
    double f_measure = 0.0;
    double cmlt = 0.0;
    double cmlc = 0.0;
    double amlt = 0.0;
    double amlc = 0.0;
};

struct AggregateReport {
    std::vector<EvaluationReport> per_track;
    MetricMeans overall;
    // Keyed by meter label ("2/4", "3/4", "4/4", "unknown").
    std::map<std::string, MetricMeans> by_meter;
};

// Unweighted means overall and per meter group. meter_by_track maps track_id
// to a meter label; missing tracks group under "unknown".
AggregateReport aggregate(std::vector<EvaluationReport> reports,
                          const std::map<std::string, std::string>& meter_by_track);

// Per-group differences (current minus baseline) for the five headline
// metrics, keyed like by_meter plus "overall".
std::map<std::string, MetricMeans> compare_aggregates(const AggregateReport& current,
                                                      const AggregateReport& baseline);

// One CSV row per (track, level); the header records the tolerances.
std::string reports_to_csv(const std::vector<EvaluationReport>& reports);
std::vector<EvaluationReport> reports_from_csv(std::string_view csv);

// Fixed column order: F1, CMLt, CMLc, AMLt, AMLc.
std::string format_aggregate_table(const AggregateReport& report);
std::string format_delta_table(const std::map<std::string, MetricMeans>& deltas);

}  // namespace meteraug
