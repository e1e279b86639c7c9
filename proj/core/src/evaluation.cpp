#include "meteraug/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace meteraug {

namespace {

void check_window(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

// Continuity tolerances are fractions of the local interval.
void check_tolerance(double value, const char* name) {
    if (!(value > 0.0) || !(value < 1.0)) {
        throw std::invalid_argument(std::string(name) + " must be inside (0, 1)");
    }
}

// Index of the reference event nearest to t; earlier index wins ties.
std::size_t nearest_index(const std::vector<double>& times, double t) {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) {
        return 0;
    }
    if (it == times.end()) {
        return times.size() - 1;
    }
    std::size_t after = static_cast<std::size_t>(it - times.begin());
    std::size_t before = after - 1;
    return (t - times[before]) <= (times[after] - t) ? before : after;
}

// Continuity scores (longest run, total) against one annotation sequence.
// First events on either side use their following interval as the local one.
std::pair<double, double> continuity_scores(const EventSequence& estimate,
                                            const EventSequence& reference,
                                            double phase_tolerance, double period_tolerance) {
    const std::vector<double>& est = estimate.times;
    const std::vector<double>& ref = reference.times;
    if (est.size() < 2 || ref.size() < 2) {
        return {0.0, 0.0};
    }

    std::size_t total = 0;
    std::size_t longest = 0;
    std::size_t run = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        std::size_t j = nearest_index(ref, est[i]);
        double ref_interval = j > 0 ? ref[j] - ref[j - 1] : ref[1] - ref[0];
        double est_interval = i > 0 ? est[i] - est[i - 1] : est[1] - est[0];
        bool phase_ok = std::fabs(est[i] - ref[j]) <= phase_tolerance * ref_interval;
        bool period_ok = std::fabs(est_interval - ref_interval) <= period_tolerance * ref_interval;
        if (phase_ok && period_ok) {
            ++total;
            ++run;
            longest = std::max(longest, run);
        } else {
            run = 0;
        }
    }

    double denom = static_cast<double>(std::max(est.size(), ref.size()));
    return {static_cast<double>(longest) / denom, static_cast<double>(total) / denom};
}

double mean_of(const std::vector<EvaluationReport>& reports,
               double EvaluationReport::* field) {
    if (reports.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const EvaluationReport& r : reports) {
        sum += r.*field;
    }
    return sum / static_cast<double>(reports.size());
}

MetricMeans means_over(const std::vector<EvaluationReport>& reports) {
    MetricMeans means;
    means.track_count = reports.size();
    means.f_measure = mean_of(reports, &EvaluationReport::f_measure);
    means.cmlt = mean_of(reports, &EvaluationReport::cmlt);
    means.cmlc = mean_of(reports, &EvaluationReport::cmlc);
    means.amlt = mean_of(reports, &EvaluationReport::amlt);
    means.amlc = mean_of(reports, &EvaluationReport::amlc);
    return means;
}

void append_metric_row(std::ostringstream& out, const std::string& label,
                       const MetricMeans& means, bool signed_values) {
    out << std::left << std::setw(12) << label << std::right << std::setw(8)
        << means.track_count;
    for (double value : {means.f_measure, means.cmlt, means.cmlc, means.amlt, means.amlc}) {
        out << std::setw(9) << std::fixed << std::setprecision(3);
        if (signed_values) {
            out << std::showpos << value << std::noshowpos;
        } else {
            out << value;
        }
    }
    out << '\n';
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string escaped = "\"";
    for (char c : field) {
        if (c == '"') {
            escaped += '"';
        }
        escaped += c;
    }
    escaped += '"';
    return escaped;
}

}  // namespace

EventSequence EventSequence::from(std::vector<double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0) {
            throw std::invalid_argument("event times must be finite and non-negative");
        }
        if (i > 0 && times[i] <= times[i - 1]) {
            throw std::invalid_argument("event times must be strictly increasing");
        }
    }
    EventSequence sequence;
    sequence.times = std::move(times);
    return sequence;
}

FMeasureResult f_measure(const EventSequence& estimate, const EventSequence& reference,
                         double tolerance_s) {
    check_window(tolerance_s, "tolerance");

    const std::vector<double>& est = estimate.times;
    const std::vector<double>& ref = reference.times;
    std::size_t matches = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < est.size() && j < ref.size()) {
        if (std::fabs(est[i] - ref[j]) <= tolerance_s) {
            ++matches;
            ++i;
            ++j;
        } else if (est[i] < ref[j]) {
            ++i;
        } else {
            ++j;
        }
    }

    FMeasureResult result;
    result.matches = matches;
    result.precision = est.empty() ? 0.0 : static_cast<double>(matches) / est.size();
    result.recall = ref.empty() ? 0.0 : static_cast<double>(matches) / ref.size();
    double pr = result.precision + result.recall;
    result.f_measure = pr > 0.0 ? 2.0 * result.precision * result.recall / pr : 0.0;
    return result;
}

std::vector<std::pair<std::string, EventSequence>> metrical_variants(
    const EventSequence& reference) {
    const std::vector<double>& t = reference.times;
    if (t.size() < 2) {
        throw std::invalid_argument("metrical variants need at least two events");
    }

    std::vector<double> offbeat;
    offbeat.reserve(t.size());
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        offbeat.push_back(0.5 * (t[k] + t[k + 1]));
    }
    // One extrapolated event keeps the variant the same length as the
    // reference, so a purely offbeat estimate can score a full 1.0.
    offbeat.push_back(t.back() + 0.5 * (t.back() - t[t.size() - 2]));

    std::vector<double> doubled;
    doubled.reserve(2 * t.size() - 1);
    for (std::size_t k = 0; k < t.size(); ++k) {
        doubled.push_back(t[k]);
        if (k + 1 < t.size()) {
            doubled.push_back(0.5 * (t[k] + t[k + 1]));
        }
    }

    std::vector<double> half_even;
    std::vector<double> half_odd;
    for (std::size_t k = 0; k < t.size(); ++k) {
        (k % 2 == 0 ? half_even : half_odd).push_back(t[k]);
    }

    std::vector<std::pair<std::string, EventSequence>> variants;
    variants.emplace_back("correct", reference);
    variants.emplace_back("offbeat", EventSequence::from(std::move(offbeat)));
    variants.emplace_back("double", EventSequence::from(std::move(doubled)));
    variants.emplace_back("half_even", EventSequence::from(std::move(half_even)));
    variants.emplace_back("half_odd", EventSequence::from(std::move(half_odd)));
    return variants;
}

ContinuityResult continuity(const EventSequence& estimate, const EventSequence& reference,
                            double phase_tolerance, double period_tolerance) {
    check_tolerance(phase_tolerance, "phase tolerance");
    check_tolerance(period_tolerance, "period tolerance");

    ContinuityResult result;
    auto [cmlc, cmlt] = continuity_scores(estimate, reference, phase_tolerance, period_tolerance);
    result.cmlc = cmlc;
    result.cmlt = cmlt;

    if (estimate.size() < 2 || reference.size() < 2) {
        return result;  // all zero
    }
    for (const auto& [name, variant] : metrical_variants(reference)) {
        auto [c, t] = continuity_scores(estimate, variant, phase_tolerance, period_tolerance);
        result.amlc = std::max(result.amlc, c);
        result.amlt = std::max(result.amlt, t);
    }
    return result;
}

std::string to_string(EventLevel level) {
    return level == EventLevel::downbeat ? "downbeat" : "beat";
}

EvaluationReport evaluate_track(const EventSequence& estimate, const EventSequence& reference,
                                std::string track_id, EventLevel level,
                                const EvaluationTolerances& tolerances) {
    EvaluationReport report;
    report.track_id = std::move(track_id);
    report.level = level;
    report.tolerances = tolerances;

    FMeasureResult f = f_measure(estimate, reference, tolerances.f_window_s);
    report.f_measure = f.f_measure;
    report.precision = f.precision;
    report.recall = f.recall;

    ContinuityResult cont = continuity(estimate, reference, tolerances.phase, tolerances.period);
    report.cmlc = cont.cmlc;
    report.cmlt = cont.cmlt;
    report.amlc = cont.amlc;
    report.amlt = cont.amlt;

    if (estimate.size() == 0) {
        report.diagnostics.push_back({Severity::warning, "empty estimate"});
    } else if (estimate.size() < 2 || reference.size() < 2) {
        report.diagnostics.push_back(
            {Severity::warning, "fewer than two events; continuity metrics zeroed"});
    }
    return report;
}

AggregateReport aggregate(std::vector<EvaluationReport> reports,
                          const std::map<std::string, std::string>& meter_by_track) {
    if (reports.empty()) {
        throw std::invalid_argument("no reports to aggregate");
    }
    AggregateReport result;
    result.per_track = std::move(reports);
    result.overall = means_over(result.per_track);

    std::map<std::string, std::vector<EvaluationReport>> groups;
    for (const EvaluationReport& report : result.per_track) {
        auto it = meter_by_track.find(report.track_id);
        std::string label = it != meter_by_track.end() ? it->second : std::string("unknown");
        groups[label].push_back(report);
    }
    for (const auto& [label, group] : groups) {
        result.by_meter[label] = means_over(group);
    }
    return result;
}

std::map<std::string, MetricMeans> compare_aggregates(const AggregateReport& current,
                                                      const AggregateReport& baseline) {
    auto delta = [](const MetricMeans& a, const MetricMeans& b) {
        MetricMeans d;
        d.track_count = a.track_count;
        d.f_measure = a.f_measure - b.f_measure;
        d.cmlt = a.cmlt - b.cmlt;
        d.cmlc = a.cmlc - b.cmlc;
        d.amlt = a.amlt - b.amlt;
        d.amlc = a.amlc - b.amlc;
        return d;
    };

    std::map<std::string, MetricMeans> deltas;
    deltas["overall"] = delta(current.overall, baseline.overall);
    for (const auto& [label, means] : current.by_meter) {
        auto it = baseline.by_meter.find(label);
        if (it != baseline.by_meter.end()) {
            deltas[label] = delta(means, it->second);
        }
    }
    return deltas;
}

std::string reports_to_csv(const std::vector<EvaluationReport>& reports) {
    EvaluationTolerances tolerances =
        reports.empty() ? EvaluationTolerances{} : reports.front().tolerances;
    std::string out = "# f_window_s=" + detail::format_fixed(tolerances.f_window_s, 6) +
                      " phase_tolerance=" + detail::format_fixed(tolerances.phase, 6) +
                      " period_tolerance=" + detail::format_fixed(tolerances.period, 6) + "\n";
    out += "track_id,level,f_measure,precision,recall,cmlt,cmlc,amlt,amlc\n";
    for (const EvaluationReport& r : reports) {
        out += csv_escape(r.track_id);
        out += ',';
        out += to_string(r.level);
        for (double value : {r.f_measure, r.precision, r.recall, r.cmlt, r.cmlc, r.amlt, r.amlc}) {
            out += ',';
            out += detail::format_fixed(value, 6);
        }
        out += '\n';
    }
    return out;
}

std::vector<EvaluationReport> reports_from_csv(std::string_view csv) {
    std::vector<EvaluationReport> reports;
    EvaluationTolerances tolerances;

    bool saw_header = false;
    for (std::string_view raw_line : detail::split_lines(csv)) {
        std::string_view line = detail::trim(raw_line);
        if (line.empty()) {
            continue;
        }
        if (line.starts_with("#")) {
            for (std::string_view token : detail::split_tokens(line.substr(1))) {
                std::size_t eq = token.find('=');
                if (eq == std::string_view::npos) {
                    continue;
                }
                double value = 0.0;
                if (!detail::parse_double(token.substr(eq + 1), value)) {
                    continue;
                }
                std::string_view key = token.substr(0, eq);
                if (key == "f_window_s") {
                    tolerances.f_window_s = value;
                } else if (key == "phase_tolerance") {
                    tolerances.phase = value;
                } else if (key == "period_tolerance") {
                    tolerances.period = value;
                }
            }
            continue;
        }
        if (!saw_header) {
            if (!line.starts_with("track_id,")) {
                throw std::runtime_error("unexpected report CSV header: " + std::string(line));
            }
            saw_header = true;
            continue;
        }

        std::vector<std::string> fields;
        std::string current;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    current += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(current));
                current.clear();
            } else {
                current += c;
            }
        }
        fields.push_back(std::move(current));
        if (fields.size() != 9) {
            throw std::runtime_error("malformed report CSV row: " + std::string(line));
        }

        EvaluationReport report;
        report.track_id = fields[0];
        report.level = fields[1] == "downbeat" ? EventLevel::downbeat : EventLevel::beat;
        report.tolerances = tolerances;
        double* slots[] = {&report.f_measure, &report.precision, &report.recall, &report.cmlt,
                           &report.cmlc,      &report.amlt,      &report.amlc};
        for (std::size_t k = 0; k < 7; ++k) {
            if (!detail::parse_double(fields[k + 2], *slots[k])) {
                throw std::runtime_error("malformed metric value in CSV row: " +
                                         std::string(line));
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string format_aggregate_table(const AggregateReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "group" << std::right << std::setw(8) << "tracks"
        << std::setw(9) << "F1" << std::setw(9) << "CMLt" << std::setw(9) << "CMLc"
        << std::setw(9) << "AMLt" << std::setw(9) << "AMLc" << '\n';
    for (const auto& [label, means] : report.by_meter) {
        append_metric_row(out, label, means, false);
    }
    append_metric_row(out, "overall", report.overall, false);
    return out.str();
}

std::string format_delta_table(const std::map<std::string, MetricMeans>& deltas) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "group" << std::right << std::setw(8) << "tracks"
        << std::setw(9) << "F1" << std::setw(9) << "CMLt" << std::setw(9) << "CMLc"
        << std::setw(9) << "AMLt" << std::setw(9) << "AMLc" << '\n';
    for (const auto& [label, means] : deltas) {
        if (label != "overall") {
            append_metric_row(out, label, means, true);
        }
    }
    auto overall = deltas.find("overall");
    if (overall != deltas.end()) {
        append_metric_row(out, "overall", overall->second, true);
    }
    return out.str();
}

}  // namespace meteraug
