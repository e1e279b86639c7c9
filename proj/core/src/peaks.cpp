#include "meteraug/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "text_util.hpp"

namespace meteraug {

namespace {

void check_params(const PeakPickParams& params) {
    if (params.median_half_window < 0 || params.min_separation < 0) {
        throw std::invalid_argument("peak picking windows must be non-negative");
    }
    if (params.local_max_half_window < 1) {
        throw std::invalid_argument("local max half window must be at least 1");
    }
    if (!std::isfinite(params.offset)) {
        throw std::invalid_argument("offset must be finite");
    }
}

double window_median(const std::vector<double>& values, std::size_t center,
                     int half_window, std::vector<double>& scratch) {
    std::size_t lo = center >= static_cast<std::size_t>(half_window)
                         ? center - static_cast<std::size_t>(half_window)
                         : 0;
    std::size_t hi = std::min(values.size() - 1, center + static_cast<std::size_t>(half_window));
    scratch.assign(values.begin() + static_cast<long>(lo),
                   values.begin() + static_cast<long>(hi) + 1);
    std::sort(scratch.begin(), scratch.end());
    std::size_t n = scratch.size();
    if (n % 2 == 1) {
        return scratch[n / 2];
    }
    return 0.5 * (scratch[n / 2 - 1] + scratch[n / 2]);
}

bool strict_local_max(const std::vector<double>& values, std::size_t center, int half_window) {
    std::size_t lo = center >= static_cast<std::size_t>(half_window)
                         ? center - static_cast<std::size_t>(half_window)
                         : 0;
    std::size_t hi = std::min(values.size() - 1, center + static_cast<std::size_t>(half_window));
    for (std::size_t m = lo; m <= hi; ++m) {
        if (m != center && values[m] >= values[center]) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<std::size_t> adaptive_threshold_peaks(const ActivationCurve& curve,
                                                  const PeakPickParams& params) {
    check_params(params);

    std::vector<std::size_t> peaks;
    std::vector<double> scratch;
    scratch.reserve(2 * static_cast<std::size_t>(params.median_half_window) + 1);

    for (std::size_t n = 0; n < curve.values.size(); ++n) {
        if (!peaks.empty() &&
            n - peaks.back() < static_cast<std::size_t>(params.min_separation)) {
            continue;
        }
        if (!strict_local_max(curve.values, n, params.local_max_half_window)) {
            continue;
        }
        double median = window_median(curve.values, n, params.median_half_window, scratch);
        if (curve.values[n] >= median + params.offset) {
            peaks.push_back(n);
        }
    }
    return peaks;
}

std::vector<double> frames_to_seconds(const std::vector<std::size_t>& frames,
                                      double frame_rate) {
    if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
        throw std::invalid_argument("frame rate must be positive");
    }
    std::vector<double> seconds;
    seconds.reserve(frames.size());
    for (std::size_t frame : frames) {
        seconds.push_back(static_cast<double>(frame) / frame_rate);
    }
    return seconds;
}

LoadedActivations parse_activations(std::string_view text) {
    LoadedActivations loaded;

    std::vector<std::string_view> lines = detail::split_lines(text);
    std::size_t line_number = 0;
    std::size_t header_line = 0;
    for (; header_line < lines.size(); ++header_line) {
        if (!detail::trim(lines[header_line]).empty()) {
            break;
        }
    }
    if (header_line == lines.size()) {
        throw std::runtime_error("missing fps header");
    }
    std::string_view header = detail::trim(lines[header_line]);
    if (!header.starts_with("fps=")) {
        throw std::runtime_error("missing fps header (expected \"fps=<int>\")");
    }
    long long fps = 0;
    if (!detail::parse_int(header.substr(4), fps) || fps <= 0) {
        throw std::runtime_error("invalid fps header: " + std::string(header));
    }
    loaded.curve.frame_rate = static_cast<double>(fps);

    std::size_t clamped = 0;
    std::size_t first_clamped_line = 0;
    for (line_number = header_line + 1; line_number < lines.size(); ++line_number) {
        std::string_view line = detail::trim(lines[line_number]);
        if (line.empty()) {
            continue;
        }
        double value = 0.0;
        if (!detail::parse_double(line, value)) {
            throw std::runtime_error("line " + std::to_string(line_number + 1) +
                                     ": non-numeric activation value");
        }
        if (value < 0.0 || value > 1.0) {
            if (clamped == 0) {
                first_clamped_line = line_number + 1;
            }
            ++clamped;
            value = std::clamp(value, 0.0, 1.0);
        }
        loaded.curve.values.push_back(value);
    }

    if (clamped > 0) {
        loaded.diagnostics.push_back(
            {Severity::warning, "clamped " + std::to_string(clamped) +
                                    " activation value(s) outside [0, 1] (first at line " +
                                    std::to_string(first_clamped_line) + ")"});
    }
    return loaded;
}

LoadedActivations load_activations(const std::string& path) {
    try {
        return parse_activations(detail::read_text_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace meteraug
