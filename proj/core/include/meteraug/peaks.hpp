#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "meteraug/annotation.hpp"

namespace meteraug {

// Frame-rate-stamped activation function, values in [0, 1].
struct ActivationCurve {
    std::vector<double> values;
    double frame_rate = 0.0;
};

// Defaults assume 100 frames per second.
struct PeakPickParams {
    int median_half_window = 8;
    int local_max_half_window = 3;
    double offset = 0.07;
    int min_separation = 7;
};

// Frames that are a strict maximum over the centered local window, reach the
// centered running median plus offset, and sit at least min_separation frames
// after the previously accepted peak (earlier peaks win). Windows truncate at
// the curve edges.
std::vector<std::size_t> adaptive_threshold_peaks(const ActivationCurve& curve,
                                                  const PeakPickParams& params = {});

std::vector<double> frames_to_seconds(const std::vector<std::size_t>& frames,
                                      double frame_rate);

struct LoadedActivations {
    ActivationCurve curve;
    std::vector<Diagnostic> diagnostics;
};

// Text format: "fps=<int>" header line, then one value per line. Values
// outside [0, 1] are clamped and reported as a diagnostic; a missing header
// or a non-numeric line is an error.
LoadedActivations parse_activations(std::string_view text);
LoadedActivations load_activations(const std::string& path);

}  // namespace meteraug
