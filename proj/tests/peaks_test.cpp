#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "meteraug/peaks.hpp"
#include "test_util.hpp"

using namespace meteraug;

namespace {

ActivationCurve curve_of(std::vector<double> values, double fps = 100.0) {
    return ActivationCurve{std::move(values), fps};
}

PeakPickParams params(int median_half, int local_half, double offset, int min_sep) {
    PeakPickParams p;
    p.median_half_window = median_half;
    p.local_max_half_window = local_half;
    p.offset = offset;
    p.min_separation = min_sep;
    return p;
}

}  // namespace

TEST_SUITE("peaks") {

TEST_CASE("an isolated spike is a peak") {
    std::vector<std::size_t> peaks =
        adaptive_threshold_peaks(curve_of({0, 0, 1, 0, 0}), params(2, 2, 0.1, 0));
    CHECK(peaks == std::vector<std::size_t>{2});
}

TEST_CASE("constant curves have no strict maxima") {
    CHECK(adaptive_threshold_peaks(curve_of(std::vector<double>(50, 0.4))).empty());
}

TEST_CASE("separation suppresses the weaker middle peak") {
    std::vector<std::size_t> peaks = adaptive_threshold_peaks(
        curve_of({0, 1, 0, 0.9, 0, 1, 0}), params(8, 3, 0.0, 3));
    CHECK(peaks == std::vector<std::size_t>{1, 5});
}

TEST_CASE("a narrower window admits the middle peak") {
    std::vector<std::size_t> peaks = adaptive_threshold_peaks(
        curve_of({0, 1, 0, 0.9, 0, 1, 0}), params(8, 1, 0.0, 2));
    CHECK(peaks == std::vector<std::size_t>{1, 3, 5});
}

TEST_CASE("plateaus are rejected by strictness") {
    CHECK(adaptive_threshold_peaks(curve_of({0, 1, 1, 0}), params(2, 2, 0.0, 0)).empty());
}

TEST_CASE("edge frames use truncated windows") {
    std::vector<std::size_t> peaks =
        adaptive_threshold_peaks(curve_of({1, 0, 0, 0, 0}), params(2, 2, 0.1, 0));
    CHECK(peaks == std::vector<std::size_t>{0});
}

TEST_CASE("offset raises the admission bar") {
    std::vector<double> values = {0.1, 0.3, 0.1, 0.1, 0.8, 0.1};
    CHECK(adaptive_threshold_peaks(curve_of(values), params(3, 1, 0.5, 0)) ==
          std::vector<std::size_t>{4});
    CHECK(adaptive_threshold_peaks(curve_of(values), params(3, 1, 0.1, 0)) ==
          std::vector<std::size_t>{1, 4});
}

TEST_CASE("parameters are validated") {
    ActivationCurve curve = curve_of({0, 1, 0});
    CHECK_THROWS_AS(adaptive_threshold_peaks(curve, params(-1, 3, 0.1, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(adaptive_threshold_peaks(curve, params(8, 0, 0.1, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(adaptive_threshold_peaks(curve, params(8, 3, 0.1, -2)),
                    std::invalid_argument);
}

TEST_CASE("raising delta only removes peaks") {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::uniform_real_distribution<double> delta(0.0, 0.3);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> values(120);
        for (double& v : values) {
            v = value(rng);
        }
        double low = delta(rng);
        double high = low + delta(rng);
        std::vector<std::size_t> at_low =
            adaptive_threshold_peaks(curve_of(values), params(8, 3, low, 0));
        std::vector<std::size_t> at_high =
            adaptive_threshold_peaks(curve_of(values), params(8, 3, high, 0));
        for (std::size_t peak : at_high) {
            CHECK(std::find(at_low.begin(), at_low.end(), peak) != at_low.end());
        }
    }
}

TEST_CASE("a constant offset does not move peaks") {
    std::mt19937 rng(405);
    std::uniform_real_distribution<double> value(0.0, 0.6);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> values(100);
        for (double& v : values) {
            v = value(rng);
        }
        std::vector<double> shifted = values;
        for (double& v : shifted) {
            v += 0.35;
        }
        for (int min_sep : {0, 7}) {
            PeakPickParams p = params(8, 3, 0.07, min_sep);
            CHECK(adaptive_threshold_peaks(curve_of(values), p) ==
                  adaptive_threshold_peaks(curve_of(shifted), p));
        }
    }
}

TEST_CASE("converts frame indices to seconds") {
    CHECK(frames_to_seconds({100}, 100.0) == std::vector<double>{1.0});
    CHECK(frames_to_seconds({}, 100.0).empty());
    CHECK(frames_to_seconds({50, 150}, 100.0) == std::vector<double>{0.5, 1.5});
    CHECK_THROWS_AS(frames_to_seconds({1}, 0.0), std::invalid_argument);
}

TEST_CASE("parses activation files") {
    LoadedActivations loaded = parse_activations("fps=100\n0.0\n0.9\n");
    CHECK(loaded.curve.frame_rate == 100.0);
    CHECK(loaded.curve.values == std::vector<double>{0.0, 0.9});
    CHECK(loaded.diagnostics.empty());
}

TEST_CASE("out-of-range activations are clamped with a diagnostic") {
    LoadedActivations loaded = parse_activations("fps=50\n1.2\n0.5\n-0.1\n");
    CHECK(loaded.curve.values == std::vector<double>{1.0, 0.5, 0.0});
    REQUIRE(loaded.diagnostics.size() == 1);
    CHECK(loaded.diagnostics[0].severity == Severity::warning);
    CHECK(loaded.diagnostics[0].message.find("2") != std::string::npos);
}

TEST_CASE("activation files require a header and numeric lines") {
    CHECK_THROWS_AS(parse_activations("0.1\n0.2\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_activations(""), std::runtime_error);
    CHECK_THROWS_AS(parse_activations("fps=0\n0.1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_activations("fps=100\n0.1\nNaN-ish\n"), std::runtime_error);
}

TEST_CASE("load_activations reports the offending path") {
    testutil::ScopedTempDir dir;
    std::string path = dir.file("act.txt");
    testutil::write_file(path, "no header here\n");
    try {
        load_activations(path);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(path) != std::string::npos);
    }
}

}  // TEST_SUITE
