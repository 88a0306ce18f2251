// Loading and preprocessing of real-world signal files so recorded data can
// run through the same training and bound pipeline as synthetic sequences.
// No dataset ships with the artifact; the expected CSV export formats are
// documented in the README.
#pragma once

#include "tcnlab/series.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tcnlab {

enum class SignalFormat { CsvSingleColumn, CsvTimestamped };

struct SignalFile {
    std::string path;
    SignalFormat format = SignalFormat::CsvSingleColumn;
    double sampling_rate = 0.0;  // Hz, > 0
};

struct LoadedSignal {
    Series series;
    std::vector<std::size_t> interpolated;  // indices filled in by interpolation
};

// Parses the declared format; empty cells and "nan" entries are treated as
// missing and filled by linear interpolation (edges extend the nearest
// value). Parse errors carry line numbers; a file with no usable value is
// rejected.
LoadedSignal load_signal(const SignalFile& file);

// Zero-phase (forward-backward) second-order band-pass biquad, centered at
// the geometric mean of the band edges. The numerator zero at z = 1 removes
// DC exactly. Acausal by construction: preprocessing only, applied to a
// whole recording before any train/test split. Requires
// 0 < low < high < fs/2 and a sampling rate on the series.
Series bandpass(const Series& input, double low_hz, double high_hz);

// Mean 0, population variance 1. Rejects constant series. Idempotent.
Series normalize(const Series& input);

struct WindowPair {
    std::vector<double> input;
    double target = 0.0;  // the value immediately after the window
};

// Temporally ordered (window, next value) pairs; a window whose successor
// falls past the end of the series is dropped, so N == length yields zero
// pairs. Rejects series shorter than the window.
std::vector<WindowPair> window(const Series& input, std::size_t length, std::size_t stride);

} // namespace tcnlab
