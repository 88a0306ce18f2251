#include "tcnlab/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace tcnlab {

namespace {

bool is_missing_token(const std::string& token) {
    if (token.empty()) return true;
    std::string lower = token;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return lower == "nan" || lower == "na";
}

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& token, const std::string& path, std::size_t line_no) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(token, &consumed);
        if (consumed != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": cannot parse value '" + token + "'");
    }
}

} // namespace

LoadedSignal load_signal(const SignalFile& file) {
    if (!(file.sampling_rate > 0.0))
        throw std::invalid_argument("load_signal: sampling rate must be positive");
    std::ifstream in(file.path);
    if (!in) throw std::runtime_error("load_signal: cannot open " + file.path);

    LoadedSignal out;
    std::vector<bool> missing;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = strip(line);
        if (!trimmed.empty() && trimmed[0] == '#') continue;

        std::string value_token;
        if (file.format == SignalFormat::CsvSingleColumn) {
            value_token = trimmed;
        } else {
            const auto comma = trimmed.find(',');
            if (comma == std::string::npos) {
                if (trimmed.empty()) {
                    value_token = "";
                } else {
                    throw std::runtime_error(file.path + ":" + std::to_string(line_no) +
                                             ": expected 'timestamp,value'");
                }
            } else {
                value_token = strip(trimmed.substr(comma + 1));
            }
        }

        if (is_missing_token(value_token)) {
            out.series.values.push_back(std::numeric_limits<double>::quiet_NaN());
            missing.push_back(true);
        } else {
            out.series.values.push_back(parse_cell(value_token, file.path, line_no));
            missing.push_back(false);
        }
    }

    const std::size_t n = out.series.values.size();
    std::size_t present = 0;
    for (bool m : missing) present += m ? 0 : 1;
    if (present == 0) throw std::runtime_error("load_signal: no usable values in " + file.path);

    // Linear interpolation across gaps; edge gaps extend the nearest value.
    std::size_t i = 0;
    while (i < n) {
        if (!missing[i]) {
            ++i;
            continue;
        }
        std::size_t gap_end = i;
        while (gap_end < n && missing[gap_end]) ++gap_end;
        const bool has_left = i > 0;
        const bool has_right = gap_end < n;
        for (std::size_t k = i; k < gap_end; ++k) {
            double v;
            if (has_left && has_right) {
                const double left = out.series.values[i - 1];
                const double right = out.series.values[gap_end];
                const double frac = double(k - i + 1) / double(gap_end - i + 1);
                v = left + frac * (right - left);
            } else if (has_left) {
                v = out.series.values[i - 1];
            } else {
                v = out.series.values[gap_end];
            }
            out.series.values[k] = v;
            out.interpolated.push_back(k);
        }
        i = gap_end;
    }

    out.series.sampling_rate = file.sampling_rate;
    validate_series(out.series);
    return out;
}

namespace {

struct Biquad {
    double b0, b1, b2, a1, a2;  // normalized, a0 = 1

    void apply_forward(std::vector<double>& x) const {
        double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
        for (double& v : x) {
            const double in = v;
            const double out = b0 * in + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
            x2 = x1;
            x1 = in;
            y2 = y1;
            y1 = out;
            v = out;
        }
    }
};

} // namespace

Series bandpass(const Series& input, double low_hz, double high_hz) {
    validate_series(input);
    if (!input.sampling_rate)
        throw std::invalid_argument("bandpass: series carries no sampling rate");
    const double fs = *input.sampling_rate;
    if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < fs / 2.0))
        throw std::invalid_argument("bandpass: need 0 < low < high < fs/2");

    // Constant-peak-gain band-pass biquad (audio cookbook form): center at
    // the geometric mean of the edges, Q chosen so the band edges are the
    // -3 dB points of a single pass.
    const double f0 = std::sqrt(low_hz * high_hz);
    const double q = f0 / (high_hz - low_hz);
    const double w0 = 2.0 * 3.14159265358979323846 * f0 / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    const Biquad biquad{alpha / a0, 0.0, -alpha / a0, -2.0 * std::cos(w0) / a0,
                        (1.0 - alpha) / a0};

    Series out = input;
    biquad.apply_forward(out.values);
    std::reverse(out.values.begin(), out.values.end());
    biquad.apply_forward(out.values);
    std::reverse(out.values.begin(), out.values.end());
    return out;
}

Series normalize(const Series& input) {
    validate_series(input);
    const std::size_t n = input.size();
    double mean = 0.0;
    for (double v : input.values) mean += v;
    mean /= double(n);
    double var = 0.0;
    for (double v : input.values) var += (v - mean) * (v - mean);
    var /= double(n);
    if (var == 0.0) throw std::invalid_argument("normalize: constant series has no scale");
    const double inv_sd = 1.0 / std::sqrt(var);
    Series out = input;
    for (double& v : out.values) v = (v - mean) * inv_sd;
    return out;
}

std::vector<WindowPair> window(const Series& input, std::size_t length, std::size_t stride) {
    validate_series(input);
    if (length < 1) throw std::invalid_argument("window: length must be >= 1");
    if (stride < 1) throw std::invalid_argument("window: stride must be >= 1");
    const std::size_t n = input.size();
    if (n < length) throw std::invalid_argument("window: series shorter than window length");

    std::vector<WindowPair> pairs;
    // The target is the value right after the window, so the last admissible
    // start index is n - length - 1.
    if (n < length + 1) return pairs;
    for (std::size_t start = 0; start + length < n; start += stride) {
        WindowPair pair;
        pair.input.assign(input.values.begin() + long(start),
                          input.values.begin() + long(start + length));
        pair.target = input.values[start + length];
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

} // namespace tcnlab
