#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tcnlab {

// A univariate time series. Values are ordered; an optional sampling rate
// in Hz travels with the data through preprocessing.
struct Series {
    std::vector<double> values;
    std::optional<double> sampling_rate;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] bool empty() const { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// Throws std::invalid_argument on empty or non-finite data.
void validate_series(const Series& s);

// CSV format: one value per line, optional leading "# fs=<Hz>" header.
void write_series_csv(const Series& s, const std::string& path);
Series read_series_csv(const std::string& path);

// The run store's text-only JSON representation: {"values": [...], "fs": ...}.
std::string series_to_json(const Series& s);
Series series_from_json(const std::string& text);

} // namespace tcnlab
