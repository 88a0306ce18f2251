#include "tcnlab/series.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tcnlab {

void validate_series(const Series& s) {
    if (s.values.empty()) throw std::invalid_argument("series: empty");
    for (double v : s.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("series: non-finite value");
    }
    if (s.sampling_rate && *s.sampling_rate <= 0.0)
        throw std::invalid_argument("series: sampling rate must be positive");
}

void write_series_csv(const Series& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    if (s.sampling_rate) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "# fs=%.17g\n", *s.sampling_rate);
        out << buf;
    }
    for (double v : s.values) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Series read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    Series s;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("fs=");
            if (pos != std::string::npos) s.sampling_rate = std::stod(line.substr(pos + 3));
            continue;
        }
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &consumed);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": not a number: " + line);
        }
        s.values.push_back(v);
    }
    validate_series(s);
    return s;
}

std::string series_to_json(const Series& s) {
    nlohmann::json j;
    j["values"] = s.values;
    if (s.sampling_rate) j["fs"] = *s.sampling_rate;
    return j.dump();
}

Series series_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Series s;
    s.values = j.at("values").get<std::vector<double>>();
    if (j.contains("fs")) s.sampling_rate = j.at("fs").get<double>();
    validate_series(s);
    return s;
}

} // namespace tcnlab
