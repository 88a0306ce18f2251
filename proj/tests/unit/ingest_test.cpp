#include "doctest.h"

#include "tcnlab/bounds.hpp"
#include "tcnlab/ingest.hpp"
#include "tcnlab/training.hpp"
#include "tcnlab/rng.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

using namespace tcnlab;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path(fs::temp_directory_path() / name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { fs::remove(path); }
};

Series sinusoid(double freq_hz, double fs, std::size_t n, double amplitude = 1.0) {
    Series s;
    s.sampling_rate = fs;
    s.values.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        s.values[t] = amplitude * std::sin(2.0 * 3.14159265358979323846 * freq_hz * double(t) / fs);
    return s;
}

// RMS-derived amplitude over the central half of the signal, past the
// filter transients.
double steady_amplitude(const Series& s) {
    const std::size_t lo = s.size() / 4, hi = 3 * s.size() / 4;
    double acc = 0.0;
    for (std::size_t t = lo; t < hi; ++t) acc += s[t] * s[t];
    return std::sqrt(2.0 * acc / double(hi - lo));
}

} // namespace

TEST_CASE("load_signal reads a single-column file") {
    TempFile f("tcnlab_basic.csv", "1.0\n2.0\n3.0\n");
    const LoadedSignal sig = load_signal({f.path.string(), SignalFormat::CsvSingleColumn, 250.0});
    CHECK(sig.series.values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(sig.series.sampling_rate == 250.0);
    CHECK(sig.interpolated.empty());
}

TEST_CASE("a single interior gap interpolates to the midpoint") {
    TempFile f("tcnlab_gap.csv", "1.0\n\n3.0\n");
    const LoadedSignal sig = load_signal({f.path.string(), SignalFormat::CsvSingleColumn, 100.0});
    REQUIRE(sig.series.size() == 3);
    CHECK(sig.series[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sig.interpolated == std::vector<std::size_t>{1});
}

TEST_CASE("edge gaps extend the nearest value") {
    TempFile f("tcnlab_edges.csv", "nan\n5.0\nnan\nnan\n");
    const LoadedSignal sig = load_signal({f.path.string(), SignalFormat::CsvSingleColumn, 100.0});
    CHECK(sig.series.values == std::vector<double>{5.0, 5.0, 5.0, 5.0});
    CHECK(sig.interpolated.size() == 3);
}

TEST_CASE("timestamped format takes the second column") {
    TempFile f("tcnlab_ts.csv", "0.000,1.5\n0.004,2.5\n0.008,3.5\n");
    const LoadedSignal sig = load_signal({f.path.string(), SignalFormat::CsvTimestamped, 250.0});
    CHECK(sig.series.values == std::vector<double>{1.5, 2.5, 3.5});
}

TEST_CASE("parse errors carry line numbers") {
    TempFile f("tcnlab_bad.csv", "1.0\nbogus!\n3.0\n");
    try {
        load_signal({f.path.string(), SignalFormat::CsvSingleColumn, 250.0});
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("a file with no usable values is rejected") {
    TempFile f("tcnlab_empty.csv", "nan\nnan\n");
    CHECK_THROWS_AS(load_signal({f.path.string(), SignalFormat::CsvSingleColumn, 250.0}),
                    std::runtime_error);
}

TEST_CASE("series CSV round-trips to 1e-12") {
    SplitMix64 rng(3);
    Series original;
    original.sampling_rate = 360.0;
    for (int i = 0; i < 200; ++i) original.values.push_back(rng.next_uniform(-5.0, 5.0));
    const std::string path = (fs::temp_directory_path() / "tcnlab_roundtrip.csv").string();
    write_series_csv(original, path);
    const Series back = read_series_csv(path);
    REQUIRE(back.size() == original.size());
    for (std::size_t i = 0; i < back.size(); ++i)
        CHECK(std::fabs(back[i] - original[i]) < 1e-12);
    CHECK(back.sampling_rate.has_value());
    CHECK(*back.sampling_rate == 360.0);
    fs::remove(path);
}

TEST_CASE("series JSON representation round-trips") {
    Series s{{1.5, -2.25, 0.0078125}, 360.0};
    const Series back = series_from_json(series_to_json(s));
    CHECK(back.values == s.values);
    CHECK(back.sampling_rate == s.sampling_rate);

    Series no_fs{{4.0, 5.0}, {}};
    const Series back2 = series_from_json(series_to_json(no_fs));
    CHECK_FALSE(back2.sampling_rate.has_value());
}

TEST_CASE("bandpass rejects DC") {
    Series dc;
    dc.sampling_rate = 250.0;
    dc.values.assign(2500, 1.0);
    const Series filtered = bandpass(dc, 0.5, 40.0);
    double peak = 0.0;
    for (std::size_t t = filtered.size() / 4; t < 3 * filtered.size() / 4; ++t)
        peak = std::max(peak, std::fabs(filtered[t]));
    CHECK(peak < 1e-3);
}

TEST_CASE("bandpass preserves an in-band sinusoid within 5%") {
    const Series tone = sinusoid(10.0, 250.0, 5000);
    const Series filtered = bandpass(tone, 0.5, 40.0);
    CHECK(steady_amplitude(filtered) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("bandpass attenuates an out-of-band sinusoid by at least 90%") {
    const Series tone = sinusoid(100.0, 250.0, 5000);
    const Series filtered = bandpass(tone, 0.5, 40.0);
    CHECK(steady_amplitude(filtered) < 0.1);
}

TEST_CASE("bandpass validates the band against Nyquist") {
    Series s = sinusoid(10.0, 250.0, 100);
    CHECK_THROWS_AS(bandpass(s, 0.5, 130.0), std::invalid_argument);
    CHECK_THROWS_AS(bandpass(s, 40.0, 0.5), std::invalid_argument);
    s.sampling_rate.reset();
    CHECK_THROWS_AS(bandpass(s, 0.5, 40.0), std::invalid_argument);
}

TEST_CASE("normalize standardizes to mean zero, unit variance") {
    Series s{{0.0, 2.0}, {}};
    const Series z = normalize(s);
    CHECK(z.values == std::vector<double>{-1.0, 1.0});

    SplitMix64 rng(8);
    Series noisy;
    for (int i = 0; i < 500; ++i) noisy.values.push_back(rng.next_uniform(3.0, 9.0));
    const Series zz = normalize(noisy);
    double mean = 0.0;
    for (double v : zz.values) mean += v;
    mean /= double(zz.size());
    double var = 0.0;
    for (double v : zz.values) var += (v - mean) * (v - mean);
    var /= double(zz.size());
    CHECK(std::fabs(mean) < 1e-12);
    CHECK(std::fabs(var - 1.0) < 1e-9);

    // Idempotence.
    const Series zzz = normalize(zz);
    for (std::size_t i = 0; i < zz.size(); ++i) CHECK(std::fabs(zzz[i] - zz[i]) < 1e-12);

    Series constant{{4.0, 4.0, 4.0}, {}};
    CHECK_THROWS_AS(normalize(constant), std::invalid_argument);
}

TEST_CASE("window counts the supervised pairs") {
    Series s10{std::vector<double>(10, 1.0), {}};
    CHECK(window(s10, 10, 1).empty());  // no value left to predict

    Series s11{std::vector<double>(11, 1.0), {}};
    CHECK(window(s11, 10, 1).size() == 1);

    Series s100;
    for (int i = 0; i < 100; ++i) s100.values.push_back(double(i));
    const auto pairs = window(s100, 10, 10);
    REQUIRE(pairs.size() == 9);
    CHECK(pairs[0].input.front() == 0.0);
    CHECK(pairs[0].input.back() == 9.0);
    CHECK(pairs[0].target == 10.0);
    CHECK(pairs[8].input.front() == 80.0);
    CHECK(pairs[8].target == 90.0);

    Series s5{std::vector<double>(5, 1.0), {}};
    CHECK_THROWS_AS(window(s5, 10, 1), std::invalid_argument);
}

TEST_CASE("a preprocessed recording runs through the training pipeline") {
    // Synthetic "recording": a quasi-periodic carrier plus drift and noise,
    // filtered and standardized, then trained on like any other series.
    const double fs = 250.0;
    Series recording;
    recording.sampling_rate = fs;
    NormalSampler normal(12);
    double drift = 0.0;
    for (std::size_t t = 0; t < 3000; ++t) {
        drift = 0.999 * drift + 0.01 * normal.next();
        const double beat = std::sin(2.0 * 3.14159265358979323846 * 1.2 * double(t) / fs);
        recording.values.push_back(5.0 + beat + drift + 0.05 * normal.next());
    }

    const Series cleaned = normalize(bandpass(recording, 0.5, 40.0));
    const std::size_t split = 2400;
    Series train{{cleaned.values.begin(), cleaned.values.begin() + split}, {}};
    Series test{{cleaned.values.begin() + split, cleaned.values.end()}, {}};

    TcnConfig cfg;
    cfg.depth = 2;
    cfg.kernel_size = 5;
    cfg.channels = 8;
    cfg.norm_radius = 1.0;
    TrainConfig tcfg{.delay = 5, .passes = 1, .step_scale = 0.5, .eval_fraction = 0.2, .seed = 9};
    const TrainedModel model = train_delayed_feedback(cfg, train, tcfg);
    const GapEvaluation eval = evaluate_gap(cfg, model.averaged_weights, train, test);

    CHECK(eval.train_loss >= 0.0);
    CHECK(eval.train_loss <= 1.0);
    CHECK(eval.train_loss < 0.5);  // the filtered signal is predictable
    const BoundReport bound = generalization_bound(
        cfg.depth, cfg.kernel_size, 1, cfg.norm_radius, split, 0.05,
        MixingProfile::exponential(1.0, 0.3), 8.0);
    CHECK(eval.gap <= bound.total);
}

TEST_CASE("windows drawn from a split never cross the boundary") {
    Series s;
    for (int i = 0; i < 50; ++i) s.values.push_back(double(i));
    Series train{{s.values.begin(), s.values.begin() + 40}, {}};
    const auto pairs = window(train, 8, 1);
    for (const WindowPair& pair : pairs) {
        CHECK(pair.target < 40.0);
        for (double v : pair.input) CHECK(v < 40.0);
    }
}
