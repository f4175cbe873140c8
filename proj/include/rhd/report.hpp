#pragma once

#include <random>
#include <string>
#include <vector>

namespace rhd {

inline constexpr const char* kVersion = "0.1.0";

// Shortest exact decimal ("%.17g" trimmed) — deterministic across runs.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

// Deterministic uniform in [0, 1): fixed bit recipe on top of mt19937_64 so
// outputs do not depend on the standard library's distribution internals.
inline double rng_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void save(const std::string& path) const; // '.' decimal, LF line endings
};

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

// Minimal single-file log-log line plot.
std::string svg_loglog_plot(const std::string& title, const std::vector<PlotSeries>& series);

} // namespace rhd
