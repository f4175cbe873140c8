#include "rhd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace rhd {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << content;
    if (!os) throw std::runtime_error("write failed for " + path);
}

void CsvTable::save(const std::string& path) const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += header[i];
        out += (i + 1 < header.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += format_double(row[i]);
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    write_text_file(path, out);
}

std::string svg_loglog_plot(const std::string& title, const std::vector<PlotSeries>& series) {
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!(xmin < xmax)) xmax = xmin * 10 + 1;
    if (!(ymin < ymax)) ymax = ymin * 10 + 1;
    const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
    const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
    const auto px = [&](double x) { return ml + (std::log10(x) - lx0) / (lx1 - lx0) * (W - ml - mr); };
    const auto py = [&](double y) { return H - mb - (std::log10(y) - ly0) / (ly1 - ly0) * (H - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      format_double(W) + "\" height=\"" + format_double(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_double(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
           title + "</text>\n";
    svg += "<rect x=\"" + format_double(ml) + "\" y=\"" + format_double(mt) + "\" width=\"" +
           format_double(W - ml - mr) + "\" height=\"" + format_double(H - mt - mb) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    // decade grid lines
    for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
        const double x = px(std::pow(10.0, d));
        svg += "<line x1=\"" + format_double(x) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
               format_double(x) + "\" y2=\"" + format_double(H - mb) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + format_double(x) + "\" y=\"" + format_double(H - mb + 18) +
               "\" text-anchor=\"middle\" font-size=\"12\">1e" + std::to_string(d) + "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
        const double y = py(std::pow(10.0, d));
        svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(y) + "\" x2=\"" +
               format_double(W - mr) + "\" y2=\"" + format_double(y) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + format_double(ml - 8) + "\" y=\"" + format_double(y + 4) +
               "\" text-anchor=\"end\" font-size=\"12\">1e" + std::to_string(d) + "</text>\n";
    }

    int ci = 0;
    for (const auto& s : series) {
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
            pts += format_double(px(s.x[i])) + "," + format_double(py(s.y[i])) + " ";
        }
        const char* color = colors[ci % 5];
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + format_double(W - mr - 8) + "\" y=\"" +
               format_double(mt + 16 + 16 * ci) + "\" text-anchor=\"end\" font-size=\"12\" fill=\"" +
               color + "\">" + s.label + "</text>\n";
        ++ci;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace rhd
