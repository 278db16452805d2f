#include "fluxtune/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace fluxtune {

namespace {

constexpr int kMaxCells = 240;
constexpr int kPlotWidth = 640;
constexpr int kPlotHeight = 440;
constexpr int kMarginLeft = 90;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 60;

// dark blue -> teal -> yellow
constexpr std::array<std::array<int, 3>, 5> kStops{{
    {{13, 8, 135}},
    {{84, 39, 143}},
    {{33, 113, 181}},
    {{65, 174, 118}},
    {{254, 227, 89}},
}};

std::string color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double scaled = t * (kStops.size() - 1);
    const int low = std::min(static_cast<int>(scaled), static_cast<int>(kStops.size()) - 2);
    const double frac = scaled - low;
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x",
                  static_cast<int>(std::lround(kStops[low][0] +
                                               frac * (kStops[low + 1][0] - kStops[low][0]))),
                  static_cast<int>(std::lround(kStops[low][1] +
                                               frac * (kStops[low + 1][1] - kStops[low][1]))),
                  static_cast<int>(std::lround(kStops[low][2] +
                                               frac * (kStops[low + 1][2] - kStops[low][2]))));
    return buffer;
}

std::string format_tick(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

}  // namespace

void write_spectrum_svg(const SpectrumMap& map, const std::filesystem::path& path,
                        const std::string& title) {
    map.validate();
    const std::size_t nx = map.nx();
    const std::size_t ny = map.ny();
    const std::size_t cells_x = std::min<std::size_t>(nx, kMaxCells);
    const std::size_t cells_y = std::min<std::size_t>(ny, kMaxCells);

    // block means
    std::vector<double> block(cells_x * cells_y, 0.0);
    std::vector<int> counts(cells_x * cells_y, 0);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const std::size_t bx = ix * cells_x / nx;
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const std::size_t by = iy * cells_y / ny;
            block[bx * cells_y + by] += map.at(ix, iy);
            counts[bx * cells_y + by] += 1;
        }
    }
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < block.size(); ++i) {
        block[i] /= counts[i];
        lo = std::min(lo, block[i]);
        hi = std::max(hi, block[i]);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::ofstream out(path);
    if (!out) {
        throw InvalidArgument("cannot open '" + path.string() + "' for writing");
    }
    const int width = kMarginLeft + kPlotWidth + 30;
    const int height = kMarginTop + kPlotHeight + kMarginBottom;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
        out << "<text x=\"" << kMarginLeft + kPlotWidth / 2 << "\" y=\"24\" font-size=\"16\""
            << " text-anchor=\"middle\" font-family=\"sans-serif\">" << title << "</text>\n";
    }

    const double cell_w = static_cast<double>(kPlotWidth) / cells_x;
    const double cell_h = static_cast<double>(kPlotHeight) / cells_y;
    for (std::size_t bx = 0; bx < cells_x; ++bx) {
        for (std::size_t by = 0; by < cells_y; ++by) {
            const double value = (block[bx * cells_y + by] - lo) / span;
            const double x = kMarginLeft + bx * cell_w;
            // y axis points up
            const double y = kMarginTop + kPlotHeight - (by + 1) * cell_h;
            char rect[192];
            std::snprintf(rect, sizeof(rect),
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                          "fill=\"%s\"/>\n",
                          x, y, cell_w + 0.5, cell_h + 0.5, color(value).c_str());
            out << rect;
        }
    }

    // frame and ticks
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << kPlotWidth
        << "\" height=\"" << kPlotHeight << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int n_ticks = 5;
    for (int t = 0; t < n_ticks; ++t) {
        const double frac = static_cast<double>(t) / (n_ticks - 1);
        const double xv = map.grid.x_axis.front() +
                          frac * (map.grid.x_axis.back() - map.grid.x_axis.front());
        const double yv = map.grid.y_axis.front() +
                          frac * (map.grid.y_axis.back() - map.grid.y_axis.front());
        const double px = kMarginLeft + frac * kPlotWidth;
        const double py = kMarginTop + kPlotHeight - frac * kPlotHeight;
        out << "<line x1=\"" << px << "\" y1=\"" << kMarginTop + kPlotHeight << "\" x2=\"" << px
            << "\" y2=\"" << kMarginTop + kPlotHeight + 6 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << kMarginTop + kPlotHeight + 22
            << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
            << format_tick(xv) << "</text>\n";
        out << "<line x1=\"" << kMarginLeft - 6 << "\" y1=\"" << py << "\" x2=\"" << kMarginLeft
            << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kMarginLeft - 10 << "\" y=\"" << py + 4
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
            << format_tick(yv) << "</text>\n";
    }
    out << "<text x=\"" << kMarginLeft + kPlotWidth / 2 << "\" y=\"" << height - 14
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << map.grid.x_meta.kind << " (" << map.grid.x_meta.unit << ")</text>\n";
    out << "<text x=\"20\" y=\"" << kMarginTop + kPlotHeight / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 20 " << kMarginTop + kPlotHeight / 2 << ")\">"
        << map.grid.y_meta.kind << " (" << map.grid.y_meta.unit << ")</text>\n";
    out << "</svg>\n";
}

}  // namespace fluxtune
