#include "svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "qkm/errors.hpp"

namespace qkm::cli {

namespace {

// Red, green, blue first, then the rest of the ColorBrewer Set1 wheel.
constexpr const char* kPalette[] = {"#e41a1c", "#4daf4a", "#377eb8", "#ff7f00", "#984ea3",
                                    "#a65628", "#f781bf", "#999999", "#66c2a5", "#ffd92f"};
constexpr int kPaletteSize = 10;

constexpr double kPlotSize = 360.0;
constexpr double kMargin = 56.0;
constexpr double kGap = 40.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

void write_scatter_svg(const std::filesystem::path& path, const Matrix& xy,
                       const std::vector<PlotPanel>& panels, const std::string& x_label,
                       const std::string& y_label) {
    if (xy.cols != 2) throw ShapeError("scatter data must have exactly 2 columns");
    if (xy.rows == 0) throw DataError("nothing to plot");
    if (panels.empty()) throw PreconditionError("at least one panel required");
    for (const auto& p : panels)
        if (p.groups.size() != xy.rows)
            throw ShapeError("panel group count does not match point count");

    double xmin = xy.at(0, 0), xmax = xmin, ymin = xy.at(0, 1), ymax = ymin;
    for (std::size_t i = 0; i < xy.rows; ++i) {
        xmin = std::min(xmin, xy.at(i, 0));
        xmax = std::max(xmax, xy.at(i, 0));
        ymin = std::min(ymin, xy.at(i, 1));
        ymax = std::max(ymax, xy.at(i, 1));
    }
    // 5% padding; degenerate ranges widen to a unit box.
    double xpad = (xmax - xmin) > 0 ? 0.05 * (xmax - xmin) : 0.5;
    double ypad = (ymax - ymin) > 0 ? 0.05 * (ymax - ymin) : 0.5;
    xmin -= xpad, xmax += xpad;
    ymin -= ypad, ymax += ypad;

    const double width =
        kMargin + static_cast<double>(panels.size()) * kPlotSize +
        static_cast<double>(panels.size() - 1) * kGap + kMargin;
    const double height = kMargin + kPlotSize + kMargin;

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<!-- qkm plot format 1 -->\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
        << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
    out << "<rect width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const double x0 = kMargin + static_cast<double>(p) * (kPlotSize + kGap);
        const double y0 = kMargin;
        auto px = [&](double x) {
            return x0 + (x - xmin) / (xmax - xmin) * kPlotSize;
        };
        auto py = [&](double y) {
            return y0 + kPlotSize - (y - ymin) / (ymax - ymin) * kPlotSize;
        };

        out << "<g>\n";
        out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(kPlotSize)
            << "\" height=\"" << num(kPlotSize)
            << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << num(x0 + kPlotSize / 2) << "\" y=\"" << num(y0 - 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
            << panels[p].title << "</text>\n";
        out << "<text x=\"" << num(x0 + kPlotSize / 2) << "\" y=\"" << num(y0 + kPlotSize + 34)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
            << "</text>\n";
        out << "<text x=\"" << num(x0 - 34) << "\" y=\"" << num(y0 + kPlotSize / 2)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
               "transform=\"rotate(-90 "
            << num(x0 - 34) << " " << num(y0 + kPlotSize / 2) << ")\">" << y_label << "</text>\n";

        for (std::size_t i = 0; i < xy.rows; ++i) {
            int g = panels[p].groups[i];
            const char* color = kPalette[((g % kPaletteSize) + kPaletteSize) % kPaletteSize];
            out << "<circle cx=\"" << num(px(xy.at(i, 0))) << "\" cy=\"" << num(py(xy.at(i, 1)))
                << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.75\"/>\n";
        }

        // Group centroids as black crosses on top of the points.
        int max_group = *std::max_element(panels[p].groups.begin(), panels[p].groups.end());
        for (int g = 0; g <= max_group; ++g) {
            double sx = 0.0, sy = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < xy.rows; ++i) {
                if (panels[p].groups[i] != g) continue;
                sx += xy.at(i, 0);
                sy += xy.at(i, 1);
                ++n;
            }
            if (n == 0) continue;
            double cx = px(sx / static_cast<double>(n));
            double cy = py(sy / static_cast<double>(n));
            out << "<path d=\"M " << num(cx - 6) << " " << num(cy) << " L " << num(cx + 6) << " "
                << num(cy) << " M " << num(cx) << " " << num(cy - 6) << " L " << num(cx) << " "
                << num(cy + 6) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        }
        out << "</g>\n";
    }

    out << "</svg>\n";
    if (!out) throw DataError("write to '" + path.string() + "' failed");
}

} // namespace qkm::cli
