#include "redtide/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "redtide/pipeline.hpp"

namespace redtide {

namespace {

std::string fill_color(double r) {
    // -1 -> deep blue, 0 -> white, +1 -> deep red.
    const double t = std::min(1.0, std::fabs(r));
    int red = 255, green = 255, blue = 255;
    if (r >= 0) {
        green = static_cast<int>(255 - 185 * t);
        blue = static_cast<int>(255 - 205 * t);
    } else {
        red = static_cast<int>(255 - 205 * t);
        green = static_cast<int>(255 - 155 * t);
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", red, green, blue);
    return buf;
}

}  // namespace

std::string heatmap_svg(const CorrelationGrid& grid, const std::vector<GeoLevel>& levels,
                        const std::vector<Frequency>& freqs, const std::string& title) {
    const int cell_w = 110, cell_h = 52, left = 110, top = 70;
    const int width = left + cell_w * static_cast<int>(freqs.size()) + 20;
    const int height = top + cell_h * static_cast<int>(levels.size()) + 20;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\">\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";

    for (size_t c = 0; c < freqs.size(); ++c) {
        svg << "<text x=\"" << left + cell_w * c + cell_w / 2 << "\" y=\"" << top - 12
            << "\" text-anchor=\"middle\" font-size=\"13\">" << to_string(freqs[c])
            << "</text>\n";
    }
    for (size_t rix = 0; rix < levels.size(); ++rix) {
        svg << "<text x=\"" << left - 10 << "\" y=\"" << top + cell_h * rix + cell_h / 2 + 5
            << "\" text-anchor=\"end\" font-size=\"13\">" << level_token(levels[rix])
            << "</text>\n";
        for (size_t c = 0; c < freqs.size(); ++c) {
            const auto* e = grid.find(levels[rix], freqs[c]);
            const int x = left + cell_w * static_cast<int>(c);
            const int y = top + cell_h * static_cast<int>(rix);
            const std::string color = (e && e->r) ? fill_color(*e->r) : "#d8d8d8";
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
                << "\" height=\"" << cell_h << "\" fill=\"" << color
                << "\" stroke=\"#666\"/>\n";
            char label[32];
            if (e && e->r) std::snprintf(label, sizeof(label), "%.2f", *e->r);
            else std::snprintf(label, sizeof(label), "n/a");
            svg << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + cell_h / 2 + 5
                << "\" text-anchor=\"middle\" font-size=\"14\">" << label << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace redtide
