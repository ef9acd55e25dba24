#include <algorithm>
#include <cmath>
#include <sstream>

#include "forge/harness.hpp"

namespace forge {

// Minimal self-contained SVG scatter plot. The CSV is the artifact of
// record; this is advisory visualisation only.
std::string svg_scatter(const std::vector<SvgSeries>& series, const std::string& x_label,
                        const std::string& y_label, std::optional<double> vline) {
    const int W = 640, H = 420, ML = 60, MR = 20, MT = 20, MB = 45;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x); xmax = std::max(xmax, x);
            ymin = std::min(ymin, y); ymax = std::max(ymax, y);
        }
    }
    if (vline) { xmin = std::min(xmin, *vline); xmax = std::max(xmax, *vline); }
    if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
    const double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
    xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

    auto px = [&](double x) {
        return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto py = [&](double y) {
        return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
       << "' viewBox='0 0 " << W << " " << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='"
       << H - MB << "' stroke='black'/>\n";
    os << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
       << "' stroke='black'/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 5.0;
        const double yv = ymin + (ymax - ymin) * t / 5.0;
        os << "<text x='" << px(xv) << "' y='" << H - MB + 16
           << "' font-size='10' text-anchor='middle'>" << format_double(xv) << "</text>\n";
        os << "<text x='" << ML - 6 << "' y='" << py(yv) + 3
           << "' font-size='10' text-anchor='end'>" << format_double(yv) << "</text>\n";
    }
    os << "<text x='" << (ML + W - MR) / 2 << "' y='" << H - 8
       << "' font-size='12' text-anchor='middle'>" << x_label << "</text>\n";
    os << "<text x='14' y='" << (MT + H - MB) / 2
       << "' font-size='12' text-anchor='middle' transform='rotate(-90 14 "
       << (MT + H - MB) / 2 << ")'>" << y_label << "</text>\n";
    if (vline) {
        os << "<line x1='" << px(*vline) << "' y1='" << MT << "' x2='" << px(*vline)
           << "' y2='" << H - MB << "' stroke='#888' stroke-dasharray='4 3'/>\n";
        os << "<text x='" << px(*vline) + 4 << "' y='" << MT + 12
           << "' font-size='10' fill='#555'>x=" << format_double(*vline) << "</text>\n";
    }
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % 6];
        for (const auto& [x, y] : series[si].points) {
            os << "<circle cx='" << px(x) << "' cy='" << py(y)
               << "' r='3' fill='" << color << "' fill-opacity='0.75'/>\n";
        }
        os << "<text x='" << W - MR - 4 << "' y='" << MT + 14 + 14 * si
           << "' font-size='11' text-anchor='end' fill='" << color << "'>"
           << series[si].label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace forge
