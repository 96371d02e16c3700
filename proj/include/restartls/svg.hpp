#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "restartls/profiles.hpp"

namespace restartls::svg {

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline const char* color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

} // namespace detail

/// Self-contained SVG 1.1 plot of step-function profile curves, one polyline
/// per method. Axes are linear; y spans [0, 1].
inline std::string profile_plot(const std::map<std::string, bench::ProfileCurve>& curves,
                                const std::string& title, const std::string& x_label,
                                double x_min, double x_max) {
    const double w = 720, h = 480;
    const double ml = 70, mr = 25, mt = 45, mb = 55;
    const double pw = w - ml - mr, ph = h - mt - mb;
    if (!(x_max > x_min)) x_max = x_min + 1.0;

    auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) { return mt + (1.0 - y) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
       << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"16\">" << title << "</text>\n";

    // frame and ticks
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double y = i * 0.25;
        os << "<line x1=\"" << ml - 4 << "\" y1=\"" << detail::num(sy(y)) << "\" x2=\"" << ml
           << "\" y2=\"" << detail::num(sy(y)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << detail::num(sy(y) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << detail::num(y) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        double x = x_min + (x_max - x_min) * i / 5.0;
        os << "<line x1=\"" << detail::num(sx(x)) << "\" y1=\"" << mt + ph << "\" x2=\""
           << detail::num(sx(x)) << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << detail::num(sx(x)) << "\" y=\"" << mt + ph + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << detail::num(x) << "</text>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
       << "</text>\n";
    os << "<text x=\"18\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">fraction of problems</text>\n";

    // step polylines
    std::size_t idx = 0;
    for (const auto& [label, curve] : curves) {
        std::ostringstream pts;
        double y_prev = 0.0;
        bool first = true;
        for (std::size_t i = 0; i < curve.abscissae.size(); ++i) {
            double x = std::clamp(curve.abscissae[i], x_min, x_max);
            double y = curve.ordinates[i];
            if (first) {
                pts << detail::num(sx(x)) << ',' << detail::num(sy(y));
                first = false;
            } else {
                pts << ' ' << detail::num(sx(x)) << ',' << detail::num(sy(y_prev));
                pts << ' ' << detail::num(sx(x)) << ',' << detail::num(sy(y));
            }
            y_prev = y;
        }
        if (!first) pts << ' ' << detail::num(sx(x_max)) << ',' << detail::num(sy(y_prev));
        os << "<polyline fill=\"none\" stroke=\"" << detail::color(idx)
           << "\" stroke-width=\"1.8\" points=\"" << pts.str() << "\"/>\n";
        ++idx;
    }

    // legend
    idx = 0;
    for (const auto& [label, curve] : curves) {
        double ly = mt + 16 + 18 * static_cast<double>(idx);
        os << "<line x1=\"" << ml + 12 << "\" y1=\"" << detail::num(ly) << "\" x2=\"" << ml + 40
           << "\" y2=\"" << detail::num(ly) << "\" stroke=\"" << detail::color(idx)
           << "\" stroke-width=\"1.8\"/>\n";
        os << "<text x=\"" << ml + 46 << "\" y=\"" << detail::num(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace restartls::svg
