// Minimal self-contained SVG emitters for the CLI: a heat map over a
// rectangular table and a log-log scatter/line plot with a slope annotation.
// No external fonts or stylesheets; output is deterministic.
#ifndef WKW_CLI_SVG_HPP
#define WKW_CLI_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace svg {

inline std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// diverging blue-white-red map on [-1, 1]
inline std::string diverging_color(double t)
{
    t = std::clamp(t, -1.0, 1.0);
    int r, g, b;
    if (t >= 0.0) {
        r = 255;
        g = static_cast<int>(255 * (1.0 - t));
        b = static_cast<int>(255 * (1.0 - t));
    } else {
        r = static_cast<int>(255 * (1.0 + t));
        g = static_cast<int>(255 * (1.0 + t));
        b = 255;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

struct Marker {
    double x, y;
};

/// rows-by-cols table drawn over [x0,x1] x [y0,y1]; values symmetrized about 0
inline void write_heatmap(const std::string& path, const std::vector<double>& values,
                          std::size_t rows, std::size_t cols, double x0, double x1,
                          double y0, double y1, const std::string& title,
                          const std::vector<Marker>& markers = {})
{
    const int W = 720, H = 560, ML = 60, MB = 46, MT = 34, MR = 20;
    const double pw = double(W - ML - MR) / double(cols);
    const double ph = double(H - MT - MB) / double(rows);
    double vmax = 1e-300;
    for (double v : values) vmax = std::max(vmax, std::abs(v));

    std::ofstream os(path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" "
          "font-size=\"14\">" << title << "</text>\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double t = values[r * cols + c] / vmax;
            if (std::abs(t) < 1e-4) continue;  // keep files small: skip near-white cells
            const double px = ML + pw * double(c);
            const double py = H - MB - ph * double(r + 1);
            os << "<rect x=\"" << num(px) << "\" y=\"" << num(py) << "\" width=\"" << num(pw + 0.5)
               << "\" height=\"" << num(ph + 0.5) << "\" fill=\"" << diverging_color(t)
               << "\"/>\n";
        }
    }
    auto tox = [&](double x) { return ML + (x - x0) / (x1 - x0) * (W - ML - MR); };
    auto toy = [&](double y) { return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB); };
    for (const auto& m : markers)
        os << "<circle cx=\"" << num(tox(m.x)) << "\" cy=\"" << num(toy(m.y))
           << "\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    // axes
    os << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << (W - ML - MR)
       << "\" height=\"" << (H - MT - MB) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
        os << "<text x=\"" << num(tox(fx)) << "\" y=\"" << H - MB + 18
           << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" << num(fx)
           << "</text>\n";
        os << "<text x=\"" << ML - 6 << "\" y=\"" << num(toy(fy) + 4)
           << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" << num(fy)
           << "</text>\n";
    }
    os << "</svg>\n";
}

/// log-log plot of err(h) with the fitted slope annotated
inline void write_loglog(const std::string& path, const std::vector<double>& h,
                         const std::vector<double>& err, double order,
                         const std::string& title)
{
    const int W = 640, H = 480, ML = 70, MB = 50, MT = 34, MR = 24;
    double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(err[i] > 0.0)) continue;
        lx.push_back(std::log10(h[i]));
        ly.push_back(std::log10(err[i]));
        lx0 = std::min(lx0, lx.back());
        lx1 = std::max(lx1, lx.back());
        ly0 = std::min(ly0, ly.back());
        ly1 = std::max(ly1, ly.back());
    }
    if (lx.empty()) { lx0 = -2; lx1 = 0; ly0 = -2; ly1 = 0; }
    const double padx = 0.08 * std::max(1e-6, lx1 - lx0), pady = 0.08 * std::max(1e-6, ly1 - ly0);
    lx0 -= padx; lx1 += padx; ly0 -= pady; ly1 += pady;
    auto tox = [&](double v) { return ML + (v - lx0) / (lx1 - lx0) * (W - ML - MR); };
    auto toy = [&](double v) { return H - MB - (v - ly0) / (ly1 - ly0) * (H - MT - MB); };

    std::ofstream os(path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" "
          "font-size=\"14\">" << title << "</text>\n";
    os << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << (W - ML - MR)
       << "\" height=\"" << (H - MT - MB) << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (lx.size() >= 2) {
        os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < lx.size(); ++i)
            os << num(tox(lx[i])) << "," << num(toy(ly[i])) << " ";
        os << "\"/>\n";
    }
    for (std::size_t i = 0; i < lx.size(); ++i)
        os << "<circle cx=\"" << num(tox(lx[i])) << "\" cy=\"" << num(toy(ly[i]))
           << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = lx0 + (lx1 - lx0) * k / 4.0, fy = ly0 + (ly1 - ly0) * k / 4.0;
        os << "<text x=\"" << num(tox(fx)) << "\" y=\"" << H - MB + 18
           << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">1e"
           << num(fx) << "</text>\n";
        os << "<text x=\"" << ML - 6 << "\" y=\"" << num(toy(fy) + 4)
           << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">1e" << num(fy)
           << "</text>\n";
    }
    os << "<text x=\"" << W - MR - 10 << "\" y=\"" << MT + 18
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"13\">fitted slope "
       << num(order) << "</text>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">h</text>\n";
    os << "</svg>\n";
}

}  // namespace svg

#endif
