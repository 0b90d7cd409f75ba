// svg.hpp — minimal self-contained polyline charts.  No external assets, fixed
// palette, coordinates rounded to 0.01 px so output is byte-stable.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhsb {

class SvgPlot {
    struct Series {
        std::vector<double> x, y;
        std::string label;
    };
    std::vector<Series> series_;
    double w_, h_, margin_{56.0};

    static std::string px(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }
    static std::string tick(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return buf;
    }

public:
    explicit SvgPlot(double width = 720, double height = 440) : w_(width), h_(height) {}

    void add(std::vector<double> x, std::vector<double> y, std::string label = "") {
        if (x.size() != y.size()) throw std::invalid_argument("series length mismatch");
        series_.push_back({std::move(x), std::move(y), std::move(label)});
    }

    std::string render(const std::string& title) const {
        static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                        "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                        "#bcbd22", "#e377c2"};
        constexpr int ncolor = 10;

        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
        double y0 = x0, y1 = -x0;
        for (const auto& s : series_)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]);
                y1 = std::max(y1, s.y[i]);
            }
        if (!(x0 < x1)) { x0 -= 0.5; x1 += 0.5; }
        if (!(y0 < y1)) { y0 -= 0.5; y1 += 0.5; }
        const double ypad = 0.05 * (y1 - y0);
        y0 -= ypad;
        y1 += ypad;

        const double L = margin_, R = w_ - 16.0, T = 28.0, B = h_ - margin_;
        auto X = [&](double x) { return L + (x - x0) / (x1 - x0) * (R - L); };
        auto Y = [&](double y) { return B - (y - y0) / (y1 - y0) * (B - T); };

        std::string svg;
        svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(w_) + "\" height=\"" +
               px(h_) + "\" viewBox=\"0 0 " + px(w_) + " " + px(h_) + "\">\n";
        svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        svg += "<text x=\"" + px(w_ / 2) + "\" y=\"18\" text-anchor=\"middle\" "
               "font-family=\"monospace\" font-size=\"13\">" + title + "</text>\n";
        svg += "<rect x=\"" + px(L) + "\" y=\"" + px(T) + "\" width=\"" + px(R - L) +
               "\" height=\"" + px(B - T) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (int k = 0; k <= 5; ++k) {
            const double fx = x0 + k * (x1 - x0) / 5.0;
            const double fy = y0 + k * (y1 - y0) / 5.0;
            svg += "<line x1=\"" + px(X(fx)) + "\" y1=\"" + px(B) + "\" x2=\"" + px(X(fx)) +
                   "\" y2=\"" + px(B + 5) + "\" stroke=\"#444\"/>\n";
            svg += "<text x=\"" + px(X(fx)) + "\" y=\"" + px(B + 18) +
                   "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" +
                   tick(fx) + "</text>\n";
            svg += "<line x1=\"" + px(L - 5) + "\" y1=\"" + px(Y(fy)) + "\" x2=\"" + px(L) +
                   "\" y2=\"" + px(Y(fy)) + "\" stroke=\"#444\"/>\n";
            svg += "<text x=\"" + px(L - 8) + "\" y=\"" + px(Y(fy) + 4) +
                   "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" +
                   tick(fy) + "</text>\n";
        }

        int ci = 0, li = 0;
        for (const auto& s : series_) {
            const std::string color = palette[ci++ % ncolor];
            // polyline per contiguous finite run; gaps stay gaps
            std::string pts;
            auto flush = [&]() {
                if (pts.empty()) return;
                svg += "<polyline fill=\"none\" stroke=\"" + color +
                       "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
                pts.clear();
            };
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                    flush();
                    continue;
                }
                if (!pts.empty()) pts += " ";
                pts += px(X(s.x[i])) + "," + px(Y(s.y[i]));
            }
            flush();
            if (!s.label.empty()) {
                svg += "<text x=\"" + px(R - 6) + "\" y=\"" + px(T + 16 + 14 * li) +
                       "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\" "
                       "fill=\"" + color + "\">" + s.label + "</text>\n";
                ++li;
            }
        }
        svg += "</svg>\n";
        return svg;
    }

    void write(const std::string& path, const std::string& title) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
        out << render(title);
    }
};

} // namespace qhsb
