#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "convwave/core.hpp"

namespace convwave {

/// Deterministic log-log scatter with the fitted line and an optional
/// reference-slope guide. Byte-identical output for identical input.
struct LogLogPlot {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    std::vector<double> x, y;   // positive values
    LineFit fit;
    bool has_reference = false;
    double reference_slope = 0.0;

    void write(const std::string& path) const {
        if (x.empty() || x.size() != y.size()) {
            return;  // caller warned; empty report is a no-op
        }
        const int W = 640, H = 480, m = 60;
        double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
        std::vector<double> lx(x.size()), ly(y.size());
        for (size_t i = 0; i < x.size(); ++i) {
            lx[i] = std::log10(x[i]);
            ly[i] = std::log10(y[i]);
            lx0 = std::min(lx0, lx[i]); lx1 = std::max(lx1, lx[i]);
            ly0 = std::min(ly0, ly[i]); ly1 = std::max(ly1, ly[i]);
        }
        if (lx1 - lx0 < 1e-12) { lx0 -= 0.5; lx1 += 0.5; }
        if (ly1 - ly0 < 1e-12) { ly0 -= 0.5; ly1 += 0.5; }
        const double padx = 0.08 * (lx1 - lx0), pady = 0.08 * (ly1 - ly0);
        lx0 -= padx; lx1 += padx; ly0 -= pady; ly1 += pady;
        auto X = [&](double v) { return m + (v - lx0) / (lx1 - lx0) * (W - 2 * m); };
        auto Y = [&](double v) { return H - m - (v - ly0) / (ly1 - ly0) * (H - 2 * m); };
        char buf[512];
        std::string s;
        s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\">\n";
        s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%d\" y=\"24\" font-family=\"monospace\" font-size=\"14\">%s</text>\n",
                      m, title.c_str());
        s += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n"
                      "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                      m, H - m, W - m, H - m, m, m, m, H - m);
        s += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"12\">log10 %s</text>\n",
                      W / 2 - 40, H - 20, x_label.c_str());
        s += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"14\" y=\"%d\" font-family=\"monospace\" font-size=\"12\" "
                      "transform=\"rotate(-90 14 %d)\">log10 %s</text>\n",
                      H / 2, H / 2, y_label.c_str());
        s += buf;
        // fitted line across the x-range (fit is in natural logs)
        const double ln10 = std::log(10.0);
        auto fit_y = [&](double lxv) {
            return (fit.intercept + fit.slope * (lxv * ln10)) / ln10;
        };
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#1f77b4\" "
                      "stroke-width=\"1.5\"/>\n",
                      X(lx0), Y(fit_y(lx0)), X(lx1), Y(fit_y(lx1)));
        s += buf;
        if (has_reference) {
            // reference slope through the first data point
            const double b = ly[0] - reference_slope * lx[0];
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#888888\" "
                          "stroke-dasharray=\"6,4\"/>\n",
                          X(lx0), Y(reference_slope * lx0 + b), X(lx1), Y(reference_slope * lx1 + b));
            s += buf;
        }
        for (size_t i = 0; i < lx.size(); ++i) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"#d62728\"/>\n",
                          X(lx[i]), Y(ly[i]));
            s += buf;
        }
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%d\" y=\"44\" font-family=\"monospace\" font-size=\"12\">"
                      "slope %.4f  R2 %.4f%s</text>\n",
                      m, fit.slope, fit.r2,
                      has_reference
                          ? ("  (guide " + std::to_string(reference_slope) + ")").c_str()
                          : "");
        s += buf;
        s += "</svg>\n";
        std::ofstream os(path, std::ios::binary);
        os << s;
    }
};

}  // namespace convwave
