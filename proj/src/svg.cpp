#include "mlyap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mlyap {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

}  // namespace

void svg_line_plot(const std::string& path, const std::string& title, const Vector& x,
                   const std::vector<Vector>& series, const std::vector<std::string>& labels) {
    if (series.empty() || x.size() < 2) throw std::invalid_argument("svg_line_plot: empty data");
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;

    double ymin = series[0].minCoeff(), ymax = series[0].maxCoeff();
    for (const auto& s : series) {
        ymin = std::min(ymin, s.minCoeff());
        ymax = std::max(ymax, s.maxCoeff());
    }
    if (!(ymax > ymin)) {
        ymax += 1.0;
        ymin -= 1.0;
    }
    const double xmin = x.minCoeff(), xmax = x.maxCoeff();
    auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";
    f << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
    f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        f << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(xv) << "</text>\n";
        f << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
          << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(yv) << "</text>\n";
    }
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        f << "<polyline fill=\"none\" stroke=\"" << kColors[si % 6] << "\" stroke-width=\"1.5\" "
          << "points=\"";
        for (Eigen::Index i = 0; i < x.size() && i < s.size(); ++i)
            f << fmt(px(x[i])) << "," << fmt(py(s[i])) << " ";
        f << "\"/>\n";
        if (si < labels.size())
            f << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 * (si + 1)
              << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << kColors[si % 6] << "\">"
              << labels[si] << "</text>\n";
    }
    f << "</svg>\n";
}

}  // namespace mlyap
