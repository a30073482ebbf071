#include "mca/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mca/errors.hpp"

namespace mca::plot {

namespace {

constexpr double kWidth = 900.0, kPanelHeight = 260.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 34.0, kBottom = 40.0;

struct Range {
  double lo = 0.0, hi = 1.0;
};

Range nice_range(const Panel& panel) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : panel.series)
    for (double v : s.y) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  for (double h : panel.hlines) {
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.06 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_svg(std::span<const Panel> panels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);

  const double total_h = kPanelHeight * static_cast<double>(panels.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth) << "\" height=\""
      << fmt(total_h) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    const double y0 = kPanelHeight * static_cast<double>(p);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kPanelHeight - kTop - kBottom;

    double x_lo = 0.0, x_hi = 1.0;
    if (!panel.x.empty()) {
      x_lo = panel.x.front();
      x_hi = panel.x.back();
      if (x_lo == x_hi) x_hi = x_lo + 1.0;
    }
    const Range yr = nice_range(panel);

    auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto sy = [&](double y) { return y0 + kTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

    out << "<text x=\"" << fmt(kLeft) << "\" y=\"" << fmt(y0 + 18.0)
        << "\" font-weight=\"bold\">" << panel.title << "</text>\n";
    out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(y0 + kTop) << "\" width=\""
        << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
        << "\" fill=\"none\" stroke=\"#444444\"/>\n";

    // axis ticks: 5 on each axis
    for (int i = 0; i <= 4; ++i) {
      const double tx = x_lo + (x_hi - x_lo) * i / 4.0;
      const double ty = yr.lo + (yr.hi - yr.lo) * i / 4.0;
      out << "<line x1=\"" << fmt2(sx(tx)) << "\" y1=\"" << fmt2(y0 + kTop + plot_h)
          << "\" x2=\"" << fmt2(sx(tx)) << "\" y2=\"" << fmt2(y0 + kTop + plot_h + 4.0)
          << "\" stroke=\"#444444\"/>\n";
      out << "<text x=\"" << fmt2(sx(tx)) << "\" y=\"" << fmt2(y0 + kTop + plot_h + 16.0)
          << "\" text-anchor=\"middle\">" << fmt(tx) << "</text>\n";
      out << "<text x=\"" << fmt2(kLeft - 6.0) << "\" y=\"" << fmt2(sy(ty) + 4.0)
          << "\" text-anchor=\"end\">" << fmt(ty) << "</text>\n";
    }
    out << "<text x=\"" << fmt2(kLeft + plot_w / 2.0) << "\" y=\""
        << fmt2(y0 + kPanelHeight - 6.0) << "\" text-anchor=\"middle\">t (s)</text>\n";
    out << "<text x=\"14\" y=\"" << fmt2(y0 + kTop + plot_h / 2.0)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << fmt2(y0 + kTop + plot_h / 2.0) << ")\">" << panel.y_label << "</text>\n";

    for (double h : panel.hlines)
      out << "<line x1=\"" << fmt2(kLeft) << "\" y1=\"" << fmt2(sy(h)) << "\" x2=\""
          << fmt2(kLeft + plot_w) << "\" y2=\"" << fmt2(sy(h))
          << "\" stroke=\"#999999\" stroke-dasharray=\"5,4\"/>\n";

    double legend_x = kLeft + 8.0;
    for (const auto& s : panel.series) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
      const std::size_t n = std::min(panel.x.size(), s.y.size());
      // decimate very long traces; the rendering grid is ~800 px wide
      const std::size_t stride = std::max<std::size_t>(1, n / 4000);
      for (std::size_t i = 0; i < n; i += stride)
        out << fmt2(sx(panel.x[i])) << ',' << fmt2(sy(s.y[i])) << ' ';
      if (n > 0 && (n - 1) % stride != 0)
        out << fmt2(sx(panel.x[n - 1])) << ',' << fmt2(sy(s.y[n - 1]));
      out << "\"/>\n";

      out << "<line x1=\"" << fmt2(legend_x) << "\" y1=\"" << fmt2(y0 + kTop + 12.0)
          << "\" x2=\"" << fmt2(legend_x + 18.0) << "\" y2=\"" << fmt2(y0 + kTop + 12.0)
          << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << fmt2(legend_x + 22.0) << "\" y=\"" << fmt2(y0 + kTop + 16.0) << "\">"
          << s.label << "</text>\n";
      legend_x += 28.0 + 7.0 * static_cast<double>(s.label.size());
    }
  }
  out << "</svg>\n";
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace mca::plot
