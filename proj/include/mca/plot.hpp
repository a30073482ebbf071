#pragma once

#include <span>
#include <string>
#include <vector>

namespace mca::plot {

struct Series {
  std::string label;
  std::span<const double> y;
  std::string color = "#1f77b4";
};

struct Panel {
  std::string title;
  std::string y_label;
  std::span<const double> x;  // shared by every series in the panel
  std::vector<Series> series;
  std::vector<double> hlines;  // threshold guides, dashed
};

// Stacked line-plot panels as a standalone SVG. Output is deterministic:
// identical inputs regenerate byte-identical files.
void write_svg(std::span<const Panel> panels, const std::string& path);

}  // namespace mca::plot
