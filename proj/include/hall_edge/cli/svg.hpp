#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hall_edge::cli {

struct PlotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlotLabels {
  std::string title;
  std::string x;
  std::string y;
  std::string provenance;  // embedded as an XML comment
};

// Throws PlotError on empty, mismatched or non-finite data.
std::string line_plot_svg(const std::vector<double>& x, const std::vector<double>& y, const PlotLabels& labels);

// values[iy * xs.size() + ix]; colour encodes `value_label`.
std::string heatmap_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<double>& values, const PlotLabels& labels,
                        const std::string& value_label);

}  // namespace hall_edge::cli
