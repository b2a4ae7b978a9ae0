#pragma once

// Two-axis factor maps as SVG 1.1. Layout is a pure function of the input.

#include <cstddef>
#include <string>
#include <vector>

#include "tcalib/report.hpp"

namespace tcalib::svg {

struct MapPoint {
  std::string label;
  bool is_row = true;
  double x = 0.0;  // data coordinates
  double y = 0.0;
};

/// Row and column scores of the report on axes (first, second), 1-based.
/// Throws InputError when the report has fewer than two axes or an index is
/// out of range.
std::vector<MapPoint> map_points(const report::AnalysisReport& r, std::size_t first, std::size_t second);

/// Scatter of labeled points with origin crosshairs.
std::string render_points(const std::vector<MapPoint>& points, const std::string& title,
                          const std::string& x_label, const std::string& y_label);

std::string render_map(const report::AnalysisReport& r, std::size_t first = 1, std::size_t second = 2);

}  // namespace tcalib::svg
