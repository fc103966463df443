#pragma once

#include <string>
#include <vector>

namespace qomsync {

// A sweep CSV re-gridded for rendering: axis values in first-appearance
// (row-major) order, one measure column extracted, missing or failed points
// as NaN.
struct Heatmap {
  std::string axis1_name;
  std::string axis2_name;
  std::string measure;  // "Sp", "DG" or "EN"
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;
  std::vector<double> values;  // row-major, [i1 * axis2_values.size() + i2]

  int n1() const { return static_cast<int>(axis1_values.size()); }
  int n2() const { return static_cast<int>(axis2_values.size()); }
  double at(int i1, int i2) const { return values[size_t(i1) * n2() + i2]; }
};

// Parses a sweep CSV (the exact schema sweep_csv emits) and extracts one
// measure. Throws std::runtime_error on schema mismatch.
Heatmap heatmap_from_csv(const std::string& csv_text, const std::string& measure);

// Binary PPM (P6) image of the grid, each cell cell_px x cell_px. axis1 runs
// bottom-up (first row at the bottom, like a plot's y axis), axis2 left to
// right. Values map linearly onto a dark-to-bright ramp between the finite
// min and max; NaN cells are magenta.
std::string heatmap_ppm(const Heatmap& map, int cell_px = 24);

// Human-readable sidecar describing the color scale: measure, value range,
// axis ranges and the NaN count. Ships next to the image since PPM has no
// metadata.
std::string heatmap_scale_text(const Heatmap& map);

}  // namespace qomsync
