#include "qomsync/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qomsync/text_io.hpp"

namespace qomsync {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

// Index of `value` in `values`, appending it if new. Axis values repeat
// exactly (same formatting pass) so string comparison after parse is safe.
int axis_index(std::vector<double>& values, double value) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] == value || (std::isnan(values[i]) && std::isnan(value)))
      return static_cast<int>(i);
  }
  values.push_back(value);
  return static_cast<int>(values.size() - 1);
}

struct Rgb {
  unsigned char r, g, b;
};

// Dark-blue -> teal -> yellow ramp; NaN handled by the caller.
Rgb colorize(double x) {
  static const double stops[5][3] = {{0.05, 0.03, 0.25},
                                     {0.15, 0.25, 0.55},
                                     {0.10, 0.55, 0.55},
                                     {0.45, 0.80, 0.30},
                                     {0.99, 0.95, 0.15}};
  x = std::clamp(x, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(x));
  const double f = x - k;
  Rgb c;
  c.r = static_cast<unsigned char>(255.0 * (stops[k][0] + f * (stops[k + 1][0] - stops[k][0])));
  c.g = static_cast<unsigned char>(255.0 * (stops[k][1] + f * (stops[k + 1][1] - stops[k][1])));
  c.b = static_cast<unsigned char>(255.0 * (stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
  return c;
}

}  // namespace

Heatmap heatmap_from_csv(const std::string& csv_text, const std::string& measure) {
  int column;
  if (measure == "Sp") column = 4;
  else if (measure == "DG") column = 5;
  else if (measure == "EN") column = 6;
  else throw std::runtime_error("unknown measure '" + measure + "' (valid: Sp, DG, EN)");

  std::stringstream ss(csv_text);
  std::string line;
  if (!std::getline(ss, line))
    throw std::runtime_error("empty CSV");
  const std::string expected =
      "axis1_name,axis1_value,axis2_name,axis2_value,mean_Sp,mean_DG,mean_EN,"
      "converged,physical";
  if (line != expected)
    throw std::runtime_error("unexpected CSV header: " + line);

  Heatmap map;
  map.measure = measure;
  struct Cell {
    int i1, i2;
    double v;
  };
  std::vector<Cell> cells;
  int line_no = 1;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 9)
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 9 fields");
    if (map.axis1_name.empty()) {
      map.axis1_name = f[0];
      map.axis2_name = f[2];
    }
    Cell c;
    c.i1 = axis_index(map.axis1_values, std::stod(f[1]));
    c.i2 = axis_index(map.axis2_values, std::stod(f[3]));
    c.v = std::stod(f[column]);
    cells.push_back(c);
  }
  if (cells.empty()) throw std::runtime_error("CSV has no data rows");

  map.values.assign(map.axis1_values.size() * map.axis2_values.size(),
                    std::numeric_limits<double>::quiet_NaN());
  for (const Cell& c : cells)
    map.values[size_t(c.i1) * map.axis2_values.size() + c.i2] = c.v;
  return map;
}

std::string heatmap_ppm(const Heatmap& map, int cell_px) {
  if (map.n1() == 0 || map.n2() == 0) throw std::runtime_error("empty heatmap");
  if (cell_px < 1) cell_px = 1;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : map.values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const bool flat = !(hi > lo);  // all-NaN or constant grid

  const int w = map.n2() * cell_px;
  const int h = map.n1() * cell_px;
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + size_t(w) * h * 3);

  for (int py = 0; py < h; ++py) {
    const int i1 = map.n1() - 1 - py / cell_px;  // first row at the bottom
    for (int px = 0; px < w; ++px) {
      const int i2 = px / cell_px;
      const double v = map.at(i1, i2);
      Rgb c;
      if (!std::isfinite(v)) {
        c = {255, 0, 255};  // NaN sentinel: magenta never occurs on the ramp
      } else {
        c = colorize(flat ? 0.5 : (v - lo) / (hi - lo));
      }
      out.push_back(static_cast<char>(c.r));
      out.push_back(static_cast<char>(c.g));
      out.push_back(static_cast<char>(c.b));
    }
  }
  return out;
}

std::string heatmap_scale_text(const Heatmap& map) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  int nan_count = 0;
  for (double v : map.values) {
    if (!std::isfinite(v)) {
      ++nan_count;
      continue;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const bool any = hi >= lo;

  std::string out;
  out += "measure: mean_" + map.measure + "\n";
  out += "color ramp: dark blue (min) -> yellow (max), NaN cells magenta\n";
  out += "min: " + (any ? format_double(lo) : std::string("nan")) + "\n";
  out += "max: " + (any ? format_double(hi) : std::string("nan")) + "\n";
  out += "rows (bottom-up): " + map.axis1_name + " in [" +
         format_double(map.axis1_values.front()) + ", " +
         format_double(map.axis1_values.back()) + "], " +
         std::to_string(map.n1()) + " values\n";
  out += "columns (left-right): " + map.axis2_name + " in [" +
         format_double(map.axis2_values.front()) + ", " +
         format_double(map.axis2_values.back()) + "], " +
         std::to_string(map.n2()) + " values\n";
  out += "nan cells: " + std::to_string(nan_count) + "\n";
  return out;
}

}  // namespace qomsync
