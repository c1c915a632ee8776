#ifndef VORTOPO_SVG_HPP
#define VORTOPO_SVG_HPP

#include <array>
#include <string>
#include <vector>

// Deterministic static SVG output: same inputs, same bytes. Figures are
// built from filled polygons (drawn first) and stroked polylines over a
// plain framed axes box with labels in meters.

namespace vortopo {

struct FigureSpec {
  double width = 640.0, height = 480.0;
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  std::string x_label = "x (m)";
  std::string y_label = "y (m)";
  std::string title;
};

struct SvgPolyline {
  std::vector<std::array<double, 2>> points;
  std::string stroke = "#1f4e8c";
  double stroke_width = 1.2;
  bool closed = false;
  std::string dash;  // e.g. "6,4" for dashed strokes
};

struct SvgPolygon {
  std::vector<std::array<double, 2>> points;
  std::string fill = "#b8cbe4";
};

// Fixed 10-color ramp (dark blue to warm red) for time-bucket coloring.
const std::array<std::string, 10>& time_bucket_palette();

std::string emit_svg(const FigureSpec& spec,
                     const std::vector<SvgPolygon>& polygons,
                     const std::vector<SvgPolyline>& polylines);

// Splits a curve into n_buckets consecutive segments colored by the
// palette (metadata for time progression along a trajectory).
std::vector<SvgPolyline> time_bucketed_polylines(
    const std::vector<std::array<double, 2>>& points, int n_buckets);

}  // namespace vortopo

#endif
