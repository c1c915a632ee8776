#include "vortopo/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "vortopo/errors.hpp"

namespace vortopo {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

constexpr double kMarginLeft = 58.0, kMarginRight = 14.0;
constexpr double kMarginTop = 30.0, kMarginBottom = 44.0;

struct Mapper {
  const FigureSpec& spec;
  double sx(double x) const {
    return kMarginLeft + (x - spec.x_min) / (spec.x_max - spec.x_min) *
                             (spec.width - kMarginLeft - kMarginRight);
  }
  double sy(double y) const {
    return spec.height - kMarginBottom -
           (y - spec.y_min) / (spec.y_max - spec.y_min) *
               (spec.height - kMarginTop - kMarginBottom);
  }
};

std::string path_data(const Mapper& map,
                      const std::vector<std::array<double, 2>>& pts,
                      bool closed) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += i == 0 ? "M" : "L";
    d += num(map.sx(pts[i][0]));
    d += ' ';
    d += num(map.sy(pts[i][1]));
  }
  if (closed) d += "Z";
  return d;
}

}  // namespace

const std::array<std::string, 10>& time_bucket_palette() {
  static const std::array<std::string, 10> palette = {
      "#27187d", "#2c44a5", "#2a6fbb", "#3397bb", "#49b6a6",
      "#74cd88", "#aadd6a", "#dfe25a", "#f3b33e", "#e96a29"};
  return palette;
}

std::string emit_svg(const FigureSpec& spec,
                     const std::vector<SvgPolygon>& polygons,
                     const std::vector<SvgPolyline>& polylines) {
  if (polygons.empty() && polylines.empty())
    throw EmptyDataError("emit_svg: nothing to draw");
  const Mapper map{spec};
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(spec.width) +
       "\" height=\"" + num(spec.height) + "\" viewBox=\"0 0 " +
       num(spec.width) + " " + num(spec.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(spec.width) + "\" height=\"" +
       num(spec.height) + "\" fill=\"#ffffff\"/>\n";

  for (const auto& poly : polygons) {
    if (poly.points.empty()) continue;
    s += "<path d=\"" + path_data(map, poly.points, true) + "\" fill=\"" +
         poly.fill + "\" stroke=\"none\"/>\n";
  }
  for (const auto& line : polylines) {
    if (line.points.empty()) continue;
    s += "<path d=\"" + path_data(map, line.points, line.closed) +
         "\" fill=\"none\" stroke=\"" + line.stroke + "\" stroke-width=\"" +
         num(line.stroke_width) + "\"";
    if (!line.dash.empty()) s += " stroke-dasharray=\"" + line.dash + "\"";
    s += "/>\n";
  }

  // Axes frame and labels.
  const double x0 = map.sx(spec.x_min), x1 = map.sx(spec.x_max);
  const double y0 = map.sy(spec.y_min), y1 = map.sy(spec.y_max);
  s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" +
       num(x1 - x0) + "\" height=\"" + num(y0 - y1) +
       "\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
  auto text = [&](double x, double y, const std::string& t,
                  const std::string& extra) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\"" +
           extra + ">" + t + "</text>\n";
  };
  s += text(x0, y0 + 16.0, num(spec.x_min), "");
  s += text(x1, y0 + 16.0, num(spec.x_max), " text-anchor=\"end\"");
  s += text(x0 - 4.0, y0, num(spec.y_min), " text-anchor=\"end\"");
  s += text(x0 - 4.0, y1 + 10.0, num(spec.y_max), " text-anchor=\"end\"");
  s += text((x0 + x1) / 2.0, spec.height - 10.0, spec.x_label,
            " text-anchor=\"middle\"");
  s += "<text x=\"14\" y=\"" + num((y0 + y1) / 2.0) +
       "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\" "
       "text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       num((y0 + y1) / 2.0) + ")\">" + spec.y_label + "</text>\n";
  if (!spec.title.empty())
    s += text((x0 + x1) / 2.0, 18.0, spec.title, " text-anchor=\"middle\"");
  s += "</svg>\n";
  return s;
}

std::vector<SvgPolyline> time_bucketed_polylines(
    const std::vector<std::array<double, 2>>& points, int n_buckets) {
  if (points.empty()) throw EmptyDataError("time_bucketed_polylines: no points");
  const auto& palette = time_bucket_palette();
  n_buckets = std::min<int>(n_buckets, int(palette.size()));
  std::vector<SvgPolyline> out;
  const std::size_t n = points.size();
  for (int b = 0; b < n_buckets; ++b) {
    const std::size_t lo = n * b / n_buckets;
    const std::size_t hi = std::min(n, n * (b + 1) / n_buckets + 1);
    if (lo >= n || hi <= lo + 1) continue;
    SvgPolyline line;
    line.points.assign(points.begin() + lo, points.begin() + hi);
    line.stroke = palette[b];
    line.stroke_width = 0.8;
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace vortopo
