// Deterministic SVG rendering: fixed viewport math, six-decimal coordinates,
// no timestamps, so identical inputs produce identical bytes.
#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tribilliard/billiard.hpp"
#include "tribilliard/geometry.hpp"
#include "tribilliard/unfolding.hpp"

namespace tribilliard {

struct SvgOptions {
  double width = 640.0;        // pixel width of the drawing area
  double margin_frac = 0.06;   // margin as a fraction of the width
  bool colour_sides = true;    // base red-ish, right leg green-ish, left leg blue-ish
};

namespace detail {

inline std::string fmt6(double v) {
  char buf[32];
  // Avoid the signed zero so -0.000000 never appears.
  if (v == 0.0) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

class SvgCanvas {
 public:
  SvgCanvas(double min_x, double min_y, double max_x, double max_y, const SvgOptions& opt)
      : opt_(opt) {
    const double span_x = std::max(max_x - min_x, 1e-9);
    const double span_y = std::max(max_y - min_y, 1e-9);
    scale_ = opt.width / span_x;
    margin_ = opt.width * opt.margin_frac;
    min_x_ = min_x;
    max_y_ = max_y;
    width_px_ = opt.width + 2.0 * margin_;
    height_px_ = span_y * scale_ + 2.0 * margin_;
  }

  // y flips: SVG grows downwards.
  std::string px(Vec2 p) const {
    return fmt6((p.x - min_x_) * scale_ + margin_) + "," + fmt6((max_y_ - p.y) * scale_ + margin_);
  }

  std::string open() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt6(width_px_) << "\" height=\""
       << fmt6(height_px_) << "\" viewBox=\"0 0 " << fmt6(width_px_) << ' ' << fmt6(height_px_)
       << "\">\n";
    return os.str();
  }

 private:
  SvgOptions opt_;
  double scale_ = 1.0, margin_ = 0.0, min_x_ = 0.0, max_y_ = 0.0;
  double width_px_ = 0.0, height_px_ = 0.0;
};

inline std::array<const char*, 3> side_colours(bool coloured) {
  if (coloured) return {"#d85c5c", "#5ca85c", "#5c7cd8"};
  return {"#444444", "#444444", "#444444"};
}

inline void draw_triangle_sides(std::ostringstream& os, const SvgCanvas& canvas,
                                const std::array<Vec2, 3>& v, bool coloured,
                                const char* extra = "") {
  const auto colours = side_colours(coloured);
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = v[static_cast<std::size_t>(k)];
    const Vec2 b = v[static_cast<std::size_t>((k + 1) % 3)];
    os << "<path d=\"M " << canvas.px(a) << " L " << canvas.px(b) << "\" stroke=\""
       << colours[static_cast<std::size_t>(k)] << "\" stroke-width=\"1.5\" fill=\"none\"" << extra
       << "/>\n";
  }
}

}  // namespace detail

/// Triangle outline plus the orbit's chord polyline.
inline std::string render_trajectory_svg(const TriangleParams& tri, const PlanarEmbedding& emb,
                                         const Orbit& orbit, const SvgOptions& opt = {}) {
  double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = emb.vertex(3).y;
  detail::SvgCanvas canvas(min_x, min_y, max_x, max_y, opt);
  std::ostringstream os;
  os << canvas.open();
  detail::draw_triangle_sides(os, canvas, {emb.vertex(1), emb.vertex(2), emb.vertex(3)},
                              opt.colour_sides);
  if (orbit.states.size() > 1) {
    os << "<path d=\"";
    for (std::size_t t = 0; t < orbit.states.size(); ++t) {
      const Vec2 p = boundary_to_plane(tri, emb, {orbit.states[t].side, orbit.states[t].x});
      os << (t == 0 ? "M " : " L ") << canvas.px(p);
    }
    os << "\" stroke=\"#333333\" stroke-width=\"0.6\" fill=\"none\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

struct UnfoldDecorations {
  std::optional<std::array<Vec2, 4>> strip_ten;   // parallelogram of the ten-bounce cylinder
  std::optional<std::array<Vec2, 4>> strip_four;  // parallelogram of the four-bounce cylinder
  std::optional<std::array<Vec2, 2>> diagonal;    // unfolded generalised diagonal
  std::vector<TriangleFrame> extra_frames;        // frames beyond the path's own
};

/// Chain of reflected triangles with the unfolded orbit drawn on top.
inline std::string render_unfolding_svg(const UnfoldedPath& path,
                                        const UnfoldDecorations& deco = {},
                                        const SvgOptions& opt = {}) {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  bool first = true;
  auto grow = [&](Vec2 p) {
    if (first) {
      min_x = max_x = p.x;
      min_y = max_y = p.y;
      first = false;
      return;
    }
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  };
  for (const TriangleFrame& fr : path.frames) {
    for (const Vec2& v : fr.vertices) grow(v);
  }
  for (const TriangleFrame& fr : deco.extra_frames) {
    for (const Vec2& v : fr.vertices) grow(v);
  }
  if (deco.strip_ten) {
    for (const Vec2& v : *deco.strip_ten) grow(v);
  }
  if (deco.strip_four) {
    for (const Vec2& v : *deco.strip_four) grow(v);
  }
  detail::SvgCanvas canvas(min_x, min_y, max_x, max_y, opt);

  std::ostringstream os;
  os << canvas.open();
  auto draw_strip = [&](const std::array<Vec2, 4>& quad, const char* fill) {
    os << "<path d=\"M " << canvas.px(quad[0]) << " L " << canvas.px(quad[1]) << " L "
       << canvas.px(quad[2]) << " L " << canvas.px(quad[3])
       << " Z\" fill=\"" << fill << "\" fill-opacity=\"0.35\" stroke=\"none\"/>\n";
  };
  if (deco.strip_ten) draw_strip(*deco.strip_ten, "#e05252");
  if (deco.strip_four) draw_strip(*deco.strip_four, "#5277e0");
  for (const TriangleFrame& fr : path.frames) {
    detail::draw_triangle_sides(os, canvas, fr.vertices, opt.colour_sides);
  }
  for (const TriangleFrame& fr : deco.extra_frames) {
    detail::draw_triangle_sides(os, canvas, fr.vertices, opt.colour_sides, " stroke-opacity=\"0.5\"");
  }
  if (path.points.size() > 1) {
    os << "<path d=\"";
    for (std::size_t t = 0; t < path.points.size(); ++t) {
      os << (t == 0 ? "M " : " L ") << canvas.px(path.points[t]);
    }
    os << "\" stroke=\"#222222\" stroke-width=\"1.0\" fill=\"none\"/>\n";
  }
  if (deco.diagonal) {
    os << "<path d=\"M " << canvas.px((*deco.diagonal)[0]) << " L " << canvas.px((*deco.diagonal)[1])
       << "\" stroke=\"#d8b400\" stroke-width=\"1.2\" stroke-dasharray=\"6,4\" fill=\"none\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace tribilliard
