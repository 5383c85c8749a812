// Unfolding: instead of reflecting the ray at each bounce, reflect the
// triangle across the side that was hit. A regular orbit unfolds to a
// straight segment; the deviation from straightness measures accumulated
// numerical error.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tribilliard/billiard.hpp"
#include "tribilliard/cylinders.hpp"
#include "tribilliard/geometry.hpp"

namespace tribilliard {

/// Planar isometry as a 2x2 matrix plus translation.
struct Isometry2 {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
  double tx = 0.0, ty = 0.0;
  bool reflecting = false;  // orientation-reversing

  Vec2 operator()(Vec2 p) const {
    return {m00 * p.x + m01 * p.y + tx, m10 * p.x + m11 * p.y + ty};
  }
};

inline Isometry2 compose(const Isometry2& f, const Isometry2& g) {
  Isometry2 h;
  h.m00 = f.m00 * g.m00 + f.m01 * g.m10;
  h.m01 = f.m00 * g.m01 + f.m01 * g.m11;
  h.m10 = f.m10 * g.m00 + f.m11 * g.m10;
  h.m11 = f.m10 * g.m01 + f.m11 * g.m11;
  const Vec2 t = f(Vec2{g.tx, g.ty});
  h.tx = t.x;
  h.ty = t.y;
  h.reflecting = f.reflecting != g.reflecting;
  return h;
}

/// Reflection across the line through p and q.
inline Isometry2 reflection_across(Vec2 p, Vec2 q) {
  const Vec2 u = normalized(q - p);
  Isometry2 r;
  r.m00 = u.x * u.x - u.y * u.y;
  r.m01 = 2.0 * u.x * u.y;
  r.m10 = r.m01;
  r.m11 = u.y * u.y - u.x * u.x;
  // r(p) = p fixes the base point.
  const Vec2 mp{r.m00 * p.x + r.m01 * p.y, r.m10 * p.x + r.m11 * p.y};
  r.tx = p.x - mp.x;
  r.ty = p.y - mp.y;
  r.reflecting = true;
  return r;
}

struct TriangleFrame {
  std::array<Vec2, 3> vertices{};  // images of vertices 1..3
  bool reflected = false;
};

struct UnfoldedPath {
  std::vector<Vec2> points;          // unfolded bounce points q_0..q_T
  std::vector<TriangleFrame> frames; // triangle copies, one per bounce
  std::vector<Isometry2> maps;       // isometry producing each frame
};

inline UnfoldedPath unfold(const TriangleParams& tri, const PlanarEmbedding& emb,
                           const Orbit& orbit) {
  if (orbit.states.empty()) throw std::invalid_argument("unfold: empty orbit");
  UnfoldedPath path;
  path.points.reserve(orbit.states.size());
  path.frames.reserve(orbit.states.size());
  path.maps.reserve(orbit.states.size());

  Isometry2 F;  // identity
  auto push_frame = [&](const Isometry2& iso) {
    TriangleFrame fr;
    for (int k = 1; k <= 3; ++k) fr.vertices[static_cast<std::size_t>(k - 1)] = iso(emb.vertex(k));
    fr.reflected = iso.reflecting;
    path.frames.push_back(fr);
    path.maps.push_back(iso);
  };

  push_frame(F);
  path.points.push_back(F(boundary_to_plane(tri, emb, {orbit.states[0].side, orbit.states[0].x})));
  for (std::size_t t = 1; t < orbit.states.size(); ++t) {
    const int k = orbit.states[t].side;
    // Mirror across the image of the side hit at bounce t.
    const Vec2 a = F(emb.vertex(k));
    const Vec2 b = F(emb.vertex(cyclic_next(k)));
    F = compose(reflection_across(a, b), F);
    push_frame(F);
    path.points.push_back(F(boundary_to_plane(tri, emb, {k, orbit.states[t].x})));
  }
  return path;
}

/// Largest perpendicular deviation of the unfolded points from the straight
/// line through the endpoints, per unit of endpoint distance.
inline double collinearity_residual(const UnfoldedPath& path) {
  if (path.points.size() < 3) return 0.0;
  const Vec2 a = path.points.front();
  const Vec2 b = path.points.back();
  const double len = norm(b - a);
  if (!(len > 0.0)) throw std::invalid_argument("collinearity_residual: coincident endpoints");
  const Vec2 u = normalized(b - a);
  double worst = 0.0;
  for (const Vec2& q : path.points) {
    worst = std::max(worst, std::abs(cross(u, q - a)));
  }
  return worst / len;
}

/// Corners of the unfolded strip swept by a cylinder: the start segment on
/// the base together with the image of the return segment, a parallelogram.
inline std::array<Vec2, 4> cylinder_parallelogram(const TriangleParams& tri,
                                                  const PlanarEmbedding& emb,
                                                  const CylinderTemplate& cyl) {
  const double mid = 0.5 * (cyl.delta_lo + cyl.delta_hi);
  const UnfoldedPath path = unfold(tri, emb, template_orbit(cyl, mid));
  const Isometry2& last = path.maps.back();
  const auto end_point = [&](double delta) {
    const double x = cyl.coords[static_cast<std::size_t>(cyl.return_length)](delta);
    return last(boundary_to_plane(tri, emb, {cyl.sides[static_cast<std::size_t>(cyl.return_length)], x}));
  };
  const auto start_point = [&](double delta) {
    return boundary_to_plane(tri, emb, {cyl.sides[0], cyl.coords[0](delta)});
  };
  return {start_point(cyl.delta_lo), start_point(cyl.delta_hi), end_point(cyl.delta_hi),
          end_point(cyl.delta_lo)};
}

/// Endpoints of the unfolded generalised diagonal: vertex 1 and the image of
/// vertex 2 after five reflections.
inline std::array<Vec2, 2> unfolded_diagonal(const TriangleParams& tri,
                                             const PlanarEmbedding& emb) {
  const DiagonalRecord rec = generalized_diagonal(tri.alpha);
  Orbit orbit;
  for (std::size_t t = 0; t < 6; ++t) {
    orbit.states.push_back({rec.sides[t], rec.angles[t], rec.coords[t]});
  }
  for (std::size_t t = 0; t + 1 < 6; ++t) {
    orbit.dirs.push_back(rec.sides[t + 1] == cyclic_next(rec.sides[t]) ? MoveDir::ccw
                                                                       : MoveDir::cw);
  }
  const UnfoldedPath path = unfold(tri, emb, orbit);
  return {path.points.front(), path.points.back()};
}

}  // namespace tribilliard
