// Isosceles triangle tables, planar embedding and boundary coordinates.
//
// Conventions used throughout the library:
//   * vertices and sides are numbered 1..3, side k runs from vertex k to
//     vertex k+1 (cyclically), the boundary is oriented counterclockwise;
//   * side 1 is the base of length 1, sides 2 and 3 are the equal legs;
//   * gamma[k] is the inner angle at the vertex *opposite* the midpoint of
//     side k in the labelling below: gamma_1 = pi - 2*alpha sits at the apex
//     (vertex 3), gamma_2 = alpha at vertex 1, gamma_3 = alpha at vertex 2.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tribilliard/tolerances.hpp"

namespace tribilliard {

inline constexpr double pi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double t, Vec2 a) { return {t * a.x, t * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw std::runtime_error("normalized: zero vector");
  return {a.x / n, a.y / n};
}

/// Rotate counterclockwise by `angle` radians.
inline Vec2 rotated(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

inline void require_side(int k) {
  if (k < 1 || k > 3) throw std::domain_error("side index must be 1, 2 or 3; got " + std::to_string(k));
}

constexpr int cyclic_next(int k) { return k % 3 + 1; }
constexpr int cyclic_prev(int k) { return (k + 1) % 3 + 1; }

/// Index map induced by the reflection symmetry across the triangle's axis:
/// the base is fixed, the two legs swap.
inline int adjoint_index(int k) {
  require_side(k);
  return k == 1 ? 1 : 5 - k;
}

struct TriangleParams {
  double alpha = 0.0;              // base angle at each end of side 1
  std::array<double, 3> gamma{};   // inner angles, see header comment
  std::array<double, 3> s{};       // side lengths, s[0] = 1

  double gamma_of(int k) const {
    require_side(k);
    return gamma[static_cast<std::size_t>(k - 1)];
  }
  double side_length(int k) const {
    require_side(k);
    return s[static_cast<std::size_t>(k - 1)];
  }
};

inline TriangleParams make_triangle(double alpha) {
  if (!(alpha > 0.0 && alpha < pi / 2)) {
    throw std::domain_error("make_triangle: alpha must lie in (0, pi/2); got " + std::to_string(alpha));
  }
  TriangleParams tri;
  tri.alpha = alpha;
  tri.gamma = {pi - 2.0 * alpha, alpha, alpha};
  const double leg = 1.0 / (2.0 * std::cos(alpha));
  tri.s = {1.0, leg, leg};
  return tri;
}

/// Fixed placement in the plane: base from (0,0) to (1,0), apex above.
struct PlanarEmbedding {
  std::array<Vec2, 3> v{};  // vertex k at index k-1

  Vec2 vertex(int k) const {
    require_side(k);
    return v[static_cast<std::size_t>(k - 1)];
  }
  Vec2 side_start(int k) const { return vertex(k); }
  Vec2 side_end(int k) const { return vertex(cyclic_next(k)); }
  Vec2 side_unit(int k) const { return normalized(side_end(k) - side_start(k)); }
};

inline PlanarEmbedding embed(const TriangleParams& tri) {
  PlanarEmbedding emb;
  emb.v = {Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.5, 0.5 * std::tan(tri.alpha)}};
  return emb;
}

/// Point on the boundary: arclength x from the start of the oriented side.
struct BoundaryPoint {
  int side = 1;
  double x = 0.0;
};

inline Vec2 boundary_to_plane(const TriangleParams& tri, const PlanarEmbedding& emb, BoundaryPoint p) {
  require_side(p.side);
  const double len = tri.side_length(p.side);
  if (!(p.x >= -tol::boundary_fit && p.x <= len + tol::boundary_fit)) {
    throw std::domain_error("boundary_to_plane: x = " + std::to_string(p.x) + " outside [0, " +
                            std::to_string(len) + "] on side " + std::to_string(p.side));
  }
  return emb.side_start(p.side) + p.x * emb.side_unit(p.side);
}

/// Inverse of boundary_to_plane for a point known to lie on `side`.
inline BoundaryPoint plane_to_boundary(const TriangleParams& tri, const PlanarEmbedding& emb, Vec2 q,
                                       int side, double fit_tol = tol::boundary_fit) {
  require_side(side);
  const double len = tri.side_length(side);
  const Vec2 u = emb.side_unit(side);
  const Vec2 rel = q - emb.side_start(side);
  const double along = dot(rel, u);
  const double off = std::abs(cross(u, rel));
  if (off > fit_tol || along < -fit_tol || along > len + fit_tol) {
    throw std::domain_error("plane_to_boundary: point not on side " + std::to_string(side) +
                            " (offset " + std::to_string(off) + ")");
  }
  return {side, std::clamp(along, 0.0, len)};
}

}  // namespace tribilliard
