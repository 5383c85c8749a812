// The billiard map in boundary coordinates [side, phi, x]: phi is the angle
// between the outgoing ray and the oriented side (interior on the left), x
// the arclength of the bounce point. Two independent implementations:
//
//   * step_algebraic: closed-form recurrences. A counterclockwise move to
//     side k+1 gives phi' = pi - phi - gamma_{k-1},
//     x' = (s_k - x) sin(phi) / sin(phi'); a clockwise move to side k-1
//     gives phi' = pi - phi + gamma_{k+1}, x' = s_{k-1} - x sin(phi)/sin(phi').
//     The ccw landing coordinate is strictly increasing in phi, so trying
//     ccw first and falling back to cw when the landing leaves the side
//     selects the correct branch.
//   * step_geometric: ray tracing in the planar embedding, used as the
//     authoritative cross-check.
//
// Hitting a vertex (within tol::vertex of a side endpoint) is a value, not
// an error: the map is undefined there and iteration stops.
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tribilliard/geometry.hpp"
#include "tribilliard/tolerances.hpp"

namespace tribilliard {

enum class MoveDir { ccw, cw };

struct PhaseState {
  int side = 1;
  double phi = 0.0;
  double x = 0.0;
};

struct RegularStep {
  PhaseState next;
  MoveDir dir = MoveDir::ccw;
};

struct SingularHit {
  int vertex = 0;       // vertex index the trajectory ran into
  double distance = 0;  // landing distance from that vertex
};

using StepResult = std::variant<RegularStep, SingularHit>;

inline bool is_singular(const StepResult& r) { return std::holds_alternative<SingularHit>(r); }

inline void require_regular_state(const TriangleParams& tri, const PhaseState& st) {
  require_side(st.side);
  if (!(st.phi > 0.0 && st.phi < pi)) {
    throw std::invalid_argument("phase state angle must lie in (0, pi); got " + std::to_string(st.phi));
  }
  const double len = tri.side_length(st.side);
  if (!(st.x >= 0.0 && st.x <= len)) {
    throw std::invalid_argument("phase state coordinate outside side " + std::to_string(st.side));
  }
}

namespace detail {

// Landing at `x` on side `j` of length `len`: regular if strictly between
// the endpoint guards, otherwise the hit vertex. Landings outside [0, len]
// are reported against the nearer endpoint.
inline std::optional<SingularHit> endpoint_hit(int j, double x, double len, double tau) {
  if (x > tau && x < len - tau) return std::nullopt;
  if (x <= tau) return SingularHit{j, std::abs(x)};
  return SingularHit{cyclic_next(j), std::abs(len - x)};
}

}  // namespace detail

inline StepResult step_algebraic(const TriangleParams& tri, const PhaseState& st,
                                 double tau_vertex = tol::vertex) {
  require_regular_state(tri, st);
  const int k = st.side;
  const double sin_phi = std::sin(st.phi);

  // ccw candidate onto side k+1
  const int k_ccw = cyclic_next(k);
  const double phi_ccw = pi - st.phi - tri.gamma_of(cyclic_prev(k));
  if (phi_ccw > 0.0 && phi_ccw < pi) {
    const double len = tri.side_length(k_ccw);
    const double x_ccw = (tri.side_length(k) - st.x) * sin_phi / std::sin(phi_ccw);
    if (x_ccw > tau_vertex && x_ccw < len - tau_vertex) {
      return RegularStep{{k_ccw, phi_ccw, x_ccw}, MoveDir::ccw};
    }
    if (x_ccw >= -tau_vertex && x_ccw <= len + tau_vertex) {
      return *detail::endpoint_hit(k_ccw, x_ccw, len, tau_vertex);
    }
    // Landing left side k+1 entirely: the true move is clockwise.
  }

  const int k_cw = cyclic_prev(k);
  const double phi_cw = pi - st.phi + tri.gamma_of(cyclic_next(k));
  if (!(phi_cw > 0.0 && phi_cw < pi)) {
    // Unreachable for regular input: a cw fallback implies phi > gamma_{k+1}.
    throw std::runtime_error("step_algebraic: inconsistent branch selection");
  }
  const double len = tri.side_length(k_cw);
  const double x_cw = tri.side_length(k_cw) - st.x * sin_phi / std::sin(phi_cw);
  if (auto hit = detail::endpoint_hit(k_cw, x_cw, len, tau_vertex)) return *hit;
  return RegularStep{{k_cw, phi_cw, x_cw}, MoveDir::cw};
}

inline StepResult step_geometric(const TriangleParams& tri, const PlanarEmbedding& emb,
                                 const PhaseState& st, double tau_vertex = tol::vertex) {
  require_regular_state(tri, st);
  const Vec2 origin = boundary_to_plane(tri, emb, {st.side, st.x});
  const Vec2 dir = rotated(emb.side_unit(st.side), st.phi);

  // Intersect the ray with the two other side segments; the exit side is the
  // unique one crossed at positive ray parameter within segment bounds.
  // Chords can be arbitrarily short near a vertex, so the positivity guard
  // only needs to reject same-point noise, not short chords.
  constexpr double ray_min = 1e-14;
  int best_side = 0;
  double best_t = 0.0, best_w = 0.0;
  for (int j : {cyclic_next(st.side), cyclic_prev(st.side)}) {
    const Vec2 p = emb.side_start(j);
    const Vec2 u = emb.side_unit(j);
    const double denom = cross(dir, u);
    if (std::abs(denom) < 1e-300) continue;  // ray parallel to this side
    const Vec2 rel = p - origin;
    const double t = cross(rel, u) / denom;
    const double w = cross(rel, dir) / denom;
    const double len = tri.side_length(j);
    if (t <= ray_min) continue;
    if (w < -tau_vertex || w > len + tau_vertex) continue;
    if (best_side == 0 || t < best_t) {
      best_side = j;
      best_t = t;
      best_w = w;
    }
  }
  if (best_side == 0) {
    throw std::runtime_error("step_geometric: ray left the triangle without hitting a side");
  }

  const double len = tri.side_length(best_side);
  if (auto hit = detail::endpoint_hit(best_side, best_w, len, tau_vertex)) return *hit;

  const Vec2 u = emb.side_unit(best_side);
  const Vec2 reflected = 2.0 * dot(dir, u) * u - dir;
  const double phi_next = std::atan2(cross(u, reflected), dot(u, reflected));
  if (!(phi_next > 0.0 && phi_next < pi)) {
    // Grazing reflection; only reachable at the singular margin.
    return SingularHit{best_w < 0.5 * len ? best_side : cyclic_next(best_side),
                       std::min(best_w, len - best_w)};
  }
  const MoveDir dir_tag = best_side == cyclic_next(st.side) ? MoveDir::ccw : MoveDir::cw;
  return RegularStep{{best_side, phi_next, best_w}, dir_tag};
}

enum class StepperKind { algebraic, geometric };

inline StepResult step(const TriangleParams& tri, const PlanarEmbedding& emb, const PhaseState& st,
                       StepperKind kind, double tau_vertex = tol::vertex) {
  return kind == StepperKind::algebraic ? step_algebraic(tri, st, tau_vertex)
                                        : step_geometric(tri, emb, st, tau_vertex);
}

struct Orbit {
  std::vector<PhaseState> states;  // bounce t at index t
  std::vector<MoveDir> dirs;       // move t -> t+1, size states.size()-1
  bool terminated_singular = false;
  std::optional<SingularHit> hit;  // set when terminated_singular

  std::size_t bounces() const { return states.empty() ? 0 : states.size() - 1; }
};

inline Orbit iterate(const TriangleParams& tri, const PlanarEmbedding& emb, PhaseState start,
                     std::size_t n, StepperKind kind = StepperKind::geometric,
                     double tau_vertex = tol::vertex) {
  require_regular_state(tri, start);
  Orbit orbit;
  orbit.states.reserve(n + 1);
  orbit.dirs.reserve(n);
  orbit.states.push_back(start);
  for (std::size_t t = 0; t < n; ++t) {
    const StepResult r = step(tri, emb, orbit.states.back(), kind, tau_vertex);
    if (is_singular(r)) {
      orbit.terminated_singular = true;
      orbit.hit = std::get<SingularHit>(r);
      break;
    }
    const auto& reg = std::get<RegularStep>(r);
    orbit.states.push_back(reg.next);
    orbit.dirs.push_back(reg.dir);
  }
  return orbit;
}

/// Worst per-step deviation of an orbit from the closed-form recurrences.
struct OrbitResiduals {
  double max_angle = 0.0;
  double max_coord = 0.0;
  bool sides_consistent = true;
  std::size_t worst_step = 0;
};

inline OrbitResiduals orbit_residuals(const TriangleParams& tri, const Orbit& orbit) {
  OrbitResiduals res;
  for (std::size_t t = 0; t + 1 < orbit.states.size(); ++t) {
    const PhaseState& a = orbit.states[t];
    const PhaseState& b = orbit.states[t + 1];
    const MoveDir dir = orbit.dirs[t];
    double phi_exp = 0.0, x_exp = 0.0;
    int side_exp = 0;
    if (dir == MoveDir::ccw) {
      side_exp = cyclic_next(a.side);
      phi_exp = pi - a.phi - tri.gamma_of(cyclic_prev(a.side));
      x_exp = (tri.side_length(a.side) - a.x) * std::sin(a.phi) / std::sin(phi_exp);
    } else {
      side_exp = cyclic_prev(a.side);
      phi_exp = pi - a.phi + tri.gamma_of(cyclic_next(a.side));
      x_exp = tri.side_length(side_exp) - a.x * std::sin(a.phi) / std::sin(phi_exp);
    }
    if (b.side != side_exp) res.sides_consistent = false;
    const double da = std::abs(b.phi - phi_exp);
    const double dx = std::abs(b.x - x_exp);
    if (std::max(da, dx) > std::max(res.max_angle, res.max_coord)) res.worst_step = t;
    res.max_angle = std::max(res.max_angle, da);
    res.max_coord = std::max(res.max_coord, dx);
  }
  return res;
}

/// Image of a regular orbit under the axial mirror symmetry. Time reverses,
/// the legs swap and coordinates flip within each side; the image of a valid
/// orbit is again a valid orbit.
inline Orbit symmetry_image(const TriangleParams& tri, const Orbit& orbit) {
  if (orbit.terminated_singular) {
    throw std::invalid_argument("symmetry_image: orbit must be regular");
  }
  if (orbit.states.empty()) return orbit;
  const std::size_t T = orbit.states.size() - 1;
  Orbit image;
  image.states.reserve(orbit.states.size());
  image.dirs.reserve(T);
  for (std::size_t t = 0; t <= T; ++t) {
    const PhaseState& src = orbit.states[T - t];
    image.states.push_back(
        {adjoint_index(src.side), src.phi, tri.side_length(src.side) - src.x});
  }
  for (std::size_t t = 0; t < T; ++t) {
    image.dirs.push_back(orbit.dirs[T - 1 - t]);
  }
  return image;
}

}  // namespace tribilliard
