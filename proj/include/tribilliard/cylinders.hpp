// Recurrent cylinders over the base at the launch angle phi_star.
//
// Orbits started on the base at angle phi_star return to it after exactly
// ten bounces (base coordinate in (0, x_d)) or four bounces (coordinate in
// (x_d, 1)). Along either family every bounce coordinate is an affine
// function of the start coordinate delta, so a cylinder is a finite table:
// side sequence, outgoing angles, and one affine coefficient pair per step.
// The ten-bounce family shadows the generalised diagonal in its first half
// and retraces it mirror-reversed in the second.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tribilliard/billiard.hpp"
#include "tribilliard/critical_angles.hpp"
#include "tribilliard/geometry.hpp"

namespace tribilliard {

/// Coordinate of one cylinder step as a function of the start offset delta.
struct AffineCoord {
  double a = 0.0;
  double b = 0.0;
  double operator()(double delta) const { return a + b * delta; }
};

struct CylinderTemplate {
  std::vector<int> sides;           // return_length + 1 entries
  std::vector<double> angles;       // outgoing angle at each bounce
  std::vector<AffineCoord> coords;  // bounce coordinate as a function of delta
  double delta_lo = 0.0;            // open interval of valid start offsets
  double delta_hi = 0.0;
  int return_length = 0;
  double return_offset = 0.0;       // last coordinate = delta + return_offset
};

namespace detail {

// Coordinates along the generalised diagonal's side sequence as affine
// functions of the start offset: xi_0 = delta and each further bounce is a
// signed sine-ratio multiple of the previous one, alternating orientation.
inline std::vector<AffineCoord> diagonal_coords(const TriangleParams& tri,
                                                const std::array<double, 6>& psi) {
  const double s1 = tri.s[0], s2 = tri.s[1], s3 = tri.s[2];
  const std::array<double, 6> lengths{s1, s2, s3, s1, s3, s1};
  std::vector<AffineCoord> c(6);
  c[0] = {0.0, 1.0};
  for (std::size_t t = 1; t < 6; ++t) {
    const double ratio = std::sin(psi[t - 1]) / std::sin(psi[t]);
    // ccw move: x_t = (len_{t-1} - x_{t-1}) * ratio; the single cw move of
    // this sequence (onto side 3 at t = 4) gives x_t = s_3 - x_{t-1} * ratio.
    // Either way the slope picks up a factor of -ratio.
    if (t == 4) {
      c[t] = {s3 - c[t - 1].a * ratio, -c[t - 1].b * ratio};
    } else {
      c[t] = {(lengths[t - 1] - c[t - 1].a) * ratio, -c[t - 1].b * ratio};
    }
  }
  return c;
}

}  // namespace detail

/// The vertex-to-vertex orbit at angle phi_star: side sequence (1,2,3,1,3,1),
/// starting at vertex 1 (coordinate 0) and ending at vertex 2 (coordinate
/// s_1 on side 1).
struct DiagonalRecord {
  std::array<int, 6> sides{};
  std::array<double, 6> angles{};
  std::array<double, 6> coords{};
  bool starts_at_vertex = false;
  bool ends_at_vertex = false;
};

inline DiagonalRecord generalized_diagonal(double alpha) {
  require_alpha_open_range(alpha, "generalized_diagonal");
  const TriangleParams tri = make_triangle(alpha);
  const double ph = phi_star(alpha);
  const auto psi = diagonal_angles(alpha, ph);
  const auto coords = detail::diagonal_coords(tri, psi);
  DiagonalRecord rec;
  rec.sides = {1, 2, 3, 1, 3, 1};
  rec.angles = psi;
  for (std::size_t t = 0; t < 6; ++t) rec.coords[t] = coords[t].a;
  rec.starts_at_vertex = std::abs(rec.coords[0]) <= tol::identity;
  rec.ends_at_vertex = std::abs(rec.coords[5] - tri.s[0]) <= tol::identity;
  return rec;
}

inline CylinderTemplate ten_cylinder(double alpha) {
  const AngleReport rep = angle_report(alpha);
  const TriangleParams tri = make_triangle(alpha);
  const auto psi = diagonal_angles(alpha, rep.phi_star);
  const auto half = detail::diagonal_coords(tri, psi);
  const std::array<int, 6> half_sides{1, 2, 3, 1, 3, 1};

  CylinderTemplate cyl;
  cyl.return_length = 10;
  cyl.delta_lo = 0.0;
  cyl.delta_hi = rep.x_d;
  cyl.return_offset = 1.0 - rep.x_d;
  cyl.sides.resize(11);
  cyl.angles.resize(11);
  cyl.coords.resize(11);
  for (std::size_t t = 0; t < 6; ++t) {
    cyl.sides[t] = half_sides[t];
    cyl.angles[t] = psi[t];
    cyl.coords[t] = half[t];
  }
  // Second half: the mirror image of the first half run backwards from the
  // offset x_d - delta. Mirroring swaps the legs and flips coordinates.
  for (std::size_t t = 6; t <= 10; ++t) {
    const std::size_t u = 10 - t;
    const int src_side = half_sides[u];
    cyl.sides[t] = adjoint_index(src_side);
    cyl.angles[t] = psi[u];
    const double len = tri.side_length(src_side);
    cyl.coords[t] = {len - half[u].a - half[u].b * rep.x_d, half[u].b};
  }
  return cyl;
}

inline CylinderTemplate four_cylinder(double alpha) {
  const AngleReport rep = angle_report(alpha);
  const TriangleParams tri = make_triangle(alpha);
  const auto th = four_cycle_angles(alpha, rep.phi_star);
  const double s1 = tri.s[0];

  // First half along sides (1,2,1): one ccw move then a cw one.
  std::array<AffineCoord, 3> half;
  half[0] = {0.0, 1.0};
  const double r1 = std::sin(th[0]) / std::sin(th[1]);
  half[1] = {s1 * r1, -r1};
  const double r2 = std::sin(th[1]) / std::sin(th[2]);
  half[2] = {s1 - half[1].a * r2, -half[1].b * r2};

  CylinderTemplate cyl;
  cyl.return_length = 4;
  cyl.delta_lo = rep.x_d;
  cyl.delta_hi = 1.0;
  cyl.return_offset = -rep.x_d;
  cyl.sides = {1, 2, 1, 3, 1};
  cyl.angles = {th[0], th[1], th[2], th[1], th[0]};
  cyl.coords.resize(5);
  for (std::size_t t = 0; t < 3; ++t) cyl.coords[t] = half[t];
  // Mirror-reversed second half from the offset 1 + x_d - delta.
  const double shift = 1.0 + rep.x_d;
  for (std::size_t t = 3; t <= 4; ++t) {
    const std::size_t u = 4 - t;
    const double len = tri.side_length(cyl.sides[u]);
    cyl.coords[t] = {len - half[u].a - half[u].b * shift, half[u].b};
  }
  return cyl;
}

/// Realise a cylinder start offset as an explicit orbit.
inline Orbit template_orbit(const CylinderTemplate& cyl, double delta) {
  Orbit orbit;
  orbit.states.reserve(cyl.sides.size());
  for (std::size_t t = 0; t < cyl.sides.size(); ++t) {
    orbit.states.push_back({cyl.sides[t], cyl.angles[t], cyl.coords[t](delta)});
  }
  for (std::size_t t = 0; t + 1 < cyl.sides.size(); ++t) {
    orbit.dirs.push_back(cyl.sides[t + 1] == cyclic_next(cyl.sides[t]) ? MoveDir::ccw
                                                                       : MoveDir::cw);
  }
  return orbit;
}

struct TemplateVerification {
  bool ok = false;
  std::size_t first_divergence = std::numeric_limits<std::size_t>::max();
  double max_angle_dev = 0.0;
  double max_coord_dev = 0.0;
  std::string detail;  // empty when ok
};

enum class StepperChoice { algebraic, geometric, both };

/// Run a stepper from the cylinder's start state and compare every bounce
/// against the template. With StepperChoice::both the geometric result is
/// returned and any disagreement with the algebraic one is noted.
inline TemplateVerification verify_template(const TriangleParams& tri, const PlanarEmbedding& emb,
                                            const CylinderTemplate& cyl, double delta,
                                            StepperChoice choice = StepperChoice::both,
                                            double angle_tol = tol::template_angle,
                                            double coord_tol = tol::template_coord) {
  if (!(delta >= cyl.delta_lo + tol::delta_margin && delta <= cyl.delta_hi - tol::delta_margin)) {
    throw std::domain_error("verify_template: delta must lie inside (" +
                            std::to_string(cyl.delta_lo) + ", " + std::to_string(cyl.delta_hi) +
                            ") with margin " + std::to_string(tol::delta_margin));
  }

  auto run = [&](StepperKind kind) {
    TemplateVerification ver;
    ver.ok = true;
    const PhaseState start{cyl.sides[0], cyl.angles[0], cyl.coords[0](delta)};
    const Orbit orbit =
        iterate(tri, emb, start, static_cast<std::size_t>(cyl.return_length), kind);
    if (orbit.states.size() != cyl.sides.size()) {
      ver.ok = false;
      ver.first_divergence = orbit.states.size() - 1;
      std::ostringstream os;
      os << "orbit hit vertex " << (orbit.hit ? orbit.hit->vertex : 0) << " after "
         << orbit.bounces() << " bounces";
      ver.detail = os.str();
      return ver;
    }
    for (std::size_t t = 0; t < orbit.states.size(); ++t) {
      const PhaseState& got = orbit.states[t];
      const double want_x = cyl.coords[t](delta);
      const double da = std::abs(got.phi - cyl.angles[t]);
      const double dx = std::abs(got.x - want_x);
      ver.max_angle_dev = std::max(ver.max_angle_dev, da);
      ver.max_coord_dev = std::max(ver.max_coord_dev, dx);
      if (got.side != cyl.sides[t] || da > angle_tol || dx > coord_tol) {
        if (ver.ok) {
          ver.ok = false;
          ver.first_divergence = t;
          std::ostringstream os;
          os << "step " << t << ": expected side " << cyl.sides[t] << " angle " << cyl.angles[t]
             << " coord " << want_x << ", got side " << got.side << " angle " << got.phi
             << " coord " << got.x;
          ver.detail = os.str();
        }
      }
    }
    return ver;
  };

  if (choice == StepperChoice::algebraic) return run(StepperKind::algebraic);
  if (choice == StepperChoice::geometric) return run(StepperKind::geometric);
  TemplateVerification geo = run(StepperKind::geometric);
  const TemplateVerification alg = run(StepperKind::algebraic);
  if (alg.ok != geo.ok) {
    geo.detail += std::string(geo.detail.empty() ? "" : "; ") +
                  "steppers disagree (algebraic " + (alg.ok ? "ok" : "diverged") + ")";
  }
  geo.max_angle_dev = std::max(geo.max_angle_dev, alg.max_angle_dev);
  geo.max_coord_dev = std::max(geo.max_coord_dev, alg.max_coord_dev);
  return geo;
}

}  // namespace tribilliard
