// Critical angles of the construction.
//
// alpha_star is the unique root in (pi/4, 2pi/7) of
//   sin(7a) - sin(3a) + sin(a) = 0;
// for base angles above it the triangle admits a generalised diagonal from
// vertex 1 to vertex 2 whose launch angle phi_star solves
//   sin(6a + phi) - sin(2a + phi) + sin(phi) = 0,  phi in (0, pi).
// The same equation reads A sin(phi) + B cos(phi) with
//   A = cos(6a) - cos(2a) + 1,  B = sin(6a) - sin(2a) = 2 sin(2a) cos(4a),
// so the root is available in closed form and a Newton step polishes it to
// machine precision.
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "tribilliard/geometry.hpp"

namespace tribilliard {

inline constexpr double alpha_range_hi = 3.0 * pi / 10.0;

/// Function whose sign change locates the critical base angle.
inline double alpha_star_equation(double a) {
  return std::sin(7.0 * a) - std::sin(3.0 * a) + std::sin(a);
}

namespace detail {

inline double solve_alpha_star() {
  double lo = pi / 4.0, hi = 2.0 * pi / 7.0;
  double flo = alpha_star_equation(lo);
  if (!(flo < 0.0) || !(alpha_star_equation(hi) > 0.0)) {
    throw std::runtime_error("alpha_star: bracket lost its sign change");
  }
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = alpha_star_equation(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  // One Newton polish; the root is simple and well inside the bracket.
  double a = 0.5 * (lo + hi);
  const double slope = 7.0 * std::cos(7.0 * a) - 3.0 * std::cos(3.0 * a) + std::cos(a);
  if (std::abs(slope) > 1e-6) a -= alpha_star_equation(a) / slope;
  return a;
}

}  // namespace detail

/// Critical base angle: generalised diagonals exist for alpha above it.
inline double alpha_star() {
  static const double value = detail::solve_alpha_star();
  return value;
}

inline void require_alpha_open_range(double alpha, const char* where) {
  if (!(alpha > alpha_star() && alpha < alpha_range_hi)) {
    throw std::domain_error(std::string(where) + ": alpha must lie in (alpha_star, 3*pi/10) ~ (" +
                            std::to_string(alpha_star()) + ", " + std::to_string(alpha_range_hi) +
                            "); got " + std::to_string(alpha));
  }
}

inline double phi_star_equation(double alpha, double phi) {
  return std::sin(6.0 * alpha + phi) - std::sin(2.0 * alpha + phi) + std::sin(phi);
}

/// Launch angle of the generalised diagonal at vertex 1.
inline double phi_star(double alpha) {
  if (!(alpha >= pi / 4.0 && alpha <= alpha_range_hi)) {
    throw std::domain_error("phi_star: alpha must lie in [pi/4, 3*pi/10]; got " +
                            std::to_string(alpha));
  }
  const double A = std::cos(6.0 * alpha) - std::cos(2.0 * alpha) + 1.0;
  const double B = std::sin(6.0 * alpha) - std::sin(2.0 * alpha);
  double phi = std::atan2(-B, A);
  if (phi <= 0.0) phi += pi;
  for (int it = 0; it < 2; ++it) {
    const double slope = std::cos(6.0 * alpha + phi) - std::cos(2.0 * alpha + phi) + std::cos(phi);
    if (std::abs(slope) < 1e-9) break;
    phi -= phi_star_equation(alpha, phi) / slope;
  }
  return phi;
}

/// Reflection angles phi_0..phi_5 along the generalised diagonal's side
/// sequence (1,2,3,1,3,1); also the outgoing angles over the first half of
/// the ten-bounce cylinder.
inline std::array<double, 6> diagonal_angles(double alpha, double phi) {
  return {phi,
          pi - alpha - phi,
          -pi + 3.0 * alpha + phi,
          2.0 * pi - 4.0 * alpha - phi,
          -pi + 5.0 * alpha + phi,
          2.0 * pi - 6.0 * alpha - phi};
}

/// Outgoing angles over the first half of the four-bounce cylinder, side
/// sequence (1,2,1).
inline std::array<double, 3> four_cycle_angles(double alpha, double phi) {
  return {phi, pi - alpha - phi, 2.0 * alpha + phi};
}

/// The five strict inequalities that keep the diagonal construction inside
/// the triangle. Margins are the distances to equality, all positive on
/// (alpha_star, 3*pi/10).
struct AngleBoundsReport {
  static constexpr int count = 5;
  std::array<const char*, count> names{"0 < phi < alpha", "pi/2 < alpha + phi",
                                       "pi < 3*alpha + phi", "6*alpha + phi < 2*pi",
                                       "2*pi < 7*alpha + phi"};
  std::array<double, count> margins{};
  std::array<bool, count> holds{};
  bool all_hold = false;
};

inline AngleBoundsReport phi_star_bounds(double alpha, double phi) {
  require_alpha_open_range(alpha, "phi_star_bounds");
  AngleBoundsReport rep;
  rep.margins = {std::min(phi, alpha - phi), alpha + phi - pi / 2.0, 3.0 * alpha + phi - pi,
                 2.0 * pi - 6.0 * alpha - phi, 7.0 * alpha + phi - 2.0 * pi};
  rep.all_hold = true;
  for (int i = 0; i < AngleBoundsReport::count; ++i) {
    rep.holds[static_cast<std::size_t>(i)] = rep.margins[static_cast<std::size_t>(i)] > 0.0;
    rep.all_hold = rep.all_hold && rep.holds[static_cast<std::size_t>(i)];
  }
  return rep;
}

/// Derived quantities at a base angle: the diagonal's launch angle, the
/// break point x_d of the induced base map, the rotation number omega and
/// the tip exclusion radius epsilon, together with the residuals of the
/// closed-form identities tying them together.
struct AngleReport {
  double alpha = 0.0;
  double phi_star = 0.0;
  double x_d = 0.0;
  double omega = 0.0;
  double epsilon = 0.0;
  std::map<std::string, double> residuals;
};

inline AngleReport angle_report(double alpha) {
  require_alpha_open_range(alpha, "angle_report");
  AngleReport rep;
  rep.alpha = alpha;
  rep.phi_star = phi_star(alpha);
  const double ph = rep.phi_star;

  rep.x_d = 1.0 - std::sin(2.0 * alpha + ph) / std::sin(ph);
  rep.omega = std::cos(3.0 * alpha) / (2.0 * std::cos(alpha) * std::cos(4.0 * alpha));

  const auto psi = diagonal_angles(alpha, ph);
  const auto th = four_cycle_angles(alpha, ph);
  const TriangleParams tri = make_triangle(alpha);
  const double s1 = tri.s[0], s2 = tri.s[1], s3 = tri.s[2];

  // Distance from the apex below which no bounce of the induced orbit lands.
  const double e1 = s2 - std::sin(th[2]) / std::sin(th[1]);
  const double e2 = s2 - std::sin(psi[0]) / std::sin(psi[1]);
  const double e3 = s2 - std::sin(psi[5]) / std::sin(psi[2]);
  const double e4 = s2 - std::sin(psi[5]) / std::sin(psi[4]);
  rep.epsilon = std::min(std::min(e1, e2), std::min(e3, e4));

  rep.residuals["phi_star_equation"] = std::abs(phi_star_equation(alpha, ph));
  rep.residuals["omega_plus_x_d_minus_one"] = std::abs(rep.omega + rep.x_d - 1.0);
  rep.residuals["x_d_vs_sine_ratio"] = std::abs(rep.x_d - std::sin(psi[5]) / std::sin(psi[0]));
  rep.residuals["endpoint_sine_identity"] =
      std::abs(std::sin(psi[5]) - (s3 * std::sin(psi[2]) - s2 * std::sin(psi[1]) + s1 * std::sin(psi[0])));
  rep.residuals["angle_sum"] = std::abs(tri.gamma[0] + tri.gamma[1] + tri.gamma[2] - pi);
  return rep;
}

}  // namespace tribilliard
