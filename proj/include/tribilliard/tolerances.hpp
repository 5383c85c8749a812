// Numerical tolerances used across the library. All geometry is O(1) in
// size (the base is the unit of length), so these are absolute bounds.
#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace tribilliard {

namespace tol {
// Landing within this distance of a side endpoint is classified singular;
// double-precision chord intersections are unreliable below this scale.
inline constexpr double vertex = 1e-12;
// Agreement bound between the algebraic and the ray-tracing stepper.
inline constexpr double step_agreement = 1e-10;
// Per-step recurrence residual accepted when validating an orbit.
inline constexpr double orbit_residual = 1e-10;
// First-return detection: |angle - phi_star| below this counts as a return.
inline constexpr double return_angle = 1e-9;
// Cylinder template vs. stepper comparison bounds.
inline constexpr double template_angle = 1e-10;
inline constexpr double template_coord = 1e-9;
// Unfolded regular orbits must be straight to this residual per unit length.
inline constexpr double collinearity = 1e-9;
// Algebraic identities between closed forms.
inline constexpr double identity = 1e-12;
// plane_to_boundary rejects points further than this from the side.
inline constexpr double boundary_fit = 1e-10;
// Chord penetration depth into the tip region that counts as an intersection.
inline constexpr double tip_depth = 1e-9;
// Template evaluation requires delta at least this far inside its range.
inline constexpr double delta_margin = 1e-9;
}  // namespace tol

/// Runtime-adjustable copy of the tolerance set (CLI experiments only;
/// tests always pin the constants above).
struct Tolerances {
  double vertex = tol::vertex;
  double step_agreement = tol::step_agreement;
  double orbit_residual = tol::orbit_residual;
  double return_angle = tol::return_angle;
  double template_angle = tol::template_angle;
  double template_coord = tol::template_coord;
  double collinearity = tol::collinearity;
  double identity = tol::identity;
  double boundary_fit = tol::boundary_fit;
  double tip_depth = tol::tip_depth;
  double delta_margin = tol::delta_margin;

  void set(const std::string& name, double value) {
    if (!(value > 0.0)) throw std::domain_error("tolerance '" + name + "' must be positive");
    double* slot = lookup(name);
    if (slot == nullptr) throw std::domain_error("unknown tolerance '" + name + "'");
    *slot = value;
  }

  std::map<std::string, double> as_map() const {
    return {{"vertex", vertex},
            {"step_agreement", step_agreement},
            {"orbit_residual", orbit_residual},
            {"return_angle", return_angle},
            {"template_angle", template_angle},
            {"template_coord", template_coord},
            {"collinearity", collinearity},
            {"identity", identity},
            {"boundary_fit", boundary_fit},
            {"tip_depth", tip_depth},
            {"delta_margin", delta_margin}};
  }

 private:
  double* lookup(const std::string& name) {
    if (name == "vertex") return &vertex;
    if (name == "step_agreement") return &step_agreement;
    if (name == "orbit_residual") return &orbit_residual;
    if (name == "return_angle") return &return_angle;
    if (name == "template_angle") return &template_angle;
    if (name == "template_coord") return &template_coord;
    if (name == "collinearity") return &collinearity;
    if (name == "identity") return &identity;
    if (name == "boundary_fit") return &boundary_fit;
    if (name == "tip_depth") return &tip_depth;
    if (name == "delta_margin") return &delta_margin;
    return nullptr;
  }
};

}  // namespace tribilliard
