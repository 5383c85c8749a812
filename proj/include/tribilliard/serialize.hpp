// JSON views of the report types. Keys are emitted in sorted order, so the
// output is deterministic byte for byte.
#pragma once

#include <string>

#include <json.hpp>

#include "tribilliard/critical_angles.hpp"
#include "tribilliard/cylinders.hpp"
#include "tribilliard/induced_map.hpp"
#include "tribilliard/tolerances.hpp"
#include "tribilliard/unfolding.hpp"

namespace tribilliard {

inline constexpr int schema_version = 1;

inline nlohmann::json to_json(const AngleReport& rep) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["alpha"] = rep.alpha;
  j["phi_star"] = rep.phi_star;
  j["x_d"] = rep.x_d;
  j["omega"] = rep.omega;
  j["epsilon"] = rep.epsilon;
  j["residuals"] = rep.residuals;
  return j;
}

inline nlohmann::json to_json(const DiagonalRecord& rec) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["sides"] = rec.sides;
  j["angles"] = rec.angles;
  j["coords"] = rec.coords;
  j["starts_at_vertex"] = rec.starts_at_vertex;
  j["ends_at_vertex"] = rec.ends_at_vertex;
  return j;
}

inline nlohmann::json to_json(const CylinderTemplate& cyl) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["sides"] = cyl.sides;
  j["angles"] = cyl.angles;
  nlohmann::json coords = nlohmann::json::array();
  for (const AffineCoord& c : cyl.coords) {
    coords.push_back({{"a", c.a}, {"b", c.b}});
  }
  j["coords"] = coords;
  j["delta_range"] = {cyl.delta_lo, cyl.delta_hi};
  j["return_length"] = cyl.return_length;
  j["return_offset"] = cyl.return_offset;
  return j;
}

inline nlohmann::json to_json(const IETSpec& iet) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["breakpoint"] = iet.breakpoint;
  j["translations"] = iet.translations;
  j["return_times"] = iet.return_times;
  j["omega"] = iet.omega;
  return j;
}

inline nlohmann::json to_json(const RotationEstimate& est) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["omega_hat"] = est.omega_hat;
  j["n"] = est.n;
  j["error_bound"] = est.error_bound;
  j["cf"] = est.cf;
  j["singular_stop"] = est.singular_stop;
  if (est.singular_stop) {
    j["hit"] = {{"vertex", est.hit.vertex}, {"distance", est.hit.distance}};
  }
  return j;
}

inline const char* to_string(RationalityVerdict v) {
  switch (v) {
    case RationalityVerdict::rational:
      return "rational";
    case RationalityVerdict::likely_irrational:
      return "likely-irrational";
    case RationalityVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

inline nlohmann::json to_json(const RationalityProbe& probe) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["verdict"] = to_string(probe.verdict);
  j["p"] = probe.p;
  j["q"] = probe.q;
  j["error"] = probe.error;
  return j;
}

inline nlohmann::json to_json(const GapStats& stats) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["min_margin_side2"] = stats.min_margin_side2;
  j["min_margin_side3"] = stats.min_margin_side3;
  j["epsilon_ref"] = stats.epsilon_ref;
  j["returns"] = stats.base_positions.size();
  j["base_positions"] = stats.base_positions;
  return j;
}

inline nlohmann::json to_json(const AngleBoundsReport& rep) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  nlohmann::json bounds = nlohmann::json::array();
  for (int i = 0; i < AngleBoundsReport::count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    bounds.push_back(
        {{"name", rep.names[idx]}, {"margin", rep.margins[idx]}, {"holds", rep.holds[idx]}});
  }
  j["bounds"] = bounds;
  j["all_hold"] = rep.all_hold;
  return j;
}

/// Apply a JSON object of {name: value} pairs to a tolerance set. Unknown
/// names and non-positive values raise std::domain_error.
inline void apply_tolerance_overrides(Tolerances& tols, const nlohmann::json& overrides) {
  if (!overrides.is_object()) {
    throw std::domain_error("tolerance override must be a JSON object of name -> value");
  }
  for (const auto& [key, value] : overrides.items()) {
    if (!value.is_number()) {
      throw std::domain_error("tolerance '" + key + "' must be a number");
    }
    tols.set(key, value.get<double>());
  }
}

}  // namespace tribilliard
