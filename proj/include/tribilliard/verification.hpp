// Property suite: every structural claim the library rests on, checked
// numerically at one base angle or across a grid. Used by the test suite
// and the `verify` subcommand.
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tribilliard/billiard.hpp"
#include "tribilliard/critical_angles.hpp"
#include "tribilliard/cylinders.hpp"
#include "tribilliard/induced_map.hpp"
#include "tribilliard/tolerances.hpp"

namespace tribilliard {

struct CheckResult {
  std::string name;
  bool pass = true;
  double worst = 0.0;   // largest deviation seen, in the check's own units
  std::string detail;   // first failure description
};

struct SuiteConfig {
  int step_samples = 1000;          // random states for stepper agreement
  int reversibility_samples = 200;  // random states for time reversal
  int template_samples = 100;       // random offsets per cylinder
  int conjugacy_samples = 1000;     // random base points for the return map
  int recurrence_bounces = 200;     // orbit length for the angle recurrence
  std::uint64_t seed = 0x1bafe11eULL;
  Tolerances tol;
};

namespace detail {

inline void record(std::vector<CheckResult>& out, const std::string& name, bool pass, double worst,
                   const std::string& detail_on_fail) {
  for (CheckResult& c : out) {
    if (c.name == name) {
      c.worst = std::max(c.worst, worst);
      if (!pass && c.pass) {
        c.pass = false;
        c.detail = detail_on_fail;
      }
      return;
    }
  }
  CheckResult c;
  c.name = name;
  c.pass = pass;
  c.worst = worst;
  if (!pass) c.detail = detail_on_fail;
  out.push_back(std::move(c));
}

inline double wrap_unit(double x) { return x - std::floor(x); }

inline double circle_distance(double a, double b) {
  const double d = std::abs(wrap_unit(a) - wrap_unit(b));
  return std::min(d, 1.0 - d);
}

inline PhaseState random_regular_state(const TriangleParams& tri, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> side_dist(1, 3);
  // Keep sampled states away from grazing angles and vertices so the two
  // steppers stay within their agreement bound.
  std::uniform_real_distribution<double> phi_dist(1e-2, pi - 1e-2);
  std::uniform_real_distribution<double> frac_dist(1e-3, 1.0 - 1e-3);
  const int side = side_dist(rng);
  return {side, phi_dist(rng), frac_dist(rng) * tri.side_length(side)};
}

}  // namespace detail

/// All per-angle properties at one base angle.
inline std::vector<CheckResult> alpha_point_suite(double alpha, const SuiteConfig& cfg = {}) {
  using detail::record;
  std::vector<CheckResult> out;
  const TriangleParams tri = make_triangle(alpha);
  const PlanarEmbedding emb = embed(tri);
  const AngleReport rep = angle_report(alpha);
  const auto psi = diagonal_angles(alpha, rep.phi_star);
  const auto th = four_cycle_angles(alpha, rep.phi_star);
  std::mt19937_64 rng(cfg.seed ^ std::hash<double>{}(alpha));

  // Closed-form identities and bounds.
  {
    double worst = 0.0;
    for (const auto& [key, value] : rep.residuals) worst = std::max(worst, value);
    record(out, "angle_identities", worst <= cfg.tol.identity, worst,
           "identity residual above bound at alpha " + std::to_string(alpha));
    record(out, "epsilon_positive", rep.epsilon > 0.0, -rep.epsilon,
           "epsilon not positive at alpha " + std::to_string(alpha));
    const AngleBoundsReport bounds = phi_star_bounds(alpha, rep.phi_star);
    double min_margin = bounds.margins[0];
    for (double m : bounds.margins) min_margin = std::min(min_margin, m);
    record(out, "phi_star_bounds", bounds.all_hold, -min_margin,
           "angle bound violated at alpha " + std::to_string(alpha));
    bool angles_interior = true;
    for (double a : psi) angles_interior = angles_interior && a > 0.0 && a < pi;
    for (double a : th) angles_interior = angles_interior && a > 0.0 && a < pi;
    record(out, "cycle_angles_interior", angles_interior, 0.0,
           "cycle angle outside (0, pi) at alpha " + std::to_string(alpha));
    // The diagonal stays strictly inside the legs it crosses.
    const double base_gap = tri.s[1] * std::sin(psi[1]) - std::sin(psi[0]);
    record(out, "diagonal_inside_legs", base_gap > 0.0, -base_gap,
           "diagonal leaves the legs at alpha " + std::to_string(alpha));
  }

  // Stepper agreement on random regular states.
  {
    double worst = 0.0;
    bool pass = true;
    std::string detail_msg;
    for (int i = 0; i < cfg.step_samples && pass; ++i) {
      const PhaseState st = detail::random_regular_state(tri, rng);
      const StepResult ra = step_algebraic(tri, st);
      const StepResult rg = step_geometric(tri, emb, st);
      if (is_singular(ra) != is_singular(rg)) {
        pass = false;
        detail_msg = "stepper singular/regular disagreement";
        break;
      }
      if (is_singular(ra)) continue;
      const auto& a = std::get<RegularStep>(ra);
      const auto& g = std::get<RegularStep>(rg);
      const double dev =
          std::max(std::abs(a.next.phi - g.next.phi), std::abs(a.next.x - g.next.x));
      worst = std::max(worst, dev);
      if (a.next.side != g.next.side || a.dir != g.dir || dev > cfg.tol.step_agreement) {
        pass = false;
        std::ostringstream os;
        os << "steppers diverge at [" << st.side << ", " << st.phi << ", " << st.x << "]";
        detail_msg = os.str();
      }
    }
    record(out, "stepper_agreement", pass, worst, detail_msg);
  }

  // Reversing the outgoing angle at the landing retraces the step.
  {
    double worst = 0.0;
    bool pass = true;
    std::string detail_msg;
    for (int i = 0; i < cfg.reversibility_samples && pass; ++i) {
      const PhaseState st = detail::random_regular_state(tri, rng);
      const StepResult fwd = step_geometric(tri, emb, st);
      if (is_singular(fwd)) continue;
      const PhaseState& nxt = std::get<RegularStep>(fwd).next;
      const StepResult back = step_geometric(tri, emb, {nxt.side, pi - nxt.phi, nxt.x});
      if (is_singular(back)) {
        pass = false;
        detail_msg = "reverse step singular";
        break;
      }
      const PhaseState& rec = std::get<RegularStep>(back).next;
      const double dev = std::max(std::abs(rec.phi - (pi - st.phi)), std::abs(rec.x - st.x));
      worst = std::max(worst, dev);
      if (rec.side != st.side || dev > cfg.tol.step_agreement) {
        pass = false;
        std::ostringstream os;
        os << "reversal misses start from [" << st.side << ", " << st.phi << ", " << st.x << "]";
        detail_msg = os.str();
      }
    }
    record(out, "reversibility", pass, worst, detail_msg);
  }

  // Generalised diagonal: endpoints and interior bounces.
  {
    const DiagonalRecord rec = generalized_diagonal(alpha);
    double worst = std::max(std::abs(rec.coords[0]), std::abs(rec.coords[5] - tri.s[0]));
    bool interior = true;
    for (std::size_t t = 1; t <= 4; ++t) {
      const double len = tri.side_length(rec.sides[t]);
      interior = interior && rec.coords[t] > 0.0 && rec.coords[t] < len;
    }
    record(out, "diagonal_endpoints",
           rec.starts_at_vertex && rec.ends_at_vertex && worst <= cfg.tol.identity, worst,
           "diagonal endpoints off the vertices at alpha " + std::to_string(alpha));
    record(out, "diagonal_interior", interior, 0.0,
           "diagonal bounce outside its side at alpha " + std::to_string(alpha));

    // A ray started just off the vertex shadows the diagonal.
    const CylinderTemplate ten = ten_cylinder(alpha);
    const double delta = 1e-6;
    const Orbit orbit = iterate(tri, emb, {1, rep.phi_star, delta}, 5, StepperKind::geometric);
    bool pass = !orbit.terminated_singular && orbit.states.size() == 6;
    double dev = 0.0;
    if (pass) {
      for (std::size_t t = 0; t < 6; ++t) {
        pass = pass && orbit.states[t].side == rec.sides[t];
        dev = std::max(dev, std::abs(orbit.states[t].x - ten.coords[t](delta)));
        dev = std::max(dev, std::abs(orbit.states[t].phi - rec.angles[t]));
      }
    }
    record(out, "diagonal_shadowing", pass && dev <= 1e-5, dev,
           "off-vertex ray does not shadow the diagonal at alpha " + std::to_string(alpha));
  }

  // Cylinder templates against both steppers at random interior offsets.
  {
    const CylinderTemplate ten = ten_cylinder(alpha);
    const CylinderTemplate four = four_cylinder(alpha);
    for (const CylinderTemplate* cyl : {&ten, &four}) {
      const std::string name = cyl->return_length == 10 ? "ten_template" : "four_template";
      std::uniform_real_distribution<double> delta_dist(cyl->delta_lo + 1e-6,
                                                        cyl->delta_hi - 1e-6);
      double worst = 0.0;
      bool pass = true;
      std::string detail_msg;
      for (int i = 0; i < cfg.template_samples && pass; ++i) {
        const TemplateVerification ver =
            verify_template(tri, emb, *cyl, delta_dist(rng), StepperChoice::both,
                            cfg.tol.template_angle, cfg.tol.template_coord);
        worst = std::max(worst, std::max(ver.max_coord_dev, ver.max_angle_dev));
        if (!ver.ok) {
          pass = false;
          detail_msg = ver.detail + " (alpha " + std::to_string(alpha) + ")";
        }
      }
      record(out, name, pass, worst, detail_msg);

      // Return row is a pure translation of the start row.
      const std::size_t last = static_cast<std::size_t>(cyl->return_length);
      const double trans_dev =
          std::max(std::abs(cyl->coords[last].b - 1.0),
                   std::abs(cyl->coords[last].a - cyl->return_offset));
      record(out, "template_translation", trans_dev <= cfg.tol.identity, trans_dev,
             "return row is not a unit-slope translation at alpha " + std::to_string(alpha));
    }

    // The two start intervals partition the base around x_d.
    const bool partition = ten.delta_lo == 0.0 && four.delta_hi == 1.0 &&
                           ten.delta_hi == four.delta_lo;
    record(out, "delta_partition", partition, std::abs(ten.delta_hi - four.delta_lo),
           "cylinder offset ranges do not partition the base at alpha " + std::to_string(alpha));

    // Affine slopes alternate sign with sine-ratio magnitude along the
    // ten-bounce template's first half.
    double slope_dev = 0.0;
    for (std::size_t t = 0; t < 6; ++t) {
      const double expect = std::sin(psi[0]) / std::sin(psi[t]) * (t % 2 == 0 ? 1.0 : -1.0);
      slope_dev = std::max(slope_dev, std::abs(ten.coords[t].b - expect));
    }
    record(out, "template_slopes", slope_dev <= 1e-10, slope_dev,
           "affine slope off the sine-ratio form at alpha " + std::to_string(alpha));

    // Mirror symmetry carries each template's first half onto its second.
    for (const CylinderTemplate* cyl : {&ten, &four}) {
      const std::size_t half_len = static_cast<std::size_t>(cyl->return_length) / 2;
      std::uniform_real_distribution<double> delta_dist(cyl->delta_lo + 1e-6,
                                                        cyl->delta_hi - 1e-6);
      const double delta = delta_dist(rng);
      const double mirrored = cyl->delta_lo + cyl->delta_hi - delta;
      Orbit head;
      for (std::size_t t = 0; t <= half_len; ++t) {
        head.states.push_back({cyl->sides[t], cyl->angles[t], cyl->coords[t](mirrored)});
      }
      for (std::size_t t = 0; t < half_len; ++t) {
        head.dirs.push_back(cyl->sides[t + 1] == cyclic_next(cyl->sides[t]) ? MoveDir::ccw
                                                                            : MoveDir::cw);
      }
      const Orbit image = symmetry_image(tri, head);
      double dev = 0.0;
      bool pass = true;
      for (std::size_t t = 0; t <= half_len; ++t) {
        const PhaseState& got = image.states[t];
        const std::size_t src = half_len + t;
        pass = pass && got.side == cyl->sides[src];
        dev = std::max(dev, std::abs(got.phi - cyl->angles[src]));
        dev = std::max(dev, std::abs(got.x - cyl->coords[src](delta)));
      }
      record(out, "template_mirror_halves", pass && dev <= cfg.tol.identity, dev,
             "mirror image misses the second half at alpha " + std::to_string(alpha));
    }
  }

  // First returns realise the two-branch translation of the base map.
  {
    const IETSpec iet = analytic_iet(alpha);
    std::uniform_real_distribution<double> x_dist(0.0, 1.0);
    double worst = 0.0;
    bool pass = true;
    std::string detail_msg;
    int done = 0;
    while (done < cfg.conjugacy_samples && pass) {
      const double x = x_dist(rng);
      if (x < 1e-6 || x > 1.0 - 1e-6 || std::abs(x - iet.breakpoint) < 1e-6) continue;
      ++done;
      const FirstReturn fr = first_return(tri, emb, rep.phi_star, x, cfg.tol.return_angle);
      const int want_steps = x < iet.breakpoint ? iet.return_times[0] : iet.return_times[1];
      const double dev = fr.singular ? 1.0 : detail::circle_distance(fr.x, x + rep.omega);
      worst = std::max(worst, dev);
      if (fr.singular || fr.steps != want_steps || dev > cfg.tol.return_angle) {
        pass = false;
        std::ostringstream os;
        os << "return from x " << x << " gave " << (fr.singular ? -1 : fr.steps) << " steps, dev "
           << dev << " (alpha " << alpha << ")";
        detail_msg = os.str();
      }
    }
    record(out, "return_conjugacy", pass, worst, detail_msg);

    // The analytic two-branch map is the rotation by omega in disguise; the
    // n-fold composite may drift from n*omega by rounding only.
    double x = 0.2345;
    double lift_dev = 0.0;
    bool lift_ok = true;
    for (int n = 1; n <= 1000; ++n) {
      x = iet.apply(x);
      const double dev =
          detail::circle_distance(x, 0.2345 + static_cast<double>(n) * iet.omega);
      lift_dev = std::max(lift_dev, dev);
      lift_ok = lift_ok && dev <= static_cast<double>(n) * 1e-15;
    }
    record(out, "iet_rotation_lift", lift_ok, lift_dev,
           "two-branch map drifts from the rotation at alpha " + std::to_string(alpha));
  }

  // Along any orbit launched at phi_star, bounces on the base occur at only
  // four distinct angles.
  {
    std::uniform_real_distribution<double> x_dist(0.05, 0.95);
    const Orbit orbit = iterate(tri, emb, {1, rep.phi_star, x_dist(rng)},
                                static_cast<std::size_t>(cfg.recurrence_bounces));
    const std::array<double, 4> allowed{psi[0], psi[3], psi[5], th[2]};
    double worst = 0.0;
    for (const PhaseState& st : orbit.states) {
      if (st.side != 1) continue;
      double best = pi;
      for (double a : allowed) best = std::min(best, std::abs(st.phi - a));
      worst = std::max(worst, best);
    }
    record(out, "base_angle_recurrence", worst <= cfg.tol.return_angle, worst,
           "unexpected base angle at alpha " + std::to_string(alpha));
  }

  return out;
}

/// Evenly spaced base angles strictly inside (alpha_star, 3*pi/10), inset by
/// 1e-3 radians at both ends.
inline std::vector<double> auto_alpha_grid(int n) {
  if (n < 1) throw std::invalid_argument("auto_alpha_grid: n must be >= 1");
  const double lo = alpha_star() + 1e-3;
  const double hi = alpha_range_hi - 1e-3;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    grid.push_back(0.5 * (lo + hi));
    return grid;
  }
  for (int i = 0; i < n; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return grid;
}

/// Run the per-angle suite across a grid (optionally in parallel) and append
/// the cross-angle monotonicity checks.
inline std::vector<CheckResult> grid_suite(const std::vector<double>& alphas,
                                           const SuiteConfig& cfg = {}, unsigned jobs = 1) {
  using detail::record;
  std::vector<std::vector<CheckResult>> partial(alphas.size());
  if (jobs <= 1 || alphas.size() <= 1) {
    for (std::size_t i = 0; i < alphas.size(); ++i) partial[i] = alpha_point_suite(alphas[i], cfg);
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> cursor{0};
    const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(alphas.size()));
    for (unsigned w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&]() {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= alphas.size()) return;
          partial[i] = alpha_point_suite(alphas[i], cfg);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }

  std::vector<CheckResult> out;
  for (const auto& chunk : partial) {
    for (const CheckResult& c : chunk) record(out, c.name, c.pass, c.worst, c.detail);
  }

  if (alphas.size() >= 2) {
    std::vector<double> sorted = alphas;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    bool omega_up = true, phi_down = true;
    double prev_omega = 0.0, prev_phi = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const AngleReport rep = angle_report(sorted[i]);
      if (i > 0) {
        omega_up = omega_up && rep.omega > prev_omega;
        phi_down = phi_down && rep.phi_star < prev_phi;
      }
      prev_omega = rep.omega;
      prev_phi = rep.phi_star;
    }
    record(out, "omega_increasing", omega_up, 0.0, "omega not strictly increasing across the grid");
    record(out, "phi_star_decreasing", phi_down, 0.0,
           "phi_star not strictly decreasing across the grid");
  }
  return out;
}

}  // namespace tribilliard
